// Copyright 2026 The neuromesh Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "neuromesh/core.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "neuromesh/errors.hpp"

namespace neuromesh {

namespace {

Potential checked_add(Potential a, Potential b, int bits)
{
    Potential out{};
    if (__builtin_add_overflow(a, b, &out) || !fits_potential(out, bits))
    {
        std::ostringstream msg;
        msg << "potential overflow: " << a << " + " << b << " exceeds "
            << bits << "-bit range";
        throw OverflowError(msg.str());
    }
    return out;
}

Potential checked_sub(Potential a, Potential b, int bits)
{
    Potential out{};
    if (__builtin_sub_overflow(a, b, &out) || !fits_potential(out, bits))
    {
        std::ostringstream msg;
        msg << "potential overflow: " << a << " - " << b << " exceeds "
            << bits << "-bit range";
        throw OverflowError(msg.str());
    }
    return out;
}

bool crosses_negative(const NeuronConfig &neuron, Potential v)
{
    return neuron.neg_compare == NegativeCompare::Symmetric
            ? v <= neuron.neg_threshold
            : v < neuron.neg_threshold;
}

} // namespace

bool fits_potential(Potential value, int bits)
{
    if (bits >= 64)
    {
        return value != std::numeric_limits<Potential>::min();
    }
    const Potential bound = Potential{1} << (bits - 1);
    return value > -bound && value < bound;
}

void CoreParams::validate(const std::string &where) const
{
    auto fail = [&](const std::string &what) {
        throw ConfigError(where + ": " + what);
    };
    if (num_axons < 1)
    {
        fail("axons must be >= 1");
    }
    if (num_neurons < 1)
    {
        fail("neurons must be >= 1");
    }
    if (num_weights < 1)
    {
        fail("weights must be >= 1");
    }
    if (scheduler_depth < 2)
    {
        fail("scheduler_depth must be >= 2");
    }
    if (potential_bits < 2 || potential_bits > 64)
    {
        fail("potential_bits must be in [2, 64]");
    }
}

void CoreConfig::validate(const std::string &where) const
{
    params.validate(where);
    if (static_cast<int>(axon_types.size()) != params.num_axons)
    {
        throw ConfigError(where + ": axon_types has "
                + std::to_string(axon_types.size()) + " entries, expected "
                + std::to_string(params.num_axons));
    }
    for (std::size_t i = 0; i < axon_types.size(); ++i)
    {
        if (axon_types[i] < 0 || axon_types[i] >= params.num_weights)
        {
            throw ConfigError(where + ".axon_types[" + std::to_string(i)
                    + "]: type " + std::to_string(axon_types[i])
                    + " outside weight table of size "
                    + std::to_string(params.num_weights));
        }
    }
    if (static_cast<int>(neurons.size()) != params.num_neurons)
    {
        throw ConfigError(where + ": has " + std::to_string(neurons.size())
                + " neurons, expected " + std::to_string(params.num_neurons));
    }
    for (std::size_t j = 0; j < neurons.size(); ++j)
    {
        const NeuronConfig &n = neurons[j];
        const std::string path = where + ".neurons[" + std::to_string(j) + "]";
        if (static_cast<int>(n.weights.size()) != params.num_weights)
        {
            throw ConfigError(path + ": expected "
                    + std::to_string(params.num_weights) + " weights");
        }
        if (static_cast<int>(n.connections.size()) != params.num_axons)
        {
            throw ConfigError(path + ": connection row length "
                    + std::to_string(n.connections.size()) + " != axons "
                    + std::to_string(params.num_axons));
        }
        if (n.neg_threshold > n.pos_threshold)
        {
            throw ConfigError(path + ": neg_threshold exceeds pos_threshold");
        }
        if (n.pos_reset.mode == ResetMode::Linear && n.pos_reset.value < 0)
        {
            throw ConfigError(path + ": linear pos_reset value must be >= 0");
        }
        if (n.neg_reset.mode == ResetMode::Linear && n.neg_reset.value < 0)
        {
            throw ConfigError(path + ": linear neg_reset value must be >= 0");
        }
        if (!fits_potential(n.initial_potential, params.potential_bits))
        {
            throw ConfigError(path + ": initial_potential out of range");
        }
        if (n.destination)
        {
            const Packet &d = *n.destination;
            if (d.offset < 1 || d.offset >= params.scheduler_depth)
            {
                throw ConfigError(path + ".dest: offset "
                        + std::to_string(d.offset) + " outside [1, "
                        + std::to_string(params.scheduler_depth - 1) + "]");
            }
        }
    }
}

SpikeRow::SpikeRow(int num_axons, std::vector<int> active)
        : num_axons_(num_axons)
        , active_(std::move(active))
{
    std::sort(active_.begin(), active_.end());
    active_.erase(std::unique(active_.begin(), active_.end()), active_.end());
}

SpikeRow SpikeRow::from_bools(const std::vector<bool> &bits)
{
    std::vector<int> active;
    for (std::size_t i = 0; i < bits.size(); ++i)
    {
        if (bits[i])
        {
            active.push_back(static_cast<int>(i));
        }
    }
    return SpikeRow(static_cast<int>(bits.size()), std::move(active));
}

bool SpikeRow::test(int axon) const
{
    return std::binary_search(active_.begin(), active_.end(), axon);
}

std::vector<bool> SpikeRow::to_bools() const
{
    std::vector<bool> bits(num_axons_, false);
    for (const int a : active_)
    {
        bits[a] = true;
    }
    return bits;
}

SchedulerMemory::SchedulerMemory(int depth, int num_axons, int current_slot)
        : depth_(depth)
        , num_axons_(num_axons)
        , current_(current_slot)
        , bits_(depth, std::vector<bool>(num_axons, false))
        , set_axons_(depth)
{
    if (depth < 2 || num_axons < 1 || current_slot < 0
            || current_slot >= depth)
    {
        throw ConfigError("scheduler: invalid geometry");
    }
}

InsertResult SchedulerMemory::insert(int axon, int offset)
{
    if (axon < 0 || axon >= num_axons_)
    {
        throw ConfigError("scheduler: axon " + std::to_string(axon)
                + " out of range [0, " + std::to_string(num_axons_) + ")");
    }
    if (offset < 0 || offset >= depth_)
    {
        throw ConfigError("scheduler: offset " + std::to_string(offset)
                + " outside [1, " + std::to_string(depth_ - 1) + "]");
    }
    if (offset == 0)
    {
        return InsertResult::Dropped;
    }
    const int slot = (current_ + offset) % depth_;
    if (!bits_[slot][axon])
    {
        bits_[slot][axon] = true;
        set_axons_[slot].push_back(axon);
        ++pending_;
    }
    return InsertResult::Ok;
}

SpikeRow SchedulerMemory::advance()
{
    current_ = (current_ + 1) % depth_;
    std::vector<int> active = std::move(set_axons_[current_]);
    set_axons_[current_].clear();
    for (const int a : active)
    {
        bits_[current_][a] = false;
    }
    pending_ -= active.size();
    return SpikeRow(num_axons_, std::move(active));
}

bool SchedulerMemory::test(int slot, int axon) const
{
    return bits_.at(slot).at(axon);
}

Potential select_weight(const NeuronConfig &neuron, int axon_type)
{
    if (axon_type < 0
            || axon_type >= static_cast<int>(neuron.weights.size()))
    {
        throw ConfigError("axon type " + std::to_string(axon_type)
                + " outside weight table of size "
                + std::to_string(neuron.weights.size()));
    }
    return neuron.weights[axon_type];
}

Potential integrate_row(const NeuronConfig &neuron, Potential potential,
        const SpikeRow &spikes, std::span<const int> axon_types,
        int potential_bits, std::vector<DebugRow> *rows, std::int64_t tick)
{
    Potential sum = potential;
    bool first = true;
    for (const int axon : spikes.active())
    {
        if (!neuron.connections[axon])
        {
            continue;
        }
        const int type = axon_types[axon];
        const Potential w = select_weight(neuron, type);
        const Potential base = sum;
        sum = checked_add(sum, w, potential_bits);
        if (rows != nullptr)
        {
            rows->push_back(DebugRow{
                    .tick = tick,
                    .axon = axon,
                    .axon_type = type,
                    .selected_weight = w,
                    .carry = first ? 0 : base,
                    .new_neuron_flag = (axon == 0),
                    .accumulate_base = base,
                    .accumulate_sum = sum,
            });
        }
        first = false;
    }
    return sum;
}

ThresholdOutcome threshold_reset_leak(const NeuronConfig &neuron,
        Potential integrated, int potential_bits)
{
    if (integrated >= neuron.pos_threshold)
    {
        const ResetRule &r = neuron.pos_reset;
        const Potential next = r.mode == ResetMode::Static
                ? r.value
                : checked_sub(integrated, r.value, potential_bits);
        return {next, true};
    }
    if (crosses_negative(neuron, integrated))
    {
        const ResetRule &r = neuron.neg_reset;
        const Potential next = r.mode == ResetMode::Static
                ? r.value
                : checked_add(integrated, r.value, potential_bits);
        return {next, false};
    }
    return {checked_sub(integrated, neuron.leak, potential_bits), false};
}

CoreTickResult core_tick(const CoreConfig &core,
        std::span<Potential> potentials, const SpikeRow &spikes,
        bool record_debug, std::int64_t tick)
{
    CoreTickResult out;
    const int bits = core.params.potential_bits;
    const int count = static_cast<int>(core.neurons.size());
    if (record_debug)
    {
        out.debug.reserve(count);
    }
    for (int j = 0; j < count; ++j)
    {
        const NeuronConfig &neuron = core.neurons[j];
        std::vector<DebugRow> *rows = nullptr;
        if (record_debug)
        {
            out.debug.push_back(NeuronTickRecord{.tick = tick, .neuron = j});
            rows = &out.debug.back().rows;
        }
        const Potential integrated = integrate_row(neuron, potentials[j],
                spikes, core.axon_types, bits, rows, tick);
        const ThresholdOutcome next =
                threshold_reset_leak(neuron, integrated, bits);
        potentials[j] = next.potential;
        if (record_debug)
        {
            out.debug.back().potential = next.potential;
            out.debug.back().spiked = next.spiked;
        }
        if (next.spiked && neuron.destination)
        {
            out.emitted.push_back(Emission{j, *neuron.destination});
        }
    }
    return out;
}

bool is_resting(const NeuronConfig &neuron, Potential potential)
{
    if (potential >= neuron.pos_threshold)
    {
        return false;
    }
    if (crosses_negative(neuron, potential))
    {
        const ResetRule &r = neuron.neg_reset;
        return r.mode == ResetMode::Static ? r.value == potential
                                           : r.value == 0;
    }
    return neuron.leak == 0;
}

} // namespace neuromesh
