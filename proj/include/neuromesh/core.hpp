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

// Single-core model: crossbar of axons x neurons, per-neuron weight tables
// indexed by axon type, integer LIF datapath and the scheduler ring buffer
// that stages incoming spikes for future ticks.

#ifndef NEUROMESH_CORE_HPP
#define NEUROMESH_CORE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "neuromesh/packet.hpp"

namespace neuromesh {

using Potential = std::int64_t;

struct CoreParams
{
    int num_axons{256};
    int num_neurons{256};
    int num_weights{4};
    int scheduler_depth{16};
    int potential_bits{64};

    // Throws ConfigError naming `where` on violation.
    void validate(const std::string &where = "core") const;
};

enum class ResetMode
{
    Static,
    Linear,
};

struct ResetRule
{
    ResetMode mode{ResetMode::Linear};
    Potential value{0};
};

enum class NegativeCompare
{
    Asymmetric, // v < neg_threshold
    Symmetric,  // v <= neg_threshold
};

struct NeuronConfig
{
    std::vector<Potential> weights;
    std::vector<bool> connections;
    Potential pos_threshold{1};
    Potential neg_threshold{0};
    ResetRule pos_reset{};
    ResetRule neg_reset{};
    Potential leak{0};
    Potential initial_potential{0};
    std::optional<Packet> destination;
    NegativeCompare neg_compare{NegativeCompare::Asymmetric};
};

struct CoreConfig
{
    CoreParams params;
    std::vector<int> axon_types;
    std::vector<NeuronConfig> neurons;

    // Checks sizes, axon types against the weight table and threshold
    // ordering. Destinations are checked at network level.
    void validate(const std::string &where = "core") const;
};

// The set of axons that carry a spike during one tick. Stored sparsely as
// ascending axon indices.
class SpikeRow
{
public:
    SpikeRow() = default;
    explicit SpikeRow(int num_axons) : num_axons_(num_axons) {}
    SpikeRow(int num_axons, std::vector<int> active);

    static SpikeRow from_bools(const std::vector<bool> &bits);

    int size() const { return num_axons_; }
    bool empty() const { return active_.empty(); }
    bool test(int axon) const;
    std::span<const int> active() const { return active_; }
    std::vector<bool> to_bools() const;

    friend bool operator==(const SpikeRow &, const SpikeRow &) = default;

private:
    int num_axons_{0};
    std::vector<int> active_;
};

enum class InsertResult
{
    Ok,
    Dropped, // offset 0: the slot is already being consumed
};

// depth x axons ring buffer. current_slot() is the slot consumed by the most
// recent advance(); an insert with offset d lands in the slot returned by
// the d-th subsequent advance().
class SchedulerMemory
{
public:
    SchedulerMemory(int depth, int num_axons, int current_slot = 0);

    // Throws ConfigError when offset < 0, offset >= depth or axon is out of
    // range.
    InsertResult insert(int axon, int offset);
    SpikeRow advance();

    int depth() const { return depth_; }
    int num_axons() const { return num_axons_; }
    int current_slot() const { return current_; }
    bool test(int slot, int axon) const;
    bool empty() const { return pending_ == 0; }
    std::size_t pending() const { return pending_; }

private:
    int depth_;
    int num_axons_;
    int current_;
    std::vector<std::vector<bool>> bits_;
    std::vector<std::vector<int>> set_axons_;
    std::size_t pending_{0};
};

// One integration step as seen on the datapath wires.
//   selected_weight (A): output of the weight-table mux
//   carry (D): running sum from the previous processed axon, 0 on the first
//   accumulate_base (B): carry, or the stored potential on the first axon
//   accumulate_sum (C): B + A
struct DebugRow
{
    std::int64_t tick{0};
    int axon{0};
    int axon_type{0};
    Potential selected_weight{0};
    Potential carry{0};
    bool new_neuron_flag{false};
    Potential accumulate_base{0};
    Potential accumulate_sum{0};
};

// End-of-tick state of one neuron plus the rows that produced it.
struct NeuronTickRecord
{
    std::int64_t tick{0};
    int neuron{0};
    Potential potential{0};
    bool spiked{false};
    std::vector<DebugRow> rows;
};

struct Emission
{
    int neuron{0};
    Packet packet;
};

struct CoreTickResult
{
    std::vector<Emission> emitted;
    std::vector<NeuronTickRecord> debug;
};

// Throws ConfigError when axon_type is outside the neuron's weight table.
Potential select_weight(const NeuronConfig &neuron, int axon_type);

// Potential after integrating every connected, spiking axon in ascending
// order. Throws OverflowError if any partial sum leaves the signed
// `potential_bits` range.
Potential integrate_row(const NeuronConfig &neuron, Potential potential,
        const SpikeRow &spikes, std::span<const int> axon_types,
        int potential_bits = 64, std::vector<DebugRow> *rows = nullptr,
        std::int64_t tick = 0);

struct ThresholdOutcome
{
    Potential potential{0};
    bool spiked{false};

    friend bool operator==(const ThresholdOutcome &,
            const ThresholdOutcome &) = default;
};

ThresholdOutcome threshold_reset_leak(const NeuronConfig &neuron,
        Potential integrated, int potential_bits = 64);

// Evaluates every neuron once, ascending index, updating `potentials` in
// place. Emits one packet per firing neuron that has a destination.
CoreTickResult core_tick(const CoreConfig &core,
        std::span<Potential> potentials, const SpikeRow &spikes,
        bool record_debug = false, std::int64_t tick = 0);

// True when, with no input, the neuron keeps its potential and stays silent
// forever.
bool is_resting(const NeuronConfig &neuron, Potential potential);

// Checks `value` against the signed range of `bits` bits.
bool fits_potential(Potential value, int bits);

} // namespace neuromesh

#endif
