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

#include "neuromesh/simulator.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <tuple>

#include "json.hpp"

#include "neuromesh/errors.hpp"
#include "neuromesh/perf.hpp"

namespace neuromesh {

using nlohmann::ordered_json;

std::string_view to_string(ErrorKind k)
{
    switch (k)
    {
    case ErrorKind::SchedulerLateDrop:
        return "scheduler_late_drop";
    case ErrorKind::BudgetOverrun:
        return "budget_overrun";
    case ErrorKind::Overflow:
        return "overflow";
    case ErrorKind::Congestion:
        return "congestion";
    }
    return "?";
}

namespace {

std::string describe(Coord c)
{
    std::ostringstream out;
    out << "core " << c;
    return out.str();
}

struct CoreState
{
    const CoreEntry *entry;
    SchedulerMemory scheduler;
    std::vector<Potential> potentials;
    bool debug;
};

} // namespace

RunResult run(const NetworkConfig &config, const InputSchedule &input,
        std::int64_t ticks, const RunOptions &options)
{
    if (ticks < 1)
    {
        throw ConfigError("run: ticks must be >= 1");
    }
    NetworkConfig net = config;
    if (options.fidelity)
    {
        net.grid.fidelity = *options.fidelity;
    }
    if (options.tick_budget_cycles)
    {
        net.tick_budget_cycles = options.tick_budget_cycles;
    }
    net.validate();
    input.validate(net);

    const GridConfig &grid = net.grid;
    std::vector<int> at(static_cast<std::size_t>(grid.width) * grid.height, -1);
    std::vector<CoreState> cores;
    cores.reserve(net.cores.size());
    for (std::size_t i = 0; i < net.cores.size(); ++i)
    {
        const CoreEntry &e = net.cores[i];
        at[grid.index(e.coord)] = static_cast<int>(i);
        std::vector<Potential> v;
        v.reserve(e.config.neurons.size());
        for (const NeuronConfig &n : e.config.neurons)
        {
            v.push_back(n.initial_potential);
        }
        const bool debug = options.record_debug
                && (options.debug_cores.empty()
                        || std::find(options.debug_cores.begin(),
                                   options.debug_cores.end(), e.coord)
                                != options.debug_cores.end());
        cores.push_back(CoreState{&e,
                SchedulerMemory(e.config.params.scheduler_depth,
                        e.config.params.num_axons),
                std::move(v), debug});
    }

    std::vector<InputEvent> events = input.spikes;
    std::stable_sort(events.begin(), events.end(),
            [](const InputEvent &a, const InputEvent &b) {
                return a.tick < b.tick;
            });

    std::vector<int> order(cores.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(options.shuffle_seed.value_or(0));

    std::vector<std::int64_t> core_cycles(cores.size());
    for (std::size_t i = 0; i < cores.size(); ++i)
    {
        const CoreParams &p = cores[i].entry->config.params;
        core_cycles[i] = cycles_per_tick(p.num_axons, p.num_neurons);
    }

    Mesh mesh(grid);
    RunResult result;
    std::size_t next_event = 0;
    std::vector<std::vector<Emission>> emitted(cores.size());
    std::vector<std::vector<NeuronTickRecord>> debug(cores.size());

    for (std::int64_t t = 1; t <= ticks; ++t)
    {
        result.ticks_run = t;
        for (; next_event < events.size() && events[next_event].tick == t;
                ++next_event)
        {
            const InputEvent &e = events[next_event];
            cores[at[grid.index(e.core)]].scheduler.insert(e.axon, e.offset);
        }

        if (options.shuffle_seed)
        {
            std::shuffle(order.begin(), order.end(), rng);
        }
        try
        {
            for (const int i : order)
            {
                CoreState &c = cores[i];
                const SpikeRow row = c.scheduler.advance();
                CoreTickResult r = core_tick(
                        c.entry->config, c.potentials, row, c.debug, t);
                emitted[i] = std::move(r.emitted);
                debug[i] = std::move(r.debug);
            }
        }
        catch (const OverflowError &e)
        {
            result.errors.push_back({t, ErrorKind::Overflow, e.what()});
            result.aborted = true;
            result.abort_reason = e.what();
            break;
        }

        if (net.tick_budget_cycles)
        {
            for (std::size_t i = 0; i < cores.size(); ++i)
            {
                if (core_cycles[i] > *net.tick_budget_cycles)
                {
                    result.errors.push_back({t, ErrorKind::BudgetOverrun,
                            describe(cores[i].entry->coord) + " needs "
                                    + std::to_string(core_cycles[i])
                                    + " cycles"});
                }
            }
        }

        // Merge in (row-major core index, neuron) order regardless of the
        // evaluation order above.
        std::vector<int> by_position(cores.size());
        std::iota(by_position.begin(), by_position.end(), 0);
        std::sort(by_position.begin(), by_position.end(), [&](int a, int b) {
            return grid.index(cores[a].entry->coord)
                    < grid.index(cores[b].entry->coord);
        });
        std::vector<InFlight> injected;
        for (const int i : by_position)
        {
            const Coord src = cores[i].entry->coord;
            for (const Emission &em : emitted[i])
            {
                injected.push_back(InFlight{src, em.neuron, em.packet, t});
                if (resolve_destination(src, em.packet) == net.output_core)
                {
                    result.trace.push_back(SpikeEvent{t, src, em.neuron});
                }
            }
            for (NeuronTickRecord &rec : debug[i])
            {
                result.debug.push_back(CoreDebugRecord{src, std::move(rec)});
            }
            debug[i].clear();
        }

        const DrainResult drained = mesh.drain_tick(t, std::move(injected),
                [&](const Delivery &d) {
                    return cores[at[grid.index(d.dest)]].scheduler.insert(
                            d.axon, d.offset);
                });
        for (const Delivery &d : drained.dropped)
        {
            std::ostringstream where;
            where << describe(d.dest) << " axon " << d.axon << " from "
                  << describe(d.source) << " neuron " << d.neuron;
            result.errors.push_back(
                    {t, ErrorKind::SchedulerLateDrop, where.str()});
        }
        if (drained.congested)
        {
            result.errors.push_back({t, ErrorKind::Congestion,
                    "mesh: " + std::to_string(drained.remaining)
                            + " packets still in flight"});
        }

        if (options.stop_when_quiescent && next_event == events.size()
                && mesh.in_flight() == 0)
        {
            bool quiet = true;
            for (const CoreState &c : cores)
            {
                if (!c.scheduler.empty())
                {
                    quiet = false;
                    break;
                }
                const auto &neurons = c.entry->config.neurons;
                for (std::size_t j = 0; j < neurons.size() && quiet; ++j)
                {
                    quiet = is_resting(neurons[j], c.potentials[j]);
                }
                if (!quiet)
                {
                    break;
                }
            }
            if (quiet)
            {
                break;
            }
        }
    }
    return result;
}

TraceComparison compare_traces(const Trace &a, const Trace &b)
{
    TraceComparison cmp;
    const std::size_t n = std::min(a.size(), b.size());
    std::size_t i = 0;
    while (i < n && a[i] == b[i])
    {
        ++i;
    }
    if (i == n && a.size() == b.size())
    {
        return cmp;
    }
    cmp.equal = false;
    cmp.index = i;
    if (i < a.size())
    {
        cmp.left = a[i];
    }
    if (i < b.size())
    {
        cmp.right = b[i];
    }
    return cmp;
}

std::map<std::pair<Coord, int>, std::int64_t> count_output_spikes(
        const Trace &trace, std::int64_t first, std::int64_t last)
{
    std::map<std::pair<Coord, int>, std::int64_t> counts;
    for (const SpikeEvent &e : trace)
    {
        if (e.tick >= first && e.tick <= last)
        {
            ++counts[{e.core, e.neuron}];
        }
    }
    return counts;
}

bool is_canonical(const Trace &trace, const GridConfig &grid)
{
    auto key = [&](const SpikeEvent &e) {
        return std::tuple(e.tick, grid.index(e.core), e.neuron);
    };
    for (std::size_t i = 1; i < trace.size(); ++i)
    {
        if (key(trace[i]) < key(trace[i - 1]))
        {
            return false;
        }
    }
    return true;
}

void write_trace(std::ostream &out, const Trace &trace)
{
    for (const SpikeEvent &e : trace)
    {
        out << ordered_json{{"tick", e.tick}, {"x", e.core.x},
                {"y", e.core.y}, {"neuron", e.neuron}}
                        .dump()
            << '\n';
    }
}

std::string trace_to_string(const Trace &trace)
{
    std::ostringstream out;
    write_trace(out, trace);
    return out.str();
}

Trace read_trace(std::istream &in)
{
    Trace trace;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line))
    {
        ++number;
        if (line.empty())
        {
            continue;
        }
        try
        {
            const auto j = nlohmann::json::parse(line);
            trace.push_back(SpikeEvent{j.at("tick").get<std::int64_t>(),
                    {j.at("x").get<int>(), j.at("y").get<int>()},
                    j.at("neuron").get<int>()});
        }
        catch (const nlohmann::json::exception &e)
        {
            throw ConfigError("trace line " + std::to_string(number) + ": "
                    + e.what());
        }
    }
    return trace;
}

void write_errors(std::ostream &out, const std::vector<ErrorEntry> &errors)
{
    for (const ErrorEntry &e : errors)
    {
        out << ordered_json{{"kind", to_string(e.kind)}, {"tick", e.tick},
                {"location", e.location}}
                        .dump()
            << '\n';
    }
}

void write_debug(std::ostream &out, const std::vector<CoreDebugRecord> &debug)
{
    for (const CoreDebugRecord &d : debug)
    {
        ordered_json rows = ordered_json::array();
        for (const DebugRow &r : d.record.rows)
        {
            rows.push_back(ordered_json{{"axon", r.axon},
                    {"axon_type", r.axon_type}, {"A", r.selected_weight},
                    {"D", r.carry}, {"NN", r.new_neuron_flag},
                    {"B", r.accumulate_base}, {"C", r.accumulate_sum}});
        }
        out << ordered_json{{"tick", d.record.tick}, {"x", d.core.x},
                {"y", d.core.y}, {"neuron", d.record.neuron},
                {"potential", d.record.potential},
                {"spiked", d.record.spiked}, {"rows", std::move(rows)}}
                        .dump()
            << '\n';
    }
}

} // namespace neuromesh
