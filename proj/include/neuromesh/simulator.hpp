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

// Lockstep tick engine. Each tick runs three phases:
//   1. inject the input events scheduled for this tick,
//   2. every core advances its scheduler and evaluates its neurons,
//   3. the mesh routes the emitted packets into destination schedulers.
// An input event with offset d at tick t is consumed at tick t + d - 1; a
// spike emitted at tick t with offset d is consumed at tick t + d.

#ifndef NEUROMESH_SIMULATOR_HPP
#define NEUROMESH_SIMULATOR_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "neuromesh/core.hpp"
#include "neuromesh/network.hpp"
#include "neuromesh/noc.hpp"

namespace neuromesh {

struct SpikeEvent
{
    std::int64_t tick{0}; // emission tick
    Coord core;           // source core
    int neuron{0};

    friend bool operator==(const SpikeEvent &, const SpikeEvent &) = default;
};

using Trace = std::vector<SpikeEvent>;

enum class ErrorKind
{
    SchedulerLateDrop,
    BudgetOverrun,
    Overflow,
    Congestion,
};

std::string_view to_string(ErrorKind k);

struct ErrorEntry
{
    std::int64_t tick{0};
    ErrorKind kind{ErrorKind::SchedulerLateDrop};
    std::string location;

    friend bool operator==(const ErrorEntry &, const ErrorEntry &) = default;
};

struct RunOptions
{
    bool record_debug{false};
    // Restricts debug capture to these cores; empty means all.
    std::vector<Coord> debug_cores;
    // Permutes the per-tick core evaluation order. The result must not
    // change; used by determinism checks.
    std::optional<std::uint64_t> shuffle_seed;
    // Stops early once nothing can ever fire again: no pending inputs,
    // empty schedulers and mesh, every neuron resting.
    bool stop_when_quiescent{false};
    std::optional<RoutingFidelity> fidelity;
    std::optional<std::int64_t> tick_budget_cycles;
};

struct CoreDebugRecord
{
    Coord core;
    NeuronTickRecord record;
};

struct RunResult
{
    Trace trace;
    std::vector<ErrorEntry> errors;
    std::int64_t ticks_run{0};
    bool aborted{false};
    std::string abort_reason;
    std::vector<CoreDebugRecord> debug;
};

// Throws ConfigError for invalid configuration or input. Overflow does not
// throw: it is logged, and the run stops with `aborted` set.
RunResult run(const NetworkConfig &net, const InputSchedule &input,
        std::int64_t ticks, const RunOptions &options = {});

struct TraceComparison
{
    bool equal{true};
    std::size_t index{0}; // first differing position
    std::optional<SpikeEvent> left;
    std::optional<SpikeEvent> right;
};

TraceComparison compare_traces(const Trace &a, const Trace &b);

// Spike counts per (source core, neuron) over ticks [first, last].
std::map<std::pair<Coord, int>, std::int64_t> count_output_spikes(
        const Trace &trace, std::int64_t first, std::int64_t last);

// True when `trace` is in canonical (tick, core row-major, neuron) order.
bool is_canonical(const Trace &trace, const GridConfig &grid);

void write_trace(std::ostream &out, const Trace &trace);
std::string trace_to_string(const Trace &trace);
// Throws ConfigError on malformed lines.
Trace read_trace(std::istream &in);

void write_errors(std::ostream &out, const std::vector<ErrorEntry> &errors);
void write_debug(std::ostream &out, const std::vector<CoreDebugRecord> &debug);

} // namespace neuromesh

#endif
