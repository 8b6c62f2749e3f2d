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

// Analytic timing model for the core controller.

#ifndef NEUROMESH_PERF_HPP
#define NEUROMESH_PERF_HPP

#include <cstdint>
#include <string_view>

namespace neuromesh {

// Exact positive rational frequency in Hz, num / den.
struct Frequency
{
    std::int64_t num{1};
    std::int64_t den{1};

    // Accepts plain decimals ("213300000", "177.336e6") and an optional
    // k/M/G suffix with or without "Hz" ("241.31MHz"). Throws ConfigError.
    static Frequency parse(std::string_view text);
    static Frequency hz(std::int64_t value) { return {value, 1}; }

    double to_double() const
    {
        return static_cast<double>(num) / static_cast<double>(den);
    }
};

struct PerfQuery
{
    std::int64_t num_axons{256};
    std::int64_t num_neurons{256};
    Frequency clock;
    std::int64_t parallel_instances{1};
    std::int64_t ticks_per_item{1};
};

// Fitted controller cost: one pass over the axons per neuron plus fixed
// overhead.
std::int64_t cycles_per_tick(std::int64_t num_axons, std::int64_t num_neurons);

// Maximum tick frequency in Hz.
double tick_rate(const Frequency &clock, std::int64_t cycles);

// Items per second, floored once from the exact rational.
std::int64_t throughput(const PerfQuery &q);

} // namespace neuromesh

#endif
