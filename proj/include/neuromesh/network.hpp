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

#ifndef NEUROMESH_NETWORK_HPP
#define NEUROMESH_NETWORK_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "json.hpp"

#include "neuromesh/core.hpp"
#include "neuromesh/noc.hpp"
#include "neuromesh/packet.hpp"

namespace neuromesh {

struct CoreEntry
{
    Coord coord;
    CoreConfig config;
};

struct NetworkConfig
{
    GridConfig grid;
    std::vector<CoreEntry> cores;
    Coord output_core;
    // Controller cycles available per tick; enables BudgetOverrun checks.
    std::optional<std::int64_t> tick_budget_cycles;

    // Full cross-reference check; throws ConfigError with a path.
    void validate() const;

    // Index into `cores`, or -1.
    int find(Coord c) const;
};

struct InputEvent
{
    std::int64_t tick{1};
    Coord core;
    int axon{0};
    int offset{1};

    friend auto operator<=>(const InputEvent &, const InputEvent &) = default;
};

struct InputSchedule
{
    std::vector<InputEvent> spikes;

    void validate(const NetworkConfig &net) const;
};

NetworkConfig load_network(const nlohmann::json &doc);
nlohmann::ordered_json to_json(const NetworkConfig &net);

InputSchedule load_input(const nlohmann::json &doc);
nlohmann::ordered_json to_json(const InputSchedule &input);

// Reads a JSON document; throws ConfigError on I/O or parse failure.
nlohmann::json read_json_file(const std::filesystem::path &path);
void write_json_file(const std::filesystem::path &path,
        const nlohmann::ordered_json &doc);

} // namespace neuromesh

#endif
