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

#include "neuromesh/network.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "neuromesh/errors.hpp"

namespace neuromesh {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string core_path(std::size_t i, Coord c)
{
    std::ostringstream out;
    out << "cores[" << i << "] at " << c;
    return out.str();
}

// Typed field access with a readable path on failure.
template <typename T>
T get(const json &obj, const char *key, const std::string &path)
{
    if (!obj.is_object() || !obj.contains(key))
    {
        throw ConfigError(path + ": missing field \"" + key + "\"");
    }
    try
    {
        return obj.at(key).get<T>();
    }
    catch (const json::exception &e)
    {
        throw ConfigError(path + "." + key + ": " + e.what());
    }
}

template <typename T>
T get_or(const json &obj, const char *key, T fallback, const std::string &path)
{
    if (!obj.is_object() || !obj.contains(key) || obj.at(key).is_null())
    {
        return fallback;
    }
    return get<T>(obj, key, path);
}

ResetRule parse_reset(const json &j, const std::string &path)
{
    ResetRule r;
    const auto mode = get<std::string>(j, "mode", path);
    if (mode == "static")
    {
        r.mode = ResetMode::Static;
    }
    else if (mode == "linear")
    {
        r.mode = ResetMode::Linear;
    }
    else
    {
        throw ConfigError(path + ".mode: unknown reset mode \"" + mode + "\"");
    }
    r.value = get<Potential>(j, "value", path);
    return r;
}

ordered_json reset_json(const ResetRule &r)
{
    return ordered_json{
            {"mode", r.mode == ResetMode::Static ? "static" : "linear"},
            {"value", r.value}};
}

NeuronConfig parse_neuron(const json &j, const CoreParams &params,
        const std::string &path)
{
    NeuronConfig n;
    n.weights = get<std::vector<Potential>>(j, "weights", path);
    n.connections.assign(params.num_axons, false);
    for (const int a : get<std::vector<int>>(j, "connections", path))
    {
        if (a < 0 || a >= params.num_axons)
        {
            throw ConfigError(path + ".connections: axon " + std::to_string(a)
                    + " out of range");
        }
        n.connections[a] = true;
    }
    n.pos_threshold = get<Potential>(j, "pos_threshold", path);
    n.neg_threshold = get<Potential>(j, "neg_threshold", path);
    n.pos_reset = parse_reset(j.value("pos_reset", json()), path + ".pos_reset");
    n.neg_reset = parse_reset(j.value("neg_reset", json()), path + ".neg_reset");
    n.leak = get_or<Potential>(j, "leak", 0, path);
    n.initial_potential = get_or<Potential>(j, "initial_potential", 0, path);
    const auto cmp = get_or<std::string>(j, "neg_compare", "asymmetric", path);
    if (cmp == "asymmetric")
    {
        n.neg_compare = NegativeCompare::Asymmetric;
    }
    else if (cmp == "symmetric")
    {
        n.neg_compare = NegativeCompare::Symmetric;
    }
    else
    {
        throw ConfigError(path + ".neg_compare: unknown value \"" + cmp + "\"");
    }
    if (j.contains("dest") && !j.at("dest").is_null())
    {
        const json &d = j.at("dest");
        const std::string dp = path + ".dest";
        n.destination = Packet{get<int>(d, "dx", dp), get<int>(d, "dy", dp),
                get<int>(d, "axon", dp), get<int>(d, "offset", dp)};
    }
    return n;
}

} // namespace

int NetworkConfig::find(Coord c) const
{
    for (std::size_t i = 0; i < cores.size(); ++i)
    {
        if (cores[i].coord == c)
        {
            return static_cast<int>(i);
        }
    }
    return -1;
}

void NetworkConfig::validate() const
{
    grid.validate();
    if (cores.empty())
    {
        throw ConfigError("network: at least one core is required");
    }
    std::set<Coord> seen;
    for (std::size_t i = 0; i < cores.size(); ++i)
    {
        const Coord c = cores[i].coord;
        const std::string path = core_path(i, c);
        if (!grid.contains(c))
        {
            throw ConfigError(path + ": outside the grid");
        }
        if (!seen.insert(c).second)
        {
            throw ConfigError(path + ": duplicate coordinates");
        }
        cores[i].config.validate(path);
    }

    const auto [xlo, xhi] = offset_range(grid.width);
    const auto [ylo, yhi] = offset_range(grid.height);
    for (std::size_t i = 0; i < cores.size(); ++i)
    {
        const Coord c = cores[i].coord;
        const auto &neurons = cores[i].config.neurons;
        for (std::size_t j = 0; j < neurons.size(); ++j)
        {
            if (!neurons[j].destination)
            {
                continue;
            }
            const Packet &d = *neurons[j].destination;
            const std::string path =
                    core_path(i, c) + ".neurons[" + std::to_string(j) + "].dest";
            if (d.dx < xlo || d.dx > xhi || d.dy < ylo || d.dy > yhi)
            {
                throw ConfigError(path + ": offset (" + std::to_string(d.dx)
                        + "," + std::to_string(d.dy)
                        + ") outside the packet field range");
            }
            const Coord target = resolve_destination(c, d);
            if (!grid.contains(target))
            {
                std::ostringstream msg;
                msg << path << ": destination " << target << " is off-grid";
                throw ConfigError(msg.str());
            }
            const int k = find(target);
            if (k < 0)
            {
                std::ostringstream msg;
                msg << path << ": no core at destination " << target;
                throw ConfigError(msg.str());
            }
            if (d.axon < 0 || d.axon >= cores[k].config.params.num_axons)
            {
                throw ConfigError(path + ": axon " + std::to_string(d.axon)
                        + " out of range at destination core");
            }
            const int depth = cores[k].config.params.scheduler_depth;
            if (d.offset >= depth)
            {
                throw ConfigError(path + ": offset " + std::to_string(d.offset)
                        + " exceeds destination scheduler depth "
                        + std::to_string(depth));
            }
        }
    }
    if (!grid.contains(output_core))
    {
        throw ConfigError("output_core: outside the grid");
    }
    if (tick_budget_cycles && *tick_budget_cycles < 1)
    {
        throw ConfigError("tick_budget_cycles: must be >= 1");
    }
}

void InputSchedule::validate(const NetworkConfig &net) const
{
    for (std::size_t i = 0; i < spikes.size(); ++i)
    {
        const InputEvent &e = spikes[i];
        const std::string path = "spikes[" + std::to_string(i) + "]";
        if (e.tick < 1)
        {
            throw ConfigError(path + ": tick must be >= 1");
        }
        const int k = net.find(e.core);
        if (k < 0)
        {
            std::ostringstream msg;
            msg << path << ": no core at " << e.core;
            throw ConfigError(msg.str());
        }
        const CoreParams &p = net.cores[k].config.params;
        if (e.axon < 0 || e.axon >= p.num_axons)
        {
            throw ConfigError(path + ": axon " + std::to_string(e.axon)
                    + " out of range");
        }
        if (e.offset < 1 || e.offset >= p.scheduler_depth)
        {
            throw ConfigError(path + ": offset " + std::to_string(e.offset)
                    + " outside [1, " + std::to_string(p.scheduler_depth - 1)
                    + "]");
        }
    }
}

NetworkConfig load_network(const json &doc)
{
    NetworkConfig net;
    const json &g = doc.contains("grid") ? doc.at("grid") : json();
    net.grid.width = get<int>(g, "width", "grid");
    net.grid.height = get<int>(g, "height", "grid");
    net.grid.fifo_capacity = get_or<int>(g, "fifo_capacity", 16, "grid");
    net.grid.router_cycles = get_or<int>(g, "router_cycles", 4096, "grid");
    const auto fid = get_or<std::string>(g, "fidelity", "functional", "grid");
    if (fid == "functional")
    {
        net.grid.fidelity = RoutingFidelity::Functional;
    }
    else if (fid == "cycle")
    {
        net.grid.fidelity = RoutingFidelity::Cycle;
    }
    else
    {
        throw ConfigError("grid.fidelity: unknown value \"" + fid + "\"");
    }

    if (!doc.contains("cores") || !doc.at("cores").is_array())
    {
        throw ConfigError("network: \"cores\" must be an array");
    }
    const json &cores = doc.at("cores");
    for (std::size_t i = 0; i < cores.size(); ++i)
    {
        const json &c = cores[i];
        const std::string path = "cores[" + std::to_string(i) + "]";
        CoreEntry entry;
        entry.coord = {get<int>(c, "x", path), get<int>(c, "y", path)};
        const json &p = c.contains("params") ? c.at("params") : json();
        const std::string pp = path + ".params";
        entry.config.params.num_axons = get<int>(p, "axons", pp);
        entry.config.params.num_neurons = get<int>(p, "neurons", pp);
        entry.config.params.num_weights = get_or<int>(p, "weights", 4, pp);
        entry.config.params.scheduler_depth =
                get_or<int>(p, "scheduler_depth", 16, pp);
        entry.config.params.potential_bits =
                get_or<int>(p, "potential_bits", 64, pp);
        entry.config.params.validate(pp);
        entry.config.axon_types = get<std::vector<int>>(c, "axon_types", path);
        if (!c.contains("neurons") || !c.at("neurons").is_array())
        {
            throw ConfigError(path + ": \"neurons\" must be an array");
        }
        const json &neurons = c.at("neurons");
        for (std::size_t j = 0; j < neurons.size(); ++j)
        {
            entry.config.neurons.push_back(parse_neuron(neurons[j],
                    entry.config.params,
                    path + ".neurons[" + std::to_string(j) + "]"));
        }
        net.cores.push_back(std::move(entry));
    }
    const json &out = doc.contains("output_core") ? doc.at("output_core") : json();
    net.output_core = {get<int>(out, "x", "output_core"),
            get<int>(out, "y", "output_core")};
    if (doc.contains("tick_budget_cycles")
            && !doc.at("tick_budget_cycles").is_null())
    {
        net.tick_budget_cycles =
                get<std::int64_t>(doc, "tick_budget_cycles", "network");
    }
    net.validate();
    return net;
}

ordered_json to_json(const NetworkConfig &net)
{
    ordered_json doc;
    doc["grid"] = ordered_json{
            {"width", net.grid.width},
            {"height", net.grid.height},
            {"fifo_capacity", net.grid.fifo_capacity},
            {"fidelity",
                    net.grid.fidelity == RoutingFidelity::Functional
                            ? "functional"
                            : "cycle"},
            {"router_cycles", net.grid.router_cycles}};
    ordered_json cores = ordered_json::array();
    for (const CoreEntry &e : net.cores)
    {
        const CoreParams &p = e.config.params;
        ordered_json c;
        c["x"] = e.coord.x;
        c["y"] = e.coord.y;
        c["params"] = ordered_json{{"axons", p.num_axons},
                {"neurons", p.num_neurons},
                {"weights", p.num_weights},
                {"scheduler_depth", p.scheduler_depth},
                {"potential_bits", p.potential_bits}};
        c["axon_types"] = e.config.axon_types;
        ordered_json neurons = ordered_json::array();
        for (const NeuronConfig &n : e.config.neurons)
        {
            std::vector<int> conn;
            for (std::size_t a = 0; a < n.connections.size(); ++a)
            {
                if (n.connections[a])
                {
                    conn.push_back(static_cast<int>(a));
                }
            }
            ordered_json j;
            j["weights"] = n.weights;
            j["connections"] = conn;
            j["pos_threshold"] = n.pos_threshold;
            j["neg_threshold"] = n.neg_threshold;
            j["pos_reset"] = reset_json(n.pos_reset);
            j["neg_reset"] = reset_json(n.neg_reset);
            j["leak"] = n.leak;
            j["initial_potential"] = n.initial_potential;
            j["neg_compare"] = n.neg_compare == NegativeCompare::Symmetric
                    ? "symmetric"
                    : "asymmetric";
            if (n.destination)
            {
                const Packet &d = *n.destination;
                j["dest"] = ordered_json{{"dx", d.dx}, {"dy", d.dy},
                        {"axon", d.axon}, {"offset", d.offset}};
            }
            else
            {
                j["dest"] = nullptr;
            }
            neurons.push_back(std::move(j));
        }
        c["neurons"] = std::move(neurons);
        cores.push_back(std::move(c));
    }
    doc["cores"] = std::move(cores);
    doc["output_core"] =
            ordered_json{{"x", net.output_core.x}, {"y", net.output_core.y}};
    if (net.tick_budget_cycles)
    {
        doc["tick_budget_cycles"] = *net.tick_budget_cycles;
    }
    return doc;
}

InputSchedule load_input(const json &doc)
{
    if (!doc.contains("spikes") || !doc.at("spikes").is_array())
    {
        throw ConfigError("input: \"spikes\" must be an array");
    }
    InputSchedule in;
    const json &spikes = doc.at("spikes");
    for (std::size_t i = 0; i < spikes.size(); ++i)
    {
        const json &s = spikes[i];
        const std::string path = "spikes[" + std::to_string(i) + "]";
        in.spikes.push_back(InputEvent{
                .tick = get<std::int64_t>(s, "tick", path),
                .core = {get<int>(s, "x", path), get<int>(s, "y", path)},
                .axon = get<int>(s, "axon", path),
                .offset = get_or<int>(s, "offset", 1, path),
        });
    }
    return in;
}

ordered_json to_json(const InputSchedule &input)
{
    ordered_json spikes = ordered_json::array();
    for (const InputEvent &e : input.spikes)
    {
        spikes.push_back(ordered_json{{"tick", e.tick}, {"x", e.core.x},
                {"y", e.core.y}, {"axon", e.axon}, {"offset", e.offset}});
    }
    return ordered_json{{"spikes", std::move(spikes)}};
}

json read_json_file(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw ConfigError("cannot open " + path.string());
    }
    try
    {
        return json::parse(in);
    }
    catch (const json::parse_error &e)
    {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

void write_json_file(const std::filesystem::path &path, const ordered_json &doc)
{
    std::ofstream out(path);
    if (!out)
    {
        throw ConfigError("cannot write " + path.string());
    }
    out << doc.dump(1) << '\n';
}

} // namespace neuromesh
