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

#include "neuromesh/vmm.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <sstream>

#include "neuromesh/errors.hpp"

namespace neuromesh {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr int kMaxBits = 8;
constexpr int kMaxCoreDim = 4096;

// Magnitude bits are handled in groups of four, one group per {8,4,2,1}
// neuron; the bit count is padded up to a whole number of groups.
struct Shape
{
    int rows;
    int cols;
    int groups; // G
    int padded; // B' = 4G
};

Shape shape_of(const VmmProblem &p)
{
    p.validate();
    const int groups = (p.magnitude_bits + 3) / 4;
    return {p.rows(), p.cols(), groups, groups * 4};
}

// Bit k of the magnitude, most significant first.
bool bit(std::int64_t magnitude, int k, int padded)
{
    return ((magnitude >> (padded - 1 - k)) & 1) != 0;
}

struct NegativeSide
{
    NegativeCompare compare;
    Potential threshold;
    ResetRule reset;
};

// Every mapped neuron: threshold 1, linear reset 1, no leak.
NeuronConfig make_neuron(int axons, std::vector<Potential> weights,
        const NegativeSide &neg)
{
    NeuronConfig n;
    weights.resize(4, 0);
    n.weights = std::move(weights);
    n.connections.assign(axons, false);
    n.pos_threshold = 1;
    n.pos_reset = {ResetMode::Linear, 1};
    n.neg_threshold = neg.threshold;
    n.neg_reset = neg.reset;
    n.neg_compare = neg.compare;
    n.leak = 0;
    return n;
}

const NegativeSide kPositiveOnly{
        NegativeCompare::Asymmetric, 0, {ResetMode::Linear, 0}};

// Symmetric mode lets a -1 residue reset to zero directly. Feedback mode
// keeps the asymmetric compare but puts the threshold below any reachable
// potential; the mirrored twin's feedback spikes do the correction.
NegativeSide signed_side(MappingMode mode, Potential reachable)
{
    if (mode == MappingMode::SymmetricThreshold)
    {
        return {NegativeCompare::Symmetric, -1, {ResetMode::Linear, 1}};
    }
    return {NegativeCompare::Asymmetric, -(reachable + 1),
            {ResetMode::Linear, 1}};
}

CoreConfig make_core(std::vector<int> types, std::vector<NeuronConfig> neurons)
{
    CoreConfig c;
    c.params.num_axons = static_cast<int>(types.size());
    c.params.num_neurons = static_cast<int>(neurons.size());
    c.params.num_weights = 4;
    c.params.scheduler_depth = 16;
    c.params.potential_bits = 64;
    if (c.params.num_axons > kMaxCoreDim || c.params.num_neurons > kMaxCoreDim)
    {
        throw ConfigError("vmm: problem too large for a single pipeline ("
                + std::to_string(c.params.num_axons) + " axons, "
                + std::to_string(c.params.num_neurons) + " neurons)");
    }
    c.axon_types = std::move(types);
    c.neurons = std::move(neurons);
    return c;
}

Packet east(int axon)
{
    return Packet{1, 0, axon, 1};
}

Packet loopback(int axon)
{
    return Packet{0, 0, axon, 1};
}

int pow2_at_least(int n)
{
    int w = 1;
    while (w < n)
    {
        w *= 2;
    }
    return w;
}

// Places the stage cores west to east on row 0 and adds the sink core.
MappedNetwork assemble(std::vector<CoreConfig> stages, int channels)
{
    MappedNetwork m;
    const int count = static_cast<int>(stages.size());
    m.network.grid.width = pow2_at_least(count + 1);
    m.network.grid.height = 1;
    for (int s = 0; s < count; ++s)
    {
        m.stages.push_back({s, 0});
        m.network.cores.push_back({{s, 0}, std::move(stages[s])});
    }
    NeuronConfig inert = make_neuron(channels, {}, kPositiveOnly);
    m.network.cores.push_back({{count, 0},
            make_core(std::vector<int>(channels, 0), {std::move(inert)})});
    m.network.output_core = {count, 0};
    return m;
}

std::int64_t magnitude_sum(const std::vector<std::int64_t> &v)
{
    std::int64_t s = 0;
    for (const auto x : v)
    {
        s += std::abs(x);
    }
    return s;
}

std::int64_t magnitude_max(const std::vector<std::int64_t> &v)
{
    std::int64_t m = 0;
    for (const auto x : v)
    {
        m = std::max(m, std::abs(x));
    }
    return m;
}

// Per-stage bound on spikes through one channel: stage 1 sees at most one
// unit per input spike, stage 2 at most 8+4+2+1 per upstream spike set,
// stage 3 at most 16+1.
std::vector<std::int64_t> stage_bounds(const VmmProblem &p, int stages)
{
    std::vector<std::int64_t> s{magnitude_sum(p.vector)};
    s.push_back(15 * s[0]);
    if (stages > 2)
    {
        s.push_back(17 * s[1]);
    }
    return s;
}

std::int64_t ticks_bound(const VmmProblem &p,
        const std::vector<std::int64_t> &bounds)
{
    std::int64_t t = magnitude_max(p.vector) + 2;
    for (const auto s : bounds)
    {
        t += 1 + s;
    }
    return t;
}

void finish(MappedNetwork &m, const VmmProblem &p, int stages)
{
    m.ticks_required = ticks_bound(p, stage_bounds(p, stages));
    m.resources = resource_report(m.network, m.stages);
    m.network.validate();
    m.input.validate(m.network);
}

} // namespace

void VmmProblem::validate() const
{
    if (magnitude_bits < 1 || magnitude_bits > kMaxBits)
    {
        throw ConfigError("vmm: magnitude_bits must be in [1, "
                + std::to_string(kMaxBits) + "]");
    }
    if (matrix.empty() || matrix.front().empty())
    {
        throw ConfigError("vmm: matrix must be non-empty");
    }
    const std::int64_t limit = std::int64_t{1} << magnitude_bits;
    for (std::size_t i = 0; i < matrix.size(); ++i)
    {
        if (matrix[i].size() != matrix.front().size())
        {
            throw ConfigError("vmm: matrix row " + std::to_string(i)
                    + " has a different length");
        }
        for (const auto x : matrix[i])
        {
            if (std::abs(x) >= limit)
            {
                throw ConfigError("vmm: matrix entry " + std::to_string(x)
                        + " needs more than "
                        + std::to_string(magnitude_bits) + " magnitude bits");
            }
        }
    }
    if (vector.size() != matrix.size())
    {
        throw ConfigError("vmm: vector length " + std::to_string(vector.size())
                + " != matrix rows " + std::to_string(matrix.size()));
    }
    for (const auto x : vector)
    {
        if (std::abs(x) >= limit)
        {
            throw ConfigError("vmm: vector entry " + std::to_string(x)
                    + " needs more than " + std::to_string(magnitude_bits)
                    + " magnitude bits");
        }
    }
}

std::vector<InputEvent> rate_encode(std::int64_t value, Coord core, int axon)
{
    if (value < 0)
    {
        throw ConfigError("rate_encode: value must be >= 0");
    }
    std::vector<InputEvent> events;
    events.reserve(static_cast<std::size_t>(value));
    for (std::int64_t t = 1; t <= value; ++t)
    {
        events.push_back(InputEvent{t, core, axon, 1});
    }
    return events;
}

std::vector<std::int64_t> reference_vmm(const VmmProblem &p)
{
    std::vector<std::int64_t> out(p.cols(), 0);
    for (int i = 0; i < p.rows(); ++i)
    {
        for (int j = 0; j < p.cols(); ++j)
        {
            out[j] += p.vector[i] * p.matrix[i][j];
        }
    }
    return out;
}

MappedNetwork map_vmm_positive(const VmmProblem &p)
{
    const Shape s = shape_of(p);
    for (const auto &row : p.matrix)
    {
        for (const auto x : row)
        {
            if (x < 0)
            {
                throw ConfigError("vmm: negative matrix entry; use the signed "
                                  "mapping");
            }
        }
    }
    for (const auto x : p.vector)
    {
        if (x < 0)
        {
            throw ConfigError("vmm: negative vector entry; use the signed "
                              "mapping");
        }
    }
    const bool third = s.groups > 1;

    // Stage 1: axon per element, neuron per (column, bit).
    std::vector<int> types1(s.rows);
    for (int i = 0; i < s.rows; ++i)
    {
        types1[i] = i % 4;
    }
    std::vector<NeuronConfig> n1;
    for (int c = 0; c < s.cols; ++c)
    {
        for (int k = 0; k < s.padded; ++k)
        {
            NeuronConfig n = make_neuron(s.rows, {1, 1, 1, 1}, kPositiveOnly);
            for (int i = 0; i < s.rows; ++i)
            {
                n.connections[i] = bit(p.matrix[i][c], k, s.padded);
            }
            n.destination = east(c * s.padded + k);
            n1.push_back(std::move(n));
        }
    }

    // Stage 2: {8,4,2,1} per group of four bits.
    std::vector<int> types2(s.cols * s.padded);
    for (int a = 0; a < static_cast<int>(types2.size()); ++a)
    {
        types2[a] = (a % s.padded) % 4;
    }
    std::vector<NeuronConfig> n2;
    for (int c = 0; c < s.cols; ++c)
    {
        for (int g = 0; g < s.groups; ++g)
        {
            NeuronConfig n = make_neuron(
                    static_cast<int>(types2.size()), {8, 4, 2, 1}, kPositiveOnly);
            for (int j = 0; j < 4; ++j)
            {
                n.connections[c * s.padded + g * 4 + j] = true;
            }
            n.destination = east(third ? c * s.groups + g : c);
            n2.push_back(std::move(n));
        }
    }

    std::vector<CoreConfig> stages;
    stages.push_back(make_core(std::move(types1), std::move(n1)));
    stages.push_back(make_core(std::move(types2), std::move(n2)));

    if (third)
    {
        // Stage 3: {16, 1} combines the high and low groups.
        std::vector<int> types3(s.cols * s.groups);
        for (int a = 0; a < static_cast<int>(types3.size()); ++a)
        {
            types3[a] = a % s.groups;
        }
        std::vector<NeuronConfig> n3;
        for (int c = 0; c < s.cols; ++c)
        {
            NeuronConfig n = make_neuron(
                    static_cast<int>(types3.size()), {16, 1}, kPositiveOnly);
            for (int g = 0; g < s.groups; ++g)
            {
                n.connections[c * s.groups + g] = true;
            }
            n.destination = east(c);
            n3.push_back(std::move(n));
        }
        stages.push_back(make_core(std::move(types3), std::move(n3)));
    }

    const int count = static_cast<int>(stages.size());
    MappedNetwork m = assemble(std::move(stages), s.cols);
    const Coord last = m.stages.back();
    m.decode.columns = s.cols;
    m.decode.output_core = m.network.output_core;
    for (int c = 0; c < s.cols; ++c)
    {
        m.decode.channels.push_back(DecodeChannel{c, 1, last, c});
    }
    for (int i = 0; i < s.rows; ++i)
    {
        auto ev = rate_encode(p.vector[i], m.stages.front(), i);
        m.input.spikes.insert(m.input.spikes.end(), ev.begin(), ev.end());
    }
    finish(m, p, count);
    return m;
}

MappedNetwork map_vmm_signed(const VmmProblem &p, MappingMode mode)
{
    const Shape s = shape_of(p);
    const bool feedback = mode == MappingMode::TrueNorthFeedback;
    const bool third = s.groups > 1;
    const auto bounds = stage_bounds(p, third ? 3 : 2);

    // Stage 1. Data axon (element i, input sign si, matrix sign sm) sits at
    // i*4 + si*2 + sm; its type selects +1 for a positive product and -1
    // for a negative one in the positive neuron's table. Neuron (column c,
    // bit k, sign s) sits at (c*B' + k)*2 + s.
    const int channels1 = s.cols * s.padded * 2;
    const int data1 = s.rows * 4;
    const int axons1 = data1 + (feedback ? channels1 : 0);
    std::vector<int> types1(axons1);
    for (int a = 0; a < data1; ++a)
    {
        const int si = (a / 2) % 2;
        const int sm = a % 2;
        types1[a] = si ^ sm;
    }
    for (int d = 0; d < (feedback ? channels1 : 0); ++d)
    {
        // Feedback from a positive duplicate lands on the negative twins
        // with +1, and vice versa.
        types1[data1 + d] = d % 2 == 0 ? 1 : 0;
    }
    const NegativeSide side1 = signed_side(mode, 2 * bounds[0] + 1);
    std::vector<NeuronConfig> n1;
    for (int c = 0; c < s.cols; ++c)
    {
        for (int k = 0; k < s.padded; ++k)
        {
            for (int sign = 0; sign < 2; ++sign)
            {
                const int idx = (c * s.padded + k) * 2 + sign;
                NeuronConfig n = make_neuron(axons1,
                        sign == 0 ? std::vector<Potential>{1, -1}
                                  : std::vector<Potential>{-1, 1},
                        side1);
                for (int i = 0; i < s.rows; ++i)
                {
                    const std::int64_t v = p.matrix[i][c];
                    if (v == 0 || !bit(std::abs(v), k, s.padded))
                    {
                        continue;
                    }
                    const int sm = v < 0 ? 1 : 0;
                    n.connections[i * 4 + 0 + sm] = true;
                    n.connections[i * 4 + 2 + sm] = true;
                }
                if (feedback)
                {
                    n.connections[data1 + (c * s.padded + k) * 2 + (1 - sign)] =
                            true;
                }
                n.destination = east(idx);
                n1.push_back(std::move(n));
            }
        }
    }
    if (feedback)
    {
        for (int d = 0; d < channels1; ++d)
        {
            NeuronConfig dup = n1[d];
            dup.destination = loopback(data1 + d);
            n1.push_back(std::move(dup));
        }
    }

    // Stage 2: positive-only {8,4,2,1} per (column, group, sign).
    std::vector<int> types2(channels1);
    for (int a = 0; a < channels1; ++a)
    {
        types2[a] = ((a / 2) % s.padded) % 4;
    }
    const NegativeSide side2 = signed_side(mode, bounds[1]);
    std::vector<NeuronConfig> n2;
    for (int c = 0; c < s.cols; ++c)
    {
        for (int g = 0; g < s.groups; ++g)
        {
            for (int sign = 0; sign < 2; ++sign)
            {
                NeuronConfig n = make_neuron(channels1, {8, 4, 2, 1}, side2);
                for (int j = 0; j < 4; ++j)
                {
                    n.connections[(c * s.padded + g * 4 + j) * 2 + sign] = true;
                }
                n.destination = east(third ? (c * s.groups + g) * 2 + sign
                                           : c * 2 + sign);
                n2.push_back(std::move(n));
            }
        }
    }

    std::vector<CoreConfig> stages;
    stages.push_back(make_core(std::move(types1), std::move(n1)));
    stages.push_back(make_core(std::move(types2), std::move(n2)));

    if (third)
    {
        // Stage 3: axon (c, g, s) at (c*2 + g)*2 + s with type s*2 + g, so
        // the positive table reads {16, 1, -16, -1}.
        const int data3 = s.cols * 4;
        const int outs = s.cols * 2;
        const int axons3 = data3 + (feedback ? outs : 0);
        std::vector<int> types3(axons3);
        for (int a = 0; a < data3; ++a)
        {
            const int g = (a / 2) % 2;
            const int sign = a % 2;
            types3[a] = sign * 2 + g;
        }
        for (int d = 0; d < (feedback ? outs : 0); ++d)
        {
            types3[data3 + d] = d % 2 == 0 ? 3 : 1;
        }
        const NegativeSide side3 = signed_side(mode, 2 * 34 * bounds[1] + 1);
        std::vector<NeuronConfig> n3;
        for (int c = 0; c < s.cols; ++c)
        {
            for (int sign = 0; sign < 2; ++sign)
            {
                NeuronConfig n = make_neuron(axons3,
                        sign == 0 ? std::vector<Potential>{16, 1, -16, -1}
                                  : std::vector<Potential>{-16, -1, 16, 1},
                        side3);
                for (int a = 0; a < 4; ++a)
                {
                    n.connections[c * 4 + a] = true;
                }
                if (feedback)
                {
                    n.connections[data3 + c * 2 + (1 - sign)] = true;
                }
                n.destination = east(c * 2 + sign);
                n3.push_back(std::move(n));
            }
        }
        if (feedback)
        {
            for (int d = 0; d < outs; ++d)
            {
                NeuronConfig dup = n3[d];
                dup.destination = loopback(data3 + d);
                n3.push_back(std::move(dup));
            }
        }
        stages.push_back(make_core(std::move(types3), std::move(n3)));
    }

    const int count = static_cast<int>(stages.size());
    MappedNetwork m = assemble(std::move(stages), s.cols * 2);
    const Coord last = m.stages.back();
    m.decode.columns = s.cols;
    m.decode.output_core = m.network.output_core;
    for (int c = 0; c < s.cols; ++c)
    {
        // Stage 2 neuron (c, g=0, s) and stage 3 neuron (c, s) share the
        // index c*2 + s when they are last.
        m.decode.channels.push_back(DecodeChannel{c, 1, last, c * 2});
        m.decode.channels.push_back(DecodeChannel{c, -1, last, c * 2 + 1});
    }
    for (int i = 0; i < s.rows; ++i)
    {
        const std::int64_t v = p.vector[i];
        const int base = i * 4 + (v < 0 ? 2 : 0);
        for (int sm = 0; sm < 2; ++sm)
        {
            auto ev = rate_encode(std::abs(v), m.stages.front(), base + sm);
            m.input.spikes.insert(m.input.spikes.end(), ev.begin(), ev.end());
        }
    }
    std::stable_sort(m.input.spikes.begin(), m.input.spikes.end());
    finish(m, p, count);
    return m;
}

std::vector<std::int64_t> decode_vmm(const Trace &trace,
        const VmmDecode &decode)
{
    std::map<std::pair<Coord, int>, const DecodeChannel *> lookup;
    for (const DecodeChannel &ch : decode.channels)
    {
        lookup[{ch.core, ch.neuron}] = &ch;
    }
    std::vector<std::int64_t> out(decode.columns, 0);
    for (const SpikeEvent &e : trace)
    {
        const auto it = lookup.find({e.core, e.neuron});
        if (it == lookup.end())
        {
            std::ostringstream msg;
            msg << "decode: spike from core " << e.core << " neuron "
                << e.neuron << " at tick " << e.tick
                << " matches no output channel";
            throw DecodeError(msg.str());
        }
        out.at(it->second->column) += it->second->sign;
    }
    return out;
}

ResourceReport resource_report(const NetworkConfig &net,
        const std::vector<Coord> &cores)
{
    ResourceReport r;
    for (const Coord c : cores)
    {
        const int k = net.find(c);
        if (k < 0)
        {
            continue;
        }
        const CoreConfig &cfg = net.cores[k].config;
        CoreUsage u{c, cfg.params.num_axons, 0, cfg.params.num_neurons, 0};
        std::vector<bool> axon_used(cfg.params.num_axons, false);
        for (const NeuronConfig &n : cfg.neurons)
        {
            bool any = false;
            for (int a = 0; a < cfg.params.num_axons; ++a)
            {
                if (n.connections[a])
                {
                    any = true;
                    axon_used[a] = true;
                }
            }
            u.neurons_used += any ? 1 : 0;
        }
        u.axons_used = static_cast<int>(
                std::count(axon_used.begin(), axon_used.end(), true));
        r.per_core.push_back(u);
        ++r.cores;
        r.axons_provisioned += u.axons_provisioned;
        r.axons_used += u.axons_used;
        r.neurons_provisioned += u.neurons_provisioned;
        r.neurons_used += u.neurons_used;
    }
    return r;
}

ordered_json to_json(const ResourceReport &r)
{
    ordered_json per = ordered_json::array();
    for (const CoreUsage &u : r.per_core)
    {
        per.push_back(ordered_json{{"x", u.coord.x}, {"y", u.coord.y},
                {"axons", u.axons_provisioned}, {"neurons", u.neurons_provisioned},
                {"axons_used", u.axons_used}, {"neurons_used", u.neurons_used}});
    }
    return ordered_json{{"cores", r.cores}, {"axons", r.axons_provisioned},
            {"neurons", r.neurons_provisioned}, {"axons_used", r.axons_used},
            {"neurons_used", r.neurons_used}, {"per_core", std::move(per)}};
}

ordered_json to_json(const VmmDecode &d)
{
    ordered_json ch = ordered_json::array();
    for (const DecodeChannel &c : d.channels)
    {
        ch.push_back(ordered_json{{"column", c.column}, {"sign", c.sign},
                {"x", c.core.x}, {"y", c.core.y}, {"neuron", c.neuron}});
    }
    return ordered_json{{"columns", d.columns},
            {"output_core", {{"x", d.output_core.x}, {"y", d.output_core.y}}},
            {"channels", std::move(ch)}};
}

VmmDecode load_decode(const json &doc)
{
    try
    {
        VmmDecode d;
        d.columns = doc.at("columns").get<int>();
        d.output_core = {doc.at("output_core").at("x").get<int>(),
                doc.at("output_core").at("y").get<int>()};
        for (const json &c : doc.at("channels"))
        {
            DecodeChannel ch{c.at("column").get<int>(), c.at("sign").get<int>(),
                    {c.at("x").get<int>(), c.at("y").get<int>()},
                    c.at("neuron").get<int>()};
            if (ch.column < 0 || ch.column >= d.columns
                    || (ch.sign != 1 && ch.sign != -1))
            {
                throw ConfigError("decode: invalid channel entry");
            }
            d.channels.push_back(ch);
        }
        return d;
    }
    catch (const json::exception &e)
    {
        throw ConfigError(std::string("decode: ") + e.what());
    }
}

NetworkConfig signed_pair_core(NegativeCompare compare, bool feedback)
{
    const NegativeSide side{compare, -1, {ResetMode::Linear, 1}};
    std::vector<NeuronConfig> neurons;
    for (int j = 0; j < 4; ++j)
    {
        const bool positive = j % 2 == 0;
        NeuronConfig n = make_neuron(4,
                positive ? std::vector<Potential>{1, -1}
                         : std::vector<Potential>{-1, 1},
                side);
        n.connections[0] = true;
        n.connections[1] = true;
        // Axon 2 carries the positive duplicate's spikes to the negative
        // neurons; axon 3 the reverse.
        n.connections[positive ? 3 : 2] = true;
        if (feedback && j >= 2)
        {
            n.destination = loopback(j);
        }
        neurons.push_back(std::move(n));
    }
    NetworkConfig net;
    net.grid.width = 1;
    net.grid.height = 1;
    net.cores.push_back({{0, 0}, make_core({0, 1, 1, 0}, std::move(neurons))});
    net.output_core = {0, 0};
    net.validate();
    return net;
}

} // namespace neuromesh
