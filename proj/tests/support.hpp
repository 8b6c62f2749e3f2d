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

// Hand-rolled generators shared by the unit tests and the acceptance suite.

#ifndef NEUROMESH_TESTS_SUPPORT_HPP
#define NEUROMESH_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "neuromesh/network.hpp"
#include "neuromesh/vmm.hpp"

namespace neuromesh::testing {

using Rng = std::mt19937_64;

inline int uniform(Rng &rng, int lo, int hi)
{
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline bool coin(Rng &rng, double p = 0.5)
{
    return std::bernoulli_distribution(p)(rng);
}

inline NeuronConfig random_neuron(Rng &rng, int axons, int weights)
{
    NeuronConfig n;
    for (int k = 0; k < weights; ++k)
    {
        n.weights.push_back(uniform(rng, -3, 3));
    }
    n.connections.resize(axons);
    for (int a = 0; a < axons; ++a)
    {
        n.connections[a] = coin(rng, 0.6);
    }
    n.pos_threshold = uniform(rng, 1, 4);
    n.neg_threshold = uniform(rng, -6, 0);
    n.pos_reset = {coin(rng) ? ResetMode::Linear : ResetMode::Static,
            uniform(rng, 0, 2)};
    n.neg_reset.mode = coin(rng) ? ResetMode::Linear : ResetMode::Static;
    n.neg_reset.value = n.neg_reset.mode == ResetMode::Static
            ? uniform(rng, -2, 0)
            : uniform(rng, 0, 2);
    n.leak = uniform(rng, -1, 1);
    n.initial_potential = uniform(rng, -2, 2);
    n.neg_compare = coin(rng) ? NegativeCompare::Symmetric
                              : NegativeCompare::Asymmetric;
    return n;
}

// Small random mesh: every neuron either has no destination or targets an
// existing core inside the packet field range.
inline NetworkConfig random_network(Rng &rng)
{
    NetworkConfig net;
    const int widths[] = {1, 2, 3, 4};
    const int heights[] = {1, 2, 4};
    net.grid.width = widths[uniform(rng, 0, 3)];
    net.grid.height = heights[uniform(rng, 0, 2)];
    net.grid.fifo_capacity = uniform(rng, 1, 4);
    net.grid.fidelity =
            coin(rng) ? RoutingFidelity::Cycle : RoutingFidelity::Functional;
    net.grid.router_cycles = uniform(rng, 2, 64);

    for (int y = 0; y < net.grid.height; ++y)
    {
        for (int x = 0; x < net.grid.width; ++x)
        {
            if (net.cores.empty() || coin(rng, 0.7))
            {
                CoreConfig c;
                c.params.num_axons = uniform(rng, 1, 8);
                c.params.num_neurons = uniform(rng, 1, 8);
                c.params.num_weights = uniform(rng, 1, 4);
                c.params.scheduler_depth = uniform(rng, 2, 16);
                for (int a = 0; a < c.params.num_axons; ++a)
                {
                    c.axon_types.push_back(
                            uniform(rng, 0, c.params.num_weights - 1));
                }
                for (int j = 0; j < c.params.num_neurons; ++j)
                {
                    c.neurons.push_back(random_neuron(
                            rng, c.params.num_axons, c.params.num_weights));
                }
                net.cores.push_back({{x, y}, std::move(c)});
            }
        }
    }
    const auto [xlo, xhi] = offset_range(net.grid.width);
    const auto [ylo, yhi] = offset_range(net.grid.height);
    for (CoreEntry &e : net.cores)
    {
        for (NeuronConfig &n : e.config.neurons)
        {
            if (!coin(rng, 0.8))
            {
                continue;
            }
            const CoreEntry &t =
                    net.cores[uniform(rng, 0, static_cast<int>(net.cores.size()) - 1)];
            const int dx = t.coord.x - e.coord.x;
            const int dy = t.coord.y - e.coord.y;
            if (dx < xlo || dx > xhi || dy < ylo || dy > yhi)
            {
                continue;
            }
            n.destination = Packet{dx, dy,
                    uniform(rng, 0, t.config.params.num_axons - 1),
                    uniform(rng, 1,
                            std::min(e.config.params.scheduler_depth,
                                    t.config.params.scheduler_depth)
                                    - 1)};
        }
    }
    net.output_core = net.cores[uniform(rng, 0,
                                        static_cast<int>(net.cores.size()) - 1)]
                              .coord;
    return net;
}

inline InputSchedule random_input(Rng &rng, const NetworkConfig &net,
        int ticks, int count)
{
    InputSchedule in;
    for (int i = 0; i < count; ++i)
    {
        const CoreEntry &c =
                net.cores[uniform(rng, 0, static_cast<int>(net.cores.size()) - 1)];
        in.spikes.push_back(InputEvent{uniform(rng, 1, ticks), c.coord,
                uniform(rng, 0, c.config.params.num_axons - 1),
                uniform(rng, 1, c.config.params.scheduler_depth - 1)});
    }
    return in;
}

// Signed problem with entries uniform in [-(2^bits - 1), 2^bits - 1].
inline VmmProblem random_vmm(Rng &rng, int rows, int cols, int bits,
        bool signed_entries = true)
{
    const int hi = (1 << bits) - 1;
    const int lo = signed_entries ? -hi : 0;
    VmmProblem p;
    p.magnitude_bits = bits;
    p.matrix.assign(rows, std::vector<std::int64_t>(cols));
    for (auto &row : p.matrix)
    {
        for (auto &x : row)
        {
            x = uniform(rng, lo, hi);
        }
    }
    for (int i = 0; i < rows; ++i)
    {
        p.vector.push_back(uniform(rng, lo, hi));
    }
    return p;
}

// Runs a mapped VMM network to completion and decodes it.
inline std::vector<std::int64_t> simulate_vmm(const MappedNetwork &m,
        RunResult *out = nullptr)
{
    RunOptions opts;
    opts.stop_when_quiescent = true;
    RunResult r = run(m.network, m.input, m.ticks_required, opts);
    auto decoded = decode_vmm(r.trace, m.decode);
    if (out != nullptr)
    {
        *out = std::move(r);
    }
    return decoded;
}

} // namespace neuromesh::testing

#endif
