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

// Vector-matrix multiplication lowered onto a pipeline of cores.
//
// Stage 1 is a binary crossbar: one neuron per (column, magnitude bit),
// rate-coded inputs. Stage 2 weights each group of four bit channels with
// {8, 4, 2, 1}. For more than four magnitude bits, stage 3 combines the
// two groups with {16, 1}. Every stage sends to the next core east with
// delivery offset 1, and the last stage sends to an inert sink core whose
// axons are the output channels.
//
// Signed problems split every channel into a positive and a negative
// neuron. The negative neuron receives exactly the negated input of its
// positive twin, so the twins stay mirrored and the column result is
// (positive spikes) - (negative spikes).

#ifndef NEUROMESH_VMM_HPP
#define NEUROMESH_VMM_HPP

#include <cstdint>
#include <vector>

#include "neuromesh/network.hpp"
#include "neuromesh/simulator.hpp"

namespace neuromesh {

struct VmmProblem
{
    // output[j] = sum_i vector[i] * matrix[i][j]
    std::vector<std::vector<std::int64_t>> matrix;
    std::vector<std::int64_t> vector;
    int magnitude_bits{8};

    void validate() const;
    int rows() const { return static_cast<int>(matrix.size()); }
    int cols() const
    {
        return matrix.empty() ? 0 : static_cast<int>(matrix.front().size());
    }
};

enum class MappingMode
{
    TrueNorthFeedback,
    SymmetricThreshold,
};

struct CoreUsage
{
    Coord coord;
    int axons_provisioned{0};
    int axons_used{0};
    int neurons_provisioned{0};
    int neurons_used{0};
};

struct ResourceReport
{
    std::vector<CoreUsage> per_core;
    int cores{0};
    std::int64_t axons_provisioned{0};
    std::int64_t axons_used{0};
    std::int64_t neurons_provisioned{0};
    std::int64_t neurons_used{0};
};

// An axon or neuron counts as used when it has at least one crossbar
// connection. Cores not listed in `cores` are skipped.
ResourceReport resource_report(const NetworkConfig &net,
        const std::vector<Coord> &cores);

struct DecodeChannel
{
    int column{0};
    int sign{1}; // +1 or -1
    Coord core;
    int neuron{0};
};

struct VmmDecode
{
    int columns{0};
    Coord output_core;
    std::vector<DecodeChannel> channels;
};

struct MappedNetwork
{
    NetworkConfig network;
    InputSchedule input;
    std::int64_t ticks_required{0};
    VmmDecode decode;
    ResourceReport resources;
    std::vector<Coord> stages; // compute cores, first to last
};

// One spike per tick at ticks 1..value, offset 1.
std::vector<InputEvent> rate_encode(std::int64_t value, Coord core, int axon);

MappedNetwork map_vmm_positive(const VmmProblem &p);
MappedNetwork map_vmm_signed(const VmmProblem &p, MappingMode mode);

// Throws DecodeError for spikes from unknown channels.
std::vector<std::int64_t> decode_vmm(const Trace &trace,
        const VmmDecode &decode);

// Direct integer product, the reference result.
std::vector<std::int64_t> reference_vmm(const VmmProblem &p);

nlohmann::ordered_json to_json(const ResourceReport &r);
nlohmann::ordered_json to_json(const VmmDecode &d);
VmmDecode load_decode(const nlohmann::json &doc);

// The four-neuron signed pair on one core used to show the negative
// threshold residue. Axons: 0 positive input, 1 negative input, 2 and 3
// feedback from neurons 2 and 3. Neurons 0/2 are positive, 1/3 negative;
// 2 and 3 duplicate 0 and 1. With `feedback`, neurons 2 and 3 loop back to
// axons 2 and 3 one tick later.
NetworkConfig signed_pair_core(NegativeCompare compare, bool feedback);

} // namespace neuromesh

#endif
