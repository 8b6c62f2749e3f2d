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

#include <string>

#include "doctest.h"

#include "neuromesh/errors.hpp"
#include "neuromesh/vmm.hpp"

#include "support.hpp"

using namespace neuromesh;
using neuromesh::testing::random_vmm;
using neuromesh::testing::Rng;
using neuromesh::testing::simulate_vmm;
using neuromesh::testing::uniform;

namespace {

// Independent product: column-major accumulation.
std::vector<std::int64_t> oracle(const VmmProblem &p)
{
    std::vector<std::int64_t> out;
    for (int j = 0; j < p.cols(); ++j)
    {
        std::int64_t s = 0;
        for (int i = 0; i < p.rows(); ++i)
        {
            s += p.vector[i] * p.matrix[i][j];
        }
        out.push_back(s);
    }
    return out;
}

VmmProblem problem(std::vector<std::vector<std::int64_t>> m,
        std::vector<std::int64_t> v, int bits = 8)
{
    VmmProblem p;
    p.matrix = std::move(m);
    p.vector = std::move(v);
    p.magnitude_bits = bits;
    return p;
}

} // namespace

TEST_CASE("rate_encode emits a contiguous burst from tick 1")
{
    const auto three = rate_encode(3, {0, 0}, 2);
    REQUIRE(three.size() == 3);
    for (int k = 0; k < 3; ++k)
    {
        CHECK(three[k] == InputEvent{k + 1, {0, 0}, 2, 1});
    }
    CHECK(rate_encode(0, {0, 0}, 0).empty());
    const auto one = rate_encode(1, {1, 0}, 0);
    REQUIRE(one.size() == 1);
    CHECK(one[0].tick == 1);
    CHECK_THROWS_AS(rate_encode(-1, {0, 0}, 0), ConfigError);
}

TEST_CASE("the worked positive example decodes to 25")
{
    const VmmProblem p = problem({{2}, {1}, {4}, {12}}, {1, 3, 2, 1}, 4);
    const MappedNetwork m = map_vmm_positive(p);
    CHECK(m.stages.size() == 2);
    CHECK(simulate_vmm(m) == std::vector<std::int64_t>{25});
    CHECK(reference_vmm(p) == std::vector<std::int64_t>{25});
}

TEST_CASE("a zero vector decodes to zeros")
{
    const VmmProblem p = problem({{3, 5}, {7, 1}}, {0, 0});
    CHECK(simulate_vmm(map_vmm_positive(p)) == std::vector<std::int64_t>{0, 0});
    CHECK(simulate_vmm(map_vmm_signed(p, MappingMode::SymmetricThreshold))
            == std::vector<std::int64_t>{0, 0});
}

TEST_CASE("property: positive mappings match the integer product")
{
    Rng rng(41);
    for (int trial = 0; trial < 30; ++trial)
    {
        const VmmProblem p = random_vmm(rng, uniform(rng, 1, 5),
                uniform(rng, 1, 5), uniform(rng, 1, 8), false);
        const MappedNetwork m = map_vmm_positive(p);
        CHECK(m.stages.size() == (p.magnitude_bits > 4 ? 3u : 2u));
        CHECK(simulate_vmm(m) == oracle(p));
    }
}

TEST_CASE("the signed two-element example gives -11 in both modes")
{
    const VmmProblem p = problem({{2}, {-3}}, {-1, 3});
    CHECK(oracle(p) == std::vector<std::int64_t>{-11});
    for (MappingMode mode :
            {MappingMode::TrueNorthFeedback, MappingMode::SymmetricThreshold})
    {
        const MappedNetwork m = map_vmm_signed(p, mode);
        CHECK(m.stages.size() == 3);
        CHECK(simulate_vmm(m) == std::vector<std::int64_t>{-11});
    }
}

TEST_CASE("property: signed mappings agree with the product and each other")
{
    Rng rng(43);
    for (int trial = 0; trial < 12; ++trial)
    {
        const VmmProblem p = random_vmm(rng, uniform(rng, 1, 4),
                uniform(rng, 1, 4), uniform(rng, 1, 5));
        const auto want = oracle(p);
        const auto fb = simulate_vmm(map_vmm_signed(p, MappingMode::TrueNorthFeedback));
        const auto sym =
                simulate_vmm(map_vmm_signed(p, MappingMode::SymmetricThreshold));
        CHECK(fb == want);
        CHECK(sym == want);
    }
}

TEST_CASE("decode subtracts negative channel counts")
{
    VmmDecode d;
    d.columns = 2;
    d.output_core = {3, 0};
    d.channels = {{0, 1, {2, 0}, 0}, {0, -1, {2, 0}, 1}, {1, 1, {2, 0}, 2},
            {1, -1, {2, 0}, 3}};
    Trace t;
    for (int k = 0; k < 25; ++k)
    {
        t.push_back({k + 1, {2, 0}, 0});
    }
    for (int k = 0; k < 11; ++k)
    {
        t.push_back({k + 1, {2, 0}, 3});
    }
    CHECK(decode_vmm(t, d) == std::vector<std::int64_t>{25, -11});
    CHECK(decode_vmm({}, d) == std::vector<std::int64_t>{0, 0});
    CHECK_THROWS_AS(decode_vmm({{1, {2, 0}, 9}}, d), DecodeError);
    CHECK_THROWS_AS(decode_vmm({{1, {1, 0}, 0}}, d), DecodeError);

    const VmmDecode back = load_decode(nlohmann::json::parse(to_json(d).dump()));
    CHECK(back.columns == 2);
    CHECK(decode_vmm(t, back) == std::vector<std::int64_t>{25, -11});
}

TEST_CASE("signed 8x8 resource accounting")
{
    Rng rng(1);
    const VmmProblem p = random_vmm(rng, 8, 8, 8);
    const ResourceReport tn = map_vmm_signed(p, MappingMode::TrueNorthFeedback).resources;
    const ResourceReport sym =
            map_vmm_signed(p, MappingMode::SymmetricThreshold).resources;
    REQUIRE(tn.per_core.size() == 3);
    REQUIRE(sym.per_core.size() == 3);
    CHECK(tn.axons_provisioned == 336);
    CHECK(tn.neurons_provisioned == 320);
    CHECK(sym.axons_provisioned == 192);
    CHECK(sym.neurons_provisioned == 176);
    CHECK(tn.per_core[0].axons_provisioned - sym.per_core[0].axons_provisioned
            == 128);
    CHECK(tn.per_core[1].axons_provisioned == sym.per_core[1].axons_provisioned);
    CHECK(to_json(tn).at("axons") == 336);
}

TEST_CASE("property: the symmetric mode never needs more resources")
{
    Rng rng(8);
    for (int trial = 0; trial < 40; ++trial)
    {
        const VmmProblem p = random_vmm(rng, uniform(rng, 1, 8),
                uniform(rng, 1, 8), uniform(rng, 1, 8));
        const ResourceReport tn =
                map_vmm_signed(p, MappingMode::TrueNorthFeedback).resources;
        const ResourceReport sym =
                map_vmm_signed(p, MappingMode::SymmetricThreshold).resources;
        CHECK(sym.axons_provisioned <= tn.axons_provisioned);
        CHECK(sym.neurons_provisioned <= tn.neurons_provisioned);
        CHECK(sym.axons_used <= sym.axons_provisioned);
        CHECK(tn.neurons_used <= tn.neurons_provisioned);
    }
}

TEST_CASE("the signed pair core shows the negative residue and its fix")
{
    const InputSchedule in{{InputEvent{1, {0, 0}, 0, 1}}};
    RunOptions opts;
    opts.record_debug = true;
    auto potentials = [&](const NetworkConfig &net, std::int64_t tick) {
        std::vector<Potential> v(4, 99);
        for (const CoreDebugRecord &d : run(net, in, 3, opts).debug)
        {
            if (d.record.tick == tick)
            {
                v[d.record.neuron] = d.record.potential;
            }
        }
        return v;
    };
    const std::vector<Potential> residue{0, -1, 0, -1};
    const std::vector<Potential> zeros{0, 0, 0, 0};
    const NetworkConfig plain = signed_pair_core(NegativeCompare::Asymmetric, false);
    CHECK(potentials(plain, 1) == residue);
    CHECK(potentials(plain, 2) == residue);
    const NetworkConfig fb = signed_pair_core(NegativeCompare::Asymmetric, true);
    CHECK(potentials(fb, 1) == residue);
    CHECK(potentials(fb, 2) == zeros);
    const NetworkConfig sym = signed_pair_core(NegativeCompare::Symmetric, false);
    CHECK(potentials(sym, 1) == zeros);
}

TEST_CASE("problem validation")
{
    CHECK_THROWS_AS(problem({}, {}).validate(), ConfigError);
    CHECK_THROWS_AS(problem({{1, 2}, {3}}, {1, 1}).validate(), ConfigError);
    CHECK_THROWS_AS(problem({{1}}, {1, 2}).validate(), ConfigError);
    CHECK_THROWS_AS(problem({{256}}, {1}).validate(), ConfigError);
    CHECK_THROWS_AS(problem({{1}}, {-256}).validate(), ConfigError);
    CHECK_THROWS_AS(problem({{1}}, {1}, 0).validate(), ConfigError);
    CHECK_THROWS_AS(map_vmm_positive(problem({{-1}}, {1})), ConfigError);
    CHECK_THROWS_AS(map_vmm_positive(problem({{1}}, {-1})), ConfigError);
    CHECK_NOTHROW(problem({{255, -255}}, {-255}).validate());
}
