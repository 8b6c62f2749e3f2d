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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

#include "cli.hpp"
#include "neuromesh/network.hpp"

using namespace neuromesh;
namespace fs = std::filesystem;

namespace {

struct Outcome
{
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args)
{
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::dispatch(args, out, err);
    return {code, out.str(), err.str()};
}

struct TempDir
{
    fs::path path;
    explicit TempDir(const std::string &name)
            : path(fs::temp_directory_path() / ("neuromesh_cli_" + name))
    {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string &f) const { return (path / f).string(); }
};

void write(const std::string &path, const std::string &text)
{
    std::ofstream(path) << text;
}

std::string slurp(const std::string &path)
{
    std::ifstream in(path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

bool has(const std::string &s, const std::string &part)
{
    return s.find(part) != std::string::npos;
}

// One core whose neuron overflows an 8-bit potential on its first input.
std::string overflow_network()
{
    nlohmann::json neuron = {{"weights", {100, 0, 0, 0}}, {"connections", {0}},
            {"pos_threshold", 127}, {"neg_threshold", 0},
            {"initial_potential", 126},
            {"pos_reset", {{"mode", "linear"}, {"value", 1}}},
            {"neg_reset", {{"mode", "static"}, {"value", 0}}},
            {"dest", {{"dx", 0}, {"dy", 0}, {"axon", 0}, {"offset", 1}}}};
    nlohmann::json doc = {{"grid", {{"width", 1}, {"height", 1}}},
            {"cores",
                    {{{"x", 0}, {"y", 0},
                            {"params", {{"axons", 1}, {"neurons", 1},
                                               {"potential_bits", 8}}},
                            {"axon_types", {0}}, {"neurons", {neuron}}}}},
            {"output_core", {{"x", 0}, {"y", 0}}}};
    return doc.dump();
}

} // namespace

TEST_CASE("perf prints cycles, tick rate and throughput")
{
    const Outcome r = invoke({"perf", "--core", "256x256", "--freq", "213300000"});
    CHECK(r.code == cli::kOk);
    CHECK(has(r.out, "cycles per tick: 66308"));
    CHECK(has(r.out, "throughput: 3216 items/s"));
    CHECK(has(r.out, "tick rate: "));
    CHECK(invoke({"perf", "--core", "1024x256", "--freq", "229.7MHz", "--parallel",
                      "24"})
                    .out.find("throughput: 20785")
            != std::string::npos);
}

TEST_CASE("map vmm, sim and report reproduce the worked example")
{
    TempDir dir("vmm");
    write(dir / "m.csv", "2\n1\n4\n12\n");
    write(dir / "v.json", "[1, 3, 2, 1]");
    const Outcome map = invoke({"map", "vmm", "--matrix", dir / "m.csv", "--vector",
            dir / "v.json", "--bits", "4", "--out", dir / "plan"});
    REQUIRE(map.code == cli::kOk);
    CHECK(has(map.out, "cores: 2"));
    for (const char *f : {"network.json", "input.json", "resources.json",
                 "decode.json", "plan.json"})
    {
        CHECK(fs::exists(dir.path / "plan" / f));
    }

    const Outcome sim = invoke({"sim", "--network", dir / "plan/network.json",
            "--input", dir / "plan/input.json", "--ticks", "40", "--out",
            dir / "plan/trace.jsonl", "--errors", dir / "errs.jsonl",
            "--debug-rows"});
    REQUIRE(sim.code == cli::kOk);
    CHECK(has(sim.out, "errors: 0"));
    CHECK(fs::exists(dir / "plan/trace.jsonl.debug.jsonl"));
    CHECK(slurp(dir / "errs.jsonl").empty());

    const Outcome report = invoke({"report", "--plan", dir / "plan"});
    CHECK(report.code == cli::kOk);
    CHECK(has(report.out, "result: [25]"));
}

TEST_CASE("signed mapping through the CLI")
{
    TempDir dir("signed");
    write(dir / "m.json", "[[2], [-3]]");
    write(dir / "v.csv", "-1,3\n");
    for (const char *mode : {"tn-feedback", "symmetric"})
    {
        const std::string plan = dir / mode;
        REQUIRE(invoke({"map", "vmm", "--matrix", dir / "m.json", "--vector",
                            dir / "v.csv", "--mode", mode, "--out", plan})
                        .code
                == cli::kOk);
        REQUIRE(invoke({"sim", "--network", plan + "/network.json", "--input",
                            plan + "/input.json", "--ticks", "200", "--until-quiet",
                            "--out", plan + "/trace.jsonl"})
                        .code
                == cli::kOk);
        CHECK(has(invoke({"report", "--plan", plan}).out, "result: [-11]"));
    }
    CHECK(invoke({"map", "vmm", "--matrix", dir / "m.json", "--vector",
                      dir / "v.csv", "--mode", "positive", "--out", dir / "p"})
                    .code
            == cli::kInvalid);
}

TEST_CASE("compare exit codes")
{
    TempDir dir("cmp");
    const std::string a = "{\"tick\":3,\"x\":0,\"y\":0,\"neuron\":1}\n"
                          "{\"tick\":7,\"x\":1,\"y\":0,\"neuron\":0}\n";
    const std::string b = "{\"tick\":3,\"x\":0,\"y\":0,\"neuron\":1}\n"
                          "{\"tick\":7,\"x\":1,\"y\":0,\"neuron\":2}\n";
    write(dir / "a.jsonl", a);
    write(dir / "a2.jsonl", a);
    write(dir / "b.jsonl", b);
    const Outcome same = invoke({"compare", dir / "a.jsonl", dir / "a2.jsonl"});
    CHECK(same.code == cli::kOk);
    CHECK(same.out == "equal\n");
    const Outcome diff = invoke({"compare", dir / "a.jsonl", dir / "b.jsonl"});
    CHECK(diff.code == cli::kDivergence);
    CHECK(has(diff.out, "diverge at event 1 (tick 7)"));
}

TEST_CASE("error exit codes")
{
    TempDir dir("errors");
    CHECK(invoke({}).code == cli::kUsage);
    CHECK(invoke({"frobnicate"}).code == cli::kUsage);
    CHECK(invoke({"perf", "--core", "256x256"}).code == cli::kUsage);
    CHECK(invoke({"perf", "--core", "256x256", "--freq", "1M", "--parallel", "0"}).code
            == cli::kUsage);

    const Outcome missing = invoke({"sim", "--network", dir / "absent.json",
            "--input", dir / "absent.json", "--ticks", "5", "--out",
            dir / "t.jsonl"});
    CHECK(missing.code == cli::kInvalid);
    CHECK(has(missing.err, "absent.json"));

    write(dir / "net.json", overflow_network());
    write(dir / "in.json", R"({"spikes": [{"tick": 2, "x": 0, "y": 0, "axon": 0}]})");
    const Outcome overflow = invoke({"sim", "--network", dir / "net.json", "--input",
            dir / "in.json", "--ticks", "5", "--out", dir / "t.jsonl", "--errors",
            dir / "e.jsonl"});
    CHECK(overflow.code == cli::kRuntime);
    CHECK(has(overflow.out, "aborted"));
    CHECK(has(slurp(dir / "e.jsonl"), "\"kind\":\"overflow\""));
}

TEST_CASE("map conv and report")
{
    TempDir dir("conv");
    const Outcome r = invoke({"map", "conv", "--image", "32x32", "--channels", "1",
            "--kernel", "11", "--stride", "1", "--features", "2", "--core",
            "256x256", "--out", dir / "plan"});
    REQUIRE(r.code == cli::kOk);
    CHECK(has(r.out, "cores: 484"));
    const Outcome rep = invoke({"report", "--plan", dir / "plan"});
    CHECK(rep.code == cli::kOk);
    CHECK(has(rep.out, "cores: 484"));
    CHECK(has(rep.out, "avg pixel replication: 60.5000"));
    CHECK(invoke({"map", "conv", "--image", "4x4", "--kernel", "3", "--channels",
                      "4", "--core", "32x9", "--out", dir / "bad"})
                    .code
            == cli::kInvalid);
    CHECK(invoke({"map", "conv", "--image", "4by4", "--kernel", "2", "--core",
                      "32x9", "--out", dir / "bad"})
                    .code
            != cli::kOk);
}

TEST_CASE("repeated runs produce byte-identical output")
{
    TempDir dir("repeat");
    write(dir / "m.json", "[[3, -7, 1], [-2, 5, 4]]");
    write(dir / "v.json", "[-6, 9]");
    std::string first;
    for (int k = 0; k < 2; ++k)
    {
        const std::string plan = dir / ("p" + std::to_string(k));
        REQUIRE(invoke({"map", "vmm", "--matrix", dir / "m.json", "--vector",
                            dir / "v.json", "--out", plan})
                        .code
                == cli::kOk);
        REQUIRE(invoke({"sim", "--network", plan + "/network.json", "--input",
                            plan + "/input.json", "--ticks", "300", "--fidelity",
                            "cycle", "--out", plan + "/trace.jsonl"})
                        .code
                == cli::kOk);
        const std::string bytes = slurp(plan + "/network.json")
                + slurp(plan + "/trace.jsonl");
        if (k == 0)
        {
            first = bytes;
        }
        else
        {
            CHECK(bytes == first);
        }
    }
    CHECK(invoke({"compare", dir / "p0/trace.jsonl", dir / "p1/trace.jsonl"}).code
            == cli::kOk);
    CHECK(has(invoke({"report", "--plan", dir / "p0"}).out, "result: [-36, 87, 30]"));
}
