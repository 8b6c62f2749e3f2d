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

#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "neuromesh/conv.hpp"
#include "neuromesh/errors.hpp"
#include "neuromesh/network.hpp"
#include "neuromesh/perf.hpp"
#include "neuromesh/simulator.hpp"

namespace neuromesh::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string slurp(const fs::path &path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw ConfigError("cannot open " + path.string());
    }
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

bool looks_like_json(const std::string &text)
{
    const auto pos = text.find_first_not_of(" \t\r\n");
    return pos != std::string::npos && text[pos] == '[';
}

std::vector<std::int64_t> parse_csv_row(const std::string &line,
        const fs::path &path, std::size_t number)
{
    std::vector<std::int64_t> row;
    std::stringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ','))
    {
        const auto b = cell.find_first_not_of(" \t\r");
        if (b == std::string::npos)
        {
            continue;
        }
        const auto e = cell.find_last_not_of(" \t\r");
        const std::string token = cell.substr(b, e - b + 1);
        std::size_t used = 0;
        std::int64_t v = 0;
        try
        {
            v = std::stoll(token, &used);
        }
        catch (const std::exception &)
        {
            used = 0;
        }
        if (used != token.size())
        {
            throw ConfigError(path.string() + ":" + std::to_string(number)
                    + ": not an integer: \"" + token + "\"");
        }
        row.push_back(v);
    }
    return row;
}

// (width, height) from "WxH".
std::pair<int, int> parse_dims(const std::string &text, const char *what)
{
    const auto x = text.find_first_of("xX");
    try
    {
        if (x == std::string::npos)
        {
            throw std::invalid_argument(text);
        }
        std::size_t u1 = 0;
        std::size_t u2 = 0;
        const int a = std::stoi(text.substr(0, x), &u1);
        const std::string rest = text.substr(x + 1);
        const int b = std::stoi(rest, &u2);
        if (u1 != x || u2 != rest.size() || a < 1 || b < 1)
        {
            throw std::invalid_argument(text);
        }
        return {a, b};
    }
    catch (const std::exception &)
    {
        throw CLI::ValidationError(what, "expected AxB with positive integers, "
                                         "got \"" + text + "\"");
    }
}

std::string format_vector(const std::vector<std::int64_t> &v)
{
    std::ostringstream out;
    out << '[';
    for (std::size_t i = 0; i < v.size(); ++i)
    {
        out << (i ? ", " : "") << v[i];
    }
    out << ']';
    return out.str();
}

std::string event_json(const SpikeEvent &e)
{
    return ordered_json{{"tick", e.tick}, {"x", e.core.x}, {"y", e.core.y},
            {"neuron", e.neuron}}
            .dump();
}

Trace load_trace(const fs::path &path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw ConfigError("cannot open " + path.string());
    }
    return read_trace(in);
}

void write_text(const fs::path &path, const std::string &text)
{
    std::ofstream out(path);
    if (!out)
    {
        throw ConfigError("cannot write " + path.string());
    }
    out << text;
}

struct SimArgs
{
    std::string network;
    std::string input;
    std::int64_t ticks{0};
    std::string fidelity;
    std::string out;
    std::string errors;
    bool debug_rows{false};
    bool until_quiet{false};
};

int run_sim(const SimArgs &a, std::ostream &out)
{
    const NetworkConfig net = load_network(read_json_file(a.network));
    const InputSchedule input = load_input(read_json_file(a.input));
    RunOptions opts;
    opts.record_debug = a.debug_rows;
    opts.stop_when_quiescent = a.until_quiet;
    if (a.fidelity == "cycle")
    {
        opts.fidelity = RoutingFidelity::Cycle;
    }
    else if (a.fidelity == "functional")
    {
        opts.fidelity = RoutingFidelity::Functional;
    }
    const RunResult r = run(net, input, a.ticks, opts);
    write_text(a.out, trace_to_string(r.trace));
    if (!a.errors.empty())
    {
        std::ostringstream s;
        write_errors(s, r.errors);
        write_text(a.errors, s.str());
    }
    if (a.debug_rows)
    {
        std::ostringstream s;
        write_debug(s, r.debug);
        write_text(a.out + ".debug.jsonl", s.str());
    }
    out << "ticks: " << r.ticks_run << "\n"
        << "output spikes: " << r.trace.size() << "\n"
        << "errors: " << r.errors.size() << "\n";
    if (r.aborted)
    {
        out << "aborted: " << r.abort_reason << "\n";
        return kRuntime;
    }
    return kOk;
}

struct VmmArgs
{
    std::string matrix;
    std::string vector;
    std::string mode{"auto"};
    int bits{8};
    std::string out;
};

int run_map_vmm(const VmmArgs &a, std::ostream &out)
{
    VmmProblem p;
    p.matrix = read_matrix(a.matrix);
    p.vector = read_vector(a.vector);
    p.magnitude_bits = a.bits;
    std::string mode = a.mode;
    if (mode == "auto")
    {
        bool negative = std::any_of(p.vector.begin(), p.vector.end(),
                [](auto v) { return v < 0; });
        for (const auto &row : p.matrix)
        {
            negative = negative
                    || std::any_of(row.begin(), row.end(),
                            [](auto v) { return v < 0; });
        }
        mode = negative ? "symmetric" : "positive";
    }
    MappedNetwork m;
    if (mode == "positive")
    {
        m = map_vmm_positive(p);
    }
    else if (mode == "symmetric")
    {
        m = map_vmm_signed(p, MappingMode::SymmetricThreshold);
    }
    else
    {
        m = map_vmm_signed(p, MappingMode::TrueNorthFeedback);
    }
    write_vmm_artifacts(a.out, m);
    out << "mode: " << mode << "\n"
        << "cores: " << m.resources.cores << "\n"
        << "axons: " << m.resources.axons_provisioned << "\n"
        << "neurons: " << m.resources.neurons_provisioned << "\n"
        << "ticks_required: " << m.ticks_required << "\n";
    return kOk;
}

struct ConvArgs
{
    std::string image;
    int channels{1};
    int kernel{1};
    int stride{1};
    int features{1};
    std::string core;
    std::string out;
};

void print_plan(const ConvPlan &plan, std::ostream &out)
{
    const UtilizationReport &u = plan.utilization;
    out << std::fixed << std::setprecision(4) << "cores: " << plan.cores()
        << "\n"
        << "max windows per dim: " << plan.max_windows_per_dim << "\n"
        << "neurons used: " << plan.neurons_used() << " of "
        << std::int64_t{plan.cores()} * plan.sizing.neurons << "\n"
        << "unique axon utilization: " << u.unique_axon_utilization << "\n"
        << "neuron utilization: " << u.neuron_utilization << "\n"
        << "avg pixel replication: " << u.avg_pixel_replication << "\n"
        << "wired pixel replication: " << u.wired_pixel_replication << "\n";
    out.unsetf(std::ios::floatfield);
}

int run_map_conv(const ConvArgs &a, std::ostream &out)
{
    const auto [w, h] = parse_dims(a.image, "--image");
    const auto [axons, neurons] = parse_dims(a.core, "--core");
    const ConvSpec spec{w, h, a.channels, a.kernel, a.stride, a.features};
    const ConvPlan plan = map_convolution(spec, {axons, neurons});
    fs::create_directories(a.out);
    write_json_file(fs::path(a.out) / "plan.json", to_json(plan));
    print_plan(plan, out);
    return kOk;
}

int run_report(const std::string &dir, const std::string &trace_path,
        std::ostream &out)
{
    const fs::path root(dir);
    const fs::path plan_path = root / "plan.json";
    if (!fs::exists(plan_path))
    {
        throw ConfigError("no plan.json in " + dir);
    }
    const json plan = read_json_file(plan_path);
    const std::string kind = plan.value("kind", "");
    if (kind == "conv")
    {
        print_plan(load_plan(plan), out);
        return kOk;
    }
    if (kind != "vmm")
    {
        throw ConfigError(plan_path.string() + ": unknown plan kind");
    }
    const json res = read_json_file(root / "resources.json");
    out << "cores: " << res.at("cores").get<int>() << "\n"
        << "axons: " << res.at("axons").get<std::int64_t>() << "\n"
        << "neurons: " << res.at("neurons").get<std::int64_t>() << "\n";
    const fs::path tp = trace_path.empty() ? root / "trace.jsonl"
                                           : fs::path(trace_path);
    if (!fs::exists(tp))
    {
        out << "result: (no trace; run sim with --out " << tp.string()
            << ")\n";
        return kOk;
    }
    const VmmDecode decode = load_decode(read_json_file(root / "decode.json"));
    out << "result: " << format_vector(decode_vmm(load_trace(tp), decode))
        << "\n";
    return kOk;
}

struct PerfArgs
{
    std::string core;
    std::string freq;
    std::int64_t parallel{1};
    std::int64_t ticks_per_item{1};
};

int run_perf(const PerfArgs &a, std::ostream &out)
{
    const auto [axons, neurons] = parse_dims(a.core, "--core");
    const PerfQuery q{axons, neurons, Frequency::parse(a.freq), a.parallel,
            a.ticks_per_item};
    const std::int64_t cycles = cycles_per_tick(axons, neurons);
    const double rate = tick_rate(q.clock, cycles);
    out << "cycles per tick: " << cycles << "\n"
        << std::fixed << std::setprecision(3)
        << "tick rate: " << rate / 1000.0 << " kHz\n"
        << "throughput: " << throughput(q) << " items/s\n";
    out.unsetf(std::ios::floatfield);
    return kOk;
}

int run_compare(const std::string &a, const std::string &b, std::ostream &out)
{
    const TraceComparison cmp = compare_traces(load_trace(a), load_trace(b));
    if (cmp.equal)
    {
        out << "equal\n";
        return kOk;
    }
    out << "diverge at event " << cmp.index;
    const auto tick = cmp.left ? cmp.left->tick : cmp.right->tick;
    out << " (tick " << tick << ")\n"
        << "  " << a << ": " << (cmp.left ? event_json(*cmp.left) : "<end>")
        << "\n"
        << "  " << b << ": " << (cmp.right ? event_json(*cmp.right) : "<end>")
        << "\n";
    return kDivergence;
}

} // namespace

std::vector<std::vector<std::int64_t>> read_matrix(const fs::path &path)
{
    const std::string text = slurp(path);
    if (looks_like_json(text))
    {
        try
        {
            return json::parse(text).get<std::vector<std::vector<std::int64_t>>>();
        }
        catch (const json::exception &e)
        {
            throw ConfigError(path.string() + ": " + e.what());
        }
    }
    std::vector<std::vector<std::int64_t>> m;
    std::stringstream lines(text);
    std::string line;
    std::size_t number = 0;
    while (std::getline(lines, line))
    {
        ++number;
        auto row = parse_csv_row(line, path, number);
        if (!row.empty())
        {
            m.push_back(std::move(row));
        }
    }
    return m;
}

std::vector<std::int64_t> read_vector(const fs::path &path)
{
    const std::string text = slurp(path);
    if (looks_like_json(text))
    {
        try
        {
            return json::parse(text).get<std::vector<std::int64_t>>();
        }
        catch (const json::exception &e)
        {
            throw ConfigError(path.string() + ": " + e.what());
        }
    }
    std::vector<std::int64_t> v;
    for (const auto &row : read_matrix(path))
    {
        v.insert(v.end(), row.begin(), row.end());
    }
    return v;
}

void write_vmm_artifacts(const fs::path &dir, const MappedNetwork &m)
{
    fs::create_directories(dir);
    write_json_file(dir / "network.json", to_json(m.network));
    write_json_file(dir / "input.json", to_json(m.input));
    write_json_file(dir / "resources.json", to_json(m.resources));
    write_json_file(dir / "decode.json", to_json(m.decode));
    write_json_file(dir / "plan.json",
            ordered_json{{"kind", "vmm"}, {"ticks_required", m.ticks_required}});
}

int dispatch(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err)
{
    CLI::App app{"neuromesh: neuromorphic mesh simulator and mappers",
            "neuromesh"};
    app.require_subcommand(1);

    SimArgs sim;
    auto *sim_cmd = app.add_subcommand("sim", "run a network and write its trace");
    sim_cmd->add_option("--network", sim.network, "network JSON")->required();
    sim_cmd->add_option("--input", sim.input, "input spike JSON")->required();
    sim_cmd->add_option("--ticks", sim.ticks, "ticks to run")
            ->required()
            ->check(CLI::PositiveNumber);
    sim_cmd->add_option("--fidelity", sim.fidelity, "routing fidelity override")
            ->check(CLI::IsMember({"functional", "cycle"}));
    sim_cmd->add_option("--out", sim.out, "trace JSONL output")->required();
    sim_cmd->add_option("--errors", sim.errors, "error log JSONL output");
    sim_cmd->add_flag("--debug-rows", sim.debug_rows,
            "also write <out>.debug.jsonl with per-neuron datapath rows");
    sim_cmd->add_flag("--until-quiet", sim.until_quiet,
            "stop early once no neuron can fire again");

    auto *map_cmd = app.add_subcommand("map", "compile a workload onto cores");
    map_cmd->require_subcommand(1);
    VmmArgs vmm;
    auto *vmm_cmd = map_cmd->add_subcommand("vmm", "vector-matrix multiply");
    vmm_cmd->add_option("--matrix", vmm.matrix, "matrix CSV or JSON")->required();
    vmm_cmd->add_option("--vector", vmm.vector, "vector CSV or JSON")->required();
    vmm_cmd->add_option("--mode", vmm.mode, "mapping mode")
            ->check(CLI::IsMember(
                    {"auto", "positive", "tn-feedback", "symmetric"}));
    vmm_cmd->add_option("--bits", vmm.bits, "magnitude bits")
            ->check(CLI::Range(1, 8));
    vmm_cmd->add_option("--out", vmm.out, "output directory")->required();

    ConvArgs conv;
    auto *conv_cmd = map_cmd->add_subcommand("conv", "convolution tiling");
    conv_cmd->add_option("--image", conv.image, "WxH")->required();
    conv_cmd->add_option("--channels", conv.channels)->check(CLI::PositiveNumber);
    conv_cmd->add_option("--kernel", conv.kernel)
            ->required()
            ->check(CLI::PositiveNumber);
    conv_cmd->add_option("--stride", conv.stride)->check(CLI::PositiveNumber);
    conv_cmd->add_option("--features", conv.features)->check(CLI::PositiveNumber);
    conv_cmd->add_option("--core", conv.core, "AxN core size")->required();
    conv_cmd->add_option("--out", conv.out, "output directory")->required();

    std::string plan_dir;
    std::string report_trace;
    auto *report_cmd =
            app.add_subcommand("report", "summarize a mapped plan directory");
    report_cmd->add_option("--plan", plan_dir, "directory from map")->required();
    report_cmd->add_option("--trace", report_trace,
            "trace to decode (default <plan>/trace.jsonl)");

    PerfArgs perf;
    auto *perf_cmd = app.add_subcommand("perf", "timing model");
    perf_cmd->add_option("--core", perf.core, "AxN core size")->required();
    perf_cmd->add_option("--freq", perf.freq, "clock frequency in Hz")
            ->required();
    perf_cmd->add_option("--parallel", perf.parallel)->check(CLI::PositiveNumber);
    perf_cmd->add_option("--ticks-per-item", perf.ticks_per_item)
            ->check(CLI::PositiveNumber);

    std::string trace_a;
    std::string trace_b;
    auto *cmp_cmd = app.add_subcommand("compare", "compare two traces");
    cmp_cmd->add_option("a", trace_a)->required();
    cmp_cmd->add_option("b", trace_b)->required();

    try
    {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    }
    catch (const CLI::CallForHelp &e)
    {
        app.exit(e, out, err);
        return kOk;
    }
    catch (const CLI::CallForAllHelp &e)
    {
        app.exit(e, out, err);
        return kOk;
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e, out, err);
        return kUsage;
    }

    try
    {
        if (*sim_cmd)
        {
            return run_sim(sim, out);
        }
        if (*vmm_cmd)
        {
            return run_map_vmm(vmm, out);
        }
        if (*conv_cmd)
        {
            return run_map_conv(conv, out);
        }
        if (*report_cmd)
        {
            return run_report(plan_dir, report_trace, out);
        }
        if (*perf_cmd)
        {
            return run_perf(perf, out);
        }
        if (*cmp_cmd)
        {
            return run_compare(trace_a, trace_b, out);
        }
    }
    catch (const CLI::ValidationError &e)
    {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    catch (const OverflowError &e)
    {
        err << "error: " << e.what() << "\n";
        return kRuntime;
    }
    catch (const ConfigError &e)
    {
        err << "error: " << e.what() << "\n";
        return kInvalid;
    }
    catch (const DecodeError &e)
    {
        err << "error: " << e.what() << "\n";
        return kInvalid;
    }
    catch (const nlohmann::json::exception &e)
    {
        err << "error: " << e.what() << "\n";
        return kInvalid;
    }
    catch (const fs::filesystem_error &e)
    {
        err << "error: " << e.what() << "\n";
        return kInvalid;
    }
    return kUsage;
}

} // namespace neuromesh::cli
