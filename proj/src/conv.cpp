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

#include "neuromesh/conv.hpp"

#include <algorithm>

#include "neuromesh/errors.hpp"

namespace neuromesh {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::int64_t region(int windows, const ConvSpec &s)
{
    return std::int64_t{windows - 1} * s.stride + s.kernel_size;
}

bool fits(int w, const ConvSpec &s, CoreSizing c)
{
    const std::int64_t r = region(w, s);
    return 2 * std::int64_t{s.channels} * r * r <= c.axons
            && std::int64_t{w} * w * s.features <= c.neurons;
}

// Splits `count` windows into ceil(count / w) runs whose lengths differ by
// at most one, longer runs first.
std::vector<std::pair<int, int>> split(int count, int w)
{
    const int tiles = (count + w - 1) / w;
    std::vector<std::pair<int, int>> runs;
    int start = 0;
    for (int t = 0; t < tiles; ++t)
    {
        const int len = count / tiles + (t < count % tiles ? 1 : 0);
        runs.emplace_back(start, len);
        start += len;
    }
    return runs;
}

} // namespace

void ConvSpec::validate() const
{
    if (image_width < 1 || image_height < 1 || channels < 1 || kernel_size < 1
            || stride < 1 || features < 1)
    {
        throw ConfigError("conv: all dimensions must be positive");
    }
    if (kernel_size > std::min(image_width, image_height))
    {
        throw ConfigError("conv: kernel larger than the image");
    }
}

std::int64_t ConvPlan::neurons_used() const
{
    std::int64_t n = 0;
    for (const ConvTile &t : tiles)
    {
        n += std::int64_t{t.windows()} * spec.features;
    }
    return n;
}

std::int64_t ConvPlan::axons_used() const
{
    std::int64_t n = 0;
    for (const ConvTile &t : tiles)
    {
        n += 2 * std::int64_t{spec.channels} * t.region_width * t.region_height;
    }
    return n;
}

ConvPlan map_convolution(const ConvSpec &spec, CoreSizing sizing)
{
    spec.validate();
    if (sizing.axons < 1 || sizing.neurons < 1)
    {
        throw ConfigError("conv: core sizing must be positive");
    }
    const std::int64_t window_axons =
            2 * std::int64_t{spec.channels} * spec.kernel_size * spec.kernel_size;
    if (window_axons > sizing.axons)
    {
        throw ConfigError("conv: kernel too large, one window needs "
                + std::to_string(window_axons) + " axons but the core has "
                + std::to_string(sizing.axons));
    }
    if (spec.features > sizing.neurons)
    {
        throw ConfigError("conv: kernel too large, one window needs "
                + std::to_string(spec.features) + " neurons but the core has "
                + std::to_string(sizing.neurons));
    }

    const int wx = spec.windows_x();
    const int wy = spec.windows_y();
    int w = 1;
    while (w < std::max(wx, wy) && fits(w + 1, spec, sizing))
    {
        ++w;
    }

    ConvPlan plan;
    plan.spec = spec;
    plan.sizing = sizing;
    plan.max_windows_per_dim = w;
    for (const auto &[y0, ny] : split(wy, w))
    {
        for (const auto &[x0, nx] : split(wx, w))
        {
            plan.tiles.push_back(ConvTile{
                    .window_x0 = x0,
                    .window_y0 = y0,
                    .windows_x = nx,
                    .windows_y = ny,
                    .pixel_x0 = x0 * spec.stride,
                    .pixel_y0 = y0 * spec.stride,
                    .region_width = static_cast<int>(region(nx, spec)),
                    .region_height = static_cast<int>(region(ny, spec)),
            });
        }
    }

    const double cores = static_cast<double>(plan.tiles.size());
    const double pixels = static_cast<double>(spec.pixels());
    UtilizationReport &u = plan.utilization;
    u.unique_axon_utilization = 2.0 * spec.channels * pixels
            / (cores * sizing.axons);
    u.neuron_utilization =
            static_cast<double>(plan.neurons_used()) / (cores * sizing.neurons);
    const std::int64_t slots = std::min<std::int64_t>(
            sizing.axons / (2 * spec.channels), spec.pixels());
    u.avg_pixel_replication = cores * static_cast<double>(slots) / pixels;
    u.wired_pixel_replication = static_cast<double>(plan.axons_used())
            / (2.0 * spec.channels * pixels);
    return plan;
}

std::vector<int> pixel_replication(const ConvPlan &plan)
{
    const ConvSpec &s = plan.spec;
    std::vector<int> count(static_cast<std::size_t>(s.pixels()), 0);
    for (const ConvTile &t : plan.tiles)
    {
        for (int y = t.pixel_y0; y < t.pixel_y0 + t.region_height; ++y)
        {
            for (int x = t.pixel_x0; x < t.pixel_x0 + t.region_width; ++x)
            {
                ++count[static_cast<std::size_t>(y) * s.image_width + x];
            }
        }
    }
    return count;
}

NetworkUtilization utilization_report(const std::vector<LayerUsage> &layers)
{
    NetworkUtilization out;
    for (const LayerUsage &l : layers)
    {
        LayerReport r;
        r.layer = l;
        r.axons = std::int64_t{l.cores} * l.axons_per_core;
        r.neurons = std::int64_t{l.cores} * l.neurons_per_core;
        if (l.ideal_axons && r.axons > 0)
        {
            r.axon_utilization =
                    static_cast<double>(*l.ideal_axons) / static_cast<double>(r.axons);
        }
        if (l.neurons_used && r.neurons > 0)
        {
            r.neuron_utilization = static_cast<double>(*l.neurons_used)
                    / static_cast<double>(r.neurons);
        }
        out.cores += l.cores;
        out.axons += r.axons;
        out.neurons += r.neurons;
        out.layers.push_back(std::move(r));
    }
    return out;
}

LayerUsage layer_from_plan(const std::string &name, const ConvPlan &plan)
{
    return LayerUsage{
            .name = name,
            .cores = plan.cores(),
            .axons_per_core = plan.sizing.axons,
            .neurons_per_core = plan.sizing.neurons,
            .ideal_axons = 2 * std::int64_t{plan.spec.channels} * plan.spec.pixels(),
            .neurons_used = plan.neurons_used(),
    };
}

namespace {

const ConvSpec kSarConv{.image_width = 32,
        .image_height = 32,
        .channels = 1,
        .kernel_size = 11,
        .stride = 1,
        .features = 2};

} // namespace

std::vector<LayerUsage> sar_default_layers()
{
    return {layer_from_plan("conv", map_convolution(kSarConv, {256, 256})),
            LayerUsage{.name = "fc", .cores = 4, .axons_per_core = 256,
                    .neurons_per_core = 256},
            LayerUsage{.name = "output", .cores = 1, .axons_per_core = 256,
                    .neurons_per_core = 256}};
}

std::vector<LayerUsage> sar_modified_layers()
{
    return {layer_from_plan("conv", map_convolution(kSarConv, {1024, 256})),
            LayerUsage{.name = "fc", .cores = 4, .axons_per_core = 256,
                    .neurons_per_core = 64},
            LayerUsage{.name = "output", .cores = 1, .axons_per_core = 256,
                    .neurons_per_core = 64}};
}

ordered_json to_json(const ConvPlan &plan)
{
    const ConvSpec &s = plan.spec;
    ordered_json tiles = ordered_json::array();
    for (const ConvTile &t : plan.tiles)
    {
        tiles.push_back(ordered_json{{"window_x0", t.window_x0},
                {"window_y0", t.window_y0}, {"windows_x", t.windows_x},
                {"windows_y", t.windows_y}, {"pixel_x0", t.pixel_x0},
                {"pixel_y0", t.pixel_y0}, {"region_width", t.region_width},
                {"region_height", t.region_height},
                {"neurons_used", t.windows() * s.features},
                {"axons_used", 2 * s.channels * t.region_width * t.region_height}});
    }
    const UtilizationReport &u = plan.utilization;
    return ordered_json{
            {"kind", "conv"},
            {"spec",
                    {{"image_width", s.image_width},
                            {"image_height", s.image_height},
                            {"channels", s.channels},
                            {"kernel_size", s.kernel_size}, {"stride", s.stride},
                            {"features", s.features}}},
            {"core", {{"axons", plan.sizing.axons},
                             {"neurons", plan.sizing.neurons}}},
            {"cores", plan.cores()},
            {"max_windows_per_dim", plan.max_windows_per_dim},
            {"neurons_used", plan.neurons_used()},
            {"axons_used", plan.axons_used()},
            {"utilization",
                    {{"unique_axon_utilization", u.unique_axon_utilization},
                            {"neuron_utilization", u.neuron_utilization},
                            {"avg_pixel_replication", u.avg_pixel_replication},
                            {"wired_pixel_replication",
                                    u.wired_pixel_replication}}},
            {"tiles", std::move(tiles)}};
}

ordered_json to_json(const NetworkUtilization &u)
{
    ordered_json layers = ordered_json::array();
    for (const LayerReport &r : u.layers)
    {
        ordered_json l{{"name", r.layer.name}, {"cores", r.layer.cores},
                {"axons_per_core", r.layer.axons_per_core},
                {"neurons_per_core", r.layer.neurons_per_core},
                {"axons", r.axons}, {"neurons", r.neurons}};
        if (r.axon_utilization)
        {
            l["axon_utilization"] = *r.axon_utilization;
        }
        if (r.neuron_utilization)
        {
            l["neuron_utilization"] = *r.neuron_utilization;
        }
        layers.push_back(std::move(l));
    }
    return ordered_json{{"cores", u.cores}, {"axons", u.axons},
            {"neurons", u.neurons}, {"layers", std::move(layers)}};
}

ConvPlan load_plan(const json &doc)
{
    try
    {
        const json &s = doc.at("spec");
        const ConvSpec spec{
                .image_width = s.at("image_width").get<int>(),
                .image_height = s.at("image_height").get<int>(),
                .channels = s.at("channels").get<int>(),
                .kernel_size = s.at("kernel_size").get<int>(),
                .stride = s.at("stride").get<int>(),
                .features = s.at("features").get<int>(),
        };
        const CoreSizing sizing{doc.at("core").at("axons").get<int>(),
                doc.at("core").at("neurons").get<int>()};
        return map_convolution(spec, sizing);
    }
    catch (const json::exception &e)
    {
        throw ConfigError(std::string("plan: ") + e.what());
    }
}

} // namespace neuromesh
