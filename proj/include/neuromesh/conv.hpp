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

// Convolution tiling. One neuron per (kernel window, feature); each core
// holds a rectangle of windows and receives the pixel region they cover,
// two axons per pixel and channel so kernels can be ternary.

#ifndef NEUROMESH_CONV_HPP
#define NEUROMESH_CONV_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace neuromesh {

struct ConvSpec
{
    int image_width{1};
    int image_height{1};
    int channels{1};
    int kernel_size{1};
    int stride{1};
    int features{1};

    void validate() const;
    int windows_x() const { return (image_width - kernel_size) / stride + 1; }
    int windows_y() const { return (image_height - kernel_size) / stride + 1; }
    std::int64_t pixels() const
    {
        return std::int64_t{image_width} * image_height;
    }
};

struct CoreSizing
{
    int axons{256};
    int neurons{256};
};

struct ConvTile
{
    int window_x0{0};
    int window_y0{0};
    int windows_x{0};
    int windows_y{0};
    int pixel_x0{0};
    int pixel_y0{0};
    int region_width{0};
    int region_height{0};

    int windows() const { return windows_x * windows_y; }
};

struct UtilizationReport
{
    // Ideal axons (2 * channels * image pixels) over provisioned axons.
    double unique_axon_utilization{0};
    double neuron_utilization{0};
    // Mean copies of each pixel, counting a full core's worth of pixel
    // slots per tile (N(a) / (2 * channels), capped at the image size).
    double avg_pixel_replication{0};
    // Mean copies of each pixel actually wired into some tile's region.
    double wired_pixel_replication{0};
};

struct ConvPlan
{
    ConvSpec spec;
    CoreSizing sizing;
    int max_windows_per_dim{0};
    std::vector<ConvTile> tiles;
    UtilizationReport utilization;

    int cores() const { return static_cast<int>(tiles.size()); }
    std::int64_t neurons_used() const;
    std::int64_t axons_used() const;
};

// Throws ConfigError when one window does not fit a core.
ConvPlan map_convolution(const ConvSpec &spec, CoreSizing sizing);

// Number of tiles whose region contains each pixel, row-major.
std::vector<int> pixel_replication(const ConvPlan &plan);

struct LayerUsage
{
    std::string name;
    int cores{0};
    int axons_per_core{0};
    int neurons_per_core{0};
    // Known for mapped layers only.
    std::optional<std::int64_t> ideal_axons;
    std::optional<std::int64_t> neurons_used;
};

struct LayerReport
{
    LayerUsage layer;
    std::int64_t axons{0};
    std::int64_t neurons{0};
    std::optional<double> axon_utilization;
    std::optional<double> neuron_utilization;
};

struct NetworkUtilization
{
    std::int64_t cores{0};
    std::int64_t axons{0};
    std::int64_t neurons{0};
    std::vector<LayerReport> layers;
};

NetworkUtilization utilization_report(const std::vector<LayerUsage> &layers);

LayerUsage layer_from_plan(const std::string &name, const ConvPlan &plan);

// Three-layer SAR classifier: an 11x11, 2-feature convolution over a 32x32
// image, four fully connected cores and one output core.
std::vector<LayerUsage> sar_default_layers();
std::vector<LayerUsage> sar_modified_layers();

nlohmann::ordered_json to_json(const ConvPlan &plan);
nlohmann::ordered_json to_json(const NetworkUtilization &u);
ConvPlan load_plan(const nlohmann::json &doc);

} // namespace neuromesh

#endif
