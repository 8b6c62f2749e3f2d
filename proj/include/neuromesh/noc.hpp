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

// 2D mesh network: dimension-order (XY) routing with two fidelities.
//
// Functional fidelity hands every packet to its destination between ticks.
// Cycle fidelity steps routers one cycle at a time with bounded input FIFOs;
// a full downstream FIFO stalls the upstream head and the stall propagates
// backwards. Packets still in the mesh when a tick's cycle budget runs out
// stay in flight and are flagged as congestion; when they finally arrive
// their delivery offset is shortened by the ticks they spent in transit.

#ifndef NEUROMESH_NOC_HPP
#define NEUROMESH_NOC_HPP

#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <string_view>
#include <utility>
#include <vector>

#include "neuromesh/core.hpp"
#include "neuromesh/packet.hpp"

namespace neuromesh {

enum class Direction
{
    East,
    West,
    North,
    South,
    Accept,
};

std::string_view to_string(Direction d);

enum class RoutingFidelity
{
    Functional,
    Cycle,
};

struct GridConfig
{
    int width{1};
    int height{1};
    int fifo_capacity{16};
    RoutingFidelity fidelity{RoutingFidelity::Functional};
    // Router cycles available between two ticks (Cycle fidelity only).
    int router_cycles{4096};

    void validate() const;
    bool contains(Coord c) const
    {
        return c.x >= 0 && c.x < width && c.y >= 0 && c.y < height;
    }
    int index(Coord c) const { return c.y * width + c.x; }
    Coord coord(int index) const { return {index % width, index / width}; }
};

Direction route_decision(const Packet &p);
Packet hop_apply(Packet p, Direction d);

// Number of router-to-router hops the packet will take.
int hop_count(const Packet &p);

// Inclusive [lo, hi] range of a relative offset field for a mesh dimension.
// The field is a two's-complement value wide enough to address `dim` cores,
// so a power-of-two dimension gives [-dim/2, dim/2 - 1].
std::pair<int, int> offset_range(int dim);

Coord resolve_destination(Coord source, const Packet &p);

// A packet handed to the network by a firing neuron.
struct InFlight
{
    Coord source;
    int neuron{0};
    Packet packet;
    std::int64_t emit_tick{0};
};

struct Delivery
{
    Coord dest;
    Coord source;
    int neuron{0};
    int axon{0};
    int offset{0}; // effective: shortened by ticks spent in transit
    std::int64_t emit_tick{0};
    std::int64_t deliver_tick{0};
    int hops{0};
    std::vector<Direction> path; // filled when path recording is enabled
};

struct DrainResult
{
    std::vector<Delivery> delivered;
    std::vector<Delivery> dropped;
    bool congested{false};
    std::int64_t cycles{0};
    std::size_t remaining{0};
};

// Receives each arriving packet; typically a scheduler insert.
using DeliverFn = std::function<InsertResult(const Delivery &)>;

class Mesh
{
public:
    explicit Mesh(GridConfig grid, bool record_paths = false);

    // Routes `injected` (plus anything still in flight) during the window
    // that closes tick `tick`. Injected packets enter the network in
    // (source row-major index, neuron) order.
    DrainResult drain_tick(std::int64_t tick, std::vector<InFlight> injected,
            const DeliverFn &deliver);

    std::size_t in_flight() const { return in_flight_; }
    const GridConfig &grid() const { return grid_; }

private:
    enum Port
    {
        Local = 0,
        FromEast,
        FromWest,
        FromNorth,
        FromSouth,
        PortCount,
    };

    struct Flit
    {
        InFlight origin;
        Packet remaining;
        int hops{0};
        std::vector<Direction> path;
    };

    struct Router
    {
        std::array<std::deque<Flit>, PortCount> inputs;
    };

    static Coord step(Coord at, Direction d);
    static Port receiving_port(Direction d);

    void drain_functional(std::int64_t tick, std::vector<InFlight> &injected,
            const DeliverFn &deliver, DrainResult &result);
    void drain_cycle(std::int64_t tick, std::vector<InFlight> &injected,
            const DeliverFn &deliver, DrainResult &result);
    void eject(std::int64_t tick, Coord at, Flit &&flit,
            const DeliverFn &deliver, DrainResult &result) const;

    GridConfig grid_;
    bool record_paths_;
    std::vector<Router> routers_;
    std::size_t in_flight_{0};
    std::uint64_t cycle_counter_{0};
};

} // namespace neuromesh

#endif
