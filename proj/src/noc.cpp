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

#include "neuromesh/noc.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "neuromesh/errors.hpp"

namespace neuromesh {

std::string_view to_string(Direction d)
{
    switch (d)
    {
    case Direction::East:
        return "east";
    case Direction::West:
        return "west";
    case Direction::North:
        return "north";
    case Direction::South:
        return "south";
    case Direction::Accept:
        return "accept";
    }
    return "?";
}

void GridConfig::validate() const
{
    if (width < 1 || height < 1)
    {
        throw ConfigError("grid: width and height must be >= 1");
    }
    if (fifo_capacity < 1)
    {
        throw ConfigError("grid: fifo_capacity must be >= 1");
    }
    if (router_cycles < 1)
    {
        throw ConfigError("grid: router_cycles must be >= 1");
    }
}

Direction route_decision(const Packet &p)
{
    if (p.dx > 0)
    {
        return Direction::East;
    }
    if (p.dx < 0)
    {
        return Direction::West;
    }
    if (p.dy > 0)
    {
        return Direction::North;
    }
    if (p.dy < 0)
    {
        return Direction::South;
    }
    return Direction::Accept;
}

Packet hop_apply(Packet p, Direction d)
{
    switch (d)
    {
    case Direction::East:
        --p.dx;
        break;
    case Direction::West:
        ++p.dx;
        break;
    case Direction::North:
        --p.dy;
        break;
    case Direction::South:
        ++p.dy;
        break;
    case Direction::Accept:
        break;
    }
    return p;
}

int hop_count(const Packet &p)
{
    return std::abs(p.dx) + std::abs(p.dy);
}

std::pair<int, int> offset_range(int dim)
{
    if (dim <= 1)
    {
        return {0, 0};
    }
    int half = 1;
    while (2 * half < dim)
    {
        half *= 2;
    }
    return {-half, half - 1};
}

Coord resolve_destination(Coord source, const Packet &p)
{
    return {source.x + p.dx, source.y + p.dy};
}

Mesh::Mesh(GridConfig grid, bool record_paths)
        : grid_(grid)
        , record_paths_(record_paths)
        , routers_(static_cast<std::size_t>(grid.width) * grid.height)
{
    grid_.validate();
}

Coord Mesh::step(Coord at, Direction d)
{
    switch (d)
    {
    case Direction::East:
        return {at.x + 1, at.y};
    case Direction::West:
        return {at.x - 1, at.y};
    case Direction::North:
        return {at.x, at.y + 1};
    case Direction::South:
        return {at.x, at.y - 1};
    case Direction::Accept:
        break;
    }
    return at;
}

Mesh::Port Mesh::receiving_port(Direction d)
{
    switch (d)
    {
    case Direction::East:
        return FromWest;
    case Direction::West:
        return FromEast;
    case Direction::North:
        return FromSouth;
    case Direction::South:
        return FromNorth;
    case Direction::Accept:
        break;
    }
    return Local;
}

DrainResult Mesh::drain_tick(std::int64_t tick,
        std::vector<InFlight> injected, const DeliverFn &deliver)
{
    std::stable_sort(injected.begin(), injected.end(),
            [this](const InFlight &a, const InFlight &b) {
                const int ia = grid_.index(a.source);
                const int ib = grid_.index(b.source);
                return ia != ib ? ia < ib : a.neuron < b.neuron;
            });
    for (const InFlight &f : injected)
    {
        const Coord dest = resolve_destination(f.source, f.packet);
        if (!grid_.contains(f.source) || !grid_.contains(dest))
        {
            std::ostringstream msg;
            msg << "packet from core " << f.source << " neuron " << f.neuron
                << " resolves outside the grid at " << dest;
            throw ConfigError(msg.str());
        }
    }

    DrainResult result;
    if (grid_.fidelity == RoutingFidelity::Functional)
    {
        drain_functional(tick, injected, deliver, result);
    }
    else
    {
        drain_cycle(tick, injected, deliver, result);
    }
    result.remaining = in_flight_;
    return result;
}

void Mesh::eject(std::int64_t tick, Coord at, Flit &&flit,
        const DeliverFn &deliver, DrainResult &result) const
{
    const std::int64_t late = tick - flit.origin.emit_tick;
    const std::int64_t effective = flit.origin.packet.offset - late;
    Delivery d{
            .dest = at,
            .source = flit.origin.source,
            .neuron = flit.origin.neuron,
            .axon = flit.origin.packet.axon,
            .offset = static_cast<int>(std::max<std::int64_t>(0, effective)),
            .emit_tick = flit.origin.emit_tick,
            .deliver_tick = tick,
            .hops = flit.hops,
            .path = std::move(flit.path),
    };
    if (deliver(d) == InsertResult::Ok)
    {
        result.delivered.push_back(std::move(d));
    }
    else
    {
        result.dropped.push_back(std::move(d));
    }
}

void Mesh::drain_functional(std::int64_t tick,
        std::vector<InFlight> &injected, const DeliverFn &deliver,
        DrainResult &result)
{
    for (InFlight &f : injected)
    {
        Flit flit{.origin = f, .remaining = f.packet};
        for (Direction d = route_decision(flit.remaining);
                d != Direction::Accept; d = route_decision(flit.remaining))
        {
            flit.remaining = hop_apply(flit.remaining, d);
            ++flit.hops;
            if (record_paths_)
            {
                flit.path.push_back(d);
            }
        }
        eject(tick, resolve_destination(f.source, f.packet), std::move(flit),
                deliver, result);
    }
}

void Mesh::drain_cycle(std::int64_t tick, std::vector<InFlight> &injected,
        const DeliverFn &deliver, DrainResult &result)
{
    for (InFlight &f : injected)
    {
        routers_[grid_.index(f.source)].inputs[Local].push_back(
                Flit{.origin = f, .remaining = f.packet});
        ++in_flight_;
    }

    constexpr int outputs = 5; // East, West, North, South, Accept
    struct Move
    {
        int router;
        int port;
        Direction dir;
    };
    std::vector<Move> moves;

    while (in_flight_ > 0 && result.cycles < grid_.router_cycles)
    {
        moves.clear();
        // Decide every transfer from the state at the start of the cycle so
        // the outcome does not depend on router iteration order.
        for (int r = 0; r < static_cast<int>(routers_.size()); ++r)
        {
            Router &router = routers_[r];
            const Coord here = grid_.coord(r);
            std::array<bool, outputs> taken{};
            const int start = static_cast<int>(
                    (cycle_counter_ + static_cast<std::uint64_t>(r))
                    % PortCount);
            for (int k = 0; k < PortCount; ++k)
            {
                const int port = (start + k) % PortCount;
                if (router.inputs[port].empty())
                {
                    continue;
                }
                const Direction dir =
                        route_decision(router.inputs[port].front().remaining);
                const int out = static_cast<int>(dir);
                if (taken[out])
                {
                    continue;
                }
                if (dir != Direction::Accept)
                {
                    const auto &queue = routers_[grid_.index(step(here, dir))]
                                                .inputs[receiving_port(dir)];
                    if (static_cast<int>(queue.size()) >= grid_.fifo_capacity)
                    {
                        continue; // backpressure: head stalls
                    }
                }
                taken[out] = true;
                moves.push_back(Move{r, port, dir});
            }
        }

        // Pop every mover first, then push, so capacity checks above stay
        // valid.
        std::vector<std::pair<Move, Flit>> in_transit;
        in_transit.reserve(moves.size());
        for (const Move &m : moves)
        {
            auto &queue = routers_[m.router].inputs[m.port];
            in_transit.emplace_back(m, std::move(queue.front()));
            queue.pop_front();
        }
        for (auto &[m, flit] : in_transit)
        {
            const Coord here = grid_.coord(m.router);
            if (m.dir == Direction::Accept)
            {
                --in_flight_;
                eject(tick, here, std::move(flit), deliver, result);
                continue;
            }
            flit.remaining = hop_apply(flit.remaining, m.dir);
            ++flit.hops;
            if (record_paths_)
            {
                flit.path.push_back(m.dir);
            }
            routers_[grid_.index(step(here, m.dir))]
                    .inputs[receiving_port(m.dir)]
                    .push_back(std::move(flit));
        }
        ++result.cycles;
        ++cycle_counter_;
    }
    if (in_flight_ > 0)
    {
        result.congested = true;
    }
}

} // namespace neuromesh
