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

#ifndef NEUROMESH_PACKET_HPP
#define NEUROMESH_PACKET_HPP

#include <compare>
#include <ostream>

namespace neuromesh {

// Mesh coordinates. x grows east, y grows north.
struct Coord
{
    int x{0};
    int y{0};

    friend auto operator<=>(const Coord &, const Coord &) = default;
};

inline std::ostream &operator<<(std::ostream &out, const Coord &c)
{
    return out << '(' << c.x << ',' << c.y << ')';
}

// A routed spike. dx/dy are the remaining displacement to the destination
// core; axon and offset are consumed by the destination scheduler.
struct Packet
{
    int dx{0};
    int dy{0};
    int axon{0};
    int offset{1};

    friend auto operator<=>(const Packet &, const Packet &) = default;
};

} // namespace neuromesh

#endif
