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

#include "neuromesh/perf.hpp"

#include <cctype>
#include <limits>
#include <numeric>
#include <string>

#include "neuromesh/errors.hpp"

namespace neuromesh {

namespace {

[[noreturn]] void bad_frequency(std::string_view text)
{
    throw ConfigError("invalid frequency \"" + std::string(text) + "\"");
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b, std::string_view text)
{
    std::int64_t out{};
    if (__builtin_mul_overflow(a, b, &out))
    {
        bad_frequency(text);
    }
    return out;
}

} // namespace

Frequency Frequency::parse(std::string_view text)
{
    std::string_view s = text;
    if (s.size() >= 2
            && (s.substr(s.size() - 2) == "Hz" || s.substr(s.size() - 2) == "hz"))
    {
        s.remove_suffix(2);
    }
    int exponent = 0;
    if (!s.empty())
    {
        switch (s.back())
        {
        case 'k':
        case 'K':
            exponent = 3;
            s.remove_suffix(1);
            break;
        case 'M':
            exponent = 6;
            s.remove_suffix(1);
            break;
        case 'G':
            exponent = 9;
            s.remove_suffix(1);
            break;
        default:
            break;
        }
    }

    std::int64_t mantissa = 0;
    int fraction_digits = 0;
    bool seen_dot = false;
    bool seen_digit = false;
    std::size_t i = 0;
    for (; i < s.size(); ++i)
    {
        const char c = s[i];
        if (std::isdigit(static_cast<unsigned char>(c)))
        {
            mantissa = checked_mul(mantissa, 10, text) + (c - '0');
            fraction_digits += seen_dot ? 1 : 0;
            seen_digit = true;
        }
        else if (c == '.' && !seen_dot)
        {
            seen_dot = true;
        }
        else
        {
            break;
        }
    }
    if (!seen_digit)
    {
        bad_frequency(text);
    }
    if (i < s.size())
    {
        if (s[i] != 'e' && s[i] != 'E')
        {
            bad_frequency(text);
        }
        const std::string rest(s.substr(i + 1));
        std::size_t used = 0;
        int e = 0;
        try
        {
            e = std::stoi(rest, &used);
        }
        catch (const std::exception &)
        {
            bad_frequency(text);
        }
        if (used != rest.size())
        {
            bad_frequency(text);
        }
        exponent += e;
    }
    exponent -= fraction_digits;

    Frequency f{mantissa, 1};
    for (; exponent > 0; --exponent)
    {
        f.num = checked_mul(f.num, 10, text);
    }
    for (; exponent < 0; ++exponent)
    {
        f.den = checked_mul(f.den, 10, text);
    }
    if (f.num <= 0)
    {
        bad_frequency(text);
    }
    const std::int64_t g = std::gcd(f.num, f.den);
    f.num /= g;
    f.den /= g;
    return f;
}

std::int64_t cycles_per_tick(std::int64_t num_axons, std::int64_t num_neurons)
{
    if (num_axons < 1 || num_neurons < 1)
    {
        throw ConfigError("cycles_per_tick: core dimensions must be positive");
    }
    return num_axons * (num_neurons + 3) + 4;
}

double tick_rate(const Frequency &clock, std::int64_t cycles)
{
    if (cycles < 1)
    {
        throw ConfigError("tick_rate: cycles must be >= 1");
    }
    return clock.to_double() / static_cast<double>(cycles);
}

std::int64_t throughput(const PerfQuery &q)
{
    if (q.parallel_instances < 1 || q.ticks_per_item < 1 || q.clock.num < 1
            || q.clock.den < 1)
    {
        throw ConfigError("throughput: query fields must be positive");
    }
    __extension__ typedef __int128 wide;
    const wide numer = static_cast<wide>(q.parallel_instances) * q.clock.num;
    const wide denom = static_cast<wide>(q.clock.den)
            * cycles_per_tick(q.num_axons, q.num_neurons) * q.ticks_per_item;
    const wide result = numer / denom;
    if (result > std::numeric_limits<std::int64_t>::max())
    {
        throw ConfigError("throughput: result overflows");
    }
    return static_cast<std::int64_t>(result);
}

} // namespace neuromesh
