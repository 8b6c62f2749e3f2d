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

#ifndef NEUROMESH_ERRORS_HPP
#define NEUROMESH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace neuromesh {

// Invalid configuration: bad parameters, dangling references, malformed
// documents. Messages carry the offending path (e.g. "cores[1].neurons[3]").
class ConfigError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// A neuron potential left the representable range.
class OverflowError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// A trace could not be interpreted against a decode description.
class DecodeError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace neuromesh

#endif
