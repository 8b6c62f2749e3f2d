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

#ifndef NEUROMESH_CLI_HPP
#define NEUROMESH_CLI_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "neuromesh/vmm.hpp"

namespace neuromesh::cli {

enum ExitCode
{
    kOk = 0,
    kDivergence = 1,
    kUsage = 2,
    kInvalid = 3,
    kRuntime = 4,
};

// Runs one command line (without the program name).
int dispatch(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err);

// Integer matrix from CSV rows or a JSON array of arrays.
std::vector<std::vector<std::int64_t>> read_matrix(
        const std::filesystem::path &path);
// Integer vector from CSV (any layout) or a JSON array.
std::vector<std::int64_t> read_vector(const std::filesystem::path &path);

// Writes network.json, input.json, resources.json, decode.json and
// plan.json into `dir`.
void write_vmm_artifacts(const std::filesystem::path &dir,
        const MappedNetwork &m);

} // namespace neuromesh::cli

#endif
