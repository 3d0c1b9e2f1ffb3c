// SPDX-License-Identifier: Apache-2.0
//
// pathfeat: obstruction features and dense-network path loss modelling
// Copyright (C) 2026 The pathfeat authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef PATHFEAT_ERRORS_HPP
#define PATHFEAT_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pathfeat {

// Bad caller input (unknown feature config, k out of range, bad flag value).
struct usage_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Data that parses but violates a domain invariant.
struct validation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Matrix/vector dimensions that do not chain.
struct shape_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Experiment set-up that cannot be satisfied by the data (missing group, ...).
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A file that cannot be opened, read or written.
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed text input. Carries the 1-based line number of the offending row.
class parse_error : public std::runtime_error {
public:
    parse_error(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace pathfeat

#endif
