// Copyright 2026 The qka authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace qka {

/// Thrown when two independent computations of the same quantity disagree.
/// Reaching this means the library contradicted itself, not that the caller
/// passed bad input; the CLI maps it to exit code 2.
class SelfCheckError : public std::runtime_error {
public:
    explicit SelfCheckError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qka
