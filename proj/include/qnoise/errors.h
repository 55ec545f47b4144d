// Copyright 2026 qnoise Contributors
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

#ifndef QNOISE_ERRORS_H
#define QNOISE_ERRORS_H

#include <stdexcept>
#include <string>

namespace qnoise {

/// Invalid or inconsistent configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string &msg) : std::runtime_error(msg) {}
};

/// Malformed or inconsistent experiment data (CLI exit code 3).
struct DataError : std::runtime_error {
    explicit DataError(const std::string &msg) : std::runtime_error(msg) {}
};

/// Numerical failure while computing results (CLI exit code 4).
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string &msg) : std::runtime_error(msg) {}
};

}  // namespace qnoise

#endif
