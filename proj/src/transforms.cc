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

#include "qnoise/transforms.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qnoise {

bool is_power_of_two(size_t n) {
    return n > 0 && (n & (n - 1)) == 0;
}

size_t log2_exact(size_t n) {
    size_t k = 0;
    while ((size_t{1} << k) < n) {
        k++;
    }
    return k;
}

void wht_inplace(std::span<double> values) {
    size_t len = values.size();
    if (!is_power_of_two(len)) {
        throw std::invalid_argument("wht_inplace: length must be a power of two, got " + std::to_string(len));
    }
    for (size_t h = 1; h < len; h *= 2) {
        for (size_t i = 0; i < len; i += h * 2) {
            for (size_t j = i; j < i + h; j++) {
                double x = values[j];
                double y = values[j + h];
                values[j] = x + y;
                values[j + h] = x - y;
            }
        }
    }
}

std::vector<double> wht(std::vector<double> values) {
    wht_inplace(values);
    return values;
}

std::vector<double> project_to_simplex(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("project_to_simplex: empty vector");
    }
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("project_to_simplex: non-finite entry");
        }
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double cumulative = 0.0;
    double theta = 0.0;
    for (size_t j = 0; j < sorted.size(); j++) {
        cumulative += sorted[j];
        double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
        if (sorted[j] - candidate > 0.0) {
            theta = candidate;
        }
    }
    std::vector<double> out(values.size());
    for (size_t i = 0; i < values.size(); i++) {
        out[i] = std::max(values[i] - theta, 0.0);
    }
    return out;
}

}  // namespace qnoise
