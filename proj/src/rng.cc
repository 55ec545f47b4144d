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

#include "qnoise/rng.h"

#include <stdexcept>

namespace qnoise {

uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

RngStream RngStream::keyed(std::initializer_list<uint64_t> keys) {
    uint64_t acc = 0x243f6a8885a308d3ull;
    for (uint64_t k : keys) {
        acc = mix64(acc ^ mix64(k));
    }
    return RngStream(acc);
}

uint64_t RngStream::next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    uint64_t x = state_;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

double RngStream::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

uint64_t RngStream::next_below(uint64_t bound) {
    if (bound == 0) {
        throw std::invalid_argument("next_below: bound must be positive");
    }
    // Rejection sampling over the largest multiple of bound.
    uint64_t threshold = (0 - bound) % bound;
    while (true) {
        uint64_t r = next_u64();
        if (r >= threshold) {
            return r % bound;
        }
    }
}

size_t RngStream::next_weighted(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) {
        total += w;
    }
    if (!(total > 0.0)) {
        throw std::invalid_argument("next_weighted: weights must have positive sum");
    }
    double u = next_double() * total;
    double acc = 0.0;
    for (size_t i = 0; i < weights.size(); i++) {
        acc += weights[i];
        if (u < acc) {
            return i;
        }
    }
    return weights.size() - 1;
}

}  // namespace qnoise
