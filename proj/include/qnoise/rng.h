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

#ifndef QNOISE_RNG_H
#define QNOISE_RNG_H

#include <cstdint>
#include <initializer_list>
#include <span>

namespace qnoise {

/// splitmix64 finalizer; also used to fold stream keys together.
uint64_t mix64(uint64_t x);

/// Deterministic keyed random stream.
///
/// Streams derived from the same keys produce identical sequences on every
/// platform and for any thread schedule, so simulation work can be split by
/// (seed, length, sequence)-style keys and run in parallel. Results never
/// depend on std:: distribution internals.
class RngStream {
  public:
    explicit RngStream(uint64_t seed) : state_(mix64(seed ^ 0x9e3779b97f4a7c15ull)) {}

    /// Stream uniquely determined by the ordered key tuple.
    static RngStream keyed(std::initializer_list<uint64_t> keys);

    uint64_t next_u64();

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double();

    /// Uniform integer in [0, bound), bound >= 1. Unbiased.
    uint64_t next_below(uint64_t bound);

    /// Samples an index from an unnormalized weight vector by inverse CDF.
    size_t next_weighted(std::span<const double> weights);

    bool next_bernoulli(double p) {
        return next_double() < p;
    }

  private:
    uint64_t state_;
};

}  // namespace qnoise

#endif
