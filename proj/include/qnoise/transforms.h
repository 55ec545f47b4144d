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

#ifndef QNOISE_TRANSFORMS_H
#define QNOISE_TRANSFORMS_H

#include <cstddef>
#include <span>
#include <vector>

namespace qnoise {

/// In-place unnormalized Walsh-Hadamard transform (butterfly, O(len log len)).
///
/// Applying the transform twice and dividing by the length recovers the
/// original vector. The probability->eigenvalue direction is the bare
/// transform; the eigenvalue->probability direction needs the 1/len factor.
///
/// Throws std::invalid_argument unless len is a power of two.
void wht_inplace(std::span<double> values);

/// Out-of-place convenience wrapper around wht_inplace.
std::vector<double> wht(std::vector<double> values);

/// Euclidean projection onto the probability simplex (sort-and-threshold).
/// Output is nonnegative, sums to 1, and is the closest such point in
/// Euclidean distance. Idempotent. Throws on empty or non-finite input.
std::vector<double> project_to_simplex(std::span<const double> values);

bool is_power_of_two(size_t n);

/// floor(log2(n)) for a power of two n.
size_t log2_exact(size_t n);

}  // namespace qnoise

#endif
