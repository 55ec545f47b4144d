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

#ifndef QNOISE_DIST_H
#define QNOISE_DIST_H

#include <span>
#include <vector>

#include "qnoise/layout.h"

namespace qnoise {

/// Distribution over 2^k set-error patterns. Pattern bit i = 1 means an
/// error was observed on set i of the layout.
struct ProbVector {
    PartitionLayout layout;
    std::vector<double> values;

    /// Checks size, nonnegativity, and that the values sum to 1 within tol.
    void validate(double sum_tol = 1e-9) const;
};

/// Averaged decay parameters, one per pattern of trivial/averaged sectors
/// over the layout's sets. Index 0 is 1 for a trace-preserving channel.
struct EigenvalueVector {
    PartitionLayout layout;
    std::vector<double> values;

    void validate_shape() const;
};

/// Sums the distribution over the discarded sets. The kept sets retain
/// their original relative order.
ProbVector marginalize(const ProbVector &p, std::span<const size_t> keep);

/// Restriction of the eigenvalue vector to patterns supported on the kept
/// sets. Equivalent to transform -> marginalize -> transform back, but
/// implemented directly by selecting indices whose discarded bits are 0.
EigenvalueVector marginalize_eigs(const EigenvalueVector &eigs, std::span<const size_t> keep);

/// p = 2^{-k} H^{(x)k} lambda.
ProbVector probabilities_from_eigenvalues(const EigenvalueVector &eigs);

/// lambda = H^{(x)k} p.
EigenvalueVector eigenvalues_from_probabilities(const ProbVector &p);

/// Compresses the bits of `index` listed in `positions` (sorted) into a
/// dense low-order index.
uint64_t compress_bits(uint64_t index, std::span<const size_t> positions);

/// Inverse of compress_bits: scatters the low bits of `packed` to `positions`.
uint64_t expand_bits(uint64_t packed, std::span<const size_t> positions);

}  // namespace qnoise

#endif
