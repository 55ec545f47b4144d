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

#ifndef QNOISE_LAYOUT_H
#define QNOISE_LAYOUT_H

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qnoise {

/// An ordered partition of qubits into disjoint twirled sets of size 1 or 2.
///
/// Set i owns bit i of every pattern index, least significant bit first.
/// A pattern bit of 1 means "error observed on that set".
struct PartitionLayout {
    std::vector<std::vector<uint32_t>> sets;
    uint32_t n_qubits = 0;

    size_t num_sets() const {
        return sets.size();
    }
    /// 2^k where k is the number of sets. Only meaningful for layouts small
    /// enough to tabulate densely; throws beyond 62 sets.
    size_t dim() const;
    size_t qubits_in(std::span<const size_t> set_indices) const;

    static PartitionLayout singletons(uint32_t n_qubits);
    static PartitionLayout from_sets(std::vector<std::vector<uint32_t>> sets, uint32_t n_qubits);

    /// New layout containing only the given sets, in their original order.
    /// `keep` must be sorted, unique, nonempty, and in range.
    PartitionLayout restricted_to(std::span<const size_t> keep) const;

    /// Human-readable label for one set, e.g. "q3" or "q8+q9".
    std::string set_label(size_t set_index) const;

    void validate() const;

    bool operator==(const PartitionLayout &) const = default;
};

/// Sorts, deduplicates, and range-checks a subset of set indices.
/// Throws std::invalid_argument if empty or out of range.
std::vector<size_t> normalize_subset(std::span<const size_t> subset, size_t num_sets);

}  // namespace qnoise

#endif
