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

#include "qnoise/layout.h"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace qnoise {

size_t PartitionLayout::dim() const {
    if (sets.size() > 62) {
        throw std::invalid_argument(
            "PartitionLayout: " + std::to_string(sets.size()) +
            " sets cannot be tabulated densely; work with marginals instead");
    }
    return size_t{1} << sets.size();
}

size_t PartitionLayout::qubits_in(std::span<const size_t> set_indices) const {
    size_t total = 0;
    for (size_t i : set_indices) {
        total += sets.at(i).size();
    }
    return total;
}

PartitionLayout PartitionLayout::singletons(uint32_t n_qubits) {
    PartitionLayout layout;
    layout.n_qubits = n_qubits;
    layout.sets.reserve(n_qubits);
    for (uint32_t q = 0; q < n_qubits; q++) {
        layout.sets.push_back({q});
    }
    layout.validate();
    return layout;
}

PartitionLayout PartitionLayout::from_sets(std::vector<std::vector<uint32_t>> sets, uint32_t n_qubits) {
    PartitionLayout layout;
    layout.sets = std::move(sets);
    layout.n_qubits = n_qubits;
    layout.validate();
    return layout;
}

PartitionLayout PartitionLayout::restricted_to(std::span<const size_t> keep) const {
    auto normalized = normalize_subset(keep, sets.size());
    PartitionLayout out;
    out.n_qubits = n_qubits;
    for (size_t i : normalized) {
        out.sets.push_back(sets[i]);
    }
    return out;
}

std::string PartitionLayout::set_label(size_t set_index) const {
    const auto &set = sets.at(set_index);
    std::string label = "q" + std::to_string(set[0]);
    for (size_t i = 1; i < set.size(); i++) {
        label += "+q" + std::to_string(set[i]);
    }
    return label;
}

void PartitionLayout::validate() const {
    if (sets.empty()) {
        throw std::invalid_argument("PartitionLayout: at least one set required");
    }
    std::set<uint32_t> seen;
    for (const auto &set : sets) {
        if (set.empty() || set.size() > 2) {
            throw std::invalid_argument("PartitionLayout: sets must contain 1 or 2 qubits");
        }
        for (uint32_t q : set) {
            if (q >= n_qubits) {
                throw std::invalid_argument(
                    "PartitionLayout: qubit " + std::to_string(q) + " out of range for n_qubits=" +
                    std::to_string(n_qubits));
            }
            if (!seen.insert(q).second) {
                throw std::invalid_argument("PartitionLayout: qubit " + std::to_string(q) + " appears in two sets");
            }
        }
    }
}

std::vector<size_t> normalize_subset(std::span<const size_t> subset, size_t num_sets) {
    if (subset.empty()) {
        throw std::invalid_argument("subset of sets must be nonempty");
    }
    std::vector<size_t> out(subset.begin(), subset.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (out.back() >= num_sets) {
        throw std::invalid_argument(
            "set index " + std::to_string(out.back()) + " out of range (have " + std::to_string(num_sets) +
            " sets)");
    }
    return out;
}

}  // namespace qnoise
