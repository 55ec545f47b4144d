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

#include "qnoise/dist.h"

#include <cmath>
#include <stdexcept>

#include "qnoise/transforms.h"

namespace qnoise {

void ProbVector::validate(double sum_tol) const {
    layout.validate();
    if (values.size() != layout.dim()) {
        throw std::invalid_argument("ProbVector: values size does not match 2^k for the layout");
    }
    double sum = 0.0;
    for (double v : values) {
        if (!(v >= 0.0)) {
            throw std::invalid_argument("ProbVector: negative or non-finite entry");
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) > sum_tol) {
        throw std::invalid_argument("ProbVector: values sum to " + std::to_string(sum) + ", expected 1");
    }
}

void EigenvalueVector::validate_shape() const {
    layout.validate();
    if (values.size() != layout.dim()) {
        throw std::invalid_argument("EigenvalueVector: values size does not match 2^k for the layout");
    }
}

uint64_t compress_bits(uint64_t index, std::span<const size_t> positions) {
    uint64_t packed = 0;
    for (size_t j = 0; j < positions.size(); j++) {
        packed |= ((index >> positions[j]) & 1u) << j;
    }
    return packed;
}

uint64_t expand_bits(uint64_t packed, std::span<const size_t> positions) {
    uint64_t index = 0;
    for (size_t j = 0; j < positions.size(); j++) {
        index |= ((packed >> j) & 1u) << positions[j];
    }
    return index;
}

ProbVector marginalize(const ProbVector &p, std::span<const size_t> keep) {
    auto kept = normalize_subset(keep, p.layout.num_sets());
    if (p.values.size() != p.layout.dim()) {
        throw std::invalid_argument("marginalize: malformed ProbVector");
    }
    ProbVector out;
    out.layout = p.layout.restricted_to(kept);
    out.values.assign(size_t{1} << kept.size(), 0.0);
    for (size_t idx = 0; idx < p.values.size(); idx++) {
        out.values[compress_bits(idx, kept)] += p.values[idx];
    }
    return out;
}

EigenvalueVector marginalize_eigs(const EigenvalueVector &eigs, std::span<const size_t> keep) {
    auto kept = normalize_subset(keep, eigs.layout.num_sets());
    if (eigs.values.size() != eigs.layout.dim()) {
        throw std::invalid_argument("marginalize_eigs: malformed EigenvalueVector");
    }
    EigenvalueVector out;
    out.layout = eigs.layout.restricted_to(kept);
    out.values.resize(size_t{1} << kept.size());
    for (size_t packed = 0; packed < out.values.size(); packed++) {
        out.values[packed] = eigs.values[expand_bits(packed, kept)];
    }
    return out;
}

ProbVector probabilities_from_eigenvalues(const EigenvalueVector &eigs) {
    eigs.validate_shape();
    ProbVector out;
    out.layout = eigs.layout;
    out.values = eigs.values;
    wht_inplace(out.values);
    double scale = 1.0 / static_cast<double>(out.values.size());
    for (double &v : out.values) {
        v *= scale;
    }
    return out;
}

EigenvalueVector eigenvalues_from_probabilities(const ProbVector &p) {
    if (p.values.size() != p.layout.dim()) {
        throw std::invalid_argument("eigenvalues_from_probabilities: malformed ProbVector");
    }
    EigenvalueVector out;
    out.layout = p.layout;
    out.values = p.values;
    wht_inplace(out.values);
    return out;
}

}  // namespace qnoise
