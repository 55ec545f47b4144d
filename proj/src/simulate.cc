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

#include "qnoise/simulate.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qnoise/parallel.h"
#include "qnoise/rng.h"
#include "qnoise/transforms.h"

namespace qnoise {

namespace {

double ipow(double base, int64_t exponent) {
    double result = 1.0;
    double acc = base;
    while (exponent > 0) {
        if (exponent & 1) {
            result *= acc;
        }
        acc *= acc;
        exponent >>= 1;
    }
    return result;
}

// Expands a set-error pattern into an n-qubit outcome. An erred pair set
// shows the error on the first qubit, the second, or both, with equal
// chance, matching the coarse-graining used on readout. Qubit q maps to
// bit q of the mask (only usable for n <= 64), or to character q.
uint64_t expand_pattern_mask(uint64_t pattern, const PartitionLayout &layout, RngStream &rng) {
    uint64_t mask = 0;
    for (size_t i = 0; i < layout.num_sets(); i++) {
        if (!((pattern >> i) & 1u)) {
            continue;
        }
        const auto &set = layout.sets[i];
        if (set.size() == 1) {
            mask |= uint64_t{1} << set[0];
        } else {
            switch (rng.next_below(3)) {
                case 0:
                    mask |= uint64_t{1} << set[0];
                    break;
                case 1:
                    mask |= uint64_t{1} << set[1];
                    break;
                default:
                    mask |= uint64_t{1} << set[0];
                    mask |= uint64_t{1} << set[1];
            }
        }
    }
    return mask;
}

void expand_pattern_string(
    std::span<const uint8_t> set_errors, const PartitionLayout &layout, RngStream &rng, std::string &out) {
    std::fill(out.begin(), out.end(), '0');
    for (size_t i = 0; i < layout.num_sets(); i++) {
        if (!set_errors[i]) {
            continue;
        }
        const auto &set = layout.sets[i];
        if (set.size() == 1) {
            out[set[0]] = '1';
        } else {
            switch (rng.next_below(3)) {
                case 0:
                    out[set[0]] = '1';
                    break;
                case 1:
                    out[set[1]] = '1';
                    break;
                default:
                    out[set[0]] = '1';
                    out[set[1]] = '1';
            }
        }
    }
}

uint64_t apply_confusion_mask(const SpamModel &spam, RngStream &rng, uint64_t mask, uint32_t n_qubits) {
    if (spam.confusion_0to1.empty()) {
        return mask;
    }
    for (uint32_t q = 0; q < n_qubits; q++) {
        double p = ((mask >> q) & 1u) ? spam.confusion_1to0[q] : spam.confusion_0to1[q];
        if (p > 0.0 && rng.next_bernoulli(p)) {
            mask ^= uint64_t{1} << q;
        }
    }
    return mask;
}

void apply_confusion_string(const SpamModel &spam, RngStream &rng, std::string &out) {
    if (spam.confusion_0to1.empty()) {
        return;
    }
    for (size_t q = 0; q < out.size(); q++) {
        double p = out[q] == '0' ? spam.confusion_0to1[q] : spam.confusion_1to0[q];
        if (p > 0.0 && rng.next_bernoulli(p)) {
            out[q] = out[q] == '0' ? '1' : '0';
        }
    }
}

std::string mask_to_outcome(uint64_t mask, uint32_t n_qubits) {
    std::string out(n_qubits, '0');
    for (uint32_t q = 0; q < n_qubits; q++) {
        if ((mask >> q) & 1u) {
            out[q] = '1';
        }
    }
    return out;
}

}  // namespace

size_t ExperimentRecord::sequences_per_length() const {
    return counts.empty() ? 0 : counts.front().size();
}

void ExperimentRecord::validate() const {
    layout.validate();
    if (lengths.empty()) {
        throw std::invalid_argument("ExperimentRecord: lengths must be nonempty");
    }
    for (size_t i = 0; i < lengths.size(); i++) {
        if (lengths[i] < 0) {
            throw std::invalid_argument("ExperimentRecord: negative sequence length");
        }
        if (i > 0 && lengths[i] <= lengths[i - 1]) {
            throw std::invalid_argument("ExperimentRecord: lengths must be distinct and ascending");
        }
    }
    if (counts.size() != lengths.size()) {
        throw std::invalid_argument("ExperimentRecord: one count group per length required");
    }
    for (const auto &group : counts) {
        if (group.empty()) {
            throw std::invalid_argument("ExperimentRecord: every length needs at least one sequence");
        }
        for (const auto &table : group) {
            uint64_t total = 0;
            for (const auto &[bits, count] : table) {
                if (bits.size() != layout.n_qubits) {
                    throw std::invalid_argument("ExperimentRecord: outcome string length mismatch");
                }
                for (char c : bits) {
                    if (c != '0' && c != '1') {
                        throw std::invalid_argument("ExperimentRecord: outcome strings must be binary");
                    }
                }
                total += count;
            }
            if (total != shots) {
                throw std::invalid_argument(
                    "ExperimentRecord: sequence counts sum to " + std::to_string(total) + ", expected " +
                    std::to_string(shots));
            }
        }
    }
}

ProbVector sequence_distribution(const EigenvalueVector &eigenvalues, const SpamModel &spam, int64_t length) {
    eigenvalues.validate_shape();
    spam.validate(eigenvalues.layout.n_qubits);
    if (length < 0) {
        throw std::invalid_argument("sequence_distribution: length must be nonnegative");
    }
    auto attenuations = spam.set_attenuations(eigenvalues.layout);

    ProbVector out;
    out.layout = eigenvalues.layout;
    out.values.resize(eigenvalues.values.size());
    for (size_t b = 0; b < out.values.size(); b++) {
        double a = 1.0;
        for (size_t i = 0; i < attenuations.size(); i++) {
            if ((b >> i) & 1u) {
                a *= attenuations[i];
            }
        }
        out.values[b] = a * ipow(eigenvalues.values[b], length);
    }
    wht_inplace(out.values);
    double scale = 1.0 / static_cast<double>(out.values.size());
    double min_value = 0.0;
    for (double &v : out.values) {
        v *= scale;
        min_value = std::min(min_value, v);
    }
    if (min_value < 0.0) {
        if (min_value < -1e-12) {
            throw std::invalid_argument("sequence_distribution: eigenvalues produce a negative distribution");
        }
        out.values = project_to_simplex(out.values);
    }
    return out;
}

ExperimentRecord sample_experiment(
    const NoiseModel &model,
    const SpamModel &spam,
    const PartitionLayout &layout,
    std::vector<int64_t> lengths,
    uint32_t sequences_per_length,
    uint64_t shots,
    uint64_t seed,
    const SampleOptions &options) {
    model.validate();
    layout.validate();
    spam.validate(layout.n_qubits);
    if (shots < 1) {
        throw std::invalid_argument("sample_experiment: shots must be at least 1");
    }
    if (lengths.empty()) {
        throw std::invalid_argument("sample_experiment: lengths must be nonempty");
    }
    if (sequences_per_length == 0) {
        throw std::invalid_argument("sample_experiment: need at least one sequence per length");
    }
    std::sort(lengths.begin(), lengths.end());
    if (std::adjacent_find(lengths.begin(), lengths.end()) != lengths.end()) {
        throw std::invalid_argument("sample_experiment: lengths must be distinct");
    }
    if (lengths.front() < 0) {
        throw std::invalid_argument("sample_experiment: lengths must be nonnegative");
    }

    size_t k = layout.num_sets();
    auto attenuations = spam.set_attenuations(layout);

    const PauliChainNoise *chain = std::get_if<PauliChainNoise>(&model.kind);
    std::vector<int64_t> set_of_qubit(layout.n_qubits, -1);
    if (chain != nullptr) {
        for (size_t i = 0; i < k; i++) {
            if (layout.sets[i].size() != 1) {
                throw std::invalid_argument("sample_experiment: chain noise models support singleton layouts only");
            }
            set_of_qubit[layout.sets[i][0]] = static_cast<int64_t>(i);
        }
    }
    std::vector<SetBlock> blocks;
    // Per length, per block: sampling weights over the block's set patterns
    // with SPAM attenuation folded into the eigenvalues.
    std::vector<std::vector<std::vector<double>>> block_weights;
    if (chain == nullptr) {
        blocks = noise_blocks(model, layout);
        block_weights.resize(lengths.size());
        for (size_t mi = 0; mi < lengths.size(); mi++) {
            block_weights[mi].reserve(blocks.size());
            for (const auto &block : blocks) {
                std::vector<double> w(block.eigenvalues.size());
                for (size_t b = 0; b < w.size(); b++) {
                    double a = 1.0;
                    for (size_t j = 0; j < block.sets.size(); j++) {
                        if ((b >> j) & 1u) {
                            a *= attenuations[block.sets[j]];
                        }
                    }
                    w[b] = a * ipow(block.eigenvalues[b], lengths[mi]);
                }
                wht_inplace(w);
                for (double &v : w) {
                    v = std::max(v, 0.0);
                }
                block_weights[mi].push_back(std::move(w));
            }
        }
    }

    std::vector<double> set_flip_prob(k);
    for (size_t i = 0; i < k; i++) {
        set_flip_prob[i] = 0.5 * (1.0 - attenuations[i]);
    }

    ExperimentRecord record;
    record.layout = layout;
    record.lengths = lengths;
    record.shots = shots;
    record.seed = seed;
    record.counts.assign(lengths.size(), std::vector<std::map<std::string, uint64_t>>(sequences_per_length));

    bool use_masks = layout.n_qubits <= 64 && k <= 62;
    parallel_for(0, lengths.size() * sequences_per_length, options.threads, [&](size_t cell) {
        size_t mi = cell / sequences_per_length;
        size_t s = cell % sequences_per_length;
        int64_t m = lengths[mi];
        RngStream rng = RngStream::keyed({seed, static_cast<uint64_t>(m), s});
        std::string outcome(layout.n_qubits, '0');
        std::vector<uint8_t> set_errors(k, 0);
        std::map<uint64_t, uint64_t> mask_counts;
        auto &table = record.counts[mi][s];
        for (uint64_t shot = 0; shot < shots; shot++) {
            std::fill(set_errors.begin(), set_errors.end(), 0);
            if (chain != nullptr) {
                // One Pauli pattern per layer; a nontrivial label is pushed
                // into the observed basis 2/3 of the time. Layer flips
                // compose by parity.
                for (int64_t layer = 0; layer < m; layer++) {
                    size_t code = rng.next_weighted(chain->initial);
                    if (code != 0 && set_of_qubit[0] >= 0 && rng.next_below(3) != 2) {
                        set_errors[set_of_qubit[0]] ^= 1;
                    }
                    for (uint32_t q = 1; q < model.n_qubits; q++) {
                        std::span<const double> row(chain->transitions[q - 1].data() + code * 4, 4);
                        code = rng.next_weighted(row);
                        if (code != 0 && set_of_qubit[q] >= 0 && rng.next_below(3) != 2) {
                            set_errors[set_of_qubit[q]] ^= 1;
                        }
                    }
                }
                // SPAM as an extra pattern of set flips.
                for (size_t i = 0; i < k; i++) {
                    if (set_flip_prob[i] > 0.0 && rng.next_bernoulli(set_flip_prob[i])) {
                        set_errors[i] ^= 1;
                    }
                }
            } else {
                for (size_t bi = 0; bi < blocks.size(); bi++) {
                    uint64_t local = rng.next_weighted(block_weights[mi][bi]);
                    for (size_t j = 0; j < blocks[bi].sets.size(); j++) {
                        set_errors[blocks[bi].sets[j]] = (local >> j) & 1u;
                    }
                }
            }
            if (use_masks) {
                uint64_t pattern = 0;
                for (size_t i = 0; i < k; i++) {
                    pattern |= uint64_t{set_errors[i]} << i;
                }
                uint64_t mask = expand_pattern_mask(pattern, layout, rng);
                mask_counts[apply_confusion_mask(spam, rng, mask, layout.n_qubits)]++;
            } else {
                expand_pattern_string(set_errors, layout, rng, outcome);
                apply_confusion_string(spam, rng, outcome);
                table[outcome]++;
            }
        }
        for (const auto &[mask, count] : mask_counts) {
            table[mask_to_outcome(mask, layout.n_qubits)] = count;
        }
    });
    return record;
}

}  // namespace qnoise
