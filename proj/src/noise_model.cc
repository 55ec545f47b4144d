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

#include "qnoise/noise_model.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qnoise/transforms.h"

namespace qnoise {

namespace {

void check_probability(double p, const char *what) {
    if (!(p >= 0.0 && p < 0.5)) {
        throw std::invalid_argument(std::string(what) + " must lie in [0, 0.5)");
    }
}

void check_distribution(std::span<const double> values, size_t expected, const char *what) {
    if (values.size() != expected) {
        throw std::invalid_argument(std::string(what) + ": wrong number of entries");
    }
    double sum = 0.0;
    for (double v : values) {
        if (!(v >= 0.0)) {
            throw std::invalid_argument(std::string(what) + ": negative or non-finite entry");
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument(std::string(what) + ": entries must sum to 1");
    }
}

// Union-find over set indices.
struct DisjointSets {
    std::vector<size_t> parent;
    explicit DisjointSets(size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), size_t{0});
    }
    size_t find(size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(size_t a, size_t b) {
        parent[find(a)] = find(b);
    }
};

// Averages a block's full Pauli eigenvalues into per-set-pattern sectors.
// `full_eigs` is indexed by base-4 digits over `block_qubits` (digit j for
// block qubit j). `qubit_set_slot[j]` is the block-local set index owning
// block qubit j.
std::vector<double> average_block(
    std::span<const double> full_eigs, size_t num_sets, std::span<const size_t> qubit_set_slot) {
    std::vector<double> sums(size_t{1} << num_sets, 0.0);
    std::vector<double> counts(size_t{1} << num_sets, 0.0);
    size_t nb = qubit_set_slot.size();
    for (size_t label = 0; label < full_eigs.size(); label++) {
        size_t pattern = 0;
        for (size_t j = 0; j < nb; j++) {
            if (((label >> (2 * j)) & 3) != 0) {
                pattern |= size_t{1} << qubit_set_slot[j];
            }
        }
        sums[pattern] += full_eigs[label];
        counts[pattern] += 1.0;
    }
    for (size_t b = 0; b < sums.size(); b++) {
        sums[b] /= counts[b];
    }
    return sums;
}

// Weight of a Pauli code in the per-qubit average of a flagged qubit:
// 1 for the identity, -1/3 otherwise. The averaged eigenvalue at a pattern
// is the expectation of the product of these weights over flagged qubits.
double sector_weight(size_t code) {
    return code == 0 ? 1.0 : -1.0 / 3.0;
}

// Averaged eigenvalue of a chain model for one set of flagged qubits,
// via a forward pass over the Markov chain.
double chain_pattern_eigenvalue(const PauliChainNoise &chain, std::span<const uint8_t> flagged) {
    size_t n = flagged.size();
    std::array<double, 4> alpha{};
    for (size_t c = 0; c < 4; c++) {
        alpha[c] = chain.initial[c] * (flagged[0] ? sector_weight(c) : 1.0);
    }
    for (size_t i = 0; i + 1 < n; i++) {
        std::array<double, 4> next{};
        for (size_t c = 0; c < 4; c++) {
            if (alpha[c] == 0.0) {
                continue;
            }
            for (size_t d = 0; d < 4; d++) {
                next[d] += alpha[c] * chain.transitions[i][c * 4 + d];
            }
        }
        for (size_t d = 0; d < 4; d++) {
            next[d] *= flagged[i + 1] ? sector_weight(d) : 1.0;
        }
        alpha = next;
    }
    return alpha[0] + alpha[1] + alpha[2] + alpha[3];
}

EigenvalueVector chain_average_on_sets(
    const NoiseModel &model, const PartitionLayout &layout, std::span<const size_t> kept) {
    const auto &chain = std::get<PauliChainNoise>(model.kind);
    for (size_t i : kept) {
        if (layout.sets[i].size() != 1) {
            throw std::invalid_argument("chain noise models support singleton layouts only");
        }
    }
    EigenvalueVector out;
    out.layout = layout.restricted_to(kept);
    out.values.resize(size_t{1} << kept.size());
    std::vector<uint8_t> flagged(model.n_qubits, 0);
    for (size_t b = 0; b < out.values.size(); b++) {
        std::fill(flagged.begin(), flagged.end(), 0);
        for (size_t j = 0; j < kept.size(); j++) {
            if ((b >> j) & 1u) {
                flagged[layout.sets[kept[j]][0]] = 1;
            }
        }
        out.values[b] = chain_pattern_eigenvalue(chain, flagged);
    }
    return out;
}

}  // namespace

SpamModel SpamModel::ideal(uint32_t n_qubits) {
    SpamModel spam;
    spam.prep_flip.assign(n_qubits, 0.0);
    spam.readout_flip.assign(n_qubits, 0.0);
    return spam;
}

bool SpamModel::is_trivial() const {
    auto all_zero = [](const std::vector<double> &v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
    };
    return all_zero(prep_flip) && all_zero(readout_flip) && all_zero(confusion_0to1) && all_zero(confusion_1to0);
}

void SpamModel::validate(uint32_t n_qubits) const {
    if (prep_flip.size() != n_qubits || readout_flip.size() != n_qubits) {
        throw std::invalid_argument("SpamModel: need one prep and one readout flip probability per qubit");
    }
    for (double p : prep_flip) {
        check_probability(p, "prep flip probability");
    }
    for (double p : readout_flip) {
        check_probability(p, "readout flip probability");
    }
    if (!confusion_0to1.empty() || !confusion_1to0.empty()) {
        if (confusion_0to1.size() != n_qubits || confusion_1to0.size() != n_qubits) {
            throw std::invalid_argument("SpamModel: confusion probabilities must cover every qubit");
        }
        for (double p : confusion_0to1) {
            check_probability(p, "readout confusion probability");
        }
        for (double p : confusion_1to0) {
            check_probability(p, "readout confusion probability");
        }
    }
}

double SpamModel::attenuation(std::span<const uint32_t> qubits) const {
    double a = 1.0;
    for (uint32_t q : qubits) {
        a *= (1.0 - 2.0 * prep_flip.at(q)) * (1.0 - 2.0 * readout_flip.at(q));
    }
    return a;
}

std::vector<double> SpamModel::set_attenuations(const PartitionLayout &layout) const {
    std::vector<double> out;
    out.reserve(layout.num_sets());
    for (const auto &set : layout.sets) {
        out.push_back(attenuation(set));
    }
    return out;
}

NoiseModel NoiseModel::ideal(uint32_t n_qubits) {
    NoiseModel model;
    model.n_qubits = n_qubits;
    PerQubitPaulis paulis;
    paulis.rates.assign(n_qubits, {0.0, 0.0, 0.0});
    model.kind = std::move(paulis);
    return model;
}

void NoiseModel::validate() const {
    if (n_qubits == 0) {
        throw std::invalid_argument("NoiseModel: n_qubits must be positive");
    }
    if (const auto *pq = std::get_if<PerQubitPaulis>(&kind)) {
        if (pq->rates.size() != n_qubits) {
            throw std::invalid_argument("NoiseModel: need one Pauli rate triple per qubit");
        }
        for (const auto &r : pq->rates) {
            double sum = 0.0;
            for (double p : r) {
                if (!(p >= 0.0)) {
                    throw std::invalid_argument("NoiseModel: negative Pauli rate");
                }
                sum += p;
            }
            if (!(sum < 1.0)) {
                throw std::invalid_argument("NoiseModel: per-qubit Pauli rates must sum below 1");
            }
        }
    } else if (const auto *rates = std::get_if<PauliErrorRates>(&kind)) {
        if (rates->n_qubits != n_qubits) {
            throw std::invalid_argument("NoiseModel: explicit rates qubit count mismatch");
        }
        if (n_qubits > kDefaultPauliQubitCap) {
            throw std::invalid_argument(
                "NoiseModel: explicit Pauli rates limited to " + std::to_string(kDefaultPauliQubitCap) +
                " qubits; use a chain model");
        }
        rates->validate();
    } else {
        const auto &chain = std::get<PauliChainNoise>(kind);
        check_distribution(chain.initial, 4, "chain initial distribution");
        if (chain.transitions.size() + 1 != n_qubits) {
            throw std::invalid_argument("NoiseModel: chain needs n_qubits-1 transition tables");
        }
        for (const auto &t : chain.transitions) {
            if (t.size() != 16) {
                throw std::invalid_argument("NoiseModel: chain transition tables need 16 entries");
            }
            for (size_t from = 0; from < 4; from++) {
                check_distribution(std::span<const double>(t).subspan(from * 4, 4), 4, "chain transition row");
            }
        }
        if (!pair_interactions.empty()) {
            throw std::invalid_argument("NoiseModel: pair interactions are not supported with chain models");
        }
    }
    for (const auto &pi : pair_interactions) {
        if (pi.qubit_a >= n_qubits || pi.qubit_b >= n_qubits || pi.qubit_a == pi.qubit_b) {
            throw std::invalid_argument("NoiseModel: pair interaction qubits out of range or equal");
        }
        if (pi.rates.n_qubits != 2) {
            throw std::invalid_argument("NoiseModel: pair interaction rates must cover exactly 2 qubits");
        }
        pi.rates.validate();
    }
}

std::array<double, 4> single_qubit_eigenvalues(double px, double py, double pz) {
    std::vector<double> mu = {1.0 - px - py - pz, px, py, pz};
    wht_inplace(mu);
    return {mu[0], mu[1], mu[2], mu[3]};
}

std::vector<SetBlock> noise_blocks(const NoiseModel &model, const PartitionLayout &layout) {
    model.validate();
    layout.validate();
    if (model.is_chain()) {
        throw std::invalid_argument("noise_blocks: chain models have no block decomposition");
    }
    if (layout.n_qubits != model.n_qubits) {
        throw std::invalid_argument("noise_blocks: layout and model disagree on qubit count");
    }
    size_t k = layout.num_sets();

    std::vector<int64_t> set_of_qubit(model.n_qubits, -1);
    for (size_t i = 0; i < k; i++) {
        for (uint32_t q : layout.sets[i]) {
            set_of_qubit[q] = static_cast<int64_t>(i);
        }
    }

    DisjointSets components(k);
    if (std::holds_alternative<PauliErrorRates>(model.kind)) {
        // Explicit joint rates correlate everything; use one block.
        for (size_t i = 1; i < k; i++) {
            components.unite(0, i);
        }
    }
    for (const auto &pi : model.pair_interactions) {
        if (set_of_qubit[pi.qubit_a] < 0 || set_of_qubit[pi.qubit_b] < 0) {
            throw std::invalid_argument("noise_blocks: pair interaction touches a qubit outside the partition");
        }
        components.unite(static_cast<size_t>(set_of_qubit[pi.qubit_a]), static_cast<size_t>(set_of_qubit[pi.qubit_b]));
    }

    std::vector<std::vector<size_t>> grouped(k);
    for (size_t i = 0; i < k; i++) {
        grouped[components.find(i)].push_back(i);
    }

    const auto *per_qubit = std::get_if<PerQubitPaulis>(&model.kind);
    std::vector<std::array<double, 4>> qubit_eigs;
    if (per_qubit != nullptr) {
        qubit_eigs.reserve(model.n_qubits);
        for (const auto &r : per_qubit->rates) {
            qubit_eigs.push_back(single_qubit_eigenvalues(r[0], r[1], r[2]));
        }
    }
    std::vector<double> explicit_eigs;
    if (const auto *rates = std::get_if<PauliErrorRates>(&model.kind)) {
        explicit_eigs = pauli_eigenvalues_from_rates(*rates);
    }
    std::vector<std::vector<double>> interaction_eigs;
    interaction_eigs.reserve(model.pair_interactions.size());
    for (const auto &pi : model.pair_interactions) {
        interaction_eigs.push_back(pauli_eigenvalues_from_rates(pi.rates));
    }

    std::vector<SetBlock> blocks;
    for (auto &members : grouped) {
        if (members.empty()) {
            continue;
        }
        SetBlock block;
        block.sets = members;

        // Block-local qubit numbering.
        std::vector<uint32_t> block_qubits;
        std::vector<size_t> qubit_set_slot;
        for (size_t slot = 0; slot < members.size(); slot++) {
            for (uint32_t q : layout.sets[members[slot]]) {
                block_qubits.push_back(q);
                qubit_set_slot.push_back(slot);
            }
        }
        size_t nb = block_qubits.size();
        if (nb > kDefaultPauliQubitCap) {
            throw std::invalid_argument(
                "noise_blocks: interactions join " + std::to_string(nb) +
                " qubits into one block, above the dense cap");
        }
        std::vector<int64_t> local_of_qubit(model.n_qubits, -1);
        for (size_t j = 0; j < nb; j++) {
            local_of_qubit[block_qubits[j]] = static_cast<int64_t>(j);
        }

        size_t num_labels = size_t{1} << (2 * nb);
        std::vector<double> full(num_labels, 1.0);
        for (size_t label = 0; label < num_labels; label++) {
            double value = 1.0;
            if (per_qubit != nullptr) {
                for (size_t j = 0; j < nb; j++) {
                    value *= qubit_eigs[block_qubits[j]][(label >> (2 * j)) & 3];
                }
            } else {
                size_t global_label = 0;
                for (size_t j = 0; j < nb; j++) {
                    global_label |= ((label >> (2 * j)) & 3) << (2 * block_qubits[j]);
                }
                value = explicit_eigs[global_label];
            }
            for (size_t e = 0; e < model.pair_interactions.size(); e++) {
                const auto &pi = model.pair_interactions[e];
                int64_t la = local_of_qubit[pi.qubit_a];
                int64_t lb = local_of_qubit[pi.qubit_b];
                if (la < 0 || lb < 0) {
                    continue;  // interaction belongs to a different block
                }
                size_t code_a = (label >> (2 * la)) & 3;
                size_t code_b = (label >> (2 * lb)) & 3;
                value *= interaction_eigs[e][code_a + 4 * code_b];
            }
            full[label] = value;
        }
        block.eigenvalues = average_block(full, members.size(), qubit_set_slot);
        blocks.push_back(std::move(block));
    }
    std::sort(blocks.begin(), blocks.end(), [](const SetBlock &a, const SetBlock &b) {
        return a.sets.front() < b.sets.front();
    });
    return blocks;
}

EigenvalueVector clifford_average(const NoiseModel &model, const PartitionLayout &layout, size_t set_cap) {
    model.validate();
    layout.validate();
    if (layout.num_sets() > set_cap) {
        throw std::invalid_argument(
            "clifford_average: " + std::to_string(layout.num_sets()) + " sets exceeds the dense cap of " +
            std::to_string(set_cap) + "; use averaged_eigenvalues_on_subset");
    }
    if (model.is_chain()) {
        if (layout.n_qubits != model.n_qubits) {
            throw std::invalid_argument("clifford_average: layout and model disagree on qubit count");
        }
        std::vector<size_t> all(layout.num_sets());
        std::iota(all.begin(), all.end(), size_t{0});
        return chain_average_on_sets(model, layout, all);
    }
    auto blocks = noise_blocks(model, layout);
    EigenvalueVector out;
    out.layout = layout;
    out.values.assign(layout.dim(), 1.0);
    for (const auto &block : blocks) {
        for (size_t b = 0; b < out.values.size(); b++) {
            out.values[b] *= block.eigenvalues[compress_bits(b, block.sets)];
        }
    }
    return out;
}

EigenvalueVector averaged_eigenvalues_on_subset(
    const NoiseModel &model, const PartitionLayout &layout, std::span<const size_t> keep) {
    model.validate();
    layout.validate();
    auto kept = normalize_subset(keep, layout.num_sets());
    if (model.is_chain()) {
        return chain_average_on_sets(model, layout, kept);
    }
    auto blocks = noise_blocks(model, layout);
    EigenvalueVector out;
    out.layout = layout.restricted_to(kept);
    out.values.assign(size_t{1} << kept.size(), 1.0);
    for (size_t b = 0; b < out.values.size(); b++) {
        uint64_t full_pattern = expand_bits(b, kept);
        for (const auto &block : blocks) {
            out.values[b] *= block.eigenvalues[compress_bits(full_pattern, block.sets)];
        }
    }
    return out;
}

PauliErrorRates inject_correlation(PauliErrorRates rates, std::string_view label, double new_mass) {
    rates.validate();
    if (!(new_mass >= 0.0 && new_mass < 1.0)) {
        throw std::invalid_argument("inject_correlation: new_mass must lie in [0, 1)");
    }
    size_t index = pauli_label_to_index(label);
    if (label.size() != rates.n_qubits) {
        throw std::invalid_argument("inject_correlation: label length must match qubit count");
    }
    if (index == 0) {
        throw std::invalid_argument("inject_correlation: cannot target the identity label");
    }
    double delta = new_mass - rates.values[index];
    double new_identity = rates.values[0] - delta;
    if (new_identity < 0.0) {
        throw std::invalid_argument("inject_correlation: identity entry cannot absorb the requested mass");
    }
    rates.values[index] = new_mass;
    rates.values[0] = new_identity;
    return rates;
}

}  // namespace qnoise
