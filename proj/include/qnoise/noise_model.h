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

#ifndef QNOISE_NOISE_MODEL_H
#define QNOISE_NOISE_MODEL_H

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "qnoise/dist.h"
#include "qnoise/pauli.h"

namespace qnoise {

/// Dense 2^k objects over set patterns are refused above this many sets
/// unless the caller raises the cap.
inline constexpr size_t kDefaultDenseSetCap = 20;

/// State preparation and measurement error model. Flip probabilities are
/// per qubit, each in [0, 0.5). Preparation and readout flips enter the
/// decay model only through a per-set attenuation prefactor; the optional
/// readout confusion probabilities are applied to sampled outcome bits and
/// exist as an independent knob for SPAM-robustness checks.
struct SpamModel {
    std::vector<double> prep_flip;
    std::vector<double> readout_flip;
    std::vector<double> confusion_0to1;
    std::vector<double> confusion_1to0;

    static SpamModel ideal(uint32_t n_qubits);
    bool is_trivial() const;
    void validate(uint32_t n_qubits) const;

    /// prod over the qubits of (1 - 2 prep)(1 - 2 read).
    double attenuation(std::span<const uint32_t> qubits) const;

    /// One attenuation factor per layout set.
    std::vector<double> set_attenuations(const PartitionLayout &layout) const;
};

/// Independent noise per qubit: probabilities of the three nontrivial
/// Pauli errors (the X, Y, Z rates), summing below 1.
struct PerQubitPaulis {
    std::vector<std::array<double, 3>> rates;
};

/// Nearest-neighbor correlated Pauli noise for large systems, stored as a
/// Markov chain over the per-qubit labels I, X, Y, Z.
struct PauliChainNoise {
    std::vector<double> initial;                    // 4 entries
    std::vector<std::vector<double>> transitions;   // (n-1) rows of 16: [from*4 + to]
};

/// Extra two-qubit Pauli channel composed into every gate layer, e.g. a
/// noisy coupler or crosstalk between simultaneously driven qubits.
struct PairInteraction {
    uint32_t qubit_a = 0;
    uint32_t qubit_b = 0;
    PauliErrorRates rates;  // over 2 qubits; label character 0 acts on qubit_a
};

/// Ground-truth error model for one gate layer.
struct NoiseModel {
    uint32_t n_qubits = 0;
    std::variant<PerQubitPaulis, PauliErrorRates, PauliChainNoise> kind;
    std::vector<PairInteraction> pair_interactions;

    static NoiseModel ideal(uint32_t n_qubits);
    void validate() const;
    bool is_chain() const {
        return std::holds_alternative<PauliChainNoise>(kind);
    }
};

/// A group of layout sets whose noise is independent of all other groups,
/// together with its irrep-averaged eigenvalues (2^{#sets in block}).
struct SetBlock {
    std::vector<size_t> sets;
    std::vector<double> eigenvalues;
};

/// Splits the layout's sets into independently-noised blocks (connected
/// components under the pair interactions) and averages each block's noise
/// over its per-set twirls. Not available for chain models.
std::vector<SetBlock> noise_blocks(const NoiseModel &model, const PartitionLayout &layout);

/// Averaged eigenvalue for every pattern of trivial/averaged sectors over
/// the layout's sets: a lone averaged singleton is the mean of its 3
/// nontrivial eigenvalues, a pair set the mean of its 15, and mixed
/// patterns average products accordingly.
EigenvalueVector clifford_average(
    const NoiseModel &model, const PartitionLayout &layout, size_t set_cap = kDefaultDenseSetCap);

/// clifford_average restricted to a subset of sets, computed locally so it
/// stays cheap for systems far above the dense cap.
EigenvalueVector averaged_eigenvalues_on_subset(
    const NoiseModel &model, const PartitionLayout &layout, std::span<const size_t> keep);

/// Moves the rate of one Pauli label to new_mass, re-balancing through the
/// identity entry. All other entries are untouched. Rejects changes the
/// identity entry cannot absorb.
PauliErrorRates inject_correlation(PauliErrorRates rates, std::string_view label, double new_mass);

/// Single-qubit channel eigenvalues (1, lx, ly, lz) for error rates (px, py, pz).
std::array<double, 4> single_qubit_eigenvalues(double px, double py, double pz);

}  // namespace qnoise

#endif
