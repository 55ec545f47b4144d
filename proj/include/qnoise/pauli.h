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

#ifndef QNOISE_PAULI_H
#define QNOISE_PAULI_H

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qnoise/dist.h"

namespace qnoise {

/// Dense 4^n objects are refused above this many qubits unless the caller
/// raises the cap explicitly.
inline constexpr uint32_t kDefaultPauliQubitCap = 8;

/// Full distribution over n-qubit Pauli error labels.
///
/// Label characters are I, X, Y, Z with character i acting on qubit i.
/// A label maps to its index by encoding each character as two bits
/// (I=0, X=1, Y=2, Z=3), qubit i occupying bits 2i and 2i+1.
struct PauliErrorRates {
    uint32_t n_qubits = 0;
    std::vector<double> values;

    void validate(double sum_tol = 1e-9) const;
};

/// "IXZ" -> index. Throws on characters other than I, X, Y, Z.
size_t pauli_label_to_index(std::string_view label);

std::string pauli_index_to_label(size_t index, uint32_t n_qubits);

/// Maps a Pauli label to the pattern index of the eigenvalue it shares
/// under per-qubit averaging: each I contributes a 0 bit and each X, Y, or
/// Z a 1 bit, qubit i giving bit i.
size_t pauli_label_to_reduced_index(std::string_view label);

/// Pattern index -> "0"/"1" string with character i describing qubit/set i.
std::string pattern_to_bitstring(uint64_t pattern, size_t k);

uint64_t bitstring_to_pattern(std::string_view bits);

/// Eigenvalues of the Pauli channel with the given error rates (unnormalized
/// Walsh-Hadamard transform over the 2n index bits).
std::vector<double> pauli_eigenvalues_from_rates(const PauliErrorRates &rates);

PauliErrorRates pauli_rates_from_eigenvalues(uint32_t n_qubits, std::vector<double> eigenvalues);

/// Expands averaged eigenvalues over singleton sets into the full 4^n
/// distribution of averaged Pauli error rates. The X, Y, and Z rates on any
/// qubit come out equal. Rejects layouts containing pair sets and systems
/// above the qubit cap.
PauliErrorRates pauli_rates_from_averaged_eigenvalues(
    const EigenvalueVector &averaged, uint32_t qubit_cap = kDefaultPauliQubitCap);

/// Converts observed error rates over singleton sets into the 2^k vector of
/// averaged error rates (probability of an actual error on exactly the
/// flagged qubits, after per-qubit averaging). Entries sum to 1.
std::vector<double> averaged_rates_from_observed(const ProbVector &observed);

}  // namespace qnoise

#endif
