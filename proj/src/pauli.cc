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

#include "qnoise/pauli.h"

#include <cmath>
#include <stdexcept>

#include "qnoise/transforms.h"

namespace qnoise {

namespace {

constexpr char kPauliChars[4] = {'I', 'X', 'Y', 'Z'};

size_t pauli_char_to_code(char c) {
    switch (c) {
        case 'I':
            return 0;
        case 'X':
            return 1;
        case 'Y':
            return 2;
        case 'Z':
            return 3;
        default:
            throw std::invalid_argument(std::string("invalid Pauli character '") + c + "'");
    }
}

}  // namespace

void PauliErrorRates::validate(double sum_tol) const {
    if (values.size() != (size_t{1} << (2 * n_qubits))) {
        throw std::invalid_argument("PauliErrorRates: values size does not match 4^n");
    }
    double sum = 0.0;
    for (double v : values) {
        if (!(v >= 0.0)) {
            throw std::invalid_argument("PauliErrorRates: negative or non-finite entry");
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) > sum_tol) {
        throw std::invalid_argument("PauliErrorRates: values sum to " + std::to_string(sum) + ", expected 1");
    }
}

size_t pauli_label_to_index(std::string_view label) {
    if (label.empty() || label.size() > 31) {
        throw std::invalid_argument("Pauli label must have between 1 and 31 characters");
    }
    size_t index = 0;
    for (size_t q = 0; q < label.size(); q++) {
        index |= pauli_char_to_code(label[q]) << (2 * q);
    }
    return index;
}

std::string pauli_index_to_label(size_t index, uint32_t n_qubits) {
    std::string label(n_qubits, 'I');
    for (uint32_t q = 0; q < n_qubits; q++) {
        label[q] = kPauliChars[(index >> (2 * q)) & 3];
    }
    return label;
}

size_t pauli_label_to_reduced_index(std::string_view label) {
    size_t index = 0;
    for (size_t q = 0; q < label.size(); q++) {
        if (pauli_char_to_code(label[q]) != 0) {
            index |= size_t{1} << q;
        }
    }
    return index;
}

std::string pattern_to_bitstring(uint64_t pattern, size_t k) {
    std::string bits(k, '0');
    for (size_t i = 0; i < k; i++) {
        if ((pattern >> i) & 1u) {
            bits[i] = '1';
        }
    }
    return bits;
}

uint64_t bitstring_to_pattern(std::string_view bits) {
    uint64_t pattern = 0;
    for (size_t i = 0; i < bits.size(); i++) {
        if (bits[i] == '1') {
            pattern |= uint64_t{1} << i;
        } else if (bits[i] != '0') {
            throw std::invalid_argument("bitstring may contain only '0' and '1'");
        }
    }
    return pattern;
}

std::vector<double> pauli_eigenvalues_from_rates(const PauliErrorRates &rates) {
    rates.validate();
    std::vector<double> eigs = rates.values;
    wht_inplace(eigs);
    return eigs;
}

PauliErrorRates pauli_rates_from_eigenvalues(uint32_t n_qubits, std::vector<double> eigenvalues) {
    PauliErrorRates rates;
    rates.n_qubits = n_qubits;
    rates.values = std::move(eigenvalues);
    wht_inplace(rates.values);
    double scale = 1.0 / static_cast<double>(rates.values.size());
    for (double &v : rates.values) {
        v *= scale;
    }
    return rates;
}

PauliErrorRates pauli_rates_from_averaged_eigenvalues(const EigenvalueVector &averaged, uint32_t qubit_cap) {
    averaged.validate_shape();
    for (const auto &set : averaged.layout.sets) {
        if (set.size() != 1) {
            throw std::invalid_argument(
                "pauli_rates_from_averaged_eigenvalues: layout must contain only singleton sets");
        }
    }
    size_t n = averaged.layout.num_sets();
    if (n > qubit_cap) {
        throw std::invalid_argument(
            "pauli_rates_from_averaged_eigenvalues: " + std::to_string(n) + " qubits exceeds the dense cap of " +
            std::to_string(qubit_cap));
    }

    // Tensor application of the per-qubit 4x2 map taking (lambda_I, lambda_S)
    // to the four averaged rates:
    //   rate I       = (lambda_I + 3 lambda_S) / 4
    //   rates X,Y,Z  = (lambda_I - lambda_S) / 4
    // Axis q is expanded from 2 to 4 states; already-processed axes sit below it.
    static const double kExpand[4][2] = {
        {0.25, 0.75},
        {0.25, -0.25},
        {0.25, -0.25},
        {0.25, -0.25},
    };
    std::vector<double> current = averaged.values;
    for (size_t q = 0; q < n; q++) {
        size_t low = 1;
        for (size_t i = 0; i < q; i++) {
            low *= 4;
        }
        size_t high = current.size() / (low * 2);
        std::vector<double> next(low * 4 * high);
        for (size_t h = 0; h < high; h++) {
            for (size_t c = 0; c < 4; c++) {
                for (size_t l = 0; l < low; l++) {
                    double v0 = current[(h * 2 + 0) * low + l];
                    double v1 = current[(h * 2 + 1) * low + l];
                    next[(h * 4 + c) * low + l] = kExpand[c][0] * v0 + kExpand[c][1] * v1;
                }
            }
        }
        current = std::move(next);
    }

    PauliErrorRates out;
    out.n_qubits = static_cast<uint32_t>(n);
    out.values = std::move(current);
    return out;
}

std::vector<double> averaged_rates_from_observed(const ProbVector &observed) {
    for (const auto &set : observed.layout.sets) {
        if (set.size() != 1) {
            throw std::invalid_argument("averaged_rates_from_observed: layout must contain only singleton sets");
        }
    }
    if (observed.values.size() != observed.layout.dim()) {
        throw std::invalid_argument("averaged_rates_from_observed: malformed ProbVector");
    }
    // Per-qubit 2x2 map ((1, -1/2), (0, 3/2)) applied along every bit axis.
    std::vector<double> out = observed.values;
    size_t len = out.size();
    for (size_t h = 1; h < len; h *= 2) {
        for (size_t i = 0; i < len; i += h * 2) {
            for (size_t j = i; j < i + h; j++) {
                double x = out[j];
                double y = out[j + h];
                out[j] = x - 0.5 * y;
                out[j + h] = 1.5 * y;
            }
        }
    }
    return out;
}

}  // namespace qnoise
