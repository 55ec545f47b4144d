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

#ifndef QNOISE_TEST_UTIL_H
#define QNOISE_TEST_UTIL_H

#include <vector>

#include "qnoise/noise_model.h"
#include "qnoise/rng.h"

namespace qnoise::testing {

std::vector<double> random_distribution(RngStream &rng, size_t dim);

/// Random error-rate vector with at least `identity_mass` on the identity,
/// so the channel stays comfortably physical.
PauliErrorRates random_pauli_rates(RngStream &rng, uint32_t n_qubits, double identity_mass = 0.7);

NoiseModel random_per_qubit_model(RngStream &rng, uint32_t n_qubits, double max_total_rate = 0.05);

/// Eigenvalues of a symmetric k x k matrix by cyclic Jacobi sweeps
/// (test-side oracle, independent of any library).
std::vector<double> symmetric_eigenvalues(std::vector<double> matrix, size_t k);

}  // namespace qnoise::testing

#endif
