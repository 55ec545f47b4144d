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

#ifndef QNOISE_ANALYSIS_H
#define QNOISE_ANALYSIS_H

#include <span>
#include <vector>

#include "qnoise/dist.h"

namespace qnoise {

enum class LogBase {
    natural,
    two,
};

/// Relative entropy sum p ln(p/q) in nats, with 0 ln 0 = 0. The divergence
/// is undefined when q vanishes somewhere p does not; that case throws a
/// domain error suggesting the Jensen-Shannon distance instead.
double kl_divergence(std::span<const double> p, std::span<const double> q);

/// Jensen-Shannon distance: the square root of the symmetrized, smoothed
/// divergence against the midpoint mixture. A metric; bounded by 1 in
/// base two.
double jensen_shannon_distance(
    std::span<const double> p, std::span<const double> q, LogBase base = LogBase::two);

double hellinger_distance(std::span<const double> p, std::span<const double> q);

double total_variation_distance(std::span<const double> p, std::span<const double> q);

/// Mutual information between the error indicators of two disjoint groups
/// of sets, each group treated as a single variable.
double mutual_information(
    const ProbVector &p,
    std::span<const size_t> group_a,
    std::span<const size_t> group_b,
    LogBase base = LogBase::natural);

double conditional_mutual_information(
    const ProbVector &p,
    std::span<const size_t> group_a,
    std::span<const size_t> group_b,
    std::span<const size_t> group_c,
    LogBase base = LogBase::natural);

/// Covariance of the k-dimensional 0/1 error indicator vector, row-major.
std::vector<double> covariance_matrix(const ProbVector &p);

struct CorrelationMatrix {
    PartitionLayout layout;
    std::vector<double> values;  // k x k row-major, unit diagonal
    std::vector<uint8_t> zero_variance;

    size_t size() const {
        return zero_variance.size();
    }
    double at(size_t row, size_t col) const {
        return values[row * size() + col];
    }
};

/// Pearson correlation matrix of the error indicators. Rows with zero
/// variance keep a unit diagonal, zero off-diagonals, and a flag.
CorrelationMatrix correlation_matrix(const ProbVector &p);

struct FidelityResult {
    double fidelity = 1.0;
    double average_error_rate = 0.0;
    double mean_eigenvalue = 1.0;
};

/// Average gate fidelity of the channel restricted to a subset of sets:
/// the multiplicity-weighted mean of the nontrivial averaged eigenvalues
/// (weights 3 per averaged singleton, 15 per averaged pair, multiplied
/// across sets), shifted into ((d-1) mean + 1) / d with d = 2^#qubits.
FidelityResult fidelity_from_eigenvalues(const EigenvalueVector &eigs, std::span<const size_t> subset);

}  // namespace qnoise

#endif
