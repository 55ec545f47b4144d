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

#ifndef QNOISE_PROTOCOL_H
#define QNOISE_PROTOCOL_H

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qnoise/simulate.h"

namespace qnoise {

struct FitOptions {
    /// Constant c in the discard rule: once a transformed value drops below
    /// (first_value + c) / 4, that length and all longer ones are dropped
    /// for the index. Unset means 1 / 2^k; 1/16 reproduces the hard-coded
    /// device-era rule.
    std::optional<double> threshold_constant;
    /// Points kept at the shortest lengths even if the rule would drop them.
    int min_points = 3;
    /// Gauss-Newton polish of the log-domain solution.
    bool nonlinear_refine = false;
    unsigned threads = 0;
};

/// One fitted exponential decay amplitude * decay^m.
struct DecayFit {
    size_t index = 0;
    double amplitude = 1.0;
    double decay = 1.0;
    int points_used = 0;
    double residual = 0.0;
    bool failed = false;
    std::vector<int64_t> discarded_lengths;
};

struct ReconstructionResult {
    EigenvalueVector eigenvalues;
    ProbVector observed_rates;  // post-projection
    std::vector<DecayFit> fits;
    std::vector<std::string> diagnostics;
};

/// Per length: sequence-averaged frequencies of set-error patterns, with
/// n-qubit outcomes coarse-grained so pattern bit i is 1 iff any qubit of
/// set i differs from its ideal value. Throws DataError if a sequence has
/// no counts.
std::map<int64_t, ProbVector> empirical_distributions(const ExperimentRecord &record);

/// Same, but coarse-grained directly onto a subset of the sets, so the cost
/// is independent of how many other sets the record covers.
std::map<int64_t, ProbVector> empirical_distributions(
    const ExperimentRecord &record, std::span<const size_t> keep);

/// Fits every index of the transformed series to amplitude * decay^m.
/// Index 0 is pinned to the trivial decay (1, 1). Indexes with fewer than
/// min_points strictly positive retained values are flagged failed with
/// decay 0.
std::vector<DecayFit> fit_decays(
    const std::map<int64_t, std::vector<double>> &series, const FitOptions &options = {});

/// Full pipeline: empirical distributions, transform per length, per-index
/// decay fits, inverse transform, simplex projection.
ReconstructionResult reconstruct(const ExperimentRecord &record, const FitOptions &options = {});

/// Pipeline applied after marginalizing the empirical data onto `keep`.
ReconstructionResult reconstruct_marginal(
    const ExperimentRecord &record, std::span<const size_t> keep, const FitOptions &options = {});

/// Pipeline entry for already-known per-length distributions (exact model
/// checks, pre-marginalized data).
ReconstructionResult reconstruct_from_distributions(
    const std::map<int64_t, ProbVector> &distributions, const FitOptions &options = {});

}  // namespace qnoise

#endif
