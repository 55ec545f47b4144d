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

#ifndef QNOISE_GRF_H
#define QNOISE_GRF_H

#include <functional>
#include <string>
#include <vector>

#include "qnoise/analysis.h"
#include "qnoise/dist.h"
#include "qnoise/noise_model.h"
#include "qnoise/rng.h"

namespace qnoise {

struct GrfOptions {
    /// Largest tolerated mismatch between adjacent clique estimates on a
    /// shared separator after calibration; beyond it a warning is recorded.
    double consistency_tol = 1e-6;
    /// Zero entries are floored here and renormalized to keep the field
    /// strictly positive.
    double positivity_floor = 1e-12;
    size_t max_clique_size = 4;
    size_t dense_set_cap = kDefaultDenseSetCap;
};

/// Ordered clique cover of the sets with chain structure: consecutive
/// cliques overlap on separators and every shared variable stays inside
/// every clique between its occurrences (running intersection).
struct JunctionChain {
    std::vector<std::vector<size_t>> cliques;

    /// Separator t is the intersection of cliques t and t+1.
    std::vector<std::vector<size_t>> separators() const;
    void validate(size_t num_sets, size_t max_clique_size = 4) const;

    /// Nearest-neighbor chain {0,1}, {1,2}, ..., or the single clique {0}.
    static JunctionChain pairwise(size_t num_sets);
};

/// Factorized distribution over set-error patterns: the product of clique
/// marginals divided by separator marginals.
struct GrfModel {
    PartitionLayout layout;
    JunctionChain chain;
    std::vector<std::vector<size_t>> separator_sets;  // cached chain.separators()
    std::vector<std::vector<double>> clique_marginals;
    std::vector<std::vector<double>> separator_marginals;
    std::vector<std::string> warnings;
};

/// Supplies an estimated marginal distribution over a sorted group of sets.
using MarginalSource = std::function<ProbVector(std::span<const size_t>)>;

/// Builds a model straight from per-clique tables (2^{clique size} values
/// each, any positive scale): the tables are normalized, calibrated on the
/// separators, floored, and the separator marginals derived.
GrfModel make_grf_model(
    const PartitionLayout &layout,
    const JunctionChain &chain,
    std::vector<std::vector<double>> clique_tables,
    const GrfOptions &options = {});

/// Fits clique marginals by exact marginalization of a full distribution.
GrfModel fit_grf(const ProbVector &global, const JunctionChain &chain, const GrfOptions &options = {});

/// Fits clique marginals from an estimation callback (for systems whose
/// full distribution is never materialized). Adjacent estimates are
/// calibrated toward their average on each separator; residual mismatch
/// beyond the tolerance is recorded as a warning, not an error.
GrfModel fit_grf(
    const MarginalSource &source,
    const PartitionLayout &layout,
    const JunctionChain &chain,
    const GrfOptions &options = {});

/// Probability of one error pattern under the model. Strictly positive.
double grf_eval(const GrfModel &model, uint64_t pattern);

/// Tabulates grf_eval over all 2^k patterns. Refused above the dense cap.
ProbVector grf_to_dense(const GrfModel &model, size_t dense_set_cap = kDefaultDenseSetCap);

/// Jensen-Shannon distance between a dense distribution and the model.
double compare_grf(const ProbVector &global, const GrfModel &model, LogBase base = LogBase::two);

/// Exact Hellinger distance between two models on the same chain, computed
/// by a sum-product pass that never materializes 2^k patterns.
double chain_hellinger_distance(const GrfModel &p, const GrfModel &q);

/// Jensen-Shannon distance between two models on the same chain, estimated
/// by deterministic Monte Carlo over chain samples (the mixture inside the
/// logarithm does not factorize, so no exact streaming form exists).
double chain_jsd_sampled(
    const GrfModel &p, const GrfModel &q, size_t samples_per_side, uint64_t seed, LogBase base = LogBase::two);

/// Draws an error pattern by forward sampling along the chain.
uint64_t grf_sample(const GrfModel &model, RngStream &rng);

struct ChainScalingOptions {
    std::vector<size_t> chain_lengths;
    size_t instances_per_length = 20;
    uint64_t shots_per_marginal = 4000;
    size_t jsd_samples = 20000;
    double error_rate_min = 0.02;
    double error_rate_max = 0.12;
    double correlation_min = 0.05;
    double correlation_max = 0.35;
    LogBase base = LogBase::two;
    unsigned threads = 0;
};

struct ChainScalingRow {
    size_t chain_length = 0;
    double mean_jsd = 0;
    double mean_hellinger = 0;
    double stderr_jsd = 0;
    double stderr_hellinger = 0;
};

/// For each chain length, draws random nearest-neighbor-correlated truths,
/// re-estimates each from a fixed per-clique sample budget, and measures
/// the truth-to-estimate distances. Distances are streamed over the chain,
/// so lengths far beyond the dense cap are fine.
std::vector<ChainScalingRow> chain_scaling_experiment(const ChainScalingOptions &options, uint64_t seed);

/// Single-parameter least-squares fits of y against a*sqrt(x) and a*x.
struct GrowthFitComparison {
    double sqrt_coefficient = 0;
    double sqrt_r_squared = 0;
    double linear_coefficient = 0;
    double linear_r_squared = 0;
};
GrowthFitComparison compare_sqrt_vs_linear_growth(std::span<const double> x, std::span<const double> y);

}  // namespace qnoise

#endif
