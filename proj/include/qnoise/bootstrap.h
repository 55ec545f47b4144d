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

#ifndef QNOISE_BOOTSTRAP_H
#define QNOISE_BOOTSTRAP_H

#include <functional>
#include <utility>

#include "qnoise/grf.h"
#include "qnoise/protocol.h"

namespace qnoise {

enum class ResamplingScheme {
    /// Redraw each sequence's shots from that sequence's own frequencies,
    /// preserving sequence-to-sequence variation.
    per_sequence,
    /// Redraw each sequence's shots from the frequencies pooled over all
    /// sequences of its length.
    pooled,
};

/// Redraws every count table with replacement, keeping the record shape.
ExperimentRecord resample_record(
    const ExperimentRecord &record, uint64_t seed, ResamplingScheme scheme = ResamplingScheme::per_sequence);

struct BootstrapOptions {
    size_t n_replicates = 1000;
    ResamplingScheme scheme = ResamplingScheme::per_sequence;
    FitOptions fit;
    unsigned threads = 0;
};

struct BootstrapEnsemble {
    std::vector<ReconstructionResult> replicates;
    uint64_t seed = 0;
};

/// Resamples and re-runs the reconstruction pipeline n_replicates times.
/// Replicate r uses the stream keyed (seed, r), so the ensemble is bitwise
/// reproducible for any thread count.
BootstrapEnsemble bootstrap_ensemble(
    const ExperimentRecord &record, const BootstrapOptions &options, uint64_t seed);

struct ConfidenceInterval {
    double point = 0;
    double lo = 0;
    double hi = 0;
    double level = 0;
    size_t n_used = 0;
};

/// 1-based order-statistic ranks (lo, hi) for a two-sided interval over n
/// sorted values: ceil(n a) and floor(n (1-a)) with a = (1-level)/2.
/// At n=1000 and the one-sigma level these are ranks 159 and 841.
std::pair<size_t, size_t> percentile_ranks(size_t n, double level);

/// Percentile interval over the values; non-finite entries are dropped
/// (their count shows up via n_used).
ConfidenceInterval percentile_interval(std::vector<double> values, double level);

/// Interval for any scalar statistic of a reconstruction.
ConfidenceInterval percentile_ci(
    const BootstrapEnsemble &ensemble,
    const std::function<double(const ReconstructionResult &)> &statistic,
    double level);

/// Cellwise percentile intervals over the replicate correlation matrices.
/// A matrix assembled from all the lows (or highs) is generally not itself
/// a valid correlation matrix; the cells are individually conservative.
struct MatrixInterval {
    size_t k = 0;
    std::vector<double> lo;  // k x k row-major
    std::vector<double> hi;
};
MatrixInterval correlation_matrix_ci(const BootstrapEnsemble &ensemble, double level);

enum class JsdResamplingMode {
    /// Compare the original fit's field to every replicate distribution.
    fixed_model,
    /// Refit the field on each replicate and compare to that replicate.
    per_replicate_model,
    /// Envelope of the two intervals.
    both,
};

/// Interval for the distance between reconstructed distribution and its
/// fitted field.
ConfidenceInterval jsd_ci(
    const BootstrapEnsemble &ensemble,
    const ReconstructionResult &original,
    const JunctionChain &chain,
    JsdResamplingMode mode,
    double level,
    const GrfOptions &grf_options = {},
    LogBase base = LogBase::two);

}  // namespace qnoise

#endif
