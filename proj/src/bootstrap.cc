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

#include "qnoise/bootstrap.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qnoise/parallel.h"
#include "qnoise/rng.h"

namespace qnoise {

namespace {

struct OutcomeTable {
    std::vector<std::string> outcomes;
    std::vector<double> weights;
};

OutcomeTable flatten(const std::map<std::string, uint64_t> &table) {
    OutcomeTable flat;
    flat.outcomes.reserve(table.size());
    flat.weights.reserve(table.size());
    for (const auto &[bits, count] : table) {
        flat.outcomes.push_back(bits);
        flat.weights.push_back(static_cast<double>(count));
    }
    return flat;
}

void redraw(
    const OutcomeTable &source, uint64_t shots, RngStream &rng, std::map<std::string, uint64_t> &target) {
    std::vector<uint64_t> drawn(source.outcomes.size(), 0);
    for (uint64_t shot = 0; shot < shots; shot++) {
        drawn[rng.next_weighted(source.weights)]++;
    }
    for (size_t i = 0; i < drawn.size(); i++) {
        if (drawn[i] > 0) {
            target[source.outcomes[i]] += drawn[i];
        }
    }
}

}  // namespace

ExperimentRecord resample_record(const ExperimentRecord &record, uint64_t seed, ResamplingScheme scheme) {
    record.validate();
    ExperimentRecord out;
    out.layout = record.layout;
    out.lengths = record.lengths;
    out.shots = record.shots;
    out.seed = seed;
    out.counts.resize(record.lengths.size());
    for (size_t mi = 0; mi < record.lengths.size(); mi++) {
        out.counts[mi].resize(record.counts[mi].size());
        OutcomeTable pooled;
        if (scheme == ResamplingScheme::pooled) {
            std::map<std::string, uint64_t> merged;
            for (const auto &table : record.counts[mi]) {
                for (const auto &[bits, count] : table) {
                    merged[bits] += count;
                }
            }
            pooled = flatten(merged);
        }
        for (size_t s = 0; s < record.counts[mi].size(); s++) {
            RngStream rng = RngStream::keyed({seed, static_cast<uint64_t>(record.lengths[mi]), s});
            if (scheme == ResamplingScheme::pooled) {
                redraw(pooled, record.shots, rng, out.counts[mi][s]);
            } else {
                OutcomeTable flat = flatten(record.counts[mi][s]);
                redraw(flat, record.shots, rng, out.counts[mi][s]);
            }
        }
    }
    return out;
}

BootstrapEnsemble bootstrap_ensemble(
    const ExperimentRecord &record, const BootstrapOptions &options, uint64_t seed) {
    if (options.n_replicates < 2) {
        throw std::invalid_argument("bootstrap_ensemble: need at least 2 replicates");
    }
    record.validate();
    BootstrapEnsemble ensemble;
    ensemble.seed = seed;
    ensemble.replicates.resize(options.n_replicates);
    parallel_for(0, options.n_replicates, options.threads, [&](size_t r) {
        uint64_t replicate_seed = mix64(seed ^ mix64(r + 1));
        ExperimentRecord resampled = resample_record(record, replicate_seed, options.scheme);
        ensemble.replicates[r] = reconstruct(resampled, options.fit);
    });
    return ensemble;
}

std::pair<size_t, size_t> percentile_ranks(size_t n, double level) {
    if (n == 0) {
        throw std::invalid_argument("percentile_ranks: empty sample");
    }
    if (!(level > 0.0 && level < 1.0)) {
        throw std::invalid_argument("percentile_ranks: level must lie in (0, 1)");
    }
    double alpha = (1.0 - level) / 2.0;
    double n_d = static_cast<double>(n);
    auto lo = static_cast<size_t>(std::ceil(n_d * alpha));
    auto hi = static_cast<size_t>(std::floor(n_d * (1.0 - alpha)));
    lo = std::clamp<size_t>(lo, 1, n);
    hi = std::clamp<size_t>(hi, lo, n);
    return {lo, hi};
}

ConfidenceInterval percentile_interval(std::vector<double> values, double level) {
    std::vector<double> finite;
    finite.reserve(values.size());
    for (double v : values) {
        if (std::isfinite(v)) {
            finite.push_back(v);
        }
    }
    if (finite.empty()) {
        throw std::invalid_argument("percentile_interval: no finite values");
    }
    std::sort(finite.begin(), finite.end());
    auto [lo_rank, hi_rank] = percentile_ranks(finite.size(), level);
    ConfidenceInterval ci;
    ci.lo = finite[lo_rank - 1];
    ci.hi = finite[hi_rank - 1];
    ci.level = level;
    ci.n_used = finite.size();
    return ci;
}

ConfidenceInterval percentile_ci(
    const BootstrapEnsemble &ensemble,
    const std::function<double(const ReconstructionResult &)> &statistic,
    double level) {
    std::vector<double> values;
    values.reserve(ensemble.replicates.size());
    for (const auto &replicate : ensemble.replicates) {
        values.push_back(statistic(replicate));
    }
    return percentile_interval(std::move(values), level);
}

MatrixInterval correlation_matrix_ci(const BootstrapEnsemble &ensemble, double level) {
    if (ensemble.replicates.empty()) {
        throw std::invalid_argument("correlation_matrix_ci: empty ensemble");
    }
    size_t k = ensemble.replicates.front().observed_rates.layout.num_sets();
    std::vector<std::vector<double>> cells(k * k);
    for (const auto &replicate : ensemble.replicates) {
        CorrelationMatrix corr = correlation_matrix(replicate.observed_rates);
        for (size_t c = 0; c < k * k; c++) {
            cells[c].push_back(corr.values[c]);
        }
    }
    MatrixInterval out;
    out.k = k;
    out.lo.resize(k * k);
    out.hi.resize(k * k);
    for (size_t c = 0; c < k * k; c++) {
        ConfidenceInterval ci = percentile_interval(std::move(cells[c]), level);
        out.lo[c] = ci.lo;
        out.hi[c] = ci.hi;
    }
    return out;
}

ConfidenceInterval jsd_ci(
    const BootstrapEnsemble &ensemble,
    const ReconstructionResult &original,
    const JunctionChain &chain,
    JsdResamplingMode mode,
    double level,
    const GrfOptions &grf_options,
    LogBase base) {
    auto values_for = [&](JsdResamplingMode m) {
        std::vector<double> values;
        values.reserve(ensemble.replicates.size());
        if (m == JsdResamplingMode::fixed_model) {
            GrfModel fixed = fit_grf(original.observed_rates, chain, grf_options);
            for (const auto &replicate : ensemble.replicates) {
                values.push_back(compare_grf(replicate.observed_rates, fixed, base));
            }
        } else {
            for (const auto &replicate : ensemble.replicates) {
                GrfModel refit = fit_grf(replicate.observed_rates, chain, grf_options);
                values.push_back(compare_grf(replicate.observed_rates, refit, base));
            }
        }
        return values;
    };
    if (mode == JsdResamplingMode::both) {
        ConfidenceInterval fixed = percentile_interval(values_for(JsdResamplingMode::fixed_model), level);
        ConfidenceInterval refit = percentile_interval(values_for(JsdResamplingMode::per_replicate_model), level);
        ConfidenceInterval out;
        out.lo = std::min(fixed.lo, refit.lo);
        out.hi = std::max(fixed.hi, refit.hi);
        out.level = level;
        out.n_used = std::min(fixed.n_used, refit.n_used);
        return out;
    }
    return percentile_interval(values_for(mode), level);
}

}  // namespace qnoise
