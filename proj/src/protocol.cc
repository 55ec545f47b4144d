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

#include "qnoise/protocol.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qnoise/errors.h"
#include "qnoise/parallel.h"
#include "qnoise/transforms.h"

namespace qnoise {

namespace {

// Weighted least squares of log(value) against m. Weights are the values
// themselves so that small tail values do not dominate the fit relative to
// the nonlinear residuals they stand in for.
void log_linear_fit(
    const std::vector<std::pair<int64_t, double>> &points, double *amplitude, double *decay) {
    double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
    for (const auto &[m, v] : points) {
        double w = v;
        double x = static_cast<double>(m);
        double y = std::log(v);
        sw += w;
        swx += w * x;
        swy += w * y;
        swxx += w * x * x;
        swxy += w * x * y;
    }
    double denom = sw * swxx - swx * swx;
    double slope = (sw * swxy - swx * swy) / denom;
    double intercept = (swy - slope * swx) / sw;
    *decay = std::exp(slope);
    *amplitude = std::exp(intercept);
}

// A few Gauss-Newton steps on sum (v - A p^m)^2 starting from the
// log-domain solution.
void refine_fit(const std::vector<std::pair<int64_t, double>> &points, double *amplitude, double *decay) {
    double a = *amplitude;
    double p = *decay;
    for (int iter = 0; iter < 50; iter++) {
        double j11 = 0, j12 = 0, j22 = 0, g1 = 0, g2 = 0;
        for (const auto &[m, v] : points) {
            double pm = std::pow(p, static_cast<double>(m));
            double r = v - a * pm;
            double da = pm;
            double dp = p > 0 ? a * static_cast<double>(m) * pm / p : 0.0;
            j11 += da * da;
            j12 += da * dp;
            j22 += dp * dp;
            g1 += da * r;
            g2 += dp * r;
        }
        double denom = j11 * j22 - j12 * j12;
        if (!(std::abs(denom) > 1e-300)) {
            break;
        }
        double step_a = (j22 * g1 - j12 * g2) / denom;
        double step_p = (j11 * g2 - j12 * g1) / denom;
        a += step_a;
        p += step_p;
        if (!(std::isfinite(a) && std::isfinite(p)) || p <= 0) {
            a = *amplitude;
            p = *decay;
            break;
        }
        if (std::abs(step_a) + std::abs(step_p) < 1e-14) {
            break;
        }
    }
    *amplitude = a;
    *decay = p;
}

std::map<int64_t, ProbVector> coarse_grain(
    const ExperimentRecord &record, const std::vector<size_t> &kept) {
    record.validate();
    PartitionLayout marginal_layout = record.layout.restricted_to(kept);
    size_t dim = size_t{1} << kept.size();

    std::map<int64_t, ProbVector> out;
    for (size_t mi = 0; mi < record.lengths.size(); mi++) {
        std::vector<double> average(dim, 0.0);
        std::vector<double> freq(dim);
        for (const auto &table : record.counts[mi]) {
            std::fill(freq.begin(), freq.end(), 0.0);
            uint64_t total = 0;
            for (const auto &[bits, count] : table) {
                uint64_t pattern = 0;
                for (size_t j = 0; j < kept.size(); j++) {
                    for (uint32_t q : record.layout.sets[kept[j]]) {
                        if (bits[q] != '0') {
                            pattern |= uint64_t{1} << j;
                            break;
                        }
                    }
                }
                freq[pattern] += static_cast<double>(count);
                total += count;
            }
            if (total == 0) {
                throw DataError(
                    "empirical_distributions: a sequence at length " + std::to_string(record.lengths[mi]) +
                    " has zero total shots");
            }
            for (size_t b = 0; b < dim; b++) {
                average[b] += freq[b] / static_cast<double>(total);
            }
        }
        double inv_seqs = 1.0 / static_cast<double>(record.counts[mi].size());
        for (double &v : average) {
            v *= inv_seqs;
        }
        ProbVector p;
        p.layout = marginal_layout;
        p.values = std::move(average);
        out.emplace(record.lengths[mi], std::move(p));
    }
    return out;
}

}  // namespace

std::map<int64_t, ProbVector> empirical_distributions(const ExperimentRecord &record) {
    std::vector<size_t> all(record.layout.num_sets());
    std::iota(all.begin(), all.end(), size_t{0});
    return coarse_grain(record, all);
}

std::map<int64_t, ProbVector> empirical_distributions(
    const ExperimentRecord &record, std::span<const size_t> keep) {
    return coarse_grain(record, normalize_subset(keep, record.layout.num_sets()));
}

std::vector<DecayFit> fit_decays(
    const std::map<int64_t, std::vector<double>> &series, const FitOptions &options) {
    if (series.size() < 2) {
        throw std::invalid_argument("fit_decays: need at least 2 sequence lengths");
    }
    size_t dim = series.begin()->second.size();
    if (!is_power_of_two(dim)) {
        throw std::invalid_argument("fit_decays: transformed series length must be a power of two");
    }
    std::vector<int64_t> lengths;
    std::vector<const std::vector<double> *> rows;
    for (const auto &[m, values] : series) {
        if (values.size() != dim) {
            throw std::invalid_argument("fit_decays: inconsistent series sizes");
        }
        lengths.push_back(m);
        rows.push_back(&values);
    }
    int min_points = std::max(options.min_points, 2);
    double threshold_constant =
        options.threshold_constant.value_or(1.0 / static_cast<double>(dim));

    std::vector<DecayFit> fits(dim);
    fits[0].index = 0;
    fits[0].points_used = static_cast<int>(lengths.size());

    parallel_for(1, dim, options.threads, [&](size_t j) {
        DecayFit fit;
        fit.index = j;
        double first_value = (*rows[0])[j];
        double threshold = (first_value + threshold_constant) / 4.0;

        size_t cutoff = lengths.size();
        for (size_t i = 0; i < lengths.size(); i++) {
            if ((*rows[i])[j] < threshold) {
                cutoff = i;
                break;
            }
        }
        if (cutoff < static_cast<size_t>(min_points)) {
            cutoff = std::min(static_cast<size_t>(min_points), lengths.size());
        }
        for (size_t i = cutoff; i < lengths.size(); i++) {
            fit.discarded_lengths.push_back(lengths[i]);
        }

        std::vector<std::pair<int64_t, double>> points;
        for (size_t i = 0; i < cutoff; i++) {
            double v = (*rows[i])[j];
            if (v > 0.0) {
                points.emplace_back(lengths[i], v);
            }
        }
        fit.points_used = static_cast<int>(points.size());
        if (points.size() < static_cast<size_t>(min_points)) {
            fit.failed = true;
            fit.amplitude = 0.0;
            fit.decay = 0.0;
        } else {
            log_linear_fit(points, &fit.amplitude, &fit.decay);
            if (options.nonlinear_refine) {
                refine_fit(points, &fit.amplitude, &fit.decay);
            }
            for (const auto &[m, v] : points) {
                double r = v - fit.amplitude * std::pow(fit.decay, static_cast<double>(m));
                fit.residual += r * r;
            }
        }
        fits[j] = std::move(fit);
    });
    return fits;
}

ReconstructionResult reconstruct_from_distributions(
    const std::map<int64_t, ProbVector> &distributions, const FitOptions &options) {
    if (distributions.empty()) {
        throw std::invalid_argument("reconstruct: no distributions supplied");
    }
    const PartitionLayout &layout = distributions.begin()->second.layout;

    std::map<int64_t, std::vector<double>> series;
    for (const auto &[m, p] : distributions) {
        if (!(p.layout == layout)) {
            throw std::invalid_argument("reconstruct: distributions disagree on layout");
        }
        series.emplace(m, wht(p.values));
    }
    auto fits = fit_decays(series, options);

    ReconstructionResult result;
    double constant = options.threshold_constant.value_or(1.0 / static_cast<double>(layout.dim()));
    result.diagnostics.push_back(
        "discard rule: drop lengths once the value falls below (first + " + std::to_string(constant) +
        ")/4, where 'first' is the value at the smallest length");
    result.eigenvalues.layout = layout;
    result.eigenvalues.values.resize(fits.size());
    for (size_t j = 0; j < fits.size(); j++) {
        result.eigenvalues.values[j] = fits[j].failed ? 0.0 : fits[j].decay;
        if (fits[j].failed) {
            result.diagnostics.push_back(
                "index " + std::to_string(j) + ": decay fit failed (" + std::to_string(fits[j].points_used) +
                " positive points); the schedule of lengths is too coarse for this decay");
        }
    }
    result.eigenvalues.values[0] = 1.0;

    result.observed_rates.layout = layout;
    {
        auto pre = probabilities_from_eigenvalues(result.eigenvalues);
        result.observed_rates.values = project_to_simplex(pre.values);
    }
    result.fits = std::move(fits);
    return result;
}

ReconstructionResult reconstruct(const ExperimentRecord &record, const FitOptions &options) {
    return reconstruct_from_distributions(empirical_distributions(record), options);
}

ReconstructionResult reconstruct_marginal(
    const ExperimentRecord &record, std::span<const size_t> keep, const FitOptions &options) {
    return reconstruct_from_distributions(empirical_distributions(record, keep), options);
}

}  // namespace qnoise
