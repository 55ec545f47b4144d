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

#include "qnoise/grf.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "qnoise/parallel.h"

namespace qnoise {

namespace {

// Positions (0-based, within the sorted clique) of the separator's sets.
std::vector<size_t> positions_within(const std::vector<size_t> &clique, const std::vector<size_t> &subset) {
    std::vector<size_t> pos;
    pos.reserve(subset.size());
    for (size_t s : subset) {
        auto it = std::lower_bound(clique.begin(), clique.end(), s);
        if (it == clique.end() || *it != s) {
            throw std::logic_error("separator set missing from clique");
        }
        pos.push_back(static_cast<size_t>(it - clique.begin()));
    }
    return pos;
}

std::vector<double> table_marginal(
    const std::vector<double> &table, const std::vector<size_t> &positions) {
    std::vector<double> out(size_t{1} << positions.size(), 0.0);
    for (size_t cell = 0; cell < table.size(); cell++) {
        out[compress_bits(cell, positions)] += table[cell];
    }
    return out;
}

void normalize_table(std::vector<double> &table) {
    double sum = std::accumulate(table.begin(), table.end(), 0.0);
    if (!(sum > 0.0)) {
        throw std::invalid_argument("clique marginal has no mass");
    }
    for (double &v : table) {
        v /= sum;
    }
}

double max_abs_difference(const std::vector<double> &a, const std::vector<double> &b) {
    double worst = 0.0;
    for (size_t i = 0; i < a.size(); i++) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

}  // namespace

GrfModel make_grf_model(
    const PartitionLayout &layout,
    const JunctionChain &chain,
    std::vector<std::vector<double>> tables,
    const GrfOptions &options) {
    layout.validate();
    chain.validate(layout.num_sets(), options.max_clique_size);
    if (tables.size() != chain.cliques.size()) {
        throw std::invalid_argument("make_grf_model: one table per clique required");
    }
    for (size_t t = 0; t < tables.size(); t++) {
        if (tables[t].size() != size_t{1} << chain.cliques[t].size()) {
            throw std::invalid_argument("make_grf_model: table " + std::to_string(t) + " has the wrong size");
        }
    }
    GrfModel model;
    model.layout = layout;
    model.chain = chain;
    auto separators = chain.separators();

    for (auto &table : tables) {
        normalize_table(table);
    }

    // One forward calibration pass: pull both neighbors of each separator
    // toward the average of their two estimates.
    for (size_t t = 0; t + 1 < tables.size(); t++) {
        const auto &sep = separators[t];
        auto pos_left = positions_within(chain.cliques[t], sep);
        auto pos_right = positions_within(chain.cliques[t + 1], sep);
        auto left = table_marginal(tables[t], pos_left);
        auto right = table_marginal(tables[t + 1], pos_right);
        std::vector<double> target(left.size());
        for (size_t s = 0; s < left.size(); s++) {
            target[s] = 0.5 * (left[s] + right[s]);
        }
        bool skipped = false;
        for (size_t cell = 0; cell < tables[t].size(); cell++) {
            uint64_t s = compress_bits(cell, pos_left);
            if (left[s] > 0.0) {
                tables[t][cell] *= target[s] / left[s];
            } else if (target[s] > 0.0) {
                skipped = true;
            }
        }
        for (size_t cell = 0; cell < tables[t + 1].size(); cell++) {
            uint64_t s = compress_bits(cell, pos_right);
            if (right[s] > 0.0) {
                tables[t + 1][cell] *= target[s] / right[s];
            } else if (target[s] > 0.0) {
                skipped = true;
            }
        }
        if (skipped) {
            model.warnings.push_back(
                "separator " + std::to_string(t) + ": an estimate assigns zero mass where its neighbor does not");
        }
    }

    for (auto &table : tables) {
        for (double &v : table) {
            v = std::max(v, options.positivity_floor);
        }
        normalize_table(table);
    }

    // Separator tables come from the left clique so the chain telescopes to
    // total mass exactly 1 regardless of residual inconsistency.
    model.separator_sets = separators;
    model.separator_marginals.clear();
    for (size_t t = 0; t + 1 < tables.size(); t++) {
        auto pos_left = positions_within(chain.cliques[t], separators[t]);
        model.separator_marginals.push_back(table_marginal(tables[t], pos_left));
    }
    for (size_t t = 0; t + 1 < tables.size(); t++) {
        auto pos_right = positions_within(chain.cliques[t + 1], separators[t]);
        auto right = table_marginal(tables[t + 1], pos_right);
        double mismatch = max_abs_difference(model.separator_marginals[t], right);
        if (mismatch > options.consistency_tol) {
            model.warnings.push_back(
                "separator " + std::to_string(t) + ": clique marginals disagree by " + std::to_string(mismatch) +
                " after calibration");
        }
    }
    model.clique_marginals = std::move(tables);
    return model;
}

std::vector<std::vector<size_t>> JunctionChain::separators() const {
    std::vector<std::vector<size_t>> out;
    for (size_t t = 0; t + 1 < cliques.size(); t++) {
        std::vector<size_t> sep;
        std::set_intersection(
            cliques[t].begin(), cliques[t].end(), cliques[t + 1].begin(), cliques[t + 1].end(),
            std::back_inserter(sep));
        out.push_back(std::move(sep));
    }
    return out;
}

void JunctionChain::validate(size_t num_sets, size_t max_clique_size) const {
    if (cliques.empty()) {
        throw std::invalid_argument("JunctionChain: at least one clique required");
    }
    std::vector<bool> covered(num_sets, false);
    for (const auto &clique : cliques) {
        if (clique.empty() || clique.size() > max_clique_size) {
            throw std::invalid_argument(
                "JunctionChain: clique sizes must lie in [1, " + std::to_string(max_clique_size) + "]");
        }
        if (!std::is_sorted(clique.begin(), clique.end()) ||
            std::adjacent_find(clique.begin(), clique.end()) != clique.end()) {
            throw std::invalid_argument("JunctionChain: cliques must be sorted lists of distinct set indices");
        }
        for (size_t s : clique) {
            if (s >= num_sets) {
                throw std::invalid_argument("JunctionChain: set index " + std::to_string(s) + " out of range");
            }
            covered[s] = true;
        }
    }
    for (size_t s = 0; s < num_sets; s++) {
        if (!covered[s]) {
            throw std::invalid_argument("JunctionChain: set " + std::to_string(s) + " is not covered by any clique");
        }
    }
    // Running intersection: sets shared by two cliques must appear in every
    // clique between them.
    for (size_t t = 0; t < cliques.size(); t++) {
        for (size_t u = t + 2; u < cliques.size(); u++) {
            std::vector<size_t> shared;
            std::set_intersection(
                cliques[t].begin(), cliques[t].end(), cliques[u].begin(), cliques[u].end(),
                std::back_inserter(shared));
            for (size_t mid = t + 1; mid < u; mid++) {
                for (size_t s : shared) {
                    if (!std::binary_search(cliques[mid].begin(), cliques[mid].end(), s)) {
                        throw std::invalid_argument(
                            "JunctionChain: set " + std::to_string(s) +
                            " shared by non-adjacent cliques skips an intermediate clique");
                    }
                }
            }
        }
    }
}

JunctionChain JunctionChain::pairwise(size_t num_sets) {
    JunctionChain chain;
    if (num_sets == 1) {
        chain.cliques.push_back({0});
        return chain;
    }
    for (size_t i = 0; i + 1 < num_sets; i++) {
        chain.cliques.push_back({i, i + 1});
    }
    return chain;
}

GrfModel fit_grf(const ProbVector &global, const JunctionChain &chain, const GrfOptions &options) {
    chain.validate(global.layout.num_sets(), options.max_clique_size);
    std::vector<std::vector<double>> tables;
    tables.reserve(chain.cliques.size());
    for (const auto &clique : chain.cliques) {
        tables.push_back(marginalize(global, clique).values);
    }
    return make_grf_model(global.layout, chain, std::move(tables), options);
}

GrfModel fit_grf(
    const MarginalSource &source,
    const PartitionLayout &layout,
    const JunctionChain &chain,
    const GrfOptions &options) {
    chain.validate(layout.num_sets(), options.max_clique_size);
    std::vector<std::vector<double>> tables;
    tables.reserve(chain.cliques.size());
    for (const auto &clique : chain.cliques) {
        ProbVector marginal = source(clique);
        if (marginal.values.size() != size_t{1} << clique.size()) {
            throw std::invalid_argument("fit_grf: marginal source returned a wrongly sized distribution");
        }
        tables.push_back(marginal.values);
    }
    return make_grf_model(layout, chain, std::move(tables), options);
}

double grf_eval(const GrfModel &model, uint64_t pattern) {
    double value = 1.0;
    for (size_t t = 0; t < model.chain.cliques.size(); t++) {
        value *= model.clique_marginals[t][compress_bits(pattern, model.chain.cliques[t])];
    }
    for (size_t t = 0; t < model.separator_sets.size(); t++) {
        value /= model.separator_marginals[t][compress_bits(pattern, model.separator_sets[t])];
    }
    return value;
}

ProbVector grf_to_dense(const GrfModel &model, size_t dense_set_cap) {
    size_t k = model.layout.num_sets();
    if (k > dense_set_cap) {
        throw std::invalid_argument(
            "grf_to_dense: " + std::to_string(k) + " sets exceeds the dense cap of " +
            std::to_string(dense_set_cap) + "; use the streaming comparisons");
    }
    ProbVector out;
    out.layout = model.layout;
    out.values.resize(size_t{1} << k);
    for (size_t pattern = 0; pattern < out.values.size(); pattern++) {
        out.values[pattern] = grf_eval(model, pattern);
    }
    return out;
}

double compare_grf(const ProbVector &global, const GrfModel &model, LogBase base) {
    ProbVector dense = grf_to_dense(model);
    if (dense.values.size() != global.values.size()) {
        throw std::invalid_argument("compare_grf: distribution and model shapes differ");
    }
    return jensen_shannon_distance(global.values, dense.values, base);
}

double chain_hellinger_distance(const GrfModel &p, const GrfModel &q) {
    if (p.chain.cliques != q.chain.cliques) {
        throw std::invalid_argument("chain distances need models on the same chain");
    }
    auto separators = p.chain.separators();
    std::vector<double> message = {1.0};
    std::vector<size_t> prev_sep;
    for (size_t t = 0; t < p.chain.cliques.size(); t++) {
        const auto &clique = p.chain.cliques[t];
        std::vector<size_t> next_sep = t < separators.size() ? separators[t] : std::vector<size_t>{};
        auto pos_prev = positions_within(clique, prev_sep);
        auto pos_next = positions_within(clique, next_sep);

        // Combined factor: sqrt of the product of both models' chain
        // factors (clique table over incoming separator table).
        std::vector<double> next_message(size_t{1} << next_sep.size(), 0.0);
        for (size_t cell = 0; cell < p.clique_marginals[t].size(); cell++) {
            double fp = p.clique_marginals[t][cell];
            double fq = q.clique_marginals[t][cell];
            if (t > 0) {
                fp /= p.separator_marginals[t - 1][compress_bits(cell, pos_prev)];
                fq /= q.separator_marginals[t - 1][compress_bits(cell, pos_prev)];
            }
            double combined = std::sqrt(fp * fq);
            next_message[compress_bits(cell, pos_next)] +=
                combined * message[compress_bits(cell, pos_prev)];
        }
        message = std::move(next_message);
        prev_sep = std::move(next_sep);
    }
    double overlap = message.at(0);
    return std::sqrt(std::max(1.0 - overlap, 0.0));
}

namespace {

// Per-clique conditional weight tables for forward sampling without
// per-draw allocation: cond[t][sep_value] holds the clique cells compatible
// with the incoming separator value, zero elsewhere. The chain-factor
// ratios of both models are tabulated per cell so one pass both samples a
// pattern and accumulates its probability under each model.
struct ChainWalker {
    const GrfModel *sampling_model;
    std::vector<std::vector<std::vector<double>>> cond;
    std::vector<std::vector<double>> factor_p;
    std::vector<std::vector<double>> factor_q;

    ChainWalker(const GrfModel &from, const GrfModel &p, const GrfModel &q) : sampling_model(&from) {
        size_t r = from.chain.cliques.size();
        cond.resize(r);
        factor_p.resize(r);
        factor_q.resize(r);
        for (size_t t = 0; t < r; t++) {
            std::vector<size_t> fixed = t == 0 ? std::vector<size_t>{} : from.separator_sets[t - 1];
            auto pos_fixed = positions_within(from.chain.cliques[t], fixed);
            const auto &table = from.clique_marginals[t];
            cond[t].assign(size_t{1} << fixed.size(), std::vector<double>(table.size(), 0.0));
            factor_p[t].resize(table.size());
            factor_q[t].resize(table.size());
            for (size_t cell = 0; cell < table.size(); cell++) {
                uint64_t sep_value = compress_bits(cell, pos_fixed);
                cond[t][sep_value][cell] = table[cell];
                factor_p[t][cell] =
                    p.clique_marginals[t][cell] / (t == 0 ? 1.0 : p.separator_marginals[t - 1][sep_value]);
                factor_q[t][cell] =
                    q.clique_marginals[t][cell] / (t == 0 ? 1.0 : q.separator_marginals[t - 1][sep_value]);
            }
        }
    }

    // Samples a pattern and returns the probabilities the two compared
    // models assign to it.
    void walk(RngStream &rng, double *value_p, double *value_q) const {
        uint64_t pattern = 0;
        double vp = 1.0, vq = 1.0;
        for (size_t t = 0; t < cond.size(); t++) {
            uint64_t fixed_value =
                t == 0 ? 0 : compress_bits(pattern, sampling_model->separator_sets[t - 1]);
            size_t cell = rng.next_weighted(cond[t][fixed_value]);
            pattern |= expand_bits(cell, sampling_model->chain.cliques[t]);
            vp *= factor_p[t][cell];
            vq *= factor_q[t][cell];
        }
        *value_p = vp;
        *value_q = vq;
    }
};

}  // namespace

uint64_t grf_sample(const GrfModel &model, RngStream &rng) {
    uint64_t pattern = 0;
    for (size_t t = 0; t < model.chain.cliques.size(); t++) {
        const auto &clique = model.chain.cliques[t];
        std::vector<size_t> fixed = t == 0 ? std::vector<size_t>{} : model.separator_sets[t - 1];
        auto pos_fixed = positions_within(clique, fixed);
        uint64_t fixed_value = compress_bits(pattern, fixed);
        const auto &table = model.clique_marginals[t];
        std::vector<double> weights(table.size(), 0.0);
        for (size_t cell = 0; cell < table.size(); cell++) {
            if (compress_bits(cell, pos_fixed) == fixed_value) {
                weights[cell] = table[cell];
            }
        }
        pattern |= expand_bits(rng.next_weighted(weights), clique);
    }
    return pattern;
}

double chain_jsd_sampled(
    const GrfModel &p, const GrfModel &q, size_t samples_per_side, uint64_t seed, LogBase base) {
    if (p.chain.cliques != q.chain.cliques) {
        throw std::invalid_argument("chain distances need models on the same chain");
    }
    if (samples_per_side == 0) {
        throw std::invalid_argument("chain_jsd_sampled: need at least one sample");
    }
    ChainWalker walker_p(p, p, q);
    ChainWalker walker_q(q, p, q);
    auto expectation = [&](const ChainWalker &walker, bool from_is_p, uint64_t key) {
        RngStream rng = RngStream::keyed({seed, key});
        double acc = 0.0;
        for (size_t i = 0; i < samples_per_side; i++) {
            double vp = 0, vq = 0;
            walker.walk(rng, &vp, &vq);
            double v_from = from_is_p ? vp : vq;
            acc += std::log(v_from / (0.5 * (vp + vq)));
        }
        double mean = acc / static_cast<double>(samples_per_side);
        if (base == LogBase::two) {
            mean /= std::log(2.0);
        }
        return mean;
    };
    double divergence = 0.5 * expectation(walker_p, true, 0x70) + 0.5 * expectation(walker_q, false, 0x71);
    return std::sqrt(std::max(divergence, 0.0));
}

std::vector<ChainScalingRow> chain_scaling_experiment(const ChainScalingOptions &options, uint64_t seed) {
    if (options.chain_lengths.empty() || options.instances_per_length == 0) {
        throw std::invalid_argument("chain_scaling_experiment: nothing to run");
    }
    if (!(options.error_rate_min > 0 && options.error_rate_max < 0.5 &&
          options.error_rate_min <= options.error_rate_max)) {
        throw std::invalid_argument("chain_scaling_experiment: error rate range must sit inside (0, 0.5)");
    }

    struct InstanceResult {
        double jsd = 0;
        double hellinger = 0;
    };
    size_t per_length = options.instances_per_length;
    std::vector<InstanceResult> results(options.chain_lengths.size() * per_length);

    parallel_for(0, results.size(), options.threads, [&](size_t task) {
        size_t li = task / per_length;
        size_t instance = task % per_length;
        size_t length = options.chain_lengths[li];
        RngStream rng = RngStream::keyed({seed, static_cast<uint64_t>(length), instance});

        PartitionLayout layout = PartitionLayout::singletons(static_cast<uint32_t>(length));
        JunctionChain chain = JunctionChain::pairwise(length);

        // Random truth: per-variable error rates plus nearest-neighbor
        // correlations, clamped so every pairwise cell stays positive.
        std::vector<double> rates(length);
        for (auto &e : rates) {
            e = options.error_rate_min + (options.error_rate_max - options.error_rate_min) * rng.next_double();
        }
        std::vector<std::vector<double>> tables;
        if (length == 1) {
            tables.push_back({1.0 - rates[0], rates[0]});
        } else {
            for (size_t i = 0; i + 1 < length; i++) {
                double rho = options.correlation_min +
                             (options.correlation_max - options.correlation_min) * rng.next_double();
                double ei = rates[i];
                double ej = rates[i + 1];
                double p11 = ei * ej + rho * std::sqrt(ei * (1 - ei) * ej * (1 - ej));
                p11 = std::min(p11, std::min(ei, ej) - 1e-9);
                p11 = std::max(p11, std::max(0.0, ei + ej - 1.0) + 1e-9);
                // Cell order: bit 0 is variable i, bit 1 is variable i+1.
                tables.push_back({1.0 - ei - ej + p11, ei - p11, ej - p11, p11});
            }
        }
        GrfOptions grf_options;
        GrfModel truth = make_grf_model(layout, chain, tables, grf_options);

        // Fixed-budget empirical estimate of every clique marginal.
        std::vector<std::vector<double>> sampled(tables.size());
        for (size_t t = 0; t < truth.clique_marginals.size(); t++) {
            std::vector<double> histogram(truth.clique_marginals[t].size(), 0.0);
            for (uint64_t shot = 0; shot < options.shots_per_marginal; shot++) {
                histogram[rng.next_weighted(truth.clique_marginals[t])] += 1.0;
            }
            for (double &v : histogram) {
                v /= static_cast<double>(options.shots_per_marginal);
            }
            sampled[t] = std::move(histogram);
        }
        GrfModel estimate = make_grf_model(layout, chain, sampled, grf_options);

        results[task].hellinger = chain_hellinger_distance(truth, estimate);
        results[task].jsd = chain_jsd_sampled(
            truth, estimate, options.jsd_samples,
            mix64(seed ^ mix64(static_cast<uint64_t>(length) * 1315423911u + instance)), options.base);
    });

    std::vector<ChainScalingRow> rows;
    for (size_t li = 0; li < options.chain_lengths.size(); li++) {
        ChainScalingRow row;
        row.chain_length = options.chain_lengths[li];
        double sj = 0, sh = 0, sj2 = 0, sh2 = 0;
        for (size_t i = 0; i < per_length; i++) {
            const auto &r = results[li * per_length + i];
            sj += r.jsd;
            sh += r.hellinger;
            sj2 += r.jsd * r.jsd;
            sh2 += r.hellinger * r.hellinger;
        }
        double n = static_cast<double>(per_length);
        row.mean_jsd = sj / n;
        row.mean_hellinger = sh / n;
        if (per_length > 1) {
            row.stderr_jsd = std::sqrt(std::max(sj2 / n - row.mean_jsd * row.mean_jsd, 0.0) / (n - 1));
            row.stderr_hellinger =
                std::sqrt(std::max(sh2 / n - row.mean_hellinger * row.mean_hellinger, 0.0) / (n - 1));
        }
        rows.push_back(row);
    }
    return rows;
}

GrowthFitComparison compare_sqrt_vs_linear_growth(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("growth comparison needs at least two points");
    }
    auto single_parameter_fit = [&](auto &&basis) {
        double num = 0, den = 0;
        for (size_t i = 0; i < x.size(); i++) {
            double b = basis(x[i]);
            num += y[i] * b;
            den += b * b;
        }
        return num / den;
    };
    double mean_y = 0;
    for (double v : y) {
        mean_y += v;
    }
    mean_y /= static_cast<double>(y.size());
    double ss_total = 0;
    for (double v : y) {
        ss_total += (v - mean_y) * (v - mean_y);
    }
    auto r_squared = [&](auto &&basis, double coeff) {
        double ss_res = 0;
        for (size_t i = 0; i < x.size(); i++) {
            double r = y[i] - coeff * basis(x[i]);
            ss_res += r * r;
        }
        return 1.0 - ss_res / ss_total;
    };
    GrowthFitComparison out;
    auto sqrt_basis = [](double v) { return std::sqrt(v); };
    auto linear_basis = [](double v) { return v; };
    out.sqrt_coefficient = single_parameter_fit(sqrt_basis);
    out.linear_coefficient = single_parameter_fit(linear_basis);
    out.sqrt_r_squared = r_squared(sqrt_basis, out.sqrt_coefficient);
    out.linear_r_squared = r_squared(linear_basis, out.linear_coefficient);
    return out;
}

}  // namespace qnoise
