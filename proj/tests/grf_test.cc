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

#include <cmath>

#include "gtest/gtest.h"
#include "qnoise/analysis.h"
#include "test_util.h"

using namespace qnoise;

namespace {

ProbVector product_distribution(const std::vector<double> &error_rates) {
    ProbVector p;
    p.layout = PartitionLayout::singletons(static_cast<uint32_t>(error_rates.size()));
    p.values.resize(size_t{1} << error_rates.size());
    for (size_t b = 0; b < p.values.size(); b++) {
        double v = 1.0;
        for (size_t i = 0; i < error_rates.size(); i++) {
            v *= ((b >> i) & 1u) ? error_rates[i] : (1 - error_rates[i]);
        }
        p.values[b] = v;
    }
    return p;
}

// Markov-chain distribution over k binary variables.
ProbVector chain_distribution(double first, const std::vector<std::array<double, 2>> &flip_given_prev) {
    size_t k = flip_given_prev.size() + 1;
    ProbVector p;
    p.layout = PartitionLayout::singletons(static_cast<uint32_t>(k));
    p.values.resize(size_t{1} << k);
    for (size_t b = 0; b < p.values.size(); b++) {
        double v = (b & 1u) ? first : 1 - first;
        for (size_t i = 1; i < k; i++) {
            size_t prev = (b >> (i - 1)) & 1u;
            double 	flip = flip_given_prev[i - 1][prev];
            v *= ((b >> i) & 1u) ? flip : 1 - flip;
        }
        p.values[b] = v;
    }
    return p;
}

}  // namespace

TEST(JunctionChain, ValidationCatchesStructureErrors) {
    JunctionChain missing;
    missing.cliques = {{0, 1}};
    EXPECT_THROW(missing.validate(3), std::invalid_argument);

    JunctionChain unsorted;
    unsorted.cliques = {{1, 0}};
    EXPECT_THROW(unsorted.validate(2), std::invalid_argument);

    JunctionChain broken_rip;
    broken_rip.cliques = {{0, 1}, {1, 2}, {0, 2}};  // 0 reappears after being dropped
    EXPECT_THROW(broken_rip.validate(3), std::invalid_argument);

    JunctionChain too_big;
    too_big.cliques = {{0, 1, 2, 3, 4}};
    EXPECT_THROW(too_big.validate(5), std::invalid_argument);
    EXPECT_NO_THROW(too_big.validate(5, 5));

    EXPECT_NO_THROW(JunctionChain::pairwise(6).validate(6));
}

TEST(FitGrf, ProductDistributionIsExact) {
    auto p = product_distribution({0.05, 0.1, 0.03});
    auto model = fit_grf(p, JunctionChain::pairwise(3));
    EXPECT_TRUE(model.warnings.empty());
    for (size_t b = 0; b < 8; b++) {
        EXPECT_NEAR(grf_eval(model, b), p.values[b], 1e-12) << "pattern " << b;
    }
}

TEST(FitGrf, SingleCliqueIsLossless) {
    ProbVector p;
    p.layout = PartitionLayout::singletons(2);
    p.values = {0.93108333, 0.03519167, 0.03019167, 0.00353333};
    JunctionChain chain;
    chain.cliques = {{0, 1}};
    auto model = fit_grf(p, chain);
    auto dense = grf_to_dense(model);
    for (size_t b = 0; b < 4; b++) {
        EXPECT_NEAR(dense.values[b], p.values[b], 1e-9);
    }
    EXPECT_NEAR(compare_grf(p, model), 0.0, 1e-6);
}

TEST(FitGrf, ChainFactorizedTruthGivesZeroDistance) {
    auto p = chain_distribution(0.08, {{{0.05, 0.4}}, {{0.07, 0.5}}, {{0.04, 0.3}}});
    auto model = fit_grf(p, JunctionChain::pairwise(4));
    auto dense = grf_to_dense(model);
    for (size_t b = 0; b < dense.values.size(); b++) {
        EXPECT_NEAR(dense.values[b], p.values[b], 1e-9);
    }
    EXPECT_NEAR(compare_grf(p, model), 0.0, 1e-6);
}

TEST(FitGrf, CorrelatedTruthVsProductModelIsPositive) {
    auto p = chain_distribution(0.1, {{{0.05, 0.6}}});
    JunctionChain product_chain;
    product_chain.cliques = {{0}, {1}};
    auto model = fit_grf(p, product_chain);
    EXPECT_GT(compare_grf(p, model), 1e-3);
}

TEST(GrfEval, MatchesHandThreeVariableOracle) {
    auto p = chain_distribution(0.1, {{{0.2, 0.5}}, {{0.15, 0.45}}});
    auto model = fit_grf(p, JunctionChain::pairwise(3));
    // p(x0,x1) p(x1,x2) / p(x1) by hand for pattern (1, 0, 1).
    std::vector<size_t> c01 = {0, 1}, c12 = {1, 2}, s1 = {1};
    auto m01 = marginalize(p, c01);
    auto m12 = marginalize(p, c12);
    auto m1 = marginalize(p, s1);
    double expected = m01.values[1] * m12.values[2] / m1.values[0];
    EXPECT_NEAR(grf_eval(model, 0b101), expected, 1e-12);
}

TEST(GrfEval, SumsToOneByTelescoping) {
    RngStream rng(1618);
    for (size_t k : {1u, 2u, 5u, 9u, 16u}) {
        // Random, generally inconsistent clique tables still normalize
        // because separators come from the left cliques.
        JunctionChain chain = JunctionChain::pairwise(k);
        std::vector<std::vector<double>> tables;
        for (const auto &clique : chain.cliques) {
            tables.push_back(qnoise::testing::random_distribution(rng, size_t{1} << clique.size()));
        }
        auto model = make_grf_model(PartitionLayout::singletons(static_cast<uint32_t>(k)), chain, tables);
        double total = 0.0;
        for (size_t b = 0; b < (size_t{1} << k); b++) {
            double v = grf_eval(model, b);
            EXPECT_GT(v, 0.0);
            total += v;
        }
        EXPECT_NEAR(total, 1.0, 1e-9) << "k = " << k;
    }
}

TEST(FitGrf, SeparatorCalibrationAveragesNeighborEstimates) {
    // Two cliques disagreeing on the shared variable's marginal:
    // 0.15 from the left, 0.10 from the right.
    PartitionLayout layout = PartitionLayout::singletons(3);
    JunctionChain chain = JunctionChain::pairwise(3);
    std::vector<std::vector<double>> tables = {
        {0.80, 0.05, 0.10, 0.05},
        {0.75, 0.05, 0.15, 0.05},
    };
    GrfOptions options;
    options.consistency_tol = 1e-12;
    auto model = make_grf_model(layout, chain, tables, options);
    // After one calibration pass both cliques sit at the average 0.125.
    double left = model.clique_marginals[0][2] + model.clique_marginals[0][3];
    double right = model.clique_marginals[1][1] + model.clique_marginals[1][3];
    EXPECT_NEAR(left, 0.125, 1e-12);
    EXPECT_NEAR(right, 0.125, 1e-12);
}

TEST(FitGrf, RefitFromDenseIsIdempotent) {
    auto p = chain_distribution(0.07, {{{0.1, 0.5}}, {{0.06, 0.3}}});
    auto model = fit_grf(p, JunctionChain::pairwise(3));
    auto refit = fit_grf(grf_to_dense(model), JunctionChain::pairwise(3));
    for (size_t t = 0; t < model.clique_marginals.size(); t++) {
        for (size_t cell = 0; cell < model.clique_marginals[t].size(); cell++) {
            EXPECT_NEAR(model.clique_marginals[t][cell], refit.clique_marginals[t][cell], 1e-9);
        }
    }
}

TEST(FitGrf, MarkovPropertyOfFittedChain) {
    auto p = chain_distribution(0.12, {{{0.08, 0.45}}, {{0.09, 0.5}}, {{0.05, 0.35}}});
    auto model = fit_grf(p, JunctionChain::pairwise(4));
    auto dense = grf_to_dense(model);
    // Ends are independent given the separator variables between them.
    std::vector<size_t> a = {0}, b = {3}, c = {1, 2};
    EXPECT_NEAR(conditional_mutual_information(dense, a, b, c), 0.0, 1e-9);
    std::vector<size_t> c1 = {1};
    std::vector<size_t> b2 = {2};
    EXPECT_NEAR(conditional_mutual_information(dense, a, b2, c1), 0.0, 1e-9);
}

TEST(FitGrf, CallbackSourceAndWarnings) {
    // A correlated middle clique pulled in conflicting directions by both
    // separators: one averaging pass cannot fully reconcile it, so a
    // residual-inconsistency warning must be recorded while normalization
    // still holds exactly.
    PartitionLayout layout = PartitionLayout::singletons(4);
    JunctionChain chain = JunctionChain::pairwise(4);
    GrfOptions options;
    options.consistency_tol = 1e-6;
    auto source = [](std::span<const size_t> sets) {
        ProbVector p;
        p.layout = PartitionLayout::singletons(2);
        p.layout.sets = {{static_cast<uint32_t>(sets[0])}, {static_cast<uint32_t>(sets[1])}};
        if (sets[0] == 0) {
            p.values = {0.76, 0.04, 0.16, 0.04};  // P(x1=1) = 0.2
        } else if (sets[0] == 1) {
            p.values = {0.50, 0.30, 0.10, 0.10};  // P(x1=1) = 0.4, correlated
        } else {
            p.values = {0.55, 0.40, 0.03, 0.02};  // P(x2=1) = 0.42
        }
        return p;
    };
    auto model = fit_grf(source, layout, chain, options);
    EXPECT_FALSE(model.warnings.empty());
    double total = 0.0;
    for (size_t b = 0; b < 16; b++) {
        total += grf_eval(model, b);
    }
    EXPECT_NEAR(total, 1.0, 1e-9);
}

TEST(FitGrf, LadderChainWithMergedRungPairs) {
    // Fourteen variables arranged as a ladder, modeled as a chain whose
    // cliques merge the opposing rung pairs into shared separators.
    size_t k = 14;
    JunctionChain chain;
    chain.cliques = {
        {0, 1, 13}, {1, 2, 12, 13}, {2, 3, 11, 12}, {3, 4, 10, 11},
        {4, 5, 9, 10}, {5, 6, 8, 9}, {6, 7, 8}};
    chain.validate(k);
    PartitionLayout layout = PartitionLayout::singletons(static_cast<uint32_t>(k));

    RngStream rng(140);
    std::vector<std::vector<double>> tables;
    for (const auto &clique : chain.cliques) {
        tables.push_back(qnoise::testing::random_distribution(rng, size_t{1} << clique.size()));
    }
    auto truth = make_grf_model(layout, chain, tables);
    auto truth_dense = grf_to_dense(truth);
    double total = 0.0;
    for (double v : truth_dense.values) {
        total += v;
    }
    EXPECT_NEAR(total, 1.0, 1e-9);

    // A chain-factorized truth refits losslessly.
    auto refit = fit_grf(truth_dense, chain);
    EXPECT_NEAR(compare_grf(truth_dense, refit), 0.0, 1e-6);

    // Ends of the ladder are independent given a middle clique.
    std::vector<size_t> a = {0}, b = {7}, sep = {3, 4, 10, 11};
    EXPECT_NEAR(conditional_mutual_information(truth_dense, a, b, sep), 0.0, 1e-9);
}

TEST(ChainDistances, StreamingHellingerMatchesDense) {
    RngStream rng(31);
    for (size_t k : {2u, 5u, 10u, 16u}) {
        JunctionChain chain = JunctionChain::pairwise(k);
        PartitionLayout layout = PartitionLayout::singletons(static_cast<uint32_t>(k));
        std::vector<std::vector<double>> ta, tb;
        for (const auto &clique : chain.cliques) {
            ta.push_back(qnoise::testing::random_distribution(rng, size_t{1} << clique.size()));
            tb.push_back(qnoise::testing::random_distribution(rng, size_t{1} << clique.size()));
        }
        auto model_a = make_grf_model(layout, chain, ta);
        auto model_b = make_grf_model(layout, chain, tb);
        double streamed = chain_hellinger_distance(model_a, model_b);
        double dense =
            hellinger_distance(grf_to_dense(model_a).values, grf_to_dense(model_b).values);
        EXPECT_NEAR(streamed, dense, 1e-12) << "k = " << k;
        EXPECT_NEAR(chain_hellinger_distance(model_a, model_a), 0.0, 1e-7);
    }
}

TEST(ChainDistances, SampledJsdMatchesDenseWithinMonteCarloError) {
    RngStream rng(97);
    JunctionChain chain = JunctionChain::pairwise(8);
    PartitionLayout layout = PartitionLayout::singletons(8);
    std::vector<std::vector<double>> ta, tb;
    for (const auto &clique : chain.cliques) {
        (void)clique;
        ta.push_back(qnoise::testing::random_distribution(rng, 4));
        tb.push_back(qnoise::testing::random_distribution(rng, 4));
    }
    auto model_a = make_grf_model(layout, chain, ta);
    auto model_b = make_grf_model(layout, chain, tb);
    double dense = jensen_shannon_distance(grf_to_dense(model_a).values, grf_to_dense(model_b).values);
    double sampled = chain_jsd_sampled(model_a, model_b, 200000, 5, LogBase::two);
    EXPECT_NEAR(sampled, dense, 0.01);
    EXPECT_DOUBLE_EQ(chain_jsd_sampled(model_a, model_b, 1000, 7), chain_jsd_sampled(model_a, model_b, 1000, 7));
}

TEST(GrfSample, FrequenciesMatchModel) {
    auto p = chain_distribution(0.15, {{{0.1, 0.5}}, {{0.2, 0.6}}});
    auto model = fit_grf(p, JunctionChain::pairwise(3));
    RngStream rng = RngStream::keyed({123, 9});
    size_t samples = 200000;
    std::vector<double> freq(8, 0.0);
    for (size_t i = 0; i < samples; i++) {
        freq[grf_sample(model, rng)] += 1.0;
    }
    for (size_t b = 0; b < 8; b++) {
        freq[b] /= static_cast<double>(samples);
        double sigma = std::sqrt(p.values[b] * (1 - p.values[b]) / static_cast<double>(samples));
        EXPECT_NEAR(freq[b], p.values[b], 4 * sigma + 1e-4) << "pattern " << b;
    }
}

TEST(GrfToDense, RefusesAboveCap) {
    auto p = product_distribution({0.1, 0.1, 0.1});
    auto model = fit_grf(p, JunctionChain::pairwise(3));
    EXPECT_THROW(grf_to_dense(model, 2), std::invalid_argument);
}

TEST(ChainScaling, DistancesShrinkWithBudgetAndGrowWithLength) {
    ChainScalingOptions options;
    options.chain_lengths = {4, 16, 36, 64};
    options.instances_per_length = 6;
    options.shots_per_marginal = 2000;
    options.jsd_samples = 4000;
    options.threads = 2;
    auto rows = chain_scaling_experiment(options, 99);
    ASSERT_EQ(rows.size(), 4u);
    // Larger systems accumulate more estimation error at fixed budget.
    EXPECT_GT(rows[3].mean_hellinger, rows[0].mean_hellinger);
    EXPECT_GT(rows[3].mean_jsd, rows[0].mean_jsd);

    ChainScalingOptions rich = options;
    rich.shots_per_marginal = 200000;
    auto rich_rows = chain_scaling_experiment(rich, 99);
    EXPECT_LT(rich_rows[3].mean_hellinger, rows[3].mean_hellinger / 3.0);

    ChainScalingOptions single = options;
    single.chain_lengths = {1};
    auto single_rows = chain_scaling_experiment(single, 7);
    EXPECT_GT(single_rows[0].mean_hellinger, 0.0);
}

TEST(GrowthFit, PrefersTheCorrectModel) {
    std::vector<double> x, y_sqrt, y_linear;
    for (double v = 4; v <= 100; v += 4) {
        x.push_back(v);
        y_sqrt.push_back(0.03 * std::sqrt(v));
        y_linear.push_back(0.003 * v);
    }
    auto on_sqrt = compare_sqrt_vs_linear_growth(x, y_sqrt);
    EXPECT_GT(on_sqrt.sqrt_r_squared, on_sqrt.linear_r_squared);
    EXPECT_NEAR(on_sqrt.sqrt_coefficient, 0.03, 1e-12);
    auto on_linear = compare_sqrt_vs_linear_growth(x, y_linear);
    EXPECT_GT(on_linear.linear_r_squared, on_linear.sqrt_r_squared);
}
