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

#include "qnoise/analysis.h"

#include <cmath>

#include "gtest/gtest.h"
#include "qnoise/noise_model.h"
#include "qnoise/pauli.h"
#include "test_util.h"

using namespace qnoise;

namespace {

ProbVector altered_example() {
    ProbVector p;
    p.layout = PartitionLayout::singletons(2);
    double l1 = 0.92255, l2 = 0.93255, l3 = 7.8231 / 9.0;
    p.values = {
        (1 + l1 + l2 + l3) / 4,
        (1 - l1 + l2 - l3) / 4,
        (1 + l1 - l2 - l3) / 4,
        (1 - l1 - l2 + l3) / 4,
    };
    return p;
}

ProbVector product_three_sets() {
    ProbVector p;
    p.layout = PartitionLayout::singletons(3);
    double e[3] = {0.03, 0.08, 0.05};
    p.values.resize(8);
    for (size_t b = 0; b < 8; b++) {
        double v = 1.0;
        for (size_t i = 0; i < 3; i++) {
            v *= ((b >> i) & 1u) ? e[i] : (1 - e[i]);
        }
        p.values[b] = v;
    }
    return p;
}

}  // namespace

TEST(KlDivergence, BasicValuesAndSupportRule) {
    std::vector<double> p = {0.5, 0.5};
    EXPECT_NEAR(kl_divergence(p, p), 0.0, 1e-15);
    std::vector<double> point = {1.0, 0.0};
    std::vector<double> uniform = {0.5, 0.5};
    EXPECT_NEAR(kl_divergence(point, uniform), std::log(2.0), 1e-15);
    EXPECT_THROW(kl_divergence(uniform, point), std::domain_error);
}

TEST(JensenShannon, KnownValuesAndBounds) {
    std::vector<double> p = {0.5, 0.5};
    std::vector<double> q = {1.0, 0.0};
    EXPECT_NEAR(jensen_shannon_distance(p, p), 0.0, 1e-15);
    EXPECT_NEAR(jensen_shannon_distance(p, q), 0.5579230452841438, 1e-12);
    std::vector<double> a = {1.0, 0.0};
    std::vector<double> b = {0.0, 1.0};
    EXPECT_NEAR(jensen_shannon_distance(a, b), 1.0, 1e-15);
    EXPECT_NEAR(jensen_shannon_distance(a, b, LogBase::natural), std::sqrt(std::log(2.0)), 1e-15);
}

TEST(HellingerAndTvd, ExtremesAndSandwich) {
    std::vector<double> a = {1.0, 0.0};
    std::vector<double> b = {0.0, 1.0};
    EXPECT_NEAR(hellinger_distance(a, a), 0.0, 1e-15);
    EXPECT_NEAR(hellinger_distance(a, b), 1.0, 1e-15);
    EXPECT_NEAR(total_variation_distance(a, b), 1.0, 1e-15);

    RngStream rng(8);
    for (int trial = 0; trial < 500; trial++) {
        auto p = qnoise::testing::random_distribution(rng, 4);
        auto q = qnoise::testing::random_distribution(rng, 4);
        double h = hellinger_distance(p, q);
        double d = total_variation_distance(p, q);
        EXPECT_LE(h * h, d + 1e-12);
        EXPECT_LE(d, std::sqrt(2.0) * h + 1e-12);
    }
}

TEST(Metrics, AxiomsOnRandomTriples) {
    RngStream rng(9);
    for (int trial = 0; trial < 300; trial++) {
        size_t dim = size_t{1} << (1 + rng.next_below(3));
        auto p = qnoise::testing::random_distribution(rng, dim);
        auto q = qnoise::testing::random_distribution(rng, dim);
        auto r = qnoise::testing::random_distribution(rng, dim);
        EXPECT_NEAR(jensen_shannon_distance(p, q), jensen_shannon_distance(q, p), 1e-12);
        EXPECT_NEAR(hellinger_distance(p, q), hellinger_distance(q, p), 1e-12);
        EXPECT_LE(
            jensen_shannon_distance(p, r),
            jensen_shannon_distance(p, q) + jensen_shannon_distance(q, r) + 1e-12);
        EXPECT_LE(
            hellinger_distance(p, r), hellinger_distance(p, q) + hellinger_distance(q, r) + 1e-12);
        EXPECT_NEAR(jensen_shannon_distance(p, p), 0.0, 1e-12);
    }
}

TEST(MutualInformation, ProductIsZeroPerfectCorrelationIsLog2) {
    auto p = product_three_sets();
    std::vector<size_t> a = {0}, b = {1};
    EXPECT_NEAR(mutual_information(p, a, b), 0.0, 1e-12);

    ProbVector coupled;
    coupled.layout = PartitionLayout::singletons(2);
    coupled.values = {0.5, 0.0, 0.0, 0.5};
    EXPECT_NEAR(mutual_information(coupled, a, b), std::log(2.0), 1e-12);
    EXPECT_NEAR(mutual_information(coupled, a, b, LogBase::two), 1.0, 1e-12);
}

TEST(MutualInformation, AlteredExampleIsPositiveAndGroupsWork) {
    auto p = altered_example();
    std::vector<size_t> a = {0}, b = {1};
    double mi = mutual_information(p, a, b);
    EXPECT_GT(mi, 1e-5);

    // Brute-force oracle over the 4 entries.
    double e0 = p.values[1] + p.values[3];
    double e1 = p.values[2] + p.values[3];
    double oracle = 0.0;
    for (size_t x = 0; x < 2; x++) {
        for (size_t y = 0; y < 2; y++) {
            double joint = p.values[x + 2 * y];
            double px = x ? e0 : 1 - e0;
            double py = y ? e1 : 1 - e1;
            oracle += joint * std::log(joint / (px * py));
        }
    }
    EXPECT_NEAR(mi, oracle, 1e-12);
    EXPECT_THROW(mutual_information(p, a, a), std::invalid_argument);
}

TEST(MutualInformation, BoundedByMarginalEntropy) {
    RngStream rng(77);
    for (int trial = 0; trial < 100; trial++) {
        ProbVector p;
        p.layout = PartitionLayout::singletons(3);
        p.values = qnoise::testing::random_distribution(rng, 8);
        std::vector<size_t> a = {0}, b = {1, 2};
        double mi = mutual_information(p, a, b);
        auto entropy = [&](std::span<const size_t> group) {
            auto marg = marginalize(p, group);
            double h = 0.0;
            for (double v : marg.values) {
                if (v > 0) {
                    h -= v * std::log(v);
                }
            }
            return h;
        };
        EXPECT_GE(mi, -1e-12);
        EXPECT_LE(mi, entropy(a) + 1e-9);
        EXPECT_LE(mi, entropy(b) + 1e-9);
    }
}

TEST(ConditionalMutualInformation, MarkovChainGivesZero) {
    // p(x0, x1, x2) = p(x0) p(x1|x0) p(x2|x1): ends independent given middle.
    ProbVector p;
    p.layout = PartitionLayout::singletons(3);
    p.values.resize(8);
    double p0 = 0.1;
    double t01[2] = {0.2, 0.7};  // P(next=1 | current)
    double t12[2] = {0.3, 0.6};
    for (size_t b = 0; b < 8; b++) {
        size_t x0 = b & 1, x1 = (b >> 1) & 1, x2 = (b >> 2) & 1;
        double v = x0 ? p0 : 1 - p0;
        v *= x1 ? t01[x0] : 1 - t01[x0];
        v *= x2 ? t12[x1] : 1 - t12[x1];
        p.values[b] = v;
    }
    std::vector<size_t> a = {0}, b = {2}, c = {1};
    EXPECT_NEAR(conditional_mutual_information(p, a, b, c), 0.0, 1e-12);
    EXPECT_GT(mutual_information(p, a, b), 1e-4);  // dependent without conditioning

    auto independent = product_three_sets();
    EXPECT_NEAR(conditional_mutual_information(independent, a, b, c), 0.0, 1e-12);
}

TEST(ConditionalMutualInformation, MatchesBruteForceOracle) {
    RngStream rng(123);
    for (int trial = 0; trial < 50; trial++) {
        ProbVector p;
        p.layout = PartitionLayout::singletons(3);
        p.values = qnoise::testing::random_distribution(rng, 8);
        std::vector<size_t> a = {0}, b = {1}, c = {2};
        double value = conditional_mutual_information(p, a, b, c);

        double oracle = 0.0;
        for (size_t z = 0; z < 2; z++) {
            double pz = 0, pxz[2] = {0, 0}, pyz[2] = {0, 0};
            for (size_t b_idx = 0; b_idx < 8; b_idx++) {
                if (((b_idx >> 2) & 1u) != z) {
                    continue;
                }
                pz += p.values[b_idx];
                pxz[b_idx & 1] += p.values[b_idx];
                pyz[(b_idx >> 1) & 1] += p.values[b_idx];
            }
            for (size_t x = 0; x < 2; x++) {
                for (size_t y = 0; y < 2; y++) {
                    double v = p.values[x + 2 * y + 4 * z];
                    if (v > 0) {
                        oracle += v * std::log(pz * v / (pxz[x] * pyz[y]));
                    }
                }
            }
        }
        EXPECT_NEAR(value, oracle, 1e-12);
        EXPECT_GE(value, -1e-12);
    }
}

TEST(Covariance, ProductIsDiagonalAndCorrelationIdentity) {
    auto p = product_three_sets();
    auto cov = covariance_matrix(p);
    for (size_t i = 0; i < 3; i++) {
        for (size_t j = 0; j < 3; j++) {
            if (i != j) {
                EXPECT_NEAR(cov[i * 3 + j], 0.0, 1e-12);
            }
        }
    }
    EXPECT_NEAR(cov[0], 0.03 * 0.97, 1e-12);
    auto corr = correlation_matrix(p);
    for (size_t i = 0; i < 3; i++) {
        for (size_t j = 0; j < 3; j++) {
            EXPECT_NEAR(corr.at(i, j), i == j ? 1.0 : 0.0, 1e-12);
        }
    }
}

TEST(Covariance, AlteredExampleCorrelationEntry) {
    auto corr = correlation_matrix(altered_example());
    EXPECT_NEAR(corr.at(0, 1), 0.0639497067, 1e-7);
}

TEST(Covariance, ZeroVarianceRowsAreFlagged) {
    ProbVector p;
    p.layout = PartitionLayout::singletons(2);
    p.values = {0.9, 0.0, 0.1, 0.0};  // set 0 never errs
    auto corr = correlation_matrix(p);
    EXPECT_EQ(corr.zero_variance[0], 1);
    EXPECT_EQ(corr.zero_variance[1], 0);
    EXPECT_DOUBLE_EQ(corr.at(0, 1), 0.0);
    EXPECT_DOUBLE_EQ(corr.at(0, 0), 1.0);
}

TEST(Covariance, CorrelationMatrixIsPositiveSemidefinite) {
    RngStream rng(314159);
    for (int trial = 0; trial < 40; trial++) {
        size_t k = 2 + rng.next_below(5);
        ProbVector p;
        p.layout = PartitionLayout::singletons(static_cast<uint32_t>(k));
        p.values = qnoise::testing::random_distribution(rng, size_t{1} << k);
        auto corr = correlation_matrix(p);
        auto eigenvalues = qnoise::testing::symmetric_eigenvalues(corr.values, k);
        for (double v : eigenvalues) {
            EXPECT_GE(v, -1e-9);
        }
    }
}

// Correlation sign patterns agree between the observed-rate distribution
// and the averaged full-rate distribution of the same noise.
TEST(Covariance, ObservedAndAveragedRatesShareSignPattern) {
    RngStream rng(2025);
    for (int trial = 0; trial < 10; trial++) {
        uint32_t n = 3 + static_cast<uint32_t>(rng.next_below(3));
        auto rates = qnoise::testing::random_pauli_rates(rng, n, 0.8);
        NoiseModel model;
        model.n_qubits = n;
        model.kind = rates;
        PartitionLayout layout = PartitionLayout::singletons(n);
        auto averaged = clifford_average(model, layout);
        auto observed = probabilities_from_eigenvalues(averaged);

        auto corr_observed = correlation_matrix(observed);

        // Group the averaged 4^n rates by error pattern.
        auto full = pauli_rates_from_averaged_eigenvalues(averaged);
        ProbVector grouped;
        grouped.layout = layout;
        grouped.values.assign(size_t{1} << n, 0.0);
        for (size_t label = 0; label < full.values.size(); label++) {
            grouped.values[pauli_label_to_reduced_index(pauli_index_to_label(label, n))] += full.values[label];
        }
        auto corr_grouped = correlation_matrix(grouped);

        for (size_t i = 0; i < n; i++) {
            for (size_t j = i + 1; j < n; j++) {
                double a = corr_observed.at(i, j);
                double b = corr_grouped.at(i, j);
                if (std::abs(a) > 1e-9 || std::abs(b) > 1e-9) {
                    EXPECT_GT(a * b, 0.0) << "cell " << i << "," << j;
                }
            }
        }
    }
}

TEST(Fidelity, SingleQubitAndIdentity) {
    EigenvalueVector eigs;
    eigs.layout = PartitionLayout::singletons(1);
    eigs.values = {1.0, 0.94};
    std::vector<size_t> subset = {0};
    auto f = fidelity_from_eigenvalues(eigs, subset);
    EXPECT_NEAR(f.fidelity, 0.97, 1e-12);
    EXPECT_NEAR(f.average_error_rate, 0.03, 1e-12);

    eigs.values = {1.0, 1.0};
    EXPECT_NEAR(fidelity_from_eigenvalues(eigs, subset).fidelity, 1.0, 1e-15);
}

TEST(Fidelity, TwoQubitMultiplicityWeights) {
    EigenvalueVector eigs;
    eigs.layout = PartitionLayout::singletons(2);
    eigs.values = {1.0, 0.93, 0.94, 0.8742};
    std::vector<size_t> subset = {0, 1};
    auto f = fidelity_from_eigenvalues(eigs, subset);
    double mean = (3 * 0.93 + 3 * 0.94 + 9 * 0.8742) / 15.0;
    EXPECT_NEAR(f.mean_eigenvalue, mean, 1e-12);
    EXPECT_NEAR(f.fidelity, (3 * mean + 1) / 4.0, 1e-12);
    std::vector<size_t> empty;
    EXPECT_THROW(fidelity_from_eigenvalues(eigs, empty), std::invalid_argument);
}

TEST(Fidelity, MatchesDenseRouteOnSubsets) {
    RngStream rng(606);
    for (int trial = 0; trial < 10; trial++) {
        uint32_t n = 3;
        auto rates = qnoise::testing::random_pauli_rates(rng, n, 0.75);
        NoiseModel model;
        model.n_qubits = n;
        model.kind = rates;
        PartitionLayout layout = PartitionLayout::singletons(n);
        auto averaged = clifford_average(model, layout);

        for (size_t subset_bits = 1; subset_bits < 8; subset_bits++) {
            std::vector<size_t> subset;
            for (size_t i = 0; i < 3; i++) {
                if ((subset_bits >> i) & 1u) {
                    subset.push_back(i);
                }
            }
            auto direct = fidelity_from_eigenvalues(averaged, subset);

            // Dense route: expand the marginal to full averaged rates, take
            // eigenvalues, average the nontrivial ones uniformly.
            auto marg = marginalize_eigs(averaged, subset);
            auto dense_rates = pauli_rates_from_averaged_eigenvalues(marg);
            auto dense_eigs = pauli_eigenvalues_from_rates(dense_rates);
            double mean = 0.0;
            for (size_t i = 1; i < dense_eigs.size(); i++) {
                mean += dense_eigs[i];
            }
            mean /= static_cast<double>(dense_eigs.size() - 1);
            double d = std::pow(2.0, static_cast<double>(subset.size()));
            EXPECT_NEAR(direct.fidelity, ((d - 1) * mean + 1) / d, 1e-10);
        }
    }
}
