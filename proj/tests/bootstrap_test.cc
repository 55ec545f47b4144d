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

#include <cmath>

#include "gtest/gtest.h"
#include "test_util.h"

using namespace qnoise;

namespace {

ExperimentRecord small_record(uint64_t seed) {
    RngStream rng(seed);
    NoiseModel model = qnoise::testing::random_per_qubit_model(rng, 2, 0.08);
    return sample_experiment(
        model, SpamModel::ideal(2), PartitionLayout::singletons(2), {1, 3, 6, 10}, 6, 400, seed);
}

}  // namespace

TEST(Resample, DegenerateCountsAreReproducedExactly) {
    ExperimentRecord record;
    record.layout = PartitionLayout::singletons(1);
    record.lengths = {1, 4};
    record.shots = 50;
    record.counts = {
        {{{"0", 50u}}, {{"1", 50u}}},
        {{{"0", 50u}}, {{"0", 50u}}},
    };
    auto resampled = resample_record(record, 77);
    EXPECT_EQ(resampled.counts, record.counts);
}

TEST(Resample, DeterministicGivenSeed) {
    auto record = small_record(3);
    auto a = resample_record(record, 555);
    auto b = resample_record(record, 555);
    EXPECT_EQ(a.counts, b.counts);
    auto c = resample_record(record, 556);
    EXPECT_NE(a.counts, c.counts);
}

TEST(Resample, FrequenciesAreUnbiased) {
    // Expectation of resampled frequencies equals the original frequencies.
    ExperimentRecord record;
    record.layout = PartitionLayout::singletons(1);
    record.lengths = {1};
    record.shots = 100;
    record.counts = {{{{"0", 70u}, {"1", 30u}}}};

    double total_ones = 0.0;
    int reps = 10000;
    for (int rep = 0; rep < reps; rep++) {
        auto resampled = resample_record(record, 1000 + rep);
        auto it = resampled.counts[0][0].find("1");
        if (it != resampled.counts[0][0].end()) {
            total_ones += static_cast<double>(it->second);
        }
    }
    double mean = total_ones / reps / 100.0;
    double sigma = std::sqrt(0.3 * 0.7 / (100.0 * reps));
    EXPECT_NEAR(mean, 0.3, 3 * sigma);
}

TEST(Resample, PooledSchemeMixesSequences) {
    ExperimentRecord record;
    record.layout = PartitionLayout::singletons(1);
    record.lengths = {1};
    record.shots = 1000;
    record.counts = {{{{"0", 1000u}}, {{"1", 1000u}}}};
    // Per-sequence resampling keeps each sequence degenerate; pooled
    // resampling draws each sequence from the 50/50 mixture.
    auto per_sequence = resample_record(record, 9, ResamplingScheme::per_sequence);
    EXPECT_EQ(per_sequence.counts[0][0].size(), 1u);
    auto pooled = resample_record(record, 9, ResamplingScheme::pooled);
    EXPECT_EQ(pooled.counts[0][0].size(), 2u);
}

TEST(PercentileRanks, ReproducesOneSigmaConvention) {
    auto [lo, hi] = percentile_ranks(1000, 0.6827);
    EXPECT_EQ(lo, 159u);
    EXPECT_EQ(hi, 841u);
}

TEST(PercentileRanks, MonotoneInLevel) {
    auto narrow = percentile_ranks(1000, 0.5);
    auto wide = percentile_ranks(1000, 0.95);
    EXPECT_LE(wide.first, narrow.first);
    EXPECT_GE(wide.second, narrow.second);
}

TEST(PercentileInterval, OrderStatisticIdentityOnUniformValues) {
    std::vector<double> values;
    for (int i = 1; i <= 1000; i++) {
        values.push_back(static_cast<double>(i));
    }
    auto ci = percentile_interval(values, 0.6827);
    EXPECT_DOUBLE_EQ(ci.lo, 159.0);
    EXPECT_DOUBLE_EQ(ci.hi, 841.0);
    EXPECT_EQ(ci.n_used, 1000u);
}

TEST(PercentileInterval, ConstantValuesAndNonFiniteHandling) {
    std::vector<double> constant(100, 3.5);
    auto ci = percentile_interval(constant, 0.6827);
    EXPECT_DOUBLE_EQ(ci.lo, 3.5);
    EXPECT_DOUBLE_EQ(ci.hi, 3.5);

    std::vector<double> with_nan = {1.0, 2.0, std::nan(""), 3.0};
    auto trimmed = percentile_interval(with_nan, 0.5);
    EXPECT_EQ(trimmed.n_used, 3u);

    std::vector<double> all_nan = {std::nan(""), std::nan("")};
    EXPECT_THROW(percentile_interval(all_nan, 0.5), std::invalid_argument);
}

TEST(PercentileInterval, LargerLevelContainsSmaller) {
    RngStream rng(42);
    std::vector<double> values;
    for (int i = 0; i < 500; i++) {
        values.push_back(rng.next_double());
    }
    auto narrow = percentile_interval(values, 0.5);
    auto wide = percentile_interval(values, 0.9);
    EXPECT_LE(wide.lo, narrow.lo);
    EXPECT_GE(wide.hi, narrow.hi);
}

TEST(Ensemble, DeterministicForAnyThreadCount) {
    auto record = small_record(8);
    BootstrapOptions options;
    options.n_replicates = 24;
    options.threads = 1;
    auto serial = bootstrap_ensemble(record, options, 99);
    options.threads = 4;
    auto parallel_run = bootstrap_ensemble(record, options, 99);
    ASSERT_EQ(serial.replicates.size(), parallel_run.replicates.size());
    for (size_t r = 0; r < serial.replicates.size(); r++) {
        EXPECT_EQ(serial.replicates[r].eigenvalues.values, parallel_run.replicates[r].eigenvalues.values);
    }
    EXPECT_THROW(bootstrap_ensemble(record, BootstrapOptions{.n_replicates = 1}, 5), std::invalid_argument);
}

TEST(Ensemble, DegenerateRecordGivesIdenticalReplicates) {
    ExperimentRecord record;
    record.layout = PartitionLayout::singletons(1);
    record.lengths = {1, 3, 6};
    record.shots = 100;
    record.counts = {
        {{{"0", 90u}, {"1", 10u}}},
        {{{"0", 90u}, {"1", 10u}}},
        {{{"0", 90u}, {"1", 10u}}},
    };
    // Sequences with a single outcome resample to themselves; here counts
    // vary, so replicate spread must be nonzero...
    BootstrapOptions options;
    options.n_replicates = 16;
    auto ensemble = bootstrap_ensemble(record, options, 4);
    bool any_different = false;
    for (const auto &replicate : ensemble.replicates) {
        if (replicate.eigenvalues.values != ensemble.replicates[0].eigenvalues.values) {
            any_different = true;
        }
    }
    EXPECT_TRUE(any_different);

    // ...whereas genuinely degenerate counts give identical replicates.
    ExperimentRecord point_mass = record;
    for (auto &group : point_mass.counts) {
        group = {{{"0", 100u}}};
    }
    auto degenerate = bootstrap_ensemble(point_mass, options, 4);
    for (const auto &replicate : degenerate.replicates) {
        EXPECT_EQ(replicate.eigenvalues.values, degenerate.replicates[0].eigenvalues.values);
    }
}

TEST(Ensemble, ReplicateSpreadShrinksWithShots) {
    RngStream rng(15);
    NoiseModel model = qnoise::testing::random_per_qubit_model(rng, 1, 0.06);
    PartitionLayout layout = PartitionLayout::singletons(1);
    BootstrapOptions options;
    options.n_replicates = 60;

    auto spread_for = [&](uint64_t shots) {
        auto record = sample_experiment(model, SpamModel::ideal(1), layout, {1, 3, 6, 10}, 4, shots, 21);
        auto ensemble = bootstrap_ensemble(record, options, 7);
        double mean = 0, mean_sq = 0;
        for (const auto &replicate : ensemble.replicates) {
            double v = replicate.eigenvalues.values[1];
            mean += v;
            mean_sq += v * v;
        }
        mean /= options.n_replicates;
        return std::sqrt(std::max(mean_sq / options.n_replicates - mean * mean, 0.0));
    };
    double coarse = spread_for(200);
    double fine = spread_for(20000);
    // 100x the shots should shrink the spread by about 10x.
    EXPECT_LT(fine, coarse / 4.0);
}

TEST(CorrelationMatrixCi, DiagonalIsPinnedAndProductCoversZero) {
    auto record = small_record(100);
    BootstrapOptions options;
    options.n_replicates = 200;
    auto ensemble = bootstrap_ensemble(record, options, 3);
    auto ci = correlation_matrix_ci(ensemble, 0.6827);
    ASSERT_EQ(ci.k, 2u);
    EXPECT_DOUBLE_EQ(ci.lo[0], 1.0);
    EXPECT_DOUBLE_EQ(ci.hi[0], 1.0);
    EXPECT_DOUBLE_EQ(ci.lo[3], 1.0);
    EXPECT_LE(ci.lo[1], ci.hi[1]);
    // Independent truth: a wide interval straddles zero (a one-sigma one
    // misses it on a third of records by construction).
    auto wide = correlation_matrix_ci(ensemble, 0.99);
    EXPECT_LT(wide.lo[1], 0.0);
    EXPECT_GT(wide.hi[1], 0.0);
}

TEST(JsdCi, BothModeContainsEachSingleMode) {
    auto record = small_record(2024);
    ReconstructionResult original = reconstruct(record);
    BootstrapOptions options;
    options.n_replicates = 40;
    auto ensemble = bootstrap_ensemble(record, options, 11);
    JunctionChain chain = JunctionChain::pairwise(2);

    auto fixed = jsd_ci(ensemble, original, chain, JsdResamplingMode::fixed_model, 0.6827);
    auto refit = jsd_ci(ensemble, original, chain, JsdResamplingMode::per_replicate_model, 0.6827);
    auto both = jsd_ci(ensemble, original, chain, JsdResamplingMode::both, 0.6827);
    EXPECT_LE(both.lo, fixed.lo);
    EXPECT_LE(both.lo, refit.lo);
    EXPECT_GE(both.hi, fixed.hi);
    EXPECT_GE(both.hi, refit.hi);
}
