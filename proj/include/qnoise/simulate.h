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

#ifndef QNOISE_SIMULATE_H
#define QNOISE_SIMULATE_H

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qnoise/noise_model.h"

namespace qnoise {

/// Counts gathered from randomized sequences of varying length.
///
/// counts[i][s] maps an outcome bitstring (character q describes qubit q,
/// '1' meaning the qubit was flipped from its ideal value) to the number of
/// shots that produced it for lengths[i], sequence s.
struct ExperimentRecord {
    PartitionLayout layout;
    std::vector<int64_t> lengths;
    uint64_t shots = 0;
    uint64_t seed = 0;
    std::vector<std::vector<std::map<std::string, uint64_t>>> counts;

    /// Sequence count of the first length group (records sampled here are
    /// uniform; ingested ones may vary per length).
    size_t sequences_per_length() const;
    void validate() const;
};

/// Distribution of set-error patterns after a length-m sequence: the
/// inverse transform of the attenuated, m-fold composed eigenvalues.
/// Values driven below zero by no more than 1e-12 of rounding are projected
/// back onto the simplex. Throws on negative m.
ProbVector sequence_distribution(const EigenvalueVector &eigenvalues, const SpamModel &spam, int64_t length);

struct SampleOptions {
    unsigned threads = 0;
};

/// Draws shot counts for every (length, sequence) cell. Each cell uses its
/// own random stream keyed by (seed, length, sequence index), so the record
/// is bitwise identical for any thread count.
ExperimentRecord sample_experiment(
    const NoiseModel &model,
    const SpamModel &spam,
    const PartitionLayout &layout,
    std::vector<int64_t> lengths,
    uint32_t sequences_per_length,
    uint64_t shots,
    uint64_t seed,
    const SampleOptions &options = {});

}  // namespace qnoise

#endif
