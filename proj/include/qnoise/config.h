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

#ifndef QNOISE_CONFIG_H
#define QNOISE_CONFIG_H

#include <optional>
#include <string>

#include "qnoise/io.h"

namespace qnoise {

struct BootstrapConfig {
    size_t replicates = 1000;
    double level = 0.6827;
    ResamplingScheme scheme = ResamplingScheme::per_sequence;
    JsdResamplingMode jsd_mode = JsdResamplingMode::both;
};

/// Validated run description. Unknown keys anywhere in the file are
/// rejected rather than ignored.
struct RunConfig {
    uint64_t seed = 1;
    uint32_t n_qubits = 0;
    std::optional<PartitionLayout> layout;
    std::optional<NoiseModel> noise;
    std::optional<SpamModel> spam;
    std::vector<int64_t> lengths;
    uint32_t sequences_per_length = 0;
    uint64_t shots = 0;
    unsigned threads = 0;
    FitOptions fit;
    LogBase log_base = LogBase::natural;
    std::optional<JunctionChain> chain;
    GrfOptions grf;
    BootstrapConfig bootstrap;
    ChainScalingOptions chain_scaling;
    std::string output_dir = "out";

    std::string hash;  // canonical hash of the parsed file
    Json raw;

    PartitionLayout effective_layout() const;
    const NoiseModel &require_noise() const;
    SpamModel effective_spam() const;
};

RunConfig parse_run_config(const Json &j);
RunConfig load_run_config(const std::filesystem::path &path);

}  // namespace qnoise

#endif
