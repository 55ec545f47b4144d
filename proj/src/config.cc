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

#include "qnoise/config.h"

#include <algorithm>

#include "qnoise/errors.h"

namespace qnoise {

namespace {

void check_keys(const Json &j, std::initializer_list<const char *> allowed, const char *where) {
    if (!j.is_object()) {
        throw ConfigError(std::string(where) + ": expected an object");
    }
    for (const auto &[key, value] : j.items()) {
        (void)value;
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char *a) { return key == a; }) ==
            allowed.end()) {
            throw ConfigError(std::string(where) + ": unknown key \"" + key + "\"");
        }
    }
}

// Scalars broadcast to per-qubit vectors.
std::vector<double> per_qubit_values(const Json &j, uint32_t n_qubits, const char *where) {
    if (j.is_number()) {
        return std::vector<double>(n_qubits, j.get<double>());
    }
    if (j.is_array()) {
        auto v = j.get<std::vector<double>>();
        if (v.size() != n_qubits) {
            throw ConfigError(std::string(where) + ": expected " + std::to_string(n_qubits) + " entries");
        }
        return v;
    }
    throw ConfigError(std::string(where) + ": expected a number or an array");
}

NoiseModel parse_noise(const Json &j, uint32_t n_qubits) {
    check_keys(j, {"type", "rates", "initial", "transitions", "pair_interactions"}, "noise");
    if (!j.contains("type")) {
        throw ConfigError("noise: missing \"type\"");
    }
    std::string type = j.at("type").get<std::string>();
    NoiseModel model;
    model.n_qubits = n_qubits;
    if (type == "per_qubit") {
        PerQubitPaulis paulis;
        for (const auto &row : j.at("rates")) {
            auto triple = row.get<std::vector<double>>();
            if (triple.size() != 3) {
                throw ConfigError("noise: per_qubit rates must be [px, py, pz] triples");
            }
            paulis.rates.push_back({triple[0], triple[1], triple[2]});
        }
        model.kind = std::move(paulis);
    } else if (type == "explicit") {
        PauliErrorRates rates;
        rates.n_qubits = n_qubits;
        rates.values = j.at("rates").get<std::vector<double>>();
        model.kind = std::move(rates);
    } else if (type == "chain") {
        PauliChainNoise chain;
        chain.initial = j.at("initial").get<std::vector<double>>();
        chain.transitions = j.at("transitions").get<std::vector<std::vector<double>>>();
        model.kind = std::move(chain);
    } else {
        throw ConfigError("noise: unknown type \"" + type + "\" (expected per_qubit, explicit, or chain)");
    }
    if (j.contains("pair_interactions")) {
        for (const auto &pj : j.at("pair_interactions")) {
            check_keys(pj, {"qubits", "rates"}, "noise.pair_interactions");
            auto qubits = pj.at("qubits").get<std::vector<uint32_t>>();
            if (qubits.size() != 2) {
                throw ConfigError("noise.pair_interactions: \"qubits\" must list exactly two qubits");
            }
            PairInteraction pi;
            pi.qubit_a = qubits[0];
            pi.qubit_b = qubits[1];
            pi.rates.n_qubits = 2;
            pi.rates.values = pj.at("rates").get<std::vector<double>>();
            model.pair_interactions.push_back(std::move(pi));
        }
    }
    try {
        model.validate();
    } catch (const std::invalid_argument &e) {
        throw ConfigError(std::string("noise: ") + e.what());
    }
    return model;
}

SpamModel parse_spam(const Json &j, uint32_t n_qubits) {
    check_keys(j, {"prep_flip", "readout_flip", "confusion_0to1", "confusion_1to0"}, "spam");
    SpamModel spam = SpamModel::ideal(n_qubits);
    if (j.contains("prep_flip")) {
        spam.prep_flip = per_qubit_values(j.at("prep_flip"), n_qubits, "spam.prep_flip");
    }
    if (j.contains("readout_flip")) {
        spam.readout_flip = per_qubit_values(j.at("readout_flip"), n_qubits, "spam.readout_flip");
    }
    if (j.contains("confusion_0to1") != j.contains("confusion_1to0")) {
        throw ConfigError("spam: confusion probabilities must be given in both directions");
    }
    if (j.contains("confusion_0to1")) {
        spam.confusion_0to1 = per_qubit_values(j.at("confusion_0to1"), n_qubits, "spam.confusion_0to1");
        spam.confusion_1to0 = per_qubit_values(j.at("confusion_1to0"), n_qubits, "spam.confusion_1to0");
    }
    try {
        spam.validate(n_qubits);
    } catch (const std::invalid_argument &e) {
        throw ConfigError(std::string("spam: ") + e.what());
    }
    return spam;
}

FitOptions parse_fit(const Json &j) {
    check_keys(j, {"threshold_constant", "min_points", "nonlinear_refine"}, "fit");
    FitOptions fit;
    if (j.contains("threshold_constant") && !j.at("threshold_constant").is_null()) {
        fit.threshold_constant = j.at("threshold_constant").get<double>();
    }
    fit.min_points = j.value("min_points", 3);
    fit.nonlinear_refine = j.value("nonlinear_refine", false);
    if (fit.min_points < 2) {
        throw ConfigError("fit: min_points must be at least 2");
    }
    return fit;
}

LogBase parse_log_base(const Json &j) {
    std::string base = j.get<std::string>();
    if (base == "natural") {
        return LogBase::natural;
    }
    if (base == "two") {
        return LogBase::two;
    }
    throw ConfigError("analysis.log_base must be \"natural\" or \"two\"");
}

JunctionChain parse_chain(const Json &j) {
    check_keys(j, {"cliques"}, "chain");
    JunctionChain chain;
    chain.cliques = j.at("cliques").get<std::vector<std::vector<size_t>>>();
    for (auto &clique : chain.cliques) {
        std::sort(clique.begin(), clique.end());
    }
    return chain;
}

BootstrapConfig parse_bootstrap(const Json &j) {
    check_keys(j, {"replicates", "level", "resampling", "jsd_mode"}, "bootstrap");
    BootstrapConfig config;
    config.replicates = j.value("replicates", size_t{1000});
    config.level = j.value("level", 0.6827);
    if (j.contains("resampling")) {
        std::string scheme = j.at("resampling").get<std::string>();
        if (scheme == "per_sequence") {
            config.scheme = ResamplingScheme::per_sequence;
        } else if (scheme == "pooled") {
            config.scheme = ResamplingScheme::pooled;
        } else {
            throw ConfigError("bootstrap.resampling must be \"per_sequence\" or \"pooled\"");
        }
    }
    if (j.contains("jsd_mode")) {
        std::string mode = j.at("jsd_mode").get<std::string>();
        if (mode == "fixed_model") {
            config.jsd_mode = JsdResamplingMode::fixed_model;
        } else if (mode == "per_replicate_model") {
            config.jsd_mode = JsdResamplingMode::per_replicate_model;
        } else if (mode == "both") {
            config.jsd_mode = JsdResamplingMode::both;
        } else {
            throw ConfigError("bootstrap.jsd_mode must be \"fixed_model\", \"per_replicate_model\", or \"both\"");
        }
    }
    if (config.replicates < 2) {
        throw ConfigError("bootstrap.replicates must be at least 2");
    }
    if (!(config.level > 0.0 && config.level < 1.0)) {
        throw ConfigError("bootstrap.level must lie in (0, 1)");
    }
    return config;
}

ChainScalingOptions parse_chain_scaling(const Json &j) {
    check_keys(
        j,
        {"lengths", "instances", "shots_per_marginal", "jsd_samples", "error_rate_range", "correlation_range"},
        "chain_scaling");
    ChainScalingOptions options;
    if (j.contains("lengths")) {
        options.chain_lengths = j.at("lengths").get<std::vector<size_t>>();
    }
    options.instances_per_length = j.value("instances", size_t{20});
    options.shots_per_marginal = j.value("shots_per_marginal", uint64_t{4000});
    options.jsd_samples = j.value("jsd_samples", size_t{20000});
    if (j.contains("error_rate_range")) {
        auto range = j.at("error_rate_range").get<std::vector<double>>();
        if (range.size() != 2) {
            throw ConfigError("chain_scaling.error_rate_range must be [min, max]");
        }
        options.error_rate_min = range[0];
        options.error_rate_max = range[1];
    }
    if (j.contains("correlation_range")) {
        auto range = j.at("correlation_range").get<std::vector<double>>();
        if (range.size() != 2) {
            throw ConfigError("chain_scaling.correlation_range must be [min, max]");
        }
        options.correlation_min = range[0];
        options.correlation_max = range[1];
    }
    return options;
}

GrfOptions parse_grf(const Json &j) {
    check_keys(j, {"consistency_tol", "positivity_floor", "max_clique_size", "dense_set_cap"}, "grf");
    GrfOptions options;
    options.consistency_tol = j.value("consistency_tol", options.consistency_tol);
    options.positivity_floor = j.value("positivity_floor", options.positivity_floor);
    options.max_clique_size = j.value("max_clique_size", options.max_clique_size);
    options.dense_set_cap = j.value("dense_set_cap", options.dense_set_cap);
    return options;
}

}  // namespace

PartitionLayout RunConfig::effective_layout() const {
    if (layout.has_value()) {
        return *layout;
    }
    if (n_qubits == 0) {
        throw ConfigError("config: either \"layout\" or \"n_qubits\" is required");
    }
    return PartitionLayout::singletons(n_qubits);
}

const NoiseModel &RunConfig::require_noise() const {
    if (!noise.has_value()) {
        throw ConfigError("config: a \"noise\" section is required for this command");
    }
    return *noise;
}

SpamModel RunConfig::effective_spam() const {
    if (spam.has_value()) {
        return *spam;
    }
    return SpamModel::ideal(effective_layout().n_qubits);
}

RunConfig parse_run_config(const Json &j) {
    check_keys(
        j,
        {"seed", "n_qubits", "layout", "noise", "spam", "lengths", "sequences_per_length", "shots", "threads",
         "fit", "analysis", "chain", "grf", "bootstrap", "chain_scaling", "output_dir"},
        "config");
    RunConfig config;
    config.raw = j;
    config.hash = config_hash_hex(j);
    config.seed = j.value("seed", uint64_t{1});
    config.n_qubits = j.value("n_qubits", uint32_t{0});
    if (j.contains("layout")) {
        try {
            config.layout = layout_from_json(j.at("layout"), config.n_qubits);
        } catch (const DataError &e) {
            throw ConfigError(e.what());
        }
        if (config.n_qubits == 0) {
            config.n_qubits = config.layout->n_qubits;
        }
    }
    uint32_t n = config.n_qubits;
    if (j.contains("noise")) {
        if (n == 0) {
            throw ConfigError("config: \"n_qubits\" or \"layout\" must come with a noise model");
        }
        config.noise = parse_noise(j.at("noise"), n);
    }
    if (j.contains("spam")) {
        if (n == 0) {
            throw ConfigError("config: \"n_qubits\" or \"layout\" must come with a spam model");
        }
        config.spam = parse_spam(j.at("spam"), n);
    }
    if (j.contains("lengths")) {
        config.lengths = j.at("lengths").get<std::vector<int64_t>>();
    }
    config.sequences_per_length = j.value("sequences_per_length", uint32_t{0});
    config.shots = j.value("shots", uint64_t{0});
    config.threads = j.value("threads", unsigned{0});
    if (j.contains("fit")) {
        config.fit = parse_fit(j.at("fit"));
    }
    config.fit.threads = config.threads;
    if (j.contains("analysis")) {
        check_keys(j.at("analysis"), {"log_base"}, "analysis");
        if (j.at("analysis").contains("log_base")) {
            config.log_base = parse_log_base(j.at("analysis").at("log_base"));
        }
    }
    if (j.contains("chain")) {
        config.chain = parse_chain(j.at("chain"));
    }
    if (j.contains("grf")) {
        config.grf = parse_grf(j.at("grf"));
    }
    if (j.contains("bootstrap")) {
        config.bootstrap = parse_bootstrap(j.at("bootstrap"));
    }
    if (j.contains("chain_scaling")) {
        config.chain_scaling = parse_chain_scaling(j.at("chain_scaling"));
    }
    config.chain_scaling.threads = config.threads;
    if (config.chain_scaling.chain_lengths.empty()) {
        for (size_t length = 4; length <= 100; length += 4) {
            config.chain_scaling.chain_lengths.push_back(length);
        }
    }
    config.output_dir = j.value("output_dir", std::string("out"));
    return config;
}

RunConfig load_run_config(const std::filesystem::path &path) {
    return parse_run_config(load_structured_file(path));
}

}  // namespace qnoise
