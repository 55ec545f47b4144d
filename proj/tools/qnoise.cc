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

#include <filesystem>
#include <iostream>
#include <numeric>

#include "CLI11.hpp"
#include "qnoise/config.h"
#include "qnoise/errors.h"

namespace {

using namespace qnoise;

namespace fs = std::filesystem;

Json make_meta(const RunConfig &config) {
    Json meta;
    meta["config_hash"] = config.hash;
    meta["seed"] = config.seed;
    return meta;
}

RunConfig load_config_or_default(const std::string &path) {
    if (path.empty()) {
        return parse_run_config(Json::object());
    }
    return load_run_config(path);
}

void cmd_simulate(const RunConfig &config, const fs::path &out_dir) {
    if (config.lengths.empty() || config.sequences_per_length == 0 || config.shots == 0) {
        throw ConfigError("simulate: config must provide lengths, sequences_per_length, and shots");
    }
    PartitionLayout layout = config.effective_layout();
    const NoiseModel &noise = config.require_noise();
    SpamModel spam = config.effective_spam();

    SampleOptions sample_options;
    sample_options.threads = config.threads;
    ExperimentRecord record = sample_experiment(
        noise, spam, layout, config.lengths, config.sequences_per_length, config.shots, config.seed,
        sample_options);

    Json record_json = record_to_json(record);
    record_json["meta"] = make_meta(config);
    write_json_file(out_dir / "record.json", record_json);

    // Ground truth for later scoring, when it is small enough to tabulate.
    Json truth;
    if (layout.num_sets() <= config.grf.dense_set_cap) {
        EigenvalueVector eigs = clifford_average(noise, layout, config.grf.dense_set_cap);
        truth = eigenvalue_vector_to_json(eigs);
    } else {
        Json per_set = Json::array();
        for (size_t i = 0; i < layout.num_sets(); i++) {
            std::vector<size_t> keep = {i};
            EigenvalueVector eigs = averaged_eigenvalues_on_subset(noise, layout, keep);
            per_set.push_back(Json{{"set", layout.set_label(i)}, {"eigenvalue", eigs.values[1]}});
        }
        truth["per_set"] = std::move(per_set);
    }
    truth["meta"] = make_meta(config);
    write_json_file(out_dir / "truth.json", truth);
    std::cout << "wrote " << (out_dir / "record.json").string() << "\n";
}

void cmd_ingest(
    const RunConfig &config, const std::string &input, const std::string &format, const fs::path &out_dir) {
    ExperimentRecord record = ingest_record_file(input, format);
    Json j = record_to_json(record);
    j["meta"] = make_meta(config);
    write_json_file(out_dir / "record.json", j);
    if (format == "counts") {
        Json source = load_structured_file(input);
        std::string order = source.value("bit_order", std::string("q0_first"));
        if (order == "q0_last") {
            std::cout << "bit order: q0_last input normalized to the q0-first convention\n";
        }
    }
    std::cout << "wrote " << (out_dir / "record.json").string() << " (" << record.lengths.size()
              << " lengths)\n";
}

ReconstructionResult run_reconstruction(const RunConfig &config, const std::string &record_path) {
    ExperimentRecord record = record_from_json(load_structured_file(record_path));
    return reconstruct(record, config.fit);
}

void cmd_reconstruct(const RunConfig &config, const std::string &record_path, const fs::path &out_dir) {
    ReconstructionResult result = run_reconstruction(config, record_path);
    Json j = result_to_json(result);
    j["meta"] = make_meta(config);
    write_json_file(out_dir / "result.json", j);
    atomic_write_text(out_dir / "result.csv", result_to_csv(result));
    std::cout << "wrote " << (out_dir / "result.json").string() << "\n";
}

void cmd_analyze(const RunConfig &config, const std::string &result_path, const fs::path &out_dir) {
    ReconstructionResult result = result_from_json(load_structured_file(result_path));
    const ProbVector &rates = result.observed_rates;
    const PartitionLayout &layout = rates.layout;
    size_t k = layout.num_sets();

    auto covariance = covariance_matrix(rates);
    CorrelationMatrix correlation = correlation_matrix(rates);
    atomic_write_text(out_dir / "covariance.csv", matrix_to_csv(layout, covariance));
    atomic_write_text(out_dir / "correlation.csv", matrix_to_csv(layout, correlation.values));
    atomic_write_text(
        out_dir / "correlation_triplets.csv", matrix_to_triplets_csv(correlation.values, k));
    Json correlation_json = matrix_to_json(layout, correlation.values);
    correlation_json["meta"] = make_meta(config);
    write_json_file(out_dir / "correlation.json", correlation_json);

    std::string mi_csv = "set_a,set_b,mutual_information\n";
    for (size_t a = 0; a < k; a++) {
        for (size_t b = a + 1; b < k; b++) {
            std::vector<size_t> ga = {a}, gb = {b};
            double mi = mutual_information(rates, ga, gb, config.log_base);
            mi_csv += layout.set_label(a) + "," + layout.set_label(b) + "," + std::to_string(mi) + "\n";
        }
    }
    atomic_write_text(out_dir / "mutual_information.csv", mi_csv);

    Json fidelity;
    Json per_set = Json::array();
    for (size_t i = 0; i < k; i++) {
        std::vector<size_t> subset = {i};
        FidelityResult f = fidelity_from_eigenvalues(result.eigenvalues, subset);
        per_set.push_back(Json{
            {"set", layout.set_label(i)},
            {"fidelity", f.fidelity},
            {"average_error_rate", f.average_error_rate}});
    }
    fidelity["per_set"] = std::move(per_set);
    {
        std::vector<size_t> all(k);
        std::iota(all.begin(), all.end(), size_t{0});
        FidelityResult f = fidelity_from_eigenvalues(result.eigenvalues, all);
        fidelity["all"] =
            Json{{"fidelity", f.fidelity}, {"average_error_rate", f.average_error_rate}};
    }
    fidelity["meta"] = make_meta(config);
    write_json_file(out_dir / "fidelity.json", fidelity);
    std::cout << "wrote analysis files under " << out_dir.string() << "\n";
}

void cmd_grf(const RunConfig &config, const std::string &result_path, const fs::path &out_dir) {
    if (!config.chain.has_value()) {
        throw ConfigError("grf: config must provide a \"chain\" section with cliques");
    }
    ReconstructionResult result = result_from_json(load_structured_file(result_path));
    GrfModel model = fit_grf(result.observed_rates, *config.chain, config.grf);
    double jsd = compare_grf(result.observed_rates, model, LogBase::two);

    Json j = grf_model_to_json(model);
    j["jsd"] = jsd;
    j["meta"] = make_meta(config);
    write_json_file(out_dir / "grf.json", j);
    std::cout << "wrote " << (out_dir / "grf.json").string() << " (jsd " << jsd << ")\n";
}

void cmd_bootstrap(const RunConfig &config, const std::string &record_path, const fs::path &out_dir) {
    ExperimentRecord record = record_from_json(load_structured_file(record_path));
    ReconstructionResult original = reconstruct(record, config.fit);

    BootstrapOptions options;
    options.n_replicates = config.bootstrap.replicates;
    options.scheme = config.bootstrap.scheme;
    options.fit = config.fit;
    options.threads = config.threads;
    BootstrapEnsemble ensemble = bootstrap_ensemble(record, options, config.seed);
    double level = config.bootstrap.level;

    Json j;
    size_t dim = original.eigenvalues.values.size();
    Json eigenvalue_cis = Json::array();
    Json rate_cis = Json::array();
    for (size_t index = 0; index < dim; index++) {
        ConfidenceInterval eig_ci = percentile_ci(
            ensemble, [index](const ReconstructionResult &r) { return r.eigenvalues.values[index]; }, level);
        eig_ci.point = original.eigenvalues.values[index];
        eigenvalue_cis.push_back(interval_to_json(eig_ci));
        ConfidenceInterval rate_ci = percentile_ci(
            ensemble, [index](const ReconstructionResult &r) { return r.observed_rates.values[index]; }, level);
        rate_ci.point = original.observed_rates.values[index];
        rate_cis.push_back(interval_to_json(rate_ci));
    }
    j["eigenvalues"] = std::move(eigenvalue_cis);
    j["observed_rates"] = std::move(rate_cis);

    MatrixInterval corr = correlation_matrix_ci(ensemble, level);
    j["correlation_lo"] = matrix_to_json(original.observed_rates.layout, corr.lo)["rows"];
    j["correlation_hi"] = matrix_to_json(original.observed_rates.layout, corr.hi)["rows"];

    if (config.chain.has_value()) {
        ConfidenceInterval jsd =
            jsd_ci(ensemble, original, *config.chain, config.bootstrap.jsd_mode, level, config.grf);
        GrfModel model = fit_grf(original.observed_rates, *config.chain, config.grf);
        jsd.point = compare_grf(original.observed_rates, model, LogBase::two);
        j["jsd"] = interval_to_json(jsd);
    }
    j["meta"] = make_meta(config);
    write_json_file(out_dir / "bootstrap.json", j);
    std::cout << "wrote " << (out_dir / "bootstrap.json").string() << "\n";
}

void cmd_chain_scaling(const RunConfig &config, const fs::path &out_dir) {
    auto rows = chain_scaling_experiment(config.chain_scaling, config.seed);

    std::string csv = "chain_length,mean_jsd,stderr_jsd,mean_hellinger,stderr_hellinger\n";
    std::vector<double> x, yj, yh;
    for (const auto &row : rows) {
        csv += std::to_string(row.chain_length) + "," + std::to_string(row.mean_jsd) + "," +
               std::to_string(row.stderr_jsd) + "," + std::to_string(row.mean_hellinger) + "," +
               std::to_string(row.stderr_hellinger) + "\n";
        x.push_back(static_cast<double>(row.chain_length));
        yj.push_back(row.mean_jsd);
        yh.push_back(row.mean_hellinger);
    }
    atomic_write_text(out_dir / "chain_scaling.csv", csv);

    Json j;
    Json table = Json::array();
    for (const auto &row : rows) {
        table.push_back(Json{
            {"chain_length", row.chain_length},
            {"mean_jsd", row.mean_jsd},
            {"stderr_jsd", row.stderr_jsd},
            {"mean_hellinger", row.mean_hellinger},
            {"stderr_hellinger", row.stderr_hellinger}});
    }
    j["rows"] = std::move(table);
    auto emit_fit = [](const GrowthFitComparison &fit) {
        return Json{
            {"sqrt_coefficient", fit.sqrt_coefficient},
            {"sqrt_r_squared", fit.sqrt_r_squared},
            {"linear_coefficient", fit.linear_coefficient},
            {"linear_r_squared", fit.linear_r_squared}};
    };
    j["jsd_fit"] = emit_fit(compare_sqrt_vs_linear_growth(x, yj));
    j["hellinger_fit"] = emit_fit(compare_sqrt_vs_linear_growth(x, yh));
    j["meta"] = make_meta(config);
    write_json_file(out_dir / "chain_scaling.json", j);
    std::cout << "wrote " << (out_dir / "chain_scaling.json").string() << "\n";
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Averaged Pauli noise: simulation, reconstruction, and analysis"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string record_path;
    std::string result_path;
    std::string input_path;
    std::string format = "native";

    auto add_common = [&](CLI::App *cmd) {
        cmd->add_option("--config", config_path, "TOML or JSON run configuration");
        cmd->add_option("--out", out_dir, "output directory (default: config output_dir)");
    };

    CLI::App *simulate = app.add_subcommand("simulate", "sample a synthetic experiment record");
    add_common(simulate);
    simulate->get_option("--config")->required();

    CLI::App *ingest = app.add_subcommand("ingest", "normalize an external counts file into a record");
    add_common(ingest);
    ingest->add_option("--input", input_path, "input file")->required();
    ingest->add_option("--format", format, "native or counts");

    CLI::App *reconstruct_cmd = app.add_subcommand("reconstruct", "fit decays and rebuild observed error rates");
    add_common(reconstruct_cmd);
    reconstruct_cmd->add_option("--record", record_path, "record JSON")->required();

    CLI::App *analyze = app.add_subcommand("analyze", "correlation, information, and fidelity tables");
    add_common(analyze);
    analyze->add_option("--result", result_path, "reconstruction result JSON")->required();

    CLI::App *grf_cmd = app.add_subcommand("grf", "fit a factorized field and compare it");
    add_common(grf_cmd);
    grf_cmd->add_option("--result", result_path, "reconstruction result JSON")->required();
    grf_cmd->get_option("--config")->required();

    CLI::App *bootstrap_cmd = app.add_subcommand("bootstrap", "resampled confidence intervals");
    add_common(bootstrap_cmd);
    bootstrap_cmd->add_option("--record", record_path, "record JSON")->required();

    CLI::App *scaling = app.add_subcommand("chain-scaling", "estimation error growth against chain length");
    add_common(scaling);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return 2;
    }

    try {
        RunConfig config = load_config_or_default(config_path);
        std::filesystem::path out = out_dir.empty() ? config.output_dir : out_dir;
        if (simulate->parsed()) {
            cmd_simulate(config, out);
        } else if (ingest->parsed()) {
            cmd_ingest(config, input_path, format, out);
        } else if (reconstruct_cmd->parsed()) {
            cmd_reconstruct(config, record_path, out);
        } else if (analyze->parsed()) {
            cmd_analyze(config, result_path, out);
        } else if (grf_cmd->parsed()) {
            cmd_grf(config, result_path, out);
        } else if (bootstrap_cmd->parsed()) {
            cmd_bootstrap(config, record_path, out);
        } else if (scaling->parsed()) {
            cmd_chain_scaling(config, out);
        }
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DataError &e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
