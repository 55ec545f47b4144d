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

#include "qnoise/io.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "qnoise/errors.h"

namespace qnoise {

namespace {

void require_keys(const Json &j, std::initializer_list<const char *> allowed, const char *what) {
    if (!j.is_object()) {
        throw DataError(std::string(what) + ": expected a JSON object");
    }
    for (const auto &[key, value] : j.items()) {
        (void)value;
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char *a) { return key == a; }) ==
            allowed.end()) {
            throw DataError(std::string(what) + ": unknown key \"" + key + "\"");
        }
    }
}

int64_t parse_length_key(const std::string &key) {
    int64_t value = 0;
    auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), value);
    if (ec != std::errc() || ptr != key.data() + key.size() || value < 0) {
        throw DataError("data keys must be nonnegative integer sequence lengths, got \"" + key + "\"");
    }
    return value;
}

std::string format_double(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

}  // namespace

Json layout_to_json(const PartitionLayout &layout) {
    Json sets = Json::array();
    for (const auto &set : layout.sets) {
        sets.push_back(set);
    }
    return sets;
}

PartitionLayout layout_from_json(const Json &j, uint32_t n_qubits) {
    if (!j.is_array() || j.empty()) {
        throw DataError("layout: expected a nonempty array of qubit-index arrays");
    }
    PartitionLayout layout;
    uint32_t max_qubit = 0;
    for (const auto &set : j) {
        if (!set.is_array() || set.empty()) {
            throw DataError("layout: each set must be a nonempty array of qubit indices");
        }
        std::vector<uint32_t> qubits;
        for (const auto &q : set) {
            if (!q.is_number_unsigned()) {
                throw DataError("layout: qubit indices must be nonnegative integers");
            }
            qubits.push_back(q.get<uint32_t>());
            max_qubit = std::max(max_qubit, qubits.back());
        }
        layout.sets.push_back(std::move(qubits));
    }
    layout.n_qubits = n_qubits > 0 ? n_qubits : max_qubit + 1;
    try {
        layout.validate();
    } catch (const std::invalid_argument &e) {
        throw DataError(std::string("layout: ") + e.what());
    }
    return layout;
}

Json prob_vector_to_json(const ProbVector &p) {
    Json j;
    j["layout"] = layout_to_json(p.layout);
    j["values"] = p.values;
    return j;
}

ProbVector prob_vector_from_json(const Json &j) {
    require_keys(j, {"layout", "values"}, "probability vector");
    ProbVector p;
    p.layout = layout_from_json(j.at("layout"));
    p.values = j.at("values").get<std::vector<double>>();
    if (p.values.size() != p.layout.dim()) {
        throw DataError("probability vector: expected 2^k values");
    }
    return p;
}

Json eigenvalue_vector_to_json(const EigenvalueVector &eigs) {
    Json j;
    j["layout"] = layout_to_json(eigs.layout);
    j["values"] = eigs.values;
    return j;
}

EigenvalueVector eigenvalue_vector_from_json(const Json &j) {
    require_keys(j, {"layout", "values"}, "eigenvalue vector");
    EigenvalueVector eigs;
    eigs.layout = layout_from_json(j.at("layout"));
    eigs.values = j.at("values").get<std::vector<double>>();
    if (eigs.values.size() != eigs.layout.dim()) {
        throw DataError("eigenvalue vector: expected 2^k values");
    }
    return eigs;
}

std::string values_to_csv(std::span<const double> values) {
    std::string out = "index,value\n";
    for (size_t i = 0; i < values.size(); i++) {
        out += std::to_string(i);
        out += ',';
        out += format_double(values[i]);
        out += '\n';
    }
    return out;
}

Json record_to_json(const ExperimentRecord &record) {
    Json j;
    j["layout"] = layout_to_json(record.layout);
    j["n_qubits"] = record.layout.n_qubits;
    j["shots"] = record.shots;
    j["seed"] = record.seed;
    Json data = Json::object();
    for (size_t mi = 0; mi < record.lengths.size(); mi++) {
        Json sequences = Json::array();
        for (const auto &table : record.counts[mi]) {
            Json counts = Json::object();
            for (const auto &[bits, count] : table) {
                counts[bits] = count;
            }
            sequences.push_back(std::move(counts));
        }
        data[std::to_string(record.lengths[mi])] = std::move(sequences);
    }
    j["data"] = std::move(data);
    return j;
}

ExperimentRecord record_from_json(const Json &j) {
    require_keys(j, {"layout", "n_qubits", "shots", "seed", "data", "meta"}, "experiment record");
    ExperimentRecord record;
    uint32_t n_qubits = j.contains("n_qubits") ? j.at("n_qubits").get<uint32_t>() : 0;
    record.layout = layout_from_json(j.at("layout"), n_qubits);
    record.shots = j.at("shots").get<uint64_t>();
    record.seed = j.value("seed", uint64_t{0});
    if (!j.contains("data") || !j.at("data").is_object() || j.at("data").empty()) {
        throw DataError("experiment record: missing or empty \"data\" object keyed by sequence length");
    }

    std::vector<std::pair<int64_t, const Json *>> groups;
    for (const auto &[key, value] : j.at("data").items()) {
        groups.emplace_back(parse_length_key(key), &value);
    }
    std::sort(groups.begin(), groups.end(), [](const auto &a, const auto &b) { return a.first < b.first; });
    for (const auto &[m, value] : groups) {
        record.lengths.push_back(m);
        if (!value->is_array() || value->empty()) {
            throw DataError(
                "experiment record: length " + std::to_string(m) + " must map to a nonempty sequence array");
        }
        std::vector<std::map<std::string, uint64_t>> tables;
        for (const auto &seq : *value) {
            if (!seq.is_object()) {
                throw DataError("experiment record: each sequence must be a bitstring->count object");
            }
            std::map<std::string, uint64_t> table;
            for (const auto &[bits, count] : seq.items()) {
                table[bits] = count.get<uint64_t>();
            }
            tables.push_back(std::move(table));
        }
        record.counts.push_back(std::move(tables));
    }
    try {
        record.validate();
    } catch (const std::invalid_argument &e) {
        throw DataError(std::string("experiment record: ") + e.what());
    }
    return record;
}

Json result_to_json(const ReconstructionResult &result) {
    Json j;
    j["layout"] = layout_to_json(result.eigenvalues.layout);
    j["eigenvalues"] = result.eigenvalues.values;
    j["observed_rates"] = result.observed_rates.values;
    Json fits = Json::array();
    for (const auto &fit : result.fits) {
        Json f;
        f["index"] = fit.index;
        f["amplitude"] = fit.amplitude;
        f["decay"] = fit.decay;
        f["points_used"] = fit.points_used;
        f["residual"] = fit.residual;
        f["failed"] = fit.failed;
        f["discarded_lengths"] = fit.discarded_lengths;
        fits.push_back(std::move(f));
    }
    j["fits"] = std::move(fits);
    j["diagnostics"] = result.diagnostics;
    return j;
}

ReconstructionResult result_from_json(const Json &j) {
    require_keys(
        j, {"layout", "eigenvalues", "observed_rates", "fits", "diagnostics", "meta"}, "reconstruction result");
    ReconstructionResult result;
    PartitionLayout layout = layout_from_json(j.at("layout"));
    result.eigenvalues.layout = layout;
    result.eigenvalues.values = j.at("eigenvalues").get<std::vector<double>>();
    result.observed_rates.layout = layout;
    result.observed_rates.values = j.at("observed_rates").get<std::vector<double>>();
    if (result.eigenvalues.values.size() != layout.dim() || result.observed_rates.values.size() != layout.dim()) {
        throw DataError("reconstruction result: value arrays must have 2^k entries");
    }
    for (const auto &f : j.at("fits")) {
        DecayFit fit;
        fit.index = f.at("index").get<size_t>();
        fit.amplitude = f.at("amplitude").get<double>();
        fit.decay = f.at("decay").get<double>();
        fit.points_used = f.at("points_used").get<int>();
        fit.residual = f.at("residual").get<double>();
        fit.failed = f.at("failed").get<bool>();
        fit.discarded_lengths = f.at("discarded_lengths").get<std::vector<int64_t>>();
        result.fits.push_back(std::move(fit));
    }
    if (j.contains("diagnostics")) {
        result.diagnostics = j.at("diagnostics").get<std::vector<std::string>>();
    }
    return result;
}

std::string result_to_csv(const ReconstructionResult &result) {
    std::string out = "index,label,eigenvalue,amplitude,observed_rate\n";
    size_t k = result.eigenvalues.layout.num_sets();
    for (size_t i = 0; i < result.eigenvalues.values.size(); i++) {
        double amplitude = i < result.fits.size() ? result.fits[i].amplitude : 1.0;
        out += std::to_string(i);
        out += ',';
        out += pattern_to_bitstring(i, k);
        out += ',';
        out += format_double(result.eigenvalues.values[i]);
        out += ',';
        out += format_double(amplitude);
        out += ',';
        out += format_double(result.observed_rates.values[i]);
        out += '\n';
    }
    return out;
}

Json grf_model_to_json(const GrfModel &model) {
    Json j;
    j["layout"] = layout_to_json(model.layout);
    j["cliques"] = model.chain.cliques;
    j["clique_marginals"] = model.clique_marginals;
    j["warnings"] = model.warnings;
    return j;
}

GrfModel grf_model_from_json(const Json &j, const GrfOptions &options) {
    require_keys(j, {"layout", "cliques", "clique_marginals", "warnings", "meta"}, "field model");
    PartitionLayout layout = layout_from_json(j.at("layout"));
    JunctionChain chain;
    chain.cliques = j.at("cliques").get<std::vector<std::vector<size_t>>>();
    auto tables = j.at("clique_marginals").get<std::vector<std::vector<double>>>();
    try {
        return make_grf_model(layout, chain, std::move(tables), options);
    } catch (const std::invalid_argument &e) {
        throw DataError(std::string("field model: ") + e.what());
    }
}

std::string matrix_to_csv(const PartitionLayout &layout, std::span<const double> values) {
    size_t k = layout.num_sets();
    std::string out = "set";
    for (size_t j = 0; j < k; j++) {
        out += ',';
        out += layout.set_label(j);
    }
    out += '\n';
    for (size_t i = 0; i < k; i++) {
        out += layout.set_label(i);
        for (size_t j = 0; j < k; j++) {
            out += ',';
            out += format_double(values[i * k + j]);
        }
        out += '\n';
    }
    return out;
}

Json matrix_to_json(const PartitionLayout &layout, std::span<const double> values) {
    size_t k = layout.num_sets();
    Json j;
    Json labels = Json::array();
    for (size_t i = 0; i < k; i++) {
        labels.push_back(layout.set_label(i));
    }
    j["labels"] = std::move(labels);
    Json rows = Json::array();
    for (size_t i = 0; i < k; i++) {
        rows.push_back(std::vector<double>(values.begin() + i * k, values.begin() + (i + 1) * k));
    }
    j["rows"] = std::move(rows);
    return j;
}

std::string matrix_to_triplets_csv(std::span<const double> values, size_t k) {
    std::string out = "row,col,value\n";
    for (size_t i = 0; i < k; i++) {
        for (size_t j = 0; j < k; j++) {
            out += std::to_string(i);
            out += ',';
            out += std::to_string(j);
            out += ',';
            out += format_double(values[i * k + j]);
            out += '\n';
        }
    }
    return out;
}

Json interval_to_json(const ConfidenceInterval &ci) {
    Json j;
    j["point"] = ci.point;
    j["lo"] = ci.lo;
    j["hi"] = ci.hi;
    j["level"] = ci.level;
    j["n_reps"] = ci.n_used;
    return j;
}

ExperimentRecord ingest_counts_json(const Json &j) {
    require_keys(
        j, {"n_qubits", "shots", "bit_order", "layout", "seed", "data", "meta"}, "counts file");
    for (const char *key : {"n_qubits", "shots", "bit_order", "data"}) {
        if (!j.contains(key)) {
            throw DataError(std::string("counts file: missing required key \"") + key + "\"");
        }
    }
    uint32_t n_qubits = j.at("n_qubits").get<uint32_t>();
    uint64_t shots = j.at("shots").get<uint64_t>();
    std::string bit_order = j.at("bit_order").get<std::string>();
    if (bit_order != "q0_first" && bit_order != "q0_last") {
        throw DataError("counts file: bit_order must be \"q0_first\" or \"q0_last\"");
    }
    bool reverse = bit_order == "q0_last";

    ExperimentRecord record;
    if (j.contains("layout")) {
        record.layout = layout_from_json(j.at("layout"), n_qubits);
    } else {
        record.layout = PartitionLayout::singletons(n_qubits);
    }
    record.shots = shots;
    record.seed = j.value("seed", uint64_t{0});

    if (!j.at("data").is_object() || j.at("data").empty()) {
        throw DataError("counts file: missing or empty \"data\" object keyed by sequence length");
    }
    std::vector<std::pair<int64_t, const Json *>> groups;
    for (const auto &[key, value] : j.at("data").items()) {
        groups.emplace_back(parse_length_key(key), &value);
    }
    std::sort(groups.begin(), groups.end(), [](const auto &a, const auto &b) { return a.first < b.first; });

    std::vector<std::string> bad_sequences;
    for (const auto &[m, value] : groups) {
        record.lengths.push_back(m);
        if (!value->is_array() || value->empty()) {
            throw DataError("counts file: length " + std::to_string(m) + " must map to a nonempty sequence array");
        }
        std::vector<std::map<std::string, uint64_t>> tables;
        for (size_t s = 0; s < value->size(); s++) {
            std::map<std::string, uint64_t> table;
            uint64_t total = 0;
            for (const auto &[bits, count] : (*value)[s].items()) {
                if (bits.size() != n_qubits) {
                    throw DataError(
                        "counts file: bitstring \"" + bits + "\" does not cover " + std::to_string(n_qubits) +
                        " qubits");
                }
                std::string normalized = bits;
                if (reverse) {
                    std::reverse(normalized.begin(), normalized.end());
                }
                uint64_t c = count.get<uint64_t>();
                table[normalized] += c;
                total += c;
            }
            if (total != shots) {
                bad_sequences.push_back(
                    "length " + std::to_string(m) + " sequence " + std::to_string(s) + " sums to " +
                    std::to_string(total));
            }
            tables.push_back(std::move(table));
        }
        record.counts.push_back(std::move(tables));
    }
    if (!bad_sequences.empty()) {
        std::string message = "counts file: counts do not sum to the declared " + std::to_string(shots) + " shots:";
        for (const auto &line : bad_sequences) {
            message += "\n  " + line;
        }
        throw DataError(message);
    }
    try {
        record.validate();
    } catch (const std::invalid_argument &e) {
        throw DataError(std::string("counts file: ") + e.what());
    }
    return record;
}

ExperimentRecord ingest_record_file(const std::filesystem::path &path, const std::string &format) {
    Json j = load_structured_file(path);
    if (format == "native") {
        return record_from_json(j);
    }
    if (format == "counts") {
        return ingest_counts_json(j);
    }
    throw ConfigError("unknown ingest format \"" + format + "\" (expected \"native\" or \"counts\")");
}

Json load_structured_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open file: " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    std::string text = buffer.str();
    if (path.extension() == ".toml") {
        return toml_lite_parse(text);
    }
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ConfigError("failed to parse " + path.string() + ": " + e.what());
    }
}

void atomic_write_text(const std::filesystem::path &path, const std::string &text) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw DataError("cannot write file: " + tmp.string());
        }
        out << text;
        if (!out.good()) {
            throw DataError("write failed: " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

void write_json_file(const std::filesystem::path &path, const Json &j) {
    atomic_write_text(path, j.dump(2) + "\n");
}

std::string config_hash_hex(const Json &j) {
    // Canonicalize through the key-sorted representation.
    nlohmann::json sorted = nlohmann::json::parse(j.dump());
    std::string dump = sorted.dump();
    uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char c : dump) {
        hash ^= c;
        hash *= 0x100000001b3ull;
    }
    static const char *digits = "0123456789abcdef";
    std::string hex(16, '0');
    for (int i = 15; i >= 0; i--) {
        hex[i] = digits[hash & 0xf];
        hash >>= 4;
    }
    return hex;
}

}  // namespace qnoise
