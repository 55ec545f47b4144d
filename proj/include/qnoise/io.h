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

#ifndef QNOISE_IO_H
#define QNOISE_IO_H

#include <filesystem>
#include <string>

#include "json.hpp"
#include "qnoise/analysis.h"
#include "qnoise/bootstrap.h"
#include "qnoise/grf.h"
#include "qnoise/protocol.h"
#include "qnoise/simulate.h"

namespace qnoise {

/// Insertion-ordered JSON so emitted files are stable byte for byte.
using Json = nlohmann::ordered_json;

Json layout_to_json(const PartitionLayout &layout);
PartitionLayout layout_from_json(const Json &j, uint32_t n_qubits = 0);

Json prob_vector_to_json(const ProbVector &p);
ProbVector prob_vector_from_json(const Json &j);
Json eigenvalue_vector_to_json(const EigenvalueVector &eigs);
EigenvalueVector eigenvalue_vector_from_json(const Json &j);

/// Flat (index, value) rows; indices follow the pattern-bit convention.
std::string values_to_csv(std::span<const double> values);

Json record_to_json(const ExperimentRecord &record);
ExperimentRecord record_from_json(const Json &j);

Json result_to_json(const ReconstructionResult &result);
ReconstructionResult result_from_json(const Json &j);
std::string result_to_csv(const ReconstructionResult &result);

Json grf_model_to_json(const GrfModel &model);
GrfModel grf_model_from_json(const Json &j, const GrfOptions &options = {});

std::string matrix_to_csv(const PartitionLayout &layout, std::span<const double> values);
Json matrix_to_json(const PartitionLayout &layout, std::span<const double> values);

/// (row, col, value) rows ready for Hinton-style plotting.
std::string matrix_to_triplets_csv(std::span<const double> values, size_t k);

Json interval_to_json(const ConfidenceInterval &ci);

/// Device-format counts dictionary: per-sequence bitstring->count maps with
/// a declared bit order ("q0_first" or "q0_last"). Returns a normalized
/// record with the q0-first convention.
ExperimentRecord ingest_counts_json(const Json &j);

/// format is "native" or "counts".
ExperimentRecord ingest_record_file(const std::filesystem::path &path, const std::string &format);

/// Parses a JSON file; .toml files go through the built-in TOML reader.
Json load_structured_file(const std::filesystem::path &path);

/// Minimal TOML reader covering the configuration dialect: tables, arrays
/// of tables, inline arrays, strings, numbers, booleans, and comments.
Json toml_lite_parse(const std::string &text);

/// Writes via a temp file and rename so readers never observe a partial file.
void atomic_write_text(const std::filesystem::path &path, const std::string &text);

void write_json_file(const std::filesystem::path &path, const Json &j);

/// FNV-1a hash of the canonical (key-sorted) dump, as fixed-width hex.
std::string config_hash_hex(const Json &j);

}  // namespace qnoise

#endif
