// Copyright 2026 The optqudit Authors
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

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "optqudit/cli/config.hpp"

namespace optqudit::cli {

enum class CellStatus { ok, partial, skipped, error };
std::string to_string(CellStatus s);

/// One output row: a (d, alpha, engine, model) cell.
struct CellResult {
    std::string command;
    int d = 0;
    double alpha_abs = 0.0;
    double alpha_phase_deg = 0.0;
    std::string engine;
    std::string model;
    std::optional<int> n_max;
    int trials = 0;
    std::uint64_t seed = 0;
    std::string config_hash;

    std::optional<double> defect_max;
    std::optional<double> phase_gap_max;
    std::optional<double> entanglement_entropy;
    std::optional<double> mean_fidelity_pre;
    std::optional<double> min_fidelity_pre;
    std::optional<double> mean_fidelity_post;
    std::optional<double> min_fidelity_post;
    std::optional<double> fidelity_stderr;
    std::optional<double> mean_infidelity;
    std::optional<double> mean_leakage;
    std::optional<double> max_leakage;
    std::optional<double> chi_square;
    std::optional<int> failed_trials;
    std::vector<long> outcome_histogram;

    CellStatus status = CellStatus::ok;
    std::string errors;
    double wall_time_ms = 0.0;

    std::vector<TeleportRecord> records;
};

/// Column names of the CSV output, in order. The last one is the timing column.
const std::vector<std::string> &csv_columns();

/// Runs every cell of the scan in a fixed order.
std::vector<CellResult> execute(const ScanConfig &config);

/// 64-bit FNV-1a of a cell's canonical description, as 16 hex digits.
std::string cell_hash(const ScanConfig &config, int d, std::size_t alpha_index, const std::string &engine,
                      const std::string &model);

void write_csv(std::ostream &out, const ScanConfig &config, const std::vector<CellResult> &cells);
void write_json(std::ostream &out, const ScanConfig &config, const std::vector<CellResult> &cells);

nlohmann::json to_json(const TeleportRecord &record);

/// Executes and writes the output. Returns the process exit status: 0 unless every cell failed.
int run(const ScanConfig &config);
/// Same, writing to `out` instead of config.output.
int run(const ScanConfig &config, std::ostream &out);

}  // namespace optqudit::cli
