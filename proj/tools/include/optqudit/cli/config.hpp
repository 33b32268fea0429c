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

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "optqudit/protocols.hpp"

namespace optqudit::cli {

enum class Command { diagnose_basis, bell, cluster, teleport_one, teleport_full, scan };
enum class EngineChoice { ideal, cv, both };
enum class ModelChoice { subspace, heterodyne, both };
enum class OutputFormat { csv, json };

std::string to_string(Command c);
std::string to_string(EngineChoice e);
std::string to_string(ModelChoice m);
std::string to_string(OutputFormat f);

/// Seed used when neither a flag, a config file nor the environment provides one.
inline constexpr std::uint64_t kDefaultSeed = 20260101;
/// Environment variable consulted for the default seed.
inline constexpr const char *kSeedEnvVar = "OPTQUDIT_SEED";

/// Fully resolved run description.
struct ScanConfig {
    Command command = Command::scan;
    std::vector<int> d_list{4};
    std::vector<double> alpha_list{5.0};
    /// Either one phase for every magnitude or one per magnitude, in degrees.
    std::vector<double> alpha_phase_deg{0.0};
    EngineChoice engine = EngineChoice::cv;
    ModelChoice model = ModelChoice::subspace;
    int trials = 100;
    std::uint64_t seed = kDefaultSeed;
    bool apply_corrections = true;

    double margin_sigmas = fock::TruncationPolicy{}.margin_sigmas;
    int hard_cap = fock::TruncationPolicy{}.hard_cap;
    double tail_tolerance = fock::TruncationPolicy{}.tail_tolerance;
    std::optional<int> n_max;
    double grid_radius_sigmas = measure::HeterodyneConfig{}.grid_radius_sigmas;
    int grid_points = measure::HeterodyneConfig{}.grid_points_per_axis;
    double leakage_abort = cv::kDefaultLeakageAbort;
    /// Cells whose smallest sector weight (relative to an even split) is below this are skipped.
    double min_sector_balance = 0.1;

    std::string output = "-";
    OutputFormat format = OutputFormat::csv;
    /// Per-cell TeleportRecords kept in JSON output.
    int records = 8;

    /// Throws std::invalid_argument describing the first bad field.
    void validate() const;

    protocols::ProtocolOptions protocol_options() const;
    double phase_deg_for(std::size_t alpha_index) const;
};

nlohmann::json to_json(const ScanConfig &config);

/// Applies the keys of a config-file object onto `config`. Unknown keys and wrong types throw
/// std::invalid_argument.
void apply_json(ScanConfig &config, const nlohmann::json &object);

/// Parse failed: print `message` (one line) and exit with `exit_code`. Help requests carry
/// exit code 0 and the help text.
struct ParseExit {
    int exit_code;
    std::string message;
};

using ParseResult = std::variant<ScanConfig, ParseExit>;

/// Precedence: command-line flags, then the --config file, then OPTQUDIT_SEED for the seed,
/// then built-in defaults. args excludes the program name.
ParseResult parse_config(const std::vector<std::string> &args);

}  // namespace optqudit::cli
