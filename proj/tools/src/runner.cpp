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

#include "optqudit/cli/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "optqudit/cv.hpp"
#include "optqudit/errors.hpp"
#include "optqudit/version.hpp"

namespace optqudit::cli {

namespace {

using protocols::Protocol;
using protocols::ProtocolDescriptor;
using qudit::QuditDims;

struct Cell {
    int d;
    std::size_t alpha_index;
    std::optional<Engine> engine;          // empty for diagnose-basis
    std::optional<MeasurementModel> model; // empty when the command takes no measurement
};

bool uses_model(Command c) { return c == Command::teleport_one || c == Command::teleport_full || c == Command::scan; }

std::vector<Engine> engines(EngineChoice e) {
    if (e == EngineChoice::ideal) return {Engine::ideal};
    if (e == EngineChoice::cv) return {Engine::cv};
    return {Engine::ideal, Engine::cv};
}

std::vector<MeasurementModel> models(ModelChoice m) {
    if (m == ModelChoice::subspace) return {MeasurementModel::subspace_projective};
    if (m == ModelChoice::heterodyne) return {MeasurementModel::heterodyne_bin};
    return {MeasurementModel::subspace_projective, MeasurementModel::heterodyne_bin};
}

std::vector<Cell> enumerate(const ScanConfig &c) {
    std::vector<Cell> cells;
    for (int d : c.d_list) {
        for (std::size_t a = 0; a < c.alpha_list.size(); ++a) {
            if (c.command == Command::diagnose_basis) {
                cells.push_back({d, a, std::nullopt, std::nullopt});
                continue;
            }
            for (Engine e : engines(c.engine)) {
                if (!uses_model(c.command)) {
                    cells.push_back({d, a, e, std::nullopt});
                    continue;
                }
                for (MeasurementModel m : models(c.model)) {
                    // The ideal engine measures projectively; it has no heterodyne variant.
                    if (e == Engine::ideal && m == MeasurementModel::heterodyne_bin) continue;
                    cells.push_back({d, a, e, m});
                }
            }
        }
    }
    return cells;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

template <typename T>
std::string opt_field(const std::optional<T> &v) {
    if (!v) return "";
    if constexpr (std::is_floating_point_v<T>) return format_number(*v);
    else return std::to_string(*v);
}

void fill_codeword_diagnostics(CellResult &r, const cv::CodewordBasis &basis) {
    r.defect_max = basis.max_defect();
    r.phase_gap_max = basis.max_gap();
}

void fill_trials(CellResult &r, const protocols::TrialSummary &s, int keep) {
    r.mean_fidelity_pre = s.mean_fidelity_pre;
    r.min_fidelity_pre = s.min_fidelity_pre;
    r.mean_fidelity_post = s.mean_fidelity_post;
    r.min_fidelity_post = s.min_fidelity_post;
    r.fidelity_stderr = s.fidelity_stderr;
    r.mean_infidelity = s.mean_infidelity;
    r.mean_leakage = s.mean_leakage;
    r.max_leakage = s.max_leakage;
    r.chi_square = s.chi_square;
    r.failed_trials = s.failed_trials;
    r.outcome_histogram = s.outcome_histogram;
    for (std::size_t i = 0; i < s.records.size() && static_cast<int>(i) < keep; ++i) r.records.push_back(s.records[i]);
    if (s.failed_trials > 0) {
        r.status = s.failed_trials == s.num_trials ? CellStatus::error : CellStatus::partial;
        r.errors = std::to_string(s.failed_trials) + " failed trial(s); first: " + s.failures.front();
    }
}

// Decoded fidelity and entropy of a CV graph state against the ideal one.
void fill_graph_state(CellResult &r, const qudit::ClusterGraph &graph, QuditDims dims, cplx alpha, Engine engine,
                      const protocols::ProtocolOptions &options) {
    const auto ideal = qudit::ideal_cluster(graph, dims);
    if (engine == Engine::ideal) {
        r.entanglement_entropy = qudit::entanglement_entropy(ideal, 1);
        r.mean_fidelity_pre = 1.0;
        r.mean_leakage = 0.0;
        return;
    }
    const auto basis = cv::codeword_subspace(dims, alpha, *r.n_max);
    fill_codeword_diagnostics(r, basis);
    const auto state =
        cv::build_cv_cluster(graph, dims, alpha, cv::KerrPhase::controlled_z(dims), *r.n_max).normalized();
    const auto decoded = cv::decode_cv(state, basis, options.leakage_abort);
    r.entanglement_entropy = qudit::entanglement_entropy(decoded.state, 1);
    r.mean_fidelity_pre = qudit::fidelity(ideal.amplitudes(), decoded.state.amplitudes());
    r.mean_leakage = decoded.leakage;
}

CellResult run_cell(const ScanConfig &c, const Cell &cell) {
    const auto start = std::chrono::steady_clock::now();
    CellResult r;
    r.command = to_string(c.command);
    r.d = cell.d;
    r.alpha_abs = c.alpha_list[cell.alpha_index];
    r.alpha_phase_deg = c.phase_deg_for(cell.alpha_index);
    const bool cv_like = !cell.engine || *cell.engine == Engine::cv;
    r.engine = cell.engine ? to_string(*cell.engine) : "cv";
    r.model = cell.model ? to_string(*cell.model) : "";
    r.trials = (c.command == Command::teleport_one || c.command == Command::teleport_full || c.command == Command::scan) ? c.trials : 1;
    r.seed = c.seed;
    r.config_hash = cell_hash(c, cell.d, cell.alpha_index, r.engine, r.model);

    const QuditDims dims(cell.d);
    const cplx alpha = std::polar(r.alpha_abs, r.alpha_phase_deg * std::numbers::pi / 180.0);
    const auto options = c.protocol_options();

    try {
        if (cv_like) {
            const double balance = cv::sector_balance(dims, alpha);
            if (balance < c.min_sector_balance) {
                r.status = CellStatus::skipped;
                r.errors = "sector feasibility: smallest sector weight " + format_number(balance) + " of an even split is below " +
                           format_number(c.min_sector_balance);
                r.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
                return r;
            }
            r.n_max = options.resolve_n_max(alpha);
        }

        switch (c.command) {
            case Command::diagnose_basis:
                fill_codeword_diagnostics(r, cv::codeword_subspace(dims, alpha, *r.n_max));
                break;
            case Command::bell:
                fill_graph_state(r, qudit::ClusterGraph::path(2), dims, alpha, *cell.engine, options);
                break;
            case Command::cluster:
                fill_graph_state(r, qudit::ClusterGraph::path(3), dims, alpha, *cell.engine, options);
                break;
            case Command::teleport_one:
            case Command::teleport_full:
            case Command::scan: {
                if (c.command == Command::scan) {
                    CellResult bell;
                    bell.n_max = r.n_max;
                    fill_graph_state(bell, qudit::ClusterGraph::path(2), dims, alpha, *cell.engine, options);
                    r.defect_max = bell.defect_max;
                    r.phase_gap_max = bell.phase_gap_max;
                    r.entanglement_entropy = bell.entanglement_entropy;
                } else if (cv_like) {
                    fill_codeword_diagnostics(r, cv::codeword_subspace(dims, alpha, *r.n_max));
                }
                ProtocolDescriptor desc;
                desc.protocol = c.command == Command::teleport_one ? Protocol::one_step : Protocol::full;
                desc.dims = dims;
                desc.alpha = alpha;
                desc.engine = *cell.engine;
                desc.model = *cell.model;
                desc.apply_corrections = c.apply_corrections;
                desc.options = options;
                fill_trials(r, protocols::run_trials(desc, c.trials, c.seed), c.records);
                break;
            }
        }
    } catch (const std::exception &e) {
        r.status = CellStatus::error;
        r.errors = e.what();
    }
    r.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::vector<std::string> row_fields(const CellResult &r) {
    std::string hist;
    return {r.command,
            std::to_string(r.d),
            format_number(r.alpha_abs),
            format_number(r.alpha_phase_deg),
            r.engine,
            r.model,
            opt_field(r.n_max),
            std::to_string(r.trials),
            std::to_string(r.seed),
            r.config_hash,
            opt_field(r.defect_max),
            opt_field(r.phase_gap_max),
            opt_field(r.entanglement_entropy),
            opt_field(r.mean_fidelity_pre),
            opt_field(r.min_fidelity_pre),
            opt_field(r.mean_fidelity_post),
            opt_field(r.min_fidelity_post),
            opt_field(r.fidelity_stderr),
            opt_field(r.mean_infidelity),
            opt_field(r.mean_leakage),
            opt_field(r.max_leakage),
            opt_field(r.chi_square),
            opt_field(r.failed_trials),
            to_string(r.status),
            r.errors,
            format_number(std::round(r.wall_time_ms * 1000.0) / 1000.0)};
}

template <typename T>
nlohmann::json opt_json(const std::optional<T> &v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::string header_comment(const ScanConfig &c) {
    return std::string("# optqudit ") + kVersion + " schema_version " + std::to_string(kSchemaVersion) + " config " +
           to_json(c).dump();
}

}  // namespace

std::string to_string(CellStatus s) {
    switch (s) {
        case CellStatus::ok: return "ok";
        case CellStatus::partial: return "partial";
        case CellStatus::skipped: return "skipped";
        case CellStatus::error: return "error";
    }
    return "?";
}

const std::vector<std::string> &csv_columns() {
    static const std::vector<std::string> cols{
        "command",          "d",                  "alpha_abs",         "alpha_phase_deg",   "engine",
        "model",            "n_max",              "trials",            "seed",              "config_hash",
        "defect_max",       "phase_gap_max",      "entanglement_entropy", "mean_fidelity_pre", "min_fidelity_pre",
        "mean_fidelity_post", "min_fidelity_post", "fidelity_stderr",  "mean_infidelity",   "mean_leakage",
        "max_leakage",      "chi_square",         "failed_trials",     "status",            "errors",
        "wall_time_ms"};
    return cols;
}

std::string cell_hash(const ScanConfig &c, int d, std::size_t alpha_index, const std::string &engine, const std::string &model) {
    nlohmann::json j = to_json(c);
    j.erase("output");
    j.erase("format");
    j.erase("records");
    j["d"] = d;
    j["alpha"] = c.alpha_list.at(alpha_index);
    j["alpha_phase_deg"] = c.phase_deg_for(alpha_index);
    j["engine"] = engine;
    j["model"] = model;
    const std::string text = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return hex64(h);
}

std::vector<CellResult> execute(const ScanConfig &config) {
    config.validate();
    std::vector<CellResult> out;
    for (const Cell &cell : enumerate(config)) out.push_back(run_cell(config, cell));
    return out;
}

void write_csv(std::ostream &out, const ScanConfig &config, const std::vector<CellResult> &cells) {
    out << header_comment(config) << '\n';
    const auto &cols = csv_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
    for (const auto &r : cells) {
        const auto fields = row_fields(r);
        for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << csv_field(fields[i]);
        out << '\n';
    }
}

nlohmann::json to_json(const TeleportRecord &rec) {
    nlohmann::json j;
    j["engine"] = to_string(rec.engine);
    j["meas_model"] = to_string(rec.meas_model);
    j["k"] = rec.k;
    j["s"] = opt_json(rec.s);
    j["messages"] = nlohmann::json::array();
    for (const auto &m : rec.messages)
        j["messages"].push_back({{"sender", m.sender}, {"receiver", m.receiver}, {"key", m.key}, {"value", m.value}});
    j["byproduct"] = qudit::to_string(rec.byproduct);
    j["correction"] = qudit::to_string(rec.correction);
    j["fidelity_pre_correction"] = rec.fidelity_pre_correction;
    j["fidelity_post_correction"] = opt_json(rec.fidelity_post_correction);
    j["infidelity_pre_correction"] = rec.infidelity_pre_correction;
    j["infidelity_post_correction"] = opt_json(rec.infidelity_post_correction);
    j["leakage_total"] = rec.leakage_total;
    j["seed"] = rec.seed;
    return j;
}

void write_json(std::ostream &out, const ScanConfig &config, const std::vector<CellResult> &cells) {
    nlohmann::json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["version"] = kVersion;
    doc["config"] = to_json(config);
    doc["columns"] = csv_columns();
    doc["rows"] = nlohmann::json::array();
    for (const auto &r : cells) {
        const auto fields = row_fields(r);
        nlohmann::json row;
        row["command"] = r.command;
        row["d"] = r.d;
        row["alpha_abs"] = r.alpha_abs;
        row["alpha_phase_deg"] = r.alpha_phase_deg;
        row["engine"] = r.engine;
        row["model"] = r.model.empty() ? nlohmann::json(nullptr) : nlohmann::json(r.model);
        row["n_max"] = opt_json(r.n_max);
        row["trials"] = r.trials;
        row["seed"] = r.seed;
        row["config_hash"] = r.config_hash;
        row["defect_max"] = opt_json(r.defect_max);
        row["phase_gap_max"] = opt_json(r.phase_gap_max);
        row["entanglement_entropy"] = opt_json(r.entanglement_entropy);
        row["mean_fidelity_pre"] = opt_json(r.mean_fidelity_pre);
        row["min_fidelity_pre"] = opt_json(r.min_fidelity_pre);
        row["mean_fidelity_post"] = opt_json(r.mean_fidelity_post);
        row["min_fidelity_post"] = opt_json(r.min_fidelity_post);
        row["fidelity_stderr"] = opt_json(r.fidelity_stderr);
        row["mean_infidelity"] = opt_json(r.mean_infidelity);
        row["mean_leakage"] = opt_json(r.mean_leakage);
        row["max_leakage"] = opt_json(r.max_leakage);
        row["chi_square"] = opt_json(r.chi_square);
        row["failed_trials"] = opt_json(r.failed_trials);
        row["outcome_histogram"] = r.outcome_histogram;
        row["status"] = to_string(r.status);
        row["errors"] = r.errors;
        row["wall_time_ms"] = r.wall_time_ms;
        row["records"] = nlohmann::json::array();
        for (const auto &rec : r.records) row["records"].push_back(to_json(rec));
        doc["rows"].push_back(std::move(row));
    }
    out << doc.dump(2) << '\n';
}

int run(const ScanConfig &config, std::ostream &out) {
    const auto cells = execute(config);
    if (config.format == OutputFormat::csv) write_csv(out, config, cells);
    else write_json(out, config, cells);
    out.flush();
    bool any_ok = cells.empty();
    for (const auto &r : cells) any_ok = any_ok || r.status != CellStatus::error;
    if (!any_ok) std::cerr << "optqudit: every cell failed; first error: " << cells.front().errors << '\n';
    return any_ok ? 0 : 1;
}

int run(const ScanConfig &config) {
    if (config.output == "-") return run(config, std::cout);
    std::ofstream file(config.output);
    if (!file) throw std::runtime_error("cannot open " + config.output + " for writing");
    return run(config, file);
}

}  // namespace optqudit::cli
