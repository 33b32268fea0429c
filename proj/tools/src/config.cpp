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

#include "optqudit/cli/config.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <stdexcept>

namespace optqudit::cli {

namespace {

template <typename E>
const std::map<std::string, E> &names();

template <>
const std::map<std::string, Command> &names<Command>() {
    static const std::map<std::string, Command> m{{"diagnose-basis", Command::diagnose_basis}, {"bell", Command::bell},
                                                  {"cluster", Command::cluster},               {"teleport-one", Command::teleport_one},
                                                  {"teleport-full", Command::teleport_full},   {"scan", Command::scan}};
    return m;
}
template <>
const std::map<std::string, EngineChoice> &names<EngineChoice>() {
    static const std::map<std::string, EngineChoice> m{{"ideal", EngineChoice::ideal}, {"cv", EngineChoice::cv}, {"both", EngineChoice::both}};
    return m;
}
template <>
const std::map<std::string, ModelChoice> &names<ModelChoice>() {
    static const std::map<std::string, ModelChoice> m{
        {"subspace", ModelChoice::subspace}, {"heterodyne", ModelChoice::heterodyne}, {"both", ModelChoice::both}};
    return m;
}
template <>
const std::map<std::string, OutputFormat> &names<OutputFormat>() {
    static const std::map<std::string, OutputFormat> m{{"csv", OutputFormat::csv}, {"json", OutputFormat::json}};
    return m;
}

template <typename E>
std::string name_of(E value) {
    for (const auto &[k, v] : names<E>())
        if (v == value) return k;
    return "?";
}

template <typename E>
E parse_enum(const std::string &text, const char *what) {
    const auto &m = names<E>();
    const auto it = m.find(text);
    if (it == m.end()) {
        std::string allowed;
        for (const auto &kv : m) allowed += (allowed.empty() ? "" : ", ") + kv.first;
        throw std::invalid_argument(std::string(what) + " must be one of {" + allowed + "}, got '" + text + "'");
    }
    return it->second;
}

template <typename T>
std::vector<T> scalar_or_list(const nlohmann::json &v, const char *key) {
    if (v.is_array()) return v.get<std::vector<T>>();
    if (v.is_number()) return {v.get<T>()};
    throw std::invalid_argument(std::string("config key '") + key + "' must be a number or an array of numbers");
}

std::string one_line(std::string s) {
    for (char &c : s)
        if (c == '\n' || c == '\r') c = ' ';
    while (!s.empty() && s.back() == ' ') s.pop_back();
    return s;
}

std::optional<std::uint64_t> seed_from_env() {
    const char *raw = std::getenv(kSeedEnvVar);
    if (raw == nullptr || *raw == '\0') return std::nullopt;
    char *end = nullptr;
    const unsigned long long v = std::strtoull(raw, &end, 0);
    if (end == raw || *end != '\0') throw std::invalid_argument(std::string(kSeedEnvVar) + " is not an integer: '" + raw + "'");
    return static_cast<std::uint64_t>(v);
}

}  // namespace

std::string to_string(Command c) { return name_of(c); }
std::string to_string(EngineChoice e) { return name_of(e); }
std::string to_string(ModelChoice m) { return name_of(m); }
std::string to_string(OutputFormat f) { return name_of(f); }

void ScanConfig::validate() const {
    if (d_list.empty()) throw std::invalid_argument("--d needs at least one value");
    for (int d : d_list)
        if (d < 1) throw std::invalid_argument("--d values must be >= 1");
    if (alpha_list.empty()) throw std::invalid_argument("--alpha needs at least one value");
    for (double a : alpha_list)
        if (!(a >= 0.0) || !std::isfinite(a)) throw std::invalid_argument("--alpha magnitudes must be finite and >= 0");
    if (alpha_phase_deg.empty() || (alpha_phase_deg.size() != 1 && alpha_phase_deg.size() != alpha_list.size()))
        throw std::invalid_argument("--alpha-phase-deg needs one value or one per --alpha magnitude");
    for (double p : alpha_phase_deg)
        if (!std::isfinite(p)) throw std::invalid_argument("--alpha-phase-deg values must be finite");
    if (trials < 1) throw std::invalid_argument("--trials must be >= 1");
    if (n_max && *n_max < 0) throw std::invalid_argument("--n-max must be >= 0");
    if (!(leakage_abort >= 0.0 && leakage_abort <= 1.0)) throw std::invalid_argument("--leakage-abort must lie in [0, 1]");
    if (!(min_sector_balance >= 0.0 && min_sector_balance <= 1.0))
        throw std::invalid_argument("--min-sector-balance must lie in [0, 1]");
    if (records < 0) throw std::invalid_argument("--records must be >= 0");
    if (output.empty()) throw std::invalid_argument("--output must not be empty");
    protocol_options().truncation.validate();
    protocol_options().heterodyne.validate();
}

protocols::ProtocolOptions ScanConfig::protocol_options() const {
    protocols::ProtocolOptions o;
    o.truncation.margin_sigmas = margin_sigmas;
    o.truncation.hard_cap = hard_cap;
    o.truncation.tail_tolerance = tail_tolerance;
    o.heterodyne.grid_radius_sigmas = grid_radius_sigmas;
    o.heterodyne.grid_points_per_axis = grid_points;
    o.leakage_abort = leakage_abort;
    o.n_max = n_max;
    return o;
}

double ScanConfig::phase_deg_for(std::size_t alpha_index) const {
    return alpha_phase_deg.size() == 1 ? alpha_phase_deg.front() : alpha_phase_deg.at(alpha_index);
}

nlohmann::json to_json(const ScanConfig &c) {
    nlohmann::json j;
    j["command"] = to_string(c.command);
    j["d"] = c.d_list;
    j["alpha"] = c.alpha_list;
    j["alpha_phase_deg"] = c.alpha_phase_deg;
    j["engine"] = to_string(c.engine);
    j["model"] = to_string(c.model);
    j["trials"] = c.trials;
    j["seed"] = c.seed;
    j["apply_corrections"] = c.apply_corrections;
    j["margin_sigmas"] = c.margin_sigmas;
    j["hard_cap"] = c.hard_cap;
    j["tail_tolerance"] = c.tail_tolerance;
    j["n_max"] = c.n_max ? nlohmann::json(*c.n_max) : nlohmann::json(nullptr);
    j["grid_radius_sigmas"] = c.grid_radius_sigmas;
    j["grid_points"] = c.grid_points;
    j["leakage_abort"] = c.leakage_abort;
    j["min_sector_balance"] = c.min_sector_balance;
    j["output"] = c.output;
    j["format"] = to_string(c.format);
    j["records"] = c.records;
    return j;
}

void apply_json(ScanConfig &c, const nlohmann::json &obj) {
    if (!obj.is_object()) throw std::invalid_argument("config file must hold a JSON object");
    for (const auto &[key, v] : obj.items()) {
        try {
            if (key == "command") c.command = parse_enum<Command>(v.get<std::string>(), "command");
            else if (key == "d") c.d_list = scalar_or_list<int>(v, "d");
            else if (key == "alpha") c.alpha_list = scalar_or_list<double>(v, "alpha");
            else if (key == "alpha_phase_deg") c.alpha_phase_deg = scalar_or_list<double>(v, "alpha_phase_deg");
            else if (key == "engine") c.engine = parse_enum<EngineChoice>(v.get<std::string>(), "engine");
            else if (key == "model") c.model = parse_enum<ModelChoice>(v.get<std::string>(), "model");
            else if (key == "trials") c.trials = v.get<int>();
            else if (key == "seed") c.seed = v.get<std::uint64_t>();
            else if (key == "apply_corrections") c.apply_corrections = v.get<bool>();
            else if (key == "margin_sigmas") c.margin_sigmas = v.get<double>();
            else if (key == "hard_cap") c.hard_cap = v.get<int>();
            else if (key == "tail_tolerance") c.tail_tolerance = v.get<double>();
            else if (key == "n_max") c.n_max = v.is_null() ? std::nullopt : std::optional<int>(v.get<int>());
            else if (key == "grid_radius_sigmas") c.grid_radius_sigmas = v.get<double>();
            else if (key == "grid_points") c.grid_points = v.get<int>();
            else if (key == "leakage_abort") c.leakage_abort = v.get<double>();
            else if (key == "min_sector_balance") c.min_sector_balance = v.get<double>();
            else if (key == "output") c.output = v.get<std::string>();
            else if (key == "format") c.format = parse_enum<OutputFormat>(v.get<std::string>(), "format");
            else if (key == "records") c.records = v.get<int>();
            else throw std::invalid_argument("unknown config key '" + key + "'");
        } catch (const nlohmann::json::exception &e) {
            throw std::invalid_argument("config key '" + key + "': " + e.what());
        }
    }
}

ParseResult parse_config(const std::vector<std::string> &args) {
    CLI::App app{"Optical qudit simulator: codeword diagnostics, Bell pairs, clusters and teleportation scans", "optqudit"};
    app.require_subcommand(1, 1);
    app.fallthrough();

    std::string config_path;
    std::vector<int> d_list;
    std::vector<double> alpha_list, phase_list;
    std::string engine, model, format, output;
    int trials = 0, hard_cap = 0, n_max = 0, grid_points = 0, records = 0;
    std::uint64_t seed = 0;
    double margin = 0, tail = 0, radius = 0, leak = 0, balance = 0;
    bool no_corrections = false;

    auto *o_config = app.add_option("--config", config_path, "JSON file with default values (flags win)")->check(CLI::ExistingFile);
    auto *o_d = app.add_option("--d", d_list, "Qudit dimensions, comma separated")->delimiter(',');
    auto *o_alpha = app.add_option("--alpha", alpha_list, "Coherent amplitude magnitudes, comma separated")->delimiter(',');
    auto *o_phase = app.add_option("--alpha-phase-deg", phase_list, "Amplitude phase in degrees (one, or one per magnitude)")->delimiter(',');
    auto *o_engine = app.add_option("--engine", engine, "ideal, cv or both");
    auto *o_model = app.add_option("--model", model, "subspace, heterodyne or both");
    auto *o_trials = app.add_option("--trials", trials, "Monte Carlo trials per cell");
    auto *o_seed = app.add_option("--seed", seed, std::string("Base seed (default from ") + kSeedEnvVar + ")");
    auto *o_nocorr = app.add_flag("--no-corrections", no_corrections, "Track the byproduct instead of correcting");
    auto *o_margin = app.add_option("--margin-sigmas", margin, "Truncation margin in photon-number widths");
    auto *o_cap = app.add_option("--hard-cap", hard_cap, "Largest admissible n_max");
    auto *o_tail = app.add_option("--tail-tolerance", tail, "Allowed Poisson mass above n_max");
    auto *o_nmax = app.add_option("--n-max", n_max, "Fixed Fock cutoff (overrides the truncation policy)");
    auto *o_radius = app.add_option("--grid-radius-sigmas", radius, "Heterodyne grid half-width beyond the state spread");
    auto *o_points = app.add_option("--grid-points", grid_points, "Heterodyne grid points per axis");
    auto *o_leak = app.add_option("--leakage-abort", leak, "Abort a trial when decoding leaks more than this");
    auto *o_balance = app.add_option("--min-sector-balance", balance, "Skip cells whose smallest sector weight is below this");
    auto *o_output = app.add_option("--output,-o", output, "Output path, '-' for stdout");
    auto *o_format = app.add_option("--format", format, "csv or json");
    auto *o_records = app.add_option("--records", records, "Teleport records kept per cell in JSON output");

    std::optional<Command> chosen;
    for (const auto &[name, cmd] : names<Command>()) {
        auto *sub = app.add_subcommand(name);
        sub->callback([&chosen, cmd = cmd] { chosen = cmd; });
    }
    app.get_subcommand("diagnose-basis")->description("Pseudo-number normalization defect and pseudo-phase gap per (d, alpha)");
    app.get_subcommand("bell")->description("Two-mode Kerr Bell pair: decoded entropy and fidelity");
    app.get_subcommand("cluster")->description("Three-site linear cluster: decoded fidelity and entropy");
    app.get_subcommand("teleport-one")->description("One-step teleportation trials");
    app.get_subcommand("teleport-full")->description("Full teleportation with classical messages and corrections");
    app.get_subcommand("scan")->description("Diagnostics, Bell entropy and full teleportation for every cell");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        return ParseExit{0, app.help()};
    } catch (const CLI::CallForAllHelp &) {
        return ParseExit{0, app.help("", CLI::AppFormatMode::All)};
    } catch (const CLI::ParseError &e) {
        return ParseExit{2, "optqudit: " + one_line(e.what())};
    }

    ScanConfig c;
    try {
        if (auto env = seed_from_env()) c.seed = *env;
        if (o_config->count()) {
            std::ifstream in(config_path);
            nlohmann::json j;
            try {
                in >> j;
            } catch (const nlohmann::json::exception &e) {
                throw std::invalid_argument("cannot parse " + config_path + ": " + e.what());
            }
            apply_json(c, j);
        }
        c.command = *chosen;
        if (o_d->count()) c.d_list = d_list;
        if (o_alpha->count()) c.alpha_list = alpha_list;
        if (o_phase->count()) c.alpha_phase_deg = phase_list;
        if (o_engine->count()) c.engine = parse_enum<EngineChoice>(engine, "--engine");
        if (o_model->count()) c.model = parse_enum<ModelChoice>(model, "--model");
        if (o_trials->count()) c.trials = trials;
        if (o_seed->count()) c.seed = seed;
        if (o_nocorr->count()) c.apply_corrections = !no_corrections;
        if (o_margin->count()) c.margin_sigmas = margin;
        if (o_cap->count()) c.hard_cap = hard_cap;
        if (o_tail->count()) c.tail_tolerance = tail;
        if (o_nmax->count()) c.n_max = n_max;
        if (o_radius->count()) c.grid_radius_sigmas = radius;
        if (o_points->count()) c.grid_points = grid_points;
        if (o_leak->count()) c.leakage_abort = leak;
        if (o_balance->count()) c.min_sector_balance = balance;
        if (o_output->count()) c.output = output;
        if (o_format->count()) c.format = parse_enum<OutputFormat>(format, "--format");
        if (o_records->count()) c.records = records;
        c.validate();
    } catch (const std::exception &e) {
        return ParseExit{2, "optqudit: " + one_line(e.what())};
    }
    return c;
}

}  // namespace optqudit::cli
