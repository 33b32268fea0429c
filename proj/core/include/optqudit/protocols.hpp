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
#include <utility>
#include <variant>
#include <vector>

#include "optqudit/cv.hpp"
#include "optqudit/fock.hpp"
#include "optqudit/measurement.hpp"
#include "optqudit/qudit.hpp"
#include "optqudit/random.hpp"
#include "optqudit/teleport_record.hpp"

namespace optqudit::protocols {

using qudit::GateWord;
using qudit::QuditDims;
using qudit::QuditState;

/// Knobs shared by every CV protocol run.
struct ProtocolOptions {
    fock::TruncationPolicy truncation;
    measure::HeterodyneConfig heterodyne;
    double leakage_abort = cv::kDefaultLeakageAbort;
    /// Overrides truncation_dim(alpha, truncation) when set.
    std::optional<int> n_max;

    int resolve_n_max(cplx alpha) const;
};

/// (1/sqrt d) sum_k |k>|k~>, built as controlled-Z on two uniform qudits.
qudit::MultiQuditState ideal_bell_pair(QuditDims dims);

/// exp(2 pi i n1 n2 / d) |alpha>|alpha>.
cv::MultiModeState cv_bell_pair(QuditDims dims, cplx alpha, int n_max);

using BellState = std::variant<qudit::MultiQuditState, cv::MultiModeState>;
BellState bell_pair(QuditDims dims, cplx alpha, Engine engine, int n_max);

/// Entangle |phi> with |alpha> (or |u>), measure the first mode in the pseudo-phase basis and
/// compare what is left with H Z^{-k} |phi>. No correction is applied.
TeleportRecord one_step_teleport(const QuditState &input, cplx alpha, Engine engine, MeasurementModel model, Rng &rng,
                                 const ProtocolOptions &options = {}, std::optional<int> forced_k = std::nullopt);

/// CV one-step teleportation against a prebuilt codeword basis.
TeleportRecord one_step_teleport_cv(const QuditState &input, const cv::CodewordBasis &basis, MeasurementModel model,
                                    Rng &rng, const ProtocolOptions &options = {},
                                    std::optional<int> forced_k = std::nullopt);

/// Three-mode teleportation Z12 Z23 |phi>|alpha>|alpha> with measurement outcomes (k, s) sent
/// to Bob, who corrects from the messages alone when `apply_corrections` is set.
TeleportRecord full_teleport(const QuditState &input, cplx alpha, Engine engine, MeasurementModel model,
                             bool apply_corrections, Rng &rng, const ProtocolOptions &options = {},
                             qudit::ForcedOutcomes forced = {});

TeleportRecord full_teleport_cv(const QuditState &input, const cv::CodewordBasis &basis, MeasurementModel model,
                                bool apply_corrections, Rng &rng, const ProtocolOptions &options = {},
                                qudit::ForcedOutcomes forced = {});

/// Drops identity gates and reduces powers (X, Z mod d; R mod 2; H mod 4).
GateWord canonical(const GateWord &word, QuditDims dims);

struct CorrectionOps {
    GateWord byproduct;       // X^{-s} R Z^{-k}, application order
    GateWord exact_inverse;   // the byproduct inverted
    GateWord stated_sequence; // X^s, then R, then Z^k
};

CorrectionOps correction_ops(int k, int s, QuditDims dims);

/// Exhaustive comparison of a correction reading against the exact inverse over all (k, s).
struct CorrectionCheck {
    bool all_match = true;
    std::optional<std::pair<int, int>> counterexample;  // first failing (k, s)
    double worst_infidelity = 0.0;
};

/// X^s, R, Z^k applied in that chronological order.
CorrectionCheck check_stated_sequence(QuditDims dims);
/// The same symbols read as the operator product X^s R Z^k (Z^k acts first).
CorrectionCheck check_product_reading(QuditDims dims);

/// true when two words agree up to a global phase within `tol` entrywise.
bool equal_up_to_phase(const qudit::GateMatrix &a, const qudit::GateMatrix &b, double tol = 1e-12);

enum class Protocol { one_step, full };

struct ProtocolDescriptor {
    Protocol protocol = Protocol::full;
    QuditDims dims{2};
    cplx alpha{4.0, 0.0};
    Engine engine = Engine::ideal;
    MeasurementModel model = MeasurementModel::subspace_projective;
    bool apply_corrections = true;
    /// Teleported state; drawn per trial from the trial seed when empty.
    std::optional<QuditState> fixed_input;
    ProtocolOptions options;
};

struct TrialSummary {
    int num_trials = 0;
    int failed_trials = 0;
    double mean_fidelity_pre = 0.0;
    double min_fidelity_pre = 1.0;
    std::optional<double> mean_fidelity_post;
    std::optional<double> min_fidelity_post;
    /// Standard error of the post-correction (or residual) fidelity mean.
    double fidelity_stderr = 0.0;
    double mean_infidelity = 0.0;
    double mean_leakage = 0.0;
    double max_leakage = 0.0;
    /// Counts of k (one-step) or k * d + s (full).
    std::vector<long> outcome_histogram;
    /// Pearson chi-square of the histogram against a uniform distribution.
    double chi_square = 0.0;
    std::vector<TeleportRecord> records;  // first `record_cap` successful trials
    std::vector<std::string> failures;    // first `record_cap` failure messages
};

/// Runs `num_trials` independent trials; trial i uses Rng(derive_seed(seed, i)) for its input
/// state and its measurements, so the summary is a pure function of (descriptor, num_trials, seed).
TrialSummary run_trials(const ProtocolDescriptor &descriptor, int num_trials, std::uint64_t seed,
                        std::size_t record_cap = 64);

}  // namespace optqudit::protocols
