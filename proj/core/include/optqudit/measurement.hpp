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
#include <vector>

#include "optqudit/cv.hpp"
#include "optqudit/random.hpp"
#include "optqudit/teleport_record.hpp"

namespace optqudit::measure {

using cv::CodewordBasis;
using cv::MultiModeState;
using qudit::MeasurementBasis;

/// Outcome reported when a subspace measurement lands outside the codeword span.
inline constexpr int kLeakOutcome = -1;

struct MeasurementRecord {
    std::string mode;
    MeasurementModel model = MeasurementModel::subspace_projective;
    MeasurementBasis basis = MeasurementBasis::pseudo_phase;
    int outcome = 0;  // 0..d-1, or kLeakOutcome
    std::optional<std::pair<double, double>> raw_sample;
    /// Born probabilities of the d codeword outcomes; together with leak_probability they sum to 1.
    std::optional<std::vector<double>> probs;
    double leak_probability = 0.0;
    std::uint64_t seed_used = 0;

    bool leaked() const noexcept { return outcome == kLeakOutcome; }
};

/// Grid used to sample the Husimi Q function.
///
/// Quadrature convention: a sample (x1, x2) is the complex amplitude beta = x1 + i x2 drawn from
/// Q(beta) = <beta|rho|beta> / pi. For a coherent state |beta0> the sample mean is beta0, each axis
/// has variance 1/2 and E|beta - beta0|^2 = 1 (vacuum 1/2 plus the extra 1/2 from the 50/50 split).
struct HeterodyneConfig {
    /// Half-width of the grid beyond the state's photon-number spread, in units of the
    /// per-axis vacuum standard deviation sqrt(1/2).
    double grid_radius_sigmas = 6.0;
    int grid_points_per_axis = 128;

    void validate() const;
};

struct SubspaceOutcome {
    MeasurementRecord record;
    std::optional<MultiModeState> post;  // empty for the leak outcome
    double leakage;
};

/// Born probabilities of the d kets of `kind` on `mode` followed by the leak probability.
std::vector<double> subspace_probabilities(const MultiModeState &state, int mode, MeasurementBasis kind,
                                           const CodewordBasis &basis);

/// Projective measurement onto the d orthonormal kets of `kind` plus the orthogonal complement.
///
/// Consumes exactly one uniform draw. Throws ProbabilityError when the input norm is off by
/// more than 1e-8.
SubspaceOutcome subspace_projective_measure(const MultiModeState &state, int mode, MeasurementBasis kind,
                                            const CodewordBasis &basis, Rng &rng,
                                            std::optional<int> forced = std::nullopt);

/// Q-function sampler for one mode of a fixed state, built once and drawn from repeatedly.
class HeterodyneSampler {
  public:
    /// Throws GridCoverageError when the grid holds less than 1 - 1e-6 of the Q mass.
    HeterodyneSampler(const MultiModeState &state, int mode, const HeterodyneConfig &cfg = {});

    /// Draws beta = x1 + i x2: a grid cell by its probability, then a uniform point in the cell.
    std::pair<double, double> sample(Rng &rng) const;

    /// Remaining modes conditioned on the outcome beta, renormalized.
    MultiModeState conditional_state(double x1, double x2) const;

    /// Q(beta) for the measured mode, normalized to unit trace.
    double q_function(double x1, double x2) const;

    cplx center() const noexcept { return center_; }
    double half_width() const noexcept { return half_width_; }
    double cell_size() const noexcept { return cell_; }
    double grid_mass() const noexcept { return mass_; }

  private:
    double q_unnormalized(cplx beta) const;

    MultiModeState state_;
    int mode_;
    int points_;
    double trace_ = 0.0;
    cplx center_;
    double half_width_ = 0.0;
    double cell_ = 0.0;
    double mass_ = 0.0;
    std::vector<double> weights_;           // retained eigenvalues of the reduced density matrix
    std::vector<Eigen::VectorXcd> vectors_;  // matching eigenvectors
    std::vector<double> cdf_;
};

struct HeterodyneSample {
    double x1;
    double x2;
    MultiModeState post;
};

HeterodyneSample heterodyne_sample(const MultiModeState &state, int mode, const HeterodyneConfig &cfg, Rng &rng);

/// Index of the sector center omega^l e^{i ref_phase} nearest in angle to x1 + i x2.
///
/// Throws ZeroSampleError for a sample at the origin.
int phase_bin(double x1, double x2, qudit::QuditDims dims, double ref_phase = 0.0);

struct MeasureOutcome {
    MeasurementRecord record;
    std::optional<MultiModeState> post;
};

/// Pseudo-phase measurement of one mode with either model. The heterodyne model bins against
/// arg(basis.alpha) and leaves the remaining modes conditioned on the raw sample.
MeasureOutcome measure_pseudo_phase(const MultiModeState &state, int mode, MeasurementModel model,
                                    const CodewordBasis &basis, const HeterodyneConfig &cfg, Rng &rng);

/// Pseudo-number measurement through a coherent ancilla: controlled-Z between target and a fresh
/// |alpha>, then a pseudo-phase measurement of the ancilla. The ancilla is removed from `post`.
MeasureOutcome measure_pseudo_number_via_ancilla(const MultiModeState &state, int mode, const CodewordBasis &basis,
                                                 MeasurementModel model, const HeterodyneConfig &cfg, Rng &rng,
                                                 const cv::ModeCaps &caps = {});

}  // namespace optqudit::measure
