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

#include "optqudit/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "optqudit/errors.hpp"

namespace optqudit::measure {

namespace {

constexpr double kNormTolerance = 1e-8;
constexpr double kGridMassTolerance = 1e-6;
constexpr double kEigenCutoff = 1e-13;
constexpr int kMaxResamples = 64;

// Coherent ket |beta> over `dim` levels, no tail check (used as a projector, not a state).
fock::FockVector coherent_ket(cplx beta, std::size_t dim) {
    std::vector<cplx> amps(dim);
    amps[0] = std::exp(-0.5 * std::norm(beta));
    for (std::size_t n = 0; n + 1 < dim; ++n) amps[n + 1] = amps[n] * beta / std::sqrt(static_cast<double>(n + 1));
    return fock::FockVector(std::move(amps));
}

void check_codeword_mode(const MultiModeState &state, int mode, const CodewordBasis &basis) {
    if (mode < 0 || mode >= state.num_modes()) throw std::out_of_range("measurement: mode out of range");
    if (state.mode_dims()[static_cast<std::size_t>(mode)] != basis.n_max + 1)
        throw std::invalid_argument("measurement: mode dimension does not match the codeword basis");
}

}  // namespace

void HeterodyneConfig::validate() const {
    if (!(grid_radius_sigmas >= 6.0)) throw std::invalid_argument("HeterodyneConfig: grid must cover at least 6 sigma");
    if (grid_points_per_axis < 64) throw std::invalid_argument("HeterodyneConfig: need at least 64 grid points per axis");
}

std::vector<double> subspace_probabilities(const MultiModeState &state, int mode, MeasurementBasis kind,
                                           const CodewordBasis &basis) {
    check_codeword_mode(state, mode, basis);
    const double total = state.norm_squared();
    if (std::abs(total - 1.0) > kNormTolerance)
        throw ProbabilityError("subspace measurement: input norm^2 " + std::to_string(total) + " is not 1");
    const int d = basis.dims.d();
    std::vector<double> probs(static_cast<std::size_t>(d) + 1);
    double kept = 0.0;
    for (int j = 0; j < d; ++j) {
        probs[static_cast<std::size_t>(j)] = cv::contract_mode(state, mode, basis.ket(kind, j)).norm_squared() / total;
        kept += probs[static_cast<std::size_t>(j)];
    }
    probs.back() = std::max(0.0, 1.0 - kept);
    return probs;
}

SubspaceOutcome subspace_projective_measure(const MultiModeState &state, int mode, MeasurementBasis kind,
                                            const CodewordBasis &basis, Rng &rng, std::optional<int> forced) {
    const std::vector<double> probs = subspace_probabilities(state, mode, kind, basis);
    const int d = basis.dims.d();
    int outcome;
    if (forced) {
        if (*forced < 0 || *forced >= d) throw std::out_of_range("subspace measurement: forced outcome out of range");
        if (!(probs[static_cast<std::size_t>(*forced)] > 0.0))
            throw ProbabilityError("subspace measurement: forced outcome has zero probability");
        outcome = *forced;
    } else {
        const std::size_t idx = sample_discrete(probs, rng);
        outcome = idx == static_cast<std::size_t>(d) ? kLeakOutcome : static_cast<int>(idx);
    }

    SubspaceOutcome out{{}, std::nullopt, probs.back()};
    out.record.mode = state.labels()[static_cast<std::size_t>(mode)];
    out.record.model = MeasurementModel::subspace_projective;
    out.record.basis = kind;
    out.record.outcome = outcome;
    out.record.probs = std::vector<double>(probs.begin(), probs.end() - 1);
    out.record.leak_probability = probs.back();
    out.record.seed_used = rng.seed();
    if (outcome != kLeakOutcome) out.post = cv::contract_mode(state, mode, basis.ket(kind, outcome)).normalized();
    return out;
}

HeterodyneSampler::HeterodyneSampler(const MultiModeState &state, int mode, const HeterodyneConfig &cfg)
    : state_(state), mode_(mode), points_(cfg.grid_points_per_axis) {
    cfg.validate();
    const Eigen::MatrixXcd rho = cv::reduced_density(state_, mode_);
    trace_ = rho.trace().real();
    if (!(trace_ > 0.0)) throw ProbabilityError("heterodyne: zero state");

    cplx mean_a{};
    double mean_n = 0.0;
    for (Eigen::Index m = 0; m < rho.rows(); ++m) {
        mean_n += static_cast<double>(m) * rho(m, m).real();
        if (m > 0) mean_a += std::sqrt(static_cast<double>(m)) * rho(m, m - 1);
    }
    mean_a /= trace_;
    mean_n /= trace_;
    center_ = mean_a;
    half_width_ = std::sqrt(std::max(0.0, mean_n - std::norm(mean_a))) + cfg.grid_radius_sigmas * std::sqrt(0.5);
    cell_ = 2.0 * half_width_ / points_;

    if (state_.size() == static_cast<std::size_t>(rho.rows())) {
        // Only this mode is left: the state itself is the single eigenvector.
        Eigen::VectorXcd v(rho.rows());
        for (Eigen::Index n = 0; n < v.size(); ++n) v[n] = state_.amplitudes()[static_cast<std::size_t>(n)];
        weights_.push_back(v.squaredNorm());
        vectors_.push_back(v / std::sqrt(weights_.back()));
    } else {
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(rho);
        const auto &vals = eig.eigenvalues();
        const double top = vals.maxCoeff();
        for (Eigen::Index i = 0; i < vals.size(); ++i) {
            if (vals[i] > kEigenCutoff * top) {
                weights_.push_back(vals[i]);
                vectors_.push_back(eig.eigenvectors().col(i));
            }
        }
    }

    cdf_.resize(static_cast<std::size_t>(points_) * points_);
    const Eigen::Index dim = rho.rows();
    Eigen::MatrixXcd retained(dim, static_cast<Eigen::Index>(vectors_.size()));
    for (std::size_t i = 0; i < vectors_.size(); ++i) retained.col(static_cast<Eigen::Index>(i)) = vectors_[i];
    std::vector<double> inv_sqrt(static_cast<std::size_t>(dim));
    for (Eigen::Index n = 0; n < dim; ++n) inv_sqrt[static_cast<std::size_t>(n)] = 1.0 / std::sqrt(static_cast<double>(n + 1));

    // One grid row at a time: coherent bras as rows, projected onto the retained eigenvectors.
    Eigen::MatrixXcd bras(points_, dim);
    Eigen::VectorXcd conj_beta(points_);
    double acc = 0.0;
    const double area = cell_ * cell_;
    for (int iy = 0; iy < points_; ++iy) {
        for (int ix = 0; ix < points_; ++ix) {
            const cplx beta = center_ + cplx{-half_width_ + (ix + 0.5) * cell_, -half_width_ + (iy + 0.5) * cell_};
            conj_beta[ix] = std::conj(beta);
            bras(ix, 0) = std::exp(-0.5 * std::norm(beta));
        }
        for (Eigen::Index n = 0; n + 1 < dim; ++n)
            bras.col(n + 1) = bras.col(n).cwiseProduct(conj_beta) * inv_sqrt[static_cast<std::size_t>(n)];
        const Eigen::MatrixXcd proj = bras * retained;
        for (int ix = 0; ix < points_; ++ix) {
            double q = 0.0;
            for (Eigen::Index i = 0; i < proj.cols(); ++i) q += weights_[static_cast<std::size_t>(i)] * std::norm(proj(ix, i));
            acc += q / std::numbers::pi * area;
            cdf_[static_cast<std::size_t>(iy) * points_ + ix] = acc;
        }
    }
    mass_ = acc / trace_;
    if (mass_ < 1.0 - kGridMassTolerance)
        throw GridCoverageError("heterodyne: grid holds only " + std::to_string(mass_) + " of the Q mass; enlarge the radius");
}

double HeterodyneSampler::q_unnormalized(cplx beta) const {
    const std::size_t dim = static_cast<std::size_t>(state_.mode_dims()[static_cast<std::size_t>(mode_)]);
    // conj of <n|beta>: e^{-|b|^2/2} conj(b)^n / sqrt(n!)
    thread_local std::vector<cplx> bra;
    bra.resize(dim);
    const cplx bc = std::conj(beta);
    bra[0] = std::exp(-0.5 * std::norm(beta));
    for (std::size_t n = 0; n + 1 < dim; ++n) bra[n + 1] = bra[n] * bc / std::sqrt(static_cast<double>(n + 1));
    double q = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        const Eigen::VectorXcd &v = vectors_[i];
        cplx s{};
        for (std::size_t n = 0; n < dim; ++n) s += bra[n] * v[static_cast<Eigen::Index>(n)];
        q += weights_[i] * std::norm(s);
    }
    return q / std::numbers::pi;
}

double HeterodyneSampler::q_function(double x1, double x2) const { return q_unnormalized({x1, x2}) / trace_; }

std::pair<double, double> HeterodyneSampler::sample(Rng &rng) const {
    const double target = rng.uniform() * cdf_.back();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), target);
    if (it == cdf_.end()) --it;
    const auto cell = static_cast<std::size_t>(it - cdf_.begin());
    const int ix = static_cast<int>(cell % static_cast<std::size_t>(points_));
    const int iy = static_cast<int>(cell / static_cast<std::size_t>(points_));
    const double jx = rng.uniform();
    const double jy = rng.uniform();
    return {center_.real() - half_width_ + (ix + jx) * cell_, center_.imag() - half_width_ + (iy + jy) * cell_};
}

MultiModeState HeterodyneSampler::conditional_state(double x1, double x2) const {
    const std::size_t dim = static_cast<std::size_t>(state_.mode_dims()[static_cast<std::size_t>(mode_)]);
    return cv::contract_mode(state_, mode_, coherent_ket({x1, x2}, dim)).normalized();
}

HeterodyneSample heterodyne_sample(const MultiModeState &state, int mode, const HeterodyneConfig &cfg, Rng &rng) {
    const HeterodyneSampler sampler(state, mode, cfg);
    const auto [x1, x2] = sampler.sample(rng);
    return {x1, x2, sampler.conditional_state(x1, x2)};
}

int phase_bin(double x1, double x2, qudit::QuditDims dims, double ref_phase) {
    if (std::hypot(x1, x2) < 1e-30) throw ZeroSampleError("phase_bin: sample at the origin has no phase");
    const double turns = (std::atan2(x2, x1) - ref_phase) / (2.0 * std::numbers::pi);
    const long long l = std::llround(dims.d() * turns);
    const long long r = l % dims.d();
    return static_cast<int>(r < 0 ? r + dims.d() : r);
}

MeasureOutcome measure_pseudo_phase(const MultiModeState &state, int mode, MeasurementModel model,
                                    const CodewordBasis &basis, const HeterodyneConfig &cfg, Rng &rng) {
    if (model == MeasurementModel::subspace_projective) {
        auto res = subspace_projective_measure(state, mode, MeasurementBasis::pseudo_phase, basis, rng);
        return {std::move(res.record), std::move(res.post)};
    }
    check_codeword_mode(state, mode, basis);
    const HeterodyneSampler sampler(state, mode, cfg);
    for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
        const auto [x1, x2] = sampler.sample(rng);
        int outcome;
        try {
            outcome = phase_bin(x1, x2, basis.dims, std::arg(basis.alpha));
        } catch (const ZeroSampleError &) {
            continue;
        }
        MeasureOutcome out{{}, sampler.conditional_state(x1, x2)};
        out.record.mode = state.labels()[static_cast<std::size_t>(mode)];
        out.record.model = MeasurementModel::heterodyne_bin;
        out.record.basis = MeasurementBasis::pseudo_phase;
        out.record.outcome = outcome;
        out.record.raw_sample = std::make_pair(x1, x2);
        out.record.seed_used = rng.seed();
        return out;
    }
    throw ZeroSampleError("measure_pseudo_phase: no usable heterodyne sample");
}

MeasureOutcome measure_pseudo_number_via_ancilla(const MultiModeState &state, int mode, const CodewordBasis &basis,
                                                 MeasurementModel model, const HeterodyneConfig &cfg, Rng &rng,
                                                 const cv::ModeCaps &caps) {
    if (mode < 0 || mode >= state.num_modes()) throw std::out_of_range("ancilla measurement: mode out of range");
    const auto ancilla_state = fock::coherent_state(basis.alpha, basis.n_max);
    MultiModeState joint = cv::adjoin(state, ancilla_state, "ancilla", caps);
    const int ancilla = joint.num_modes() - 1;
    joint = cv::apply_cross_kerr(joint, mode, ancilla, cv::KerrPhase::controlled_z(basis.dims));
    // The truncated ancilla is short of unit norm by its Poisson tail.
    joint = joint.normalized();
    MeasureOutcome out = measure_pseudo_phase(joint, ancilla, model, basis, cfg, rng);
    out.record.mode = state.labels()[static_cast<std::size_t>(mode)];
    out.record.basis = MeasurementBasis::pseudo_number;
    return out;
}

}  // namespace optqudit::measure
