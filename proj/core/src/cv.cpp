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

#include "optqudit/cv.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "optqudit/errors.hpp"

namespace optqudit::cv {

namespace {

constexpr double kEmptySectorNorm = 1e-30;

std::size_t product_size(std::span<const int> dims, std::size_t cap) {
    std::size_t n = 1;
    for (const int d : dims) {
        if (d < 1) throw std::invalid_argument("MultiModeState: mode dimension must be >= 1");
        if (n > cap / static_cast<std::size_t>(d))
            throw CapacityError("MultiModeState: amplitude count exceeds cap of " + std::to_string(cap));
        n *= static_cast<std::size_t>(d);
    }
    return n;
}

void check_mode(const MultiModeState &state, int mode) {
    if (mode < 0 || mode >= state.num_modes())
        throw std::out_of_range("mode " + std::to_string(mode) + " out of range for " +
                                std::to_string(state.num_modes()) + "-mode state");
}

// 1 - |<a|b>|^2 / (|a|^2 |b|^2) via the orthogonal residual.
double fock_infidelity(const FockVector &a, const FockVector &b) {
    const FockVector ua = a.normalized();
    const FockVector ub = b.normalized();
    const cplx ov = fock::overlap(ua, ub);
    double perp = 0.0;
    const std::size_t n = std::max(ua.dim(), ub.dim());
    for (std::size_t i = 0; i < n; ++i) {
        const cplx x = i < ub.dim() ? ub[i] : cplx{};
        const cplx y = i < ua.dim() ? ua[i] : cplx{};
        perp += std::norm(x - y * ov);
    }
    return std::clamp(perp, 0.0, 1.0);
}

// Replaces `mode` (dimension N) by `bras.rows()` entries: out[.., r, ..] = sum_n bras(r, n) psi[.., n, ..].
std::vector<cplx> apply_mode_matrix(const MultiModeState &state, int mode, const Eigen::MatrixXcd &bras) {
    const std::size_t n_mode = static_cast<std::size_t>(state.mode_dims()[mode]);
    if (static_cast<std::size_t>(bras.cols()) != n_mode) throw std::invalid_argument("apply_mode_matrix: width mismatch");
    const std::size_t inner = state.stride(mode);
    const std::size_t outer = state.size() / (inner * n_mode);
    const std::size_t rows = static_cast<std::size_t>(bras.rows());
    const auto psi = state.amplitudes();
    std::vector<cplx> out(outer * rows * inner, cplx{});
    for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t r = 0; r < rows; ++r) {
            cplx *dst = &out[(o * rows + r) * inner];
            for (std::size_t n = 0; n < n_mode; ++n) {
                const cplx c = bras(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(n));
                if (c == cplx{}) continue;
                const cplx *src = &psi[(o * n_mode + n) * inner];
                for (std::size_t i = 0; i < inner; ++i) dst[i] += c * src[i];
            }
        }
    }
    return out;
}

}  // namespace

MultiModeState::MultiModeState(std::vector<int> mode_dims, std::vector<cplx> amplitudes, std::vector<std::string> labels)
    : dims_(std::move(mode_dims)), amps_(std::move(amplitudes)), labels_(std::move(labels)) {
    if (amps_.size() != product_size(dims_, ModeCaps{}.max_amplitudes))
        throw std::invalid_argument("MultiModeState: amplitude count must equal the product of mode dimensions");
    if (labels_.empty()) {
        for (std::size_t i = 0; i < dims_.size(); ++i) labels_.push_back("m" + std::to_string(i));
    } else if (labels_.size() != dims_.size()) {
        throw std::invalid_argument("MultiModeState: one label per mode");
    }
}

MultiModeState MultiModeState::single(const FockVector &mode, std::string label) {
    return MultiModeState({static_cast<int>(mode.dim())}, {mode.amplitudes().begin(), mode.amplitudes().end()},
                          {std::move(label)});
}

std::size_t MultiModeState::stride(int mode) const {
    std::size_t s = 1;
    for (std::size_t j = static_cast<std::size_t>(mode) + 1; j < dims_.size(); ++j) s *= static_cast<std::size_t>(dims_[j]);
    return s;
}

double MultiModeState::norm_squared() const {
    double s = 0.0;
    for (const auto &a : amps_) s += std::norm(a);
    return s;
}

MultiModeState MultiModeState::normalized() const {
    const double nrm = std::sqrt(norm_squared());
    if (nrm == 0.0) throw std::domain_error("MultiModeState::normalized: zero state");
    std::vector<cplx> out(amps_);
    for (auto &a : out) a /= nrm;
    return {dims_, std::move(out), labels_};
}

FockVector MultiModeState::as_fock() const {
    if (dims_.size() != 1) throw std::logic_error("MultiModeState::as_fock: state has " + std::to_string(dims_.size()) + " modes");
    return FockVector(amps_);
}

KerrPhase KerrPhase::controlled_z(QuditDims dims) {
    return {2.0 * std::numbers::pi / dims.d(), dims.d()};
}

FockVector raw_sector(const FockVector &coherent, int k, QuditDims dims) {
    if (k < 0 || k >= dims.d()) throw std::out_of_range("raw_sector: k out of range");
    std::vector<cplx> amps(coherent.dim(), cplx{});
    for (std::size_t n = static_cast<std::size_t>(k); n < amps.size(); n += static_cast<std::size_t>(dims.d()))
        amps[n] = coherent[n];
    return FockVector(std::move(amps));
}

PseudoNumberKet pseudo_number_ket(int k, QuditDims dims, cplx alpha, int n_max) {
    const FockVector raw = raw_sector(fock::coherent_state(alpha, n_max), k, dims);
    const double raw_norm = std::sqrt(raw.norm_squared());
    if (raw_norm < kEmptySectorNorm) {
        throw EmptySectorError("pseudo_number_ket: sector " + std::to_string(k) + " of d=" + std::to_string(dims.d()) +
                               " is empty at |alpha|=" + std::to_string(std::abs(alpha)));
    }
    return {raw.normalized(), std::abs(std::sqrt(static_cast<double>(dims.d())) * raw_norm - 1.0)};
}

FockVector pseudo_phase_ket(int l, QuditDims dims, cplx alpha, int n_max) {
    if (l < 0 || l >= dims.d()) throw std::out_of_range("pseudo_phase_ket: l out of range");
    return fock::coherent_state(dims.omega_pow(l) * alpha, n_max);
}

const FockVector &CodewordBasis::ket(qudit::MeasurementBasis basis, int j) const {
    const auto &kets = basis == qudit::MeasurementBasis::pseudo_number ? number_kets : phase_kets;
    return kets.at(static_cast<std::size_t>(j));
}

double CodewordBasis::max_defect() const {
    return *std::max_element(normalization_defects.begin(), normalization_defects.end());
}

double CodewordBasis::max_gap() const {
    return *std::max_element(phase_ket_physical_gap.begin(), phase_ket_physical_gap.end());
}

CodewordBasis codeword_subspace(QuditDims dims, cplx alpha, int n_max) {
    const int d = dims.d();
    CodewordBasis basis;
    basis.dims = dims;
    basis.alpha = alpha;
    basis.n_max = n_max;
    for (int k = 0; k < d; ++k) {
        auto [ket, defect] = pseudo_number_ket(k, dims, alpha, n_max);
        basis.number_kets.push_back(std::move(ket));
        basis.normalization_defects.push_back(defect);
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    for (int l = 0; l < d; ++l) {
        std::vector<cplx> amps(static_cast<std::size_t>(n_max) + 1, cplx{});
        // Sectors have disjoint support, so each photon number receives exactly one term.
        for (std::size_t n = 0; n < amps.size(); ++n) {
            const int k = static_cast<int>(n % static_cast<std::size_t>(d));
            amps[n] = scale * dims.omega_pow(static_cast<long long>(l) * k) * basis.number_kets[k][n];
        }
        basis.phase_kets.emplace_back(std::move(amps));
        basis.phase_ket_physical_gap.push_back(fock_infidelity(basis.phase_kets.back(), pseudo_phase_ket(l, dims, alpha, n_max)));
    }
    return basis;
}

double sector_balance(QuditDims dims, cplx alpha) {
    const double x = std::norm(alpha);
    double worst = INFINITY;
    for (int k = 0; k < dims.d(); ++k) worst = std::min(worst, dims.d() * fock::scaled_partial_exp_sum(k, dims.d(), x));
    return worst;
}

MultiModeState tensor(std::span<const FockVector> modes, const ModeCaps &caps) {
    if (modes.empty()) throw std::invalid_argument("tensor: no modes");
    if (static_cast<int>(modes.size()) > caps.max_modes)
        throw CapacityError("tensor: " + std::to_string(modes.size()) + " modes exceeds cap of " + std::to_string(caps.max_modes));
    std::vector<int> dims;
    for (const auto &m : modes) dims.push_back(static_cast<int>(m.dim()));
    product_size(dims, caps.max_amplitudes);
    std::vector<cplx> amps{cplx{1.0, 0.0}};
    for (const auto &m : modes) {
        std::vector<cplx> next(amps.size() * m.dim());
        for (std::size_t i = 0; i < amps.size(); ++i)
            for (std::size_t n = 0; n < m.dim(); ++n) next[i * m.dim() + n] = amps[i] * m[n];
        amps = std::move(next);
    }
    return {std::move(dims), std::move(amps)};
}

MultiModeState adjoin(const MultiModeState &state, const FockVector &mode, std::string label, const ModeCaps &caps) {
    if (state.num_modes() + 1 > caps.max_modes)
        throw CapacityError("adjoin: no room for another mode under cap of " + std::to_string(caps.max_modes));
    std::vector<int> dims = state.mode_dims();
    dims.push_back(static_cast<int>(mode.dim()));
    product_size(dims, caps.max_amplitudes);
    std::vector<cplx> amps(state.size() * mode.dim());
    const auto psi = state.amplitudes();
    for (std::size_t i = 0; i < psi.size(); ++i)
        for (std::size_t n = 0; n < mode.dim(); ++n) amps[i * mode.dim() + n] = psi[i] * mode[n];
    std::vector<std::string> labels = state.labels();
    labels.push_back(std::move(label));
    return {std::move(dims), std::move(amps), std::move(labels)};
}

MultiModeState apply_cross_kerr(const MultiModeState &state, int mode_a, int mode_b, const KerrPhase &kerr) {
    check_mode(state, mode_a);
    check_mode(state, mode_b);
    if (mode_a == mode_b) throw std::invalid_argument("apply_cross_kerr: modes must differ");
    if (!std::isfinite(kerr.chi_t)) throw std::invalid_argument("apply_cross_kerr: chi_t must be finite");
    const std::size_t na = static_cast<std::size_t>(state.mode_dims()[mode_a]);
    const std::size_t nb = static_cast<std::size_t>(state.mode_dims()[mode_b]);
    std::vector<cplx> table(na * nb);
    std::optional<QuditDims> exact;
    if (kerr.period) exact.emplace(*kerr.period);
    const double chi = std::remainder(kerr.chi_t, 2.0 * std::numbers::pi);
    for (std::size_t i = 0; i < na; ++i) {
        for (std::size_t j = 0; j < nb; ++j) {
            const auto m = static_cast<long long>(i * j);
            table[i * nb + j] = exact ? exact->omega_pow(m) : std::polar(1.0, chi * static_cast<double>(m));
        }
    }
    const std::size_t sa = state.stride(mode_a);
    const std::size_t sb = state.stride(mode_b);
    std::vector<cplx> amps(state.amplitudes().begin(), state.amplitudes().end());
    for (std::size_t idx = 0; idx < amps.size(); ++idx) {
        const std::size_t i = (idx / sa) % na;
        const std::size_t j = (idx / sb) % nb;
        amps[idx] *= table[i * nb + j];
    }
    return {state.mode_dims(), std::move(amps), state.labels()};
}

MultiModeState build_cv_cluster(const qudit::ClusterGraph &graph, QuditDims dims, cplx alpha, const KerrPhase &kerr,
                                int n_max, const ModeCaps &caps) {
    graph.validate();
    if (kerr.period && *kerr.period != dims.d())
        throw std::invalid_argument("build_cv_cluster: Kerr phase was built for a different d");
    if (graph.num_sites > caps.max_modes)
        throw CapacityError("build_cv_cluster: " + std::to_string(graph.num_sites) + " sites exceeds mode cap of " +
                            std::to_string(caps.max_modes));
    const std::vector<FockVector> modes(static_cast<std::size_t>(graph.num_sites), fock::coherent_state(alpha, n_max));
    MultiModeState state = tensor(modes, caps);
    for (const auto &[a, b] : graph.edges) state = apply_cross_kerr(state, a, b, kerr);
    return state;
}

FockVector encode_qudit(const qudit::QuditState &q, const CodewordBasis &basis) {
    if (!(q.dims() == basis.dims)) throw std::invalid_argument("encode_qudit: dimension mismatch");
    std::vector<cplx> amps(static_cast<std::size_t>(basis.n_max) + 1, cplx{});
    for (int l = 0; l < basis.dims.d(); ++l) {
        const auto &ket = basis.number_kets[static_cast<std::size_t>(l)];
        for (std::size_t n = 0; n < amps.size(); ++n) amps[n] += q.amplitudes()[l] * ket[n];
    }
    return FockVector(std::move(amps));
}

Decoded decode_cv(const MultiModeState &state, const CodewordBasis &basis, double leakage_abort) {
    const int d = basis.dims.d();
    const int width = basis.n_max + 1;
    for (const int md : state.mode_dims())
        if (md != width) throw std::invalid_argument("decode_cv: mode dimension does not match the codeword basis");
    if (state.num_modes() == 0) throw std::invalid_argument("decode_cv: state has no modes");

    Eigen::MatrixXcd bras(d, width);
    for (int k = 0; k < d; ++k)
        for (int n = 0; n < width; ++n) bras(k, n) = std::conj(basis.number_kets[static_cast<std::size_t>(k)][static_cast<std::size_t>(n)]);

    MultiModeState current = state;
    for (int mode = 0; mode < state.num_modes(); ++mode) {
        std::vector<int> dims = current.mode_dims();
        auto amps = apply_mode_matrix(current, mode, bras);
        dims[static_cast<std::size_t>(mode)] = d;
        current = MultiModeState(std::move(dims), std::move(amps), current.labels());
    }
    const double total = state.norm_squared();
    const double kept = current.norm_squared();
    if (!(total > 0.0)) throw ProbabilityError("decode_cv: zero state");
    const double leakage = std::clamp(1.0 - kept / total, 0.0, 1.0);
    if (leakage > leakage_abort || !(kept > 0.0))
        throw LeakageError("decode_cv: leakage " + std::to_string(leakage) + " exceeds abort threshold", leakage);
    qudit::Vector v(static_cast<Eigen::Index>(current.size()));
    const double nrm = std::sqrt(kept);
    for (std::size_t i = 0; i < current.size(); ++i) v[static_cast<Eigen::Index>(i)] = current.amplitudes()[i] / nrm;
    return {qudit::MultiQuditState(basis.dims, state.num_modes(), std::move(v)), leakage};
}

MultiModeState contract_mode(const MultiModeState &state, int mode, const FockVector &ket) {
    check_mode(state, mode);
    const int width = state.mode_dims()[static_cast<std::size_t>(mode)];
    Eigen::MatrixXcd bra = Eigen::MatrixXcd::Zero(1, width);
    for (int n = 0; n < width && static_cast<std::size_t>(n) < ket.dim(); ++n) bra(0, n) = std::conj(ket[static_cast<std::size_t>(n)]);
    auto amps = apply_mode_matrix(state, mode, bra);
    std::vector<int> dims = state.mode_dims();
    std::vector<std::string> labels = state.labels();
    dims.erase(dims.begin() + mode);
    labels.erase(labels.begin() + mode);
    return {std::move(dims), std::move(amps), std::move(labels)};
}

Eigen::MatrixXcd reduced_density(const MultiModeState &state, int mode) {
    check_mode(state, mode);
    const Eigen::Index n_mode = state.mode_dims()[static_cast<std::size_t>(mode)];
    const std::size_t inner = state.stride(mode);
    const std::size_t outer = state.size() / (inner * static_cast<std::size_t>(n_mode));
    const Eigen::Index rest = static_cast<Eigen::Index>(outer * inner);
    Eigen::MatrixXcd m(n_mode, rest);
    const auto psi = state.amplitudes();
    for (std::size_t o = 0; o < outer; ++o)
        for (Eigen::Index n = 0; n < n_mode; ++n)
            for (std::size_t i = 0; i < inner; ++i)
                m(n, static_cast<Eigen::Index>(o * inner + i)) = psi[(o * static_cast<std::size_t>(n_mode) + static_cast<std::size_t>(n)) * inner + i];
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(n_mode, n_mode);
    rho.selfadjointView<Eigen::Lower>().rankUpdate(m);
    return rho.selfadjointView<Eigen::Lower>();
}

}  // namespace optqudit::cv
