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

#include "optqudit/qudit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "optqudit/errors.hpp"

namespace optqudit::qudit {

namespace {

constexpr double kUnitaryTolerance = 1e-12;
constexpr double kNormTolerance = 1e-12;

int mod(long long a, int d) {
    const long long r = a % d;
    return static_cast<int>(r < 0 ? r + d : r);
}

std::size_t checked_size(int d, int num_sites) {
    if (num_sites < 0) throw std::invalid_argument("MultiQuditState: negative site count");
    std::size_t n = 1;
    for (int i = 0; i < num_sites; ++i) {
        if (n > kMaxQuditAmplitudes / static_cast<std::size_t>(d))
            throw CapacityError("MultiQuditState: d^num_sites exceeds the 2^24 amplitude cap");
        n *= static_cast<std::size_t>(d);
    }
    return n;
}

std::size_t site_stride(int d, int num_sites, int site) {
    std::size_t stride = 1;
    for (int i = site + 1; i < num_sites; ++i) stride *= static_cast<std::size_t>(d);
    return stride;
}

void check_site(const MultiQuditState &state, int site) {
    if (site < 0 || site >= state.num_sites())
        throw std::out_of_range("site " + std::to_string(site) + " out of range for " +
                                std::to_string(state.num_sites()) + "-site state");
}

// <ket|_site psi, with the site removed.
Vector contract_site(const MultiQuditState &state, int site, const Vector &ket) {
    const int d = state.dims().d();
    const std::size_t inner = site_stride(d, state.num_sites(), site);
    const std::size_t outer = static_cast<std::size_t>(state.amplitudes().size()) / (inner * d);
    Vector out = Vector::Zero(static_cast<Eigen::Index>(outer * inner));
    const auto &psi = state.amplitudes();
    for (std::size_t o = 0; o < outer; ++o) {
        for (int m = 0; m < d; ++m) {
            const cplx c = std::conj(ket[m]);
            if (c == cplx{}) continue;
            const std::size_t base = (o * d + m) * inner;
            for (std::size_t i = 0; i < inner; ++i) out[o * inner + i] += c * psi[base + i];
        }
    }
    return out;
}

}  // namespace

QuditDims::QuditDims(int d) : d_(d) {
    if (d < 1) throw std::invalid_argument("QuditDims: d must be >= 1");
}

cplx QuditDims::omega_pow(long long k) const noexcept {
    const int r = mod(k, d_);
    if (r == 0) return {1.0, 0.0};
    return std::polar(1.0, 2.0 * std::numbers::pi * r / d_);
}

QuditState::QuditState(QuditDims dims, Vector amplitudes) : dims_(dims), amps_(std::move(amplitudes)) {
    if (amps_.size() != dims_.d()) throw std::invalid_argument("QuditState: amplitude count must equal d");
    if (std::abs(amps_.squaredNorm() - 1.0) > kNormTolerance)
        throw std::invalid_argument("QuditState: amplitudes must be normalized");
}

QuditState QuditState::basis(QuditDims dims, int k) {
    if (k < 0 || k >= dims.d()) throw std::out_of_range("QuditState::basis: k out of range");
    Vector v = Vector::Zero(dims.d());
    v[k] = 1.0;
    return {dims, std::move(v)};
}

QuditState QuditState::uniform(QuditDims dims) {
    return {dims, Vector::Constant(dims.d(), cplx{1.0 / std::sqrt(static_cast<double>(dims.d())), 0.0})};
}

QuditState QuditState::random(QuditDims dims, Rng &rng) {
    Vector v(dims.d());
    for (int i = 0; i < dims.d(); ++i) {
        const double re = rng.normal();
        const double im = rng.normal();
        v[i] = {re, im};
    }
    v /= v.norm();
    return {dims, std::move(v)};
}

std::string to_string(const Gate &gate) {
    static constexpr const char *names[] = {"H", "Z", "X", "R"};
    std::string s = names[static_cast<int>(gate.kind)];
    if (gate.power != 1) s += "^" + std::to_string(gate.power);
    return s;
}

std::string to_string(const GateWord &word) {
    std::string s;
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (i) s += ' ';
        s += to_string(word[i]);
    }
    return s;
}

GateWord inverse(const GateWord &word) {
    GateWord out;
    out.reserve(word.size());
    for (auto it = word.rbegin(); it != word.rend(); ++it) out.push_back(it->inverse());
    return out;
}

GateMatrix::GateMatrix(QuditDims dims, Matrix entries) : dims_(dims), m_(std::move(entries)) {
    const int d = dims_.d();
    if (m_.rows() != d || m_.cols() != d) throw std::invalid_argument("GateMatrix: shape must be d x d");
    const Matrix defect = m_.adjoint() * m_ - Matrix::Identity(d, d);
    if (defect.cwiseAbs().maxCoeff() > kUnitaryTolerance) throw std::invalid_argument("GateMatrix: not unitary");
}

GateMatrix GateMatrix::operator*(const GateMatrix &rhs) const {
    if (!(dims_ == rhs.dims_)) throw std::invalid_argument("GateMatrix: dimension mismatch");
    return {dims_, m_ * rhs.m_};
}

GateMatrix GateMatrix::adjoint() const { return {dims_, m_.adjoint()}; }

QuditState GateMatrix::apply(const QuditState &state) const {
    if (!(dims_ == state.dims())) throw std::invalid_argument("GateMatrix::apply: dimension mismatch");
    Vector v = m_ * state.amplitudes();
    // Rounding from long words can push the norm off by a few ulps.
    v /= v.norm();
    return {dims_, std::move(v)};
}

GateMatrix gate_matrix(Gate gate, QuditDims dims) {
    const int d = dims.d();
    Matrix m = Matrix::Zero(d, d);
    switch (gate.kind) {
        case GateKind::Z: {
            for (int k = 0; k < d; ++k) m(k, k) = dims.omega_pow(static_cast<long long>(gate.power) * k);
            break;
        }
        case GateKind::X: {
            // X^p |k> = |k - p>
            for (int k = 0; k < d; ++k) m(mod(static_cast<long long>(k) - gate.power, d), k) = 1.0;
            break;
        }
        case GateKind::R: {
            const bool odd = mod(gate.power, 2) == 1;
            for (int k = 0; k < d; ++k) m(odd ? mod(-k, d) : k, k) = 1.0;
            break;
        }
        case GateKind::H: {
            // H^2 = R, H^3 = H^dagger, H^4 = I.
            const int p = mod(gate.power, 4);
            if (p == 0 || p == 2) return gate_matrix({GateKind::R, p / 2}, dims);
            const double scale = 1.0 / std::sqrt(static_cast<double>(d));
            const long long sign = (p == 1) ? 1 : -1;
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) m(k, l) = scale * dims.omega_pow(sign * k * l);
            break;
        }
    }
    return {dims, std::move(m)};
}

GateMatrix word_matrix(const GateWord &word, QuditDims dims) {
    Matrix m = Matrix::Identity(dims.d(), dims.d());
    for (const Gate &g : word) m = gate_matrix(g, dims).entries() * m;
    return {dims, std::move(m)};
}

QuditState apply_word(const GateWord &word, const QuditState &state) {
    return word_matrix(word, state.dims()).apply(state);
}

MultiQuditState::MultiQuditState(QuditDims dims, int num_sites, Vector amplitudes)
    : dims_(dims), num_sites_(num_sites), amps_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(amps_.size()) != checked_size(dims_.d(), num_sites_))
        throw std::invalid_argument("MultiQuditState: amplitude count must equal d^num_sites");
    if (std::abs(amps_.squaredNorm() - 1.0) > kNormTolerance)
        throw std::invalid_argument("MultiQuditState: amplitudes must be normalized");
}

MultiQuditState MultiQuditState::product(std::span<const QuditState> sites) {
    if (sites.empty()) throw std::invalid_argument("MultiQuditState::product: no sites");
    const QuditDims dims = sites.front().dims();
    checked_size(dims.d(), static_cast<int>(sites.size()));
    Vector amps = Vector::Ones(1);
    for (const auto &q : sites) {
        if (!(q.dims() == dims)) throw std::invalid_argument("MultiQuditState::product: mixed dimensions");
        Vector next(amps.size() * dims.d());
        for (Eigen::Index i = 0; i < amps.size(); ++i)
            for (int k = 0; k < dims.d(); ++k) next[i * dims.d() + k] = amps[i] * q.amplitudes()[k];
        amps = std::move(next);
    }
    return {dims, static_cast<int>(sites.size()), std::move(amps)};
}

QuditState MultiQuditState::as_qudit() const {
    if (num_sites_ != 1) throw std::logic_error("MultiQuditState::as_qudit: state has " + std::to_string(num_sites_) + " sites");
    return {dims_, amps_};
}

void ClusterGraph::validate() const {
    if (num_sites < 1) throw std::invalid_argument("ClusterGraph: need at least one site");
    for (const auto &[a, b] : edges) {
        if (a == b) throw std::invalid_argument("ClusterGraph: self-loop on site " + std::to_string(a));
        if (a < 0 || b < 0 || a >= num_sites || b >= num_sites)
            throw std::invalid_argument("ClusterGraph: edge endpoint out of range");
    }
}

ClusterGraph ClusterGraph::path(int num_sites) {
    ClusterGraph g{num_sites, {}};
    for (int i = 0; i + 1 < num_sites; ++i) g.edges.emplace_back(i, i + 1);
    return g;
}

MultiQuditState cz_apply(const MultiQuditState &state, int site_a, int site_b, int power) {
    check_site(state, site_a);
    check_site(state, site_b);
    if (site_a == site_b) throw std::invalid_argument("cz_apply: sites must differ");
    const int d = state.dims().d();
    std::vector<cplx> phase(d);
    for (int j = 0; j < d; ++j) phase[j] = state.dims().omega_pow(static_cast<long long>(power) * j);
    const std::size_t sa = site_stride(d, state.num_sites(), site_a);
    const std::size_t sb = site_stride(d, state.num_sites(), site_b);
    Vector amps = state.amplitudes();
    for (Eigen::Index idx = 0; idx < amps.size(); ++idx) {
        const std::size_t ka = (static_cast<std::size_t>(idx) / sa) % d;
        const std::size_t kb = (static_cast<std::size_t>(idx) / sb) % d;
        amps[idx] *= phase[(ka * kb) % d];
    }
    return {state.dims(), state.num_sites(), std::move(amps)};
}

MultiQuditState ideal_cluster(const ClusterGraph &graph, QuditDims dims) {
    graph.validate();
    const std::vector<QuditState> sites(graph.num_sites, QuditState::uniform(dims));
    MultiQuditState state = MultiQuditState::product(sites);
    for (const auto &[a, b] : graph.edges) state = cz_apply(state, a, b);
    return state;
}

Vector basis_ket(MeasurementBasis basis, int j, QuditDims dims) {
    if (j < 0 || j >= dims.d()) throw std::out_of_range("basis_ket: index out of range");
    if (basis == MeasurementBasis::pseudo_number) return QuditState::basis(dims, j).amplitudes();
    Vector v(dims.d());
    const double scale = 1.0 / std::sqrt(static_cast<double>(dims.d()));
    for (int m = 0; m < dims.d(); ++m) v[m] = scale * dims.omega_pow(static_cast<long long>(m) * j);
    return v;
}

IdealMeasurement ideal_measure(const MultiQuditState &state, int site, MeasurementBasis basis, Rng &rng,
                               std::optional<int> forced) {
    check_site(state, site);
    const int d = state.dims().d();
    std::vector<Vector> branches;
    std::vector<double> probs(d);
    double total = 0.0;
    for (int j = 0; j < d; ++j) {
        branches.push_back(contract_site(state, site, basis_ket(basis, j, state.dims())));
        probs[j] = branches.back().squaredNorm();
        total += probs[j];
    }
    if (!(total > 0.0)) throw ProbabilityError("ideal_measure: all outcome probabilities vanish");
    for (double &p : probs) p /= total;

    int outcome;
    if (forced) {
        if (*forced < 0 || *forced >= d) throw std::out_of_range("ideal_measure: forced outcome out of range");
        if (!(probs[*forced] > 0.0)) throw ProbabilityError("ideal_measure: forced outcome has zero probability");
        outcome = *forced;
    } else {
        outcome = static_cast<int>(sample_discrete(probs, rng));
    }
    Vector post = std::move(branches[outcome]);
    post /= post.norm();
    return {outcome, MultiQuditState(state.dims(), state.num_sites() - 1, std::move(post)), std::move(probs)};
}

double fidelity(const Vector &a, const Vector &b) { return std::norm(a.dot(b)); }

double fidelity(const QuditState &a, const QuditState &b) { return fidelity(a.amplitudes(), b.amplitudes()); }

double infidelity(const Vector &a, const Vector &b) {
    const Vector ua = a / a.norm();
    const Vector ub = b / b.norm();
    const Vector perp = ub - ua * ua.dot(ub);
    return std::clamp(perp.squaredNorm(), 0.0, 1.0);
}

std::vector<double> schmidt_coefficients(const MultiQuditState &state, int cut) {
    if (cut <= 0 || cut >= state.num_sites()) throw std::invalid_argument("schmidt_coefficients: cut must split the sites");
    const Eigen::Index rows = static_cast<Eigen::Index>(checked_size(state.dims().d(), cut));
    const Eigen::Index cols = state.amplitudes().size() / rows;
    // Row-major amplitudes reshape into (left, right) via the transpose of a column-major map.
    const Eigen::Map<const Matrix> m(state.amplitudes().data(), cols, rows);
    const Eigen::BDCSVD<Matrix> svd(m.transpose());
    const auto &sv = svd.singularValues();
    return {sv.data(), sv.data() + sv.size()};
}

double entropy_from_schmidt(std::span<const double> coefficients) {
    double s = 0.0;
    for (const double c : coefficients) {
        const double p = c * c;
        if (p > 0.0) s -= p * std::log(p);
    }
    return s;
}

double entanglement_entropy(const MultiQuditState &state, int cut) {
    const auto coeffs = schmidt_coefficients(state, cut);
    return entropy_from_schmidt(coeffs);
}

}  // namespace optqudit::qudit
