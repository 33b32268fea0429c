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

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "optqudit/random.hpp"

namespace optqudit {

using cplx = std::complex<double>;

namespace qudit {

using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Largest number of amplitudes a MultiQuditState may hold (2^24).
inline constexpr std::size_t kMaxQuditAmplitudes = std::size_t{1} << 24;

/// Qudit dimension d together with omega = e^{2 pi i / d}.
///
/// d = 1 is accepted: it is the degenerate one-sector code that the CV engine uses as a sanity case.
class QuditDims {
  public:
    explicit QuditDims(int d);

    int d() const noexcept { return d_; }
    cplx omega() const noexcept { return omega_pow(1); }
    /// omega^k with k reduced mod d before evaluation, so equal exponents give identical bits.
    cplx omega_pow(long long k) const noexcept;

    friend bool operator==(const QuditDims &, const QuditDims &) = default;

  private:
    int d_;
};

/// Normalized single-qudit state in the pseudo-number basis.
class QuditState {
  public:
    QuditState(QuditDims dims, Vector amplitudes);

    static QuditState basis(QuditDims dims, int k);
    /// (1/sqrt d) sum_k |k>, the ideal image of a coherent state.
    static QuditState uniform(QuditDims dims);
    /// Normalized complex-Gaussian draw (Haar-distributed).
    static QuditState random(QuditDims dims, Rng &rng);

    const QuditDims &dims() const noexcept { return dims_; }
    const Vector &amplitudes() const noexcept { return amps_; }

  private:
    QuditDims dims_;
    Vector amps_;
};

enum class GateKind { H, Z, X, R };

/// One generalized Clifford gate raised to an integer power.
struct Gate {
    GateKind kind;
    int power = 1;

    Gate inverse() const { return {kind, -power}; }
    friend bool operator==(const Gate &, const Gate &) = default;
};

/// Gates in the order they act: word[0] is applied first.
using GateWord = std::vector<Gate>;

std::string to_string(const Gate &gate);
std::string to_string(const GateWord &word);

/// Inverse word: reversed order, negated powers.
GateWord inverse(const GateWord &word);

/// Dense d x d unitary.
class GateMatrix {
  public:
    /// Throws std::invalid_argument if `entries` is not unitary to 1e-12.
    GateMatrix(QuditDims dims, Matrix entries);

    const QuditDims &dims() const noexcept { return dims_; }
    const Matrix &entries() const noexcept { return m_; }

    GateMatrix operator*(const GateMatrix &rhs) const;
    GateMatrix adjoint() const;
    QuditState apply(const QuditState &state) const;

  private:
    QuditDims dims_;
    Matrix m_;
};

/// H[k][l] = omega^{kl}/sqrt d, Z = diag(omega^k), X|k> = |k-1>, R|k> = |-k>, raised to gate.power.
GateMatrix gate_matrix(Gate gate, QuditDims dims);

/// Operator of a word: the last gate ends up leftmost.
GateMatrix word_matrix(const GateWord &word, QuditDims dims);

QuditState apply_word(const GateWord &word, const QuditState &state);

/// d^num_sites amplitudes, site 0 the slowest-varying digit.
class MultiQuditState {
  public:
    MultiQuditState(QuditDims dims, int num_sites, Vector amplitudes);

    static MultiQuditState product(std::span<const QuditState> sites);

    const QuditDims &dims() const noexcept { return dims_; }
    int num_sites() const noexcept { return num_sites_; }
    const Vector &amplitudes() const noexcept { return amps_; }

    /// Requires num_sites() == 1.
    QuditState as_qudit() const;

  private:
    QuditDims dims_;
    int num_sites_;
    Vector amps_;
};

struct ClusterGraph {
    int num_sites = 0;
    std::vector<std::pair<int, int>> edges;

    /// Throws std::invalid_argument on self-loops or out-of-range sites.
    void validate() const;

    static ClusterGraph path(int num_sites);
};

/// Multiplies the amplitude with digits (k_a, k_b) by omega^{power k_a k_b}.
MultiQuditState cz_apply(const MultiQuditState &state, int site_a, int site_b, int power = 1);

/// Uniform superposition on every site, then cz_apply over every edge.
MultiQuditState ideal_cluster(const ClusterGraph &graph, QuditDims dims);

enum class MeasurementBasis { pseudo_number, pseudo_phase };

/// Basis ket j of the given basis: |j> or H|j>.
Vector basis_ket(MeasurementBasis basis, int j, QuditDims dims);

struct IdealMeasurement {
    int outcome;
    MultiQuditState post;       // measured site removed, renormalized
    std::vector<double> probs;  // Born probabilities of all d outcomes
};

/// Projective measurement of one site. `forced` selects the branch instead of sampling;
/// a forced outcome of zero probability throws ProbabilityError.
IdealMeasurement ideal_measure(const MultiQuditState &state, int site, MeasurementBasis basis, Rng &rng,
                               std::optional<int> forced = std::nullopt);

/// |<a|b>|^2 for normalized vectors.
double fidelity(const Vector &a, const Vector &b);
double fidelity(const QuditState &a, const QuditState &b);
/// 1 - |<a|b>|^2 computed as the squared norm of the part of b orthogonal to a (no cancellation).
double infidelity(const Vector &a, const Vector &b);

/// Schmidt coefficients across the cut between sites [0, cut) and [cut, n), largest first.
std::vector<double> schmidt_coefficients(const MultiQuditState &state, int cut);

/// Von Neumann entropy (natural log) across the same cut.
double entanglement_entropy(const MultiQuditState &state, int cut);
double entropy_from_schmidt(std::span<const double> coefficients);

}  // namespace qudit
}  // namespace optqudit
