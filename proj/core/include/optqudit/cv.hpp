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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "optqudit/fock.hpp"
#include "optqudit/qudit.hpp"

namespace optqudit::cv {

using fock::FockVector;
using qudit::QuditDims;

/// Limits on multi-mode CV states.
struct ModeCaps {
    int max_modes = 3;
    std::size_t max_amplitudes = std::size_t{1} << 24;
};

/// Joint amplitudes of several truncated modes.
///
/// Row-major over modes with mode 0 slowest: the amplitude of |n_0, ..., n_{m-1}> sits at
/// sum_i n_i * stride(i), stride(i) = prod_{j > i} mode_dims[j]. A state with no modes holds one
/// scalar amplitude; it is what remains after every mode has been measured.
class MultiModeState {
  public:
    MultiModeState(std::vector<int> mode_dims, std::vector<cplx> amplitudes, std::vector<std::string> labels = {});

    static MultiModeState single(const FockVector &mode, std::string label = "m0");

    int num_modes() const noexcept { return static_cast<int>(dims_.size()); }
    const std::vector<int> &mode_dims() const noexcept { return dims_; }
    const std::vector<std::string> &labels() const noexcept { return labels_; }
    std::span<const cplx> amplitudes() const noexcept { return amps_; }
    std::size_t size() const noexcept { return amps_.size(); }
    std::size_t stride(int mode) const;

    double norm_squared() const;
    MultiModeState normalized() const;
    /// Requires num_modes() == 1.
    FockVector as_fock() const;

  private:
    std::vector<int> dims_;
    std::vector<cplx> amps_;
    std::vector<std::string> labels_;
};

/// Accumulated cross-Kerr phase chi * t.
struct KerrPhase {
    double chi_t = 0.0;
    /// When set to d, chi_t is 2 pi / d and phases are taken as exact powers of omega.
    std::optional<int> period;

    /// chi_t = 2 pi / d, the generalized controlled-Z.
    static KerrPhase controlled_z(QuditDims dims);
};

struct PseudoNumberKet {
    FockVector ket;  // unit norm, support on n = k (mod d) only
    double defect;   // |sqrt(d) * raw sector norm - 1|
};

/// Photon-number sector k (mod d) of coherent_state(alpha, n_max), without renormalization.
FockVector raw_sector(const FockVector &coherent, int k, QuditDims dims);

/// Normalized pseudo-number ket |k> and the deviation of its nominal normalization from exact.
///
/// Throws EmptySectorError when the sector norm is below 1e-30.
PseudoNumberKet pseudo_number_ket(int k, QuditDims dims, cplx alpha, int n_max);

/// coherent_state(omega^l alpha, n_max).
FockVector pseudo_phase_ket(int l, QuditDims dims, cplx alpha, int n_max);

/// Exactly orthonormal codeword kets for one (d, alpha, n_max).
struct CodewordBasis {
    QuditDims dims{2};
    cplx alpha;
    int n_max = 0;
    std::vector<FockVector> number_kets;
    /// phase_kets[l] = (1/sqrt d) sum_k omega^{lk} number_kets[k]
    std::vector<FockVector> phase_kets;
    std::vector<double> normalization_defects;
    /// 1 - |<phase_kets[l] | coherent(omega^l alpha)>|^2
    std::vector<double> phase_ket_physical_gap;

    const FockVector &ket(qudit::MeasurementBasis basis, int j) const;
    double max_defect() const;
    double max_gap() const;
};

CodewordBasis codeword_subspace(QuditDims dims, cplx alpha, int n_max);

/// min_k d e^{-|a|^2} f_k(|a|^2): the smallest sector weight relative to an even split.
double sector_balance(QuditDims dims, cplx alpha);

/// Outer product in the given mode order.
MultiModeState tensor(std::span<const FockVector> modes, const ModeCaps &caps = {});

/// Appends `mode` as the last mode.
MultiModeState adjoin(const MultiModeState &state, const FockVector &mode, std::string label, const ModeCaps &caps = {});

/// Multiplies the amplitude at photon numbers (n_a, n_b) by e^{i chi_t n_a n_b}.
MultiModeState apply_cross_kerr(const MultiModeState &state, int mode_a, int mode_b, const KerrPhase &kerr);

/// Coherent state on every site, then cross-Kerr across every edge.
MultiModeState build_cv_cluster(const qudit::ClusterGraph &graph, QuditDims dims, cplx alpha, const KerrPhase &kerr,
                                int n_max, const ModeCaps &caps = {});

/// sum_l a_l number_kets[l].
FockVector encode_qudit(const qudit::QuditState &q, const CodewordBasis &basis);

struct Decoded {
    qudit::MultiQuditState state;  // renormalized projection onto the codeword subspace
    double leakage;                // population outside it
};

inline constexpr double kDefaultLeakageAbort = 0.5;

/// Projects every mode onto span(number_kets). Throws LeakageError above `leakage_abort`.
Decoded decode_cv(const MultiModeState &state, const CodewordBasis &basis, double leakage_abort = kDefaultLeakageAbort);

/// <ket|_mode psi with that mode removed.
MultiModeState contract_mode(const MultiModeState &state, int mode, const FockVector &ket);

/// Reduced density matrix of one mode: rho(i, j) = <i|rho|j>.
Eigen::MatrixXcd reduced_density(const MultiModeState &state, int mode);

}  // namespace optqudit::cv
