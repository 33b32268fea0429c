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

#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "optqudit/cv.hpp"
#include "optqudit/errors.hpp"
#include "optqudit/fock.hpp"
#include "optqudit/qudit.hpp"
#include "oracles.hpp"

using namespace optqudit;
using namespace optqudit::cv;
using qudit::QuditState;

namespace {

constexpr double kPi = std::numbers::pi;

int nmax_for(double alpha) { return fock::truncation_dim({alpha, 0.0}); }

double max_amp_diff(std::span<const cplx> a, std::span<const cplx> b) {
    EXPECT_EQ(a.size(), b.size());
    double m = 0.0;
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// exp(2 pi i n1 n2 / d)|a>|a> written as (1/sqrt d) sum_k sector_k(a) (x) |omega^k a>, built
// from closed-form coherent amplitudes and a mod-d filter.
std::vector<cplx> bell_right_hand_side(int d, double alpha, int n_max) {
    const auto coh = oracle::coherent_closed_form(alpha, n_max);
    const std::size_t n = coh.size();
    std::vector<cplx> out(n * n, cplx{});
    for (int k = 0; k < d; ++k) {
        const auto rotated = oracle::coherent_closed_form(std::polar(alpha, 2.0 * kPi * k / d), n_max);
        for (std::size_t a = static_cast<std::size_t>(k); a < n; a += static_cast<std::size_t>(d))
            for (std::size_t b = 0; b < n; ++b) out[a * n + b] += coh[a] * rotated[b];
    }
    return out;
}

double decoded_bell_fidelity(int d, double alpha) {
    const QuditDims dims(d);
    const int n_max = nmax_for(alpha);
    const auto basis = codeword_subspace(dims, alpha, n_max);
    const auto bell = build_cv_cluster(qudit::ClusterGraph::path(2), dims, alpha, KerrPhase::controlled_z(dims), n_max);
    const auto decoded = decode_cv(bell, basis);
    return qudit::fidelity(qudit::ideal_cluster(qudit::ClusterGraph::path(2), dims).amplitudes(), decoded.state.amplitudes());
}

}  // namespace

TEST(PseudoNumberKet, SingleSectorIsTheCoherentState) {
    const auto r = pseudo_number_ket(0, QuditDims(1), {2.0, 0.0}, nmax_for(2.0));
    EXPECT_LT(r.defect, 1e-10);
    EXPECT_NEAR(fock::fidelity(r.ket, fock::coherent_state({2.0, 0.0}, nmax_for(2.0))), 1.0, 1e-14);
}

TEST(PseudoNumberKet, DefectMatchesRootsOfUnityFilter) {
    const QuditDims dims(4);
    const int n_max = nmax_for(5.0);
    for (int k = 0; k < 4; ++k) {
        const auto r = pseudo_number_ket(k, dims, {5.0, 0.0}, n_max);
        EXPECT_LT(r.defect, 1e-8);
        EXPECT_NEAR(r.defect, std::abs(std::sqrt(oracle::roots_of_unity_ratio(k, 4, 25.0)) - 1.0), 1e-12);
        EXPECT_NEAR(r.ket.norm_squared(), 1.0, 1e-14);
        for (int n = 0; n <= n_max; ++n)
            if (n % 4 != k) EXPECT_EQ(r.ket[static_cast<std::size_t>(n)], cplx{});
    }
}

TEST(PseudoNumberKet, EmptySectorIsAnError) {
    EXPECT_THROW(pseudo_number_ket(3, QuditDims(4), {0.0, 0.0}, 2), EmptySectorError);
    EXPECT_THROW(pseudo_number_ket(4, QuditDims(4), {1.0, 0.0}, 20), std::out_of_range);
}

TEST(RawSector, SectorsReconstructTheCoherentStateExactly) {
    for (int d : {1, 2, 3, 4, 7, 8}) {
        const QuditDims dims(d);
        const cplx alpha = std::polar(3.5, 0.4);
        const auto coh = fock::coherent_state(alpha, nmax_for(3.5));
        std::vector<cplx> sum(coh.dim(), cplx{});
        std::vector<FockVector> sectors;
        for (int k = 0; k < d; ++k) {
            sectors.push_back(raw_sector(coh, k, dims));
            for (std::size_t n = 0; n < coh.dim(); ++n) sum[n] += sectors.back()[n];
        }
        for (std::size_t n = 0; n < coh.dim(); ++n) EXPECT_EQ(sum[n], coh[n]);
        for (int a = 0; a < d; ++a)
            for (int b = a + 1; b < d; ++b) EXPECT_EQ(fock::overlap(sectors[a], sectors[b]), cplx{});
    }
}

TEST(PseudoPhaseKet, IsARotatedCoherentState) {
    const QuditDims dims(4);
    const int n_max = nmax_for(5.0);
    const auto l0 = pseudo_phase_ket(0, dims, {5.0, 0.0}, n_max);
    const auto l1 = pseudo_phase_ket(1, dims, {5.0, 0.0}, n_max);
    const auto ref0 = fock::coherent_state({5.0, 0.0}, n_max);
    const auto ref1 = fock::coherent_state({0.0, 5.0}, n_max);
    EXPECT_LT(max_amp_diff(l0.amplitudes(), ref0.amplitudes()), 1e-15);
    EXPECT_LT(max_amp_diff(l1.amplitudes(), ref1.amplitudes()), 1e-14);
}

TEST(CodewordSubspace, SingleSector) {
    const auto b = codeword_subspace(QuditDims(1), {3.0, 0.0}, nmax_for(3.0));
    ASSERT_EQ(b.number_kets.size(), 1u);
    EXPECT_LT(b.max_defect(), 1e-10);
    EXPECT_LT(b.max_gap(), 1e-10);
}

TEST(CodewordSubspace, PhaseKetsAreCloseToRotatedCoherentStates) {
    const QuditDims dims(4);
    const int n_max = nmax_for(5.0);
    const auto b = codeword_subspace(dims, {5.0, 0.0}, n_max);
    for (int l = 0; l < 4; ++l) {
        EXPECT_LT(b.phase_ket_physical_gap[static_cast<std::size_t>(l)], 1e-6);
        // Direct construction of (1/sqrt d) sum_k omega^{lk} |k> from closed-form sectors.
        const auto coh = oracle::coherent_closed_form(5.0, n_max);
        std::vector<cplx> direct(coh.size(), cplx{});
        for (int k = 0; k < 4; ++k) {
            double norm2 = 0.0;
            for (std::size_t n = static_cast<std::size_t>(k); n < coh.size(); n += 4) norm2 += std::norm(coh[n]);
            for (std::size_t n = static_cast<std::size_t>(k); n < coh.size(); n += 4)
                direct[n] += std::polar(1.0, 2.0 * kPi * l * k / 4) * coh[n] / std::sqrt(4.0 * norm2);
        }
        const FockVector target(direct);
        EXPECT_GE(fock::fidelity(target, pseudo_phase_ket(l, dims, {5.0, 0.0}, n_max)), 1.0 - 1e-7);
        EXPECT_NEAR(fock::fidelity(target, b.phase_kets[static_cast<std::size_t>(l)]), 1.0, 1e-12);
    }
}

TEST(CodewordSubspace, BasesAreOrthonormal) {
    for (int d : {2, 4, 8}) {
        const QuditDims dims(d);
        const auto b = codeword_subspace(dims, std::polar(4.0, 0.3), nmax_for(4.0));
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                const double expect = i == j ? 1.0 : 0.0;
                EXPECT_NEAR(std::abs(fock::overlap(b.phase_kets[i], b.phase_kets[j]) - expect), 0.0, 1e-12);
                if (i != j) EXPECT_EQ(fock::overlap(b.number_kets[i], b.number_kets[j]), cplx{});
                else EXPECT_NEAR(b.number_kets[i].norm_squared(), 1.0, 1e-14);
            }
        }
    }
}

TEST(CodewordSubspace, EightSectorsHaveALargerDefect) {
    const auto b4 = codeword_subspace(QuditDims(4), {5.0, 0.0}, nmax_for(5.0));
    const auto b8 = codeword_subspace(QuditDims(8), {5.0, 0.0}, nmax_for(5.0));
    EXPECT_GE(b8.max_defect(), 1e-4);
    EXPECT_LE(b8.max_defect(), 1e-3);
    EXPECT_GT(b8.max_defect(), b4.max_defect());
}

TEST(CodewordSubspace, DefectShrinksWithAmplitude) {
    for (int d : {4, 8}) {
        double prev = 1.0;
        for (double a : {2.0, 3.0, 4.0, 5.0}) {
            const double defect = codeword_subspace(QuditDims(d), {a, 0.0}, nmax_for(a)).max_defect();
            EXPECT_LT(defect, prev) << d << " " << a;
            prev = defect;
        }
    }
}

TEST(CodewordSubspace, PhysicalGapShrinksWithAmplitude) {
    for (int d : {4, 8}) {
        double prev = 1.0;
        for (double a : {2.0, 3.0, 4.0, 5.0, 6.0}) {
            const double gap = codeword_subspace(QuditDims(d), {a, 0.0}, nmax_for(a)).max_gap();
            EXPECT_LT(gap, prev + 1e-9) << d << " " << a;
            if (gap > 1e-14) EXPECT_LT(gap, prev) << d << " " << a;
            prev = gap;
        }
    }
}

TEST(SectorBalance, MatchesPartialSums) {
    const QuditDims dims(4);
    double expect = 1e300;
    for (int k = 0; k < 4; ++k) expect = std::min(expect, oracle::roots_of_unity_ratio(k, 4, 4.0));
    EXPECT_NEAR(sector_balance(dims, {2.0, 0.0}), expect, 1e-12);
    EXPECT_LT(sector_balance(dims, {0.1, 0.0}), 1e-3);
}

TEST(Tensor, VacuumPair) {
    const std::array<FockVector, 2> modes{FockVector::basis(0, 5), FockVector::basis(0, 5)};
    const auto s = tensor(modes);
    EXPECT_EQ(s.size(), 36u);
    EXPECT_EQ(s.amplitudes()[0], cplx(1.0, 0.0));
    for (std::size_t i = 1; i < s.size(); ++i) EXPECT_EQ(s.amplitudes()[i], cplx{});
    EXPECT_EQ(s.labels()[1], "m1");
}

TEST(Tensor, NormIsMultiplicative) {
    const FockVector a({{0.3, 0.1}, {0.2, -0.4}, {1.0, 0.0}});
    const FockVector b({{0.5, 0.0}, {0.0, 0.7}});
    const std::array<FockVector, 2> modes{a, b};
    EXPECT_NEAR(std::sqrt(tensor(modes).norm_squared()), std::sqrt(a.norm_squared() * b.norm_squared()), 1e-12);
    // Row-major, mode 0 slowest.
    EXPECT_EQ(tensor(modes).amplitudes()[1 * 2 + 1], a[1] * b[1]);
}

TEST(Tensor, ThreeCoherentModes) {
    const auto c = fock::coherent_state({4.0, 0.0}, 60);
    const std::array<FockVector, 3> modes{c, c, c};
    const auto s = tensor(modes);
    EXPECT_EQ(s.size(), 226981u);
    EXPECT_NEAR(s.norm_squared(), 1.0, 1e-9);
}

TEST(Tensor, CapsAreEnforced) {
    const auto c = FockVector::basis(0, 3);
    const std::array<FockVector, 4> four{c, c, c, c};
    EXPECT_THROW(tensor(four), CapacityError);
    ModeCaps small;
    small.max_amplitudes = 10;
    const std::array<FockVector, 2> two{c, c};
    EXPECT_THROW(tensor(two, small), CapacityError);
}

TEST(CrossKerr, ZeroPhaseIsIdentity) {
    const auto c = fock::coherent_state({2.0, 1.0}, 30);
    const std::array<FockVector, 2> modes{c, c};
    const auto s = tensor(modes);
    EXPECT_EQ(max_amp_diff(apply_cross_kerr(s, 0, 1, {0.0, std::nullopt}).amplitudes(), s.amplitudes()), 0.0);
}

TEST(CrossKerr, FullTurnOnFockProductsIsIdentity) {
    const std::array<FockVector, 2> modes{FockVector::basis(3, 10), FockVector::basis(7, 10)};
    const auto s = tensor(modes);
    const auto out = apply_cross_kerr(s, 0, 1, KerrPhase::controlled_z(QuditDims(1)));
    EXPECT_EQ(max_amp_diff(out.amplitudes(), s.amplitudes()), 0.0);
    const auto generic = apply_cross_kerr(s, 0, 1, {2.0 * kPi, std::nullopt});
    EXPECT_LT(max_amp_diff(generic.amplitudes(), s.amplitudes()), 1e-12);
}

TEST(CrossKerr, BellPairMatchesIndependentRightHandSide) {
    for (int d : {2, 3, 4}) {
        const QuditDims dims(d);
        const int n_max = nmax_for(5.0);
        const auto c = fock::coherent_state({5.0, 0.0}, n_max);
        const std::array<FockVector, 2> modes{c, c};
        const auto out = apply_cross_kerr(tensor(modes), 0, 1, KerrPhase::controlled_z(dims));
        EXPECT_LT(max_amp_diff(out.amplitudes(), bell_right_hand_side(d, 5.0, n_max)), 1e-12) << d;
        // A free-running phase of the same size gives the same state.
        const auto free = apply_cross_kerr(tensor(modes), 0, 1, {2.0 * kPi / d, std::nullopt});
        EXPECT_LT(max_amp_diff(free.amplitudes(), out.amplitudes()), 1e-12) << d;
    }
}

TEST(CrossKerr, PreservesNormSymmetricAndCommutes) {
    const auto a = fock::coherent_state({2.0, 0.5}, 25);
    const auto b = fock::coherent_state({1.5, -1.0}, 20);
    const auto c = fock::coherent_state({-1.0, 1.0}, 18);
    const std::array<FockVector, 3> modes{a, b, c};
    const auto s = tensor(modes);
    const KerrPhase kerr{0.37, std::nullopt};
    const auto ab = apply_cross_kerr(s, 0, 1, kerr);
    EXPECT_NEAR(ab.norm_squared(), s.norm_squared(), 1e-14);
    EXPECT_EQ(max_amp_diff(ab.amplitudes(), apply_cross_kerr(s, 1, 0, kerr).amplitudes()), 0.0);
    const auto x = apply_cross_kerr(apply_cross_kerr(ab, 1, 2, kerr), 0, 2, kerr);
    const auto y = apply_cross_kerr(apply_cross_kerr(apply_cross_kerr(s, 0, 2, kerr), 1, 2, kerr), 0, 1, kerr);
    EXPECT_LT(max_amp_diff(x.amplitudes(), y.amplitudes()), 1e-14);
    EXPECT_THROW(apply_cross_kerr(s, 1, 1, kerr), std::invalid_argument);
    EXPECT_THROW(apply_cross_kerr(s, 0, 3, kerr), std::out_of_range);
}

TEST(CvCluster, SingleEdgeIsTheKerrBellPair) {
    const QuditDims dims(3);
    const int n_max = nmax_for(4.0);
    const auto cluster = build_cv_cluster(qudit::ClusterGraph::path(2), dims, {4.0, 0.0}, KerrPhase::controlled_z(dims), n_max);
    const auto c = fock::coherent_state({4.0, 0.0}, n_max);
    const std::array<FockVector, 2> modes{c, c};
    const auto bell = apply_cross_kerr(tensor(modes), 0, 1, KerrPhase::controlled_z(dims));
    EXPECT_EQ(max_amp_diff(cluster.amplitudes(), bell.amplitudes()), 0.0);
}

TEST(CvCluster, EdgeOrderDoesNotMatter) {
    const QuditDims dims(3);
    qudit::ClusterGraph g1{3, {{0, 1}, {1, 2}, {0, 2}}};
    qudit::ClusterGraph g2{3, {{0, 2}, {1, 2}, {0, 1}}};
    const auto a = build_cv_cluster(g1, dims, {3.0, 0.0}, KerrPhase::controlled_z(dims), 40);
    const auto b = build_cv_cluster(g2, dims, {3.0, 0.0}, KerrPhase::controlled_z(dims), 40);
    EXPECT_LT(max_amp_diff(a.amplitudes(), b.amplitudes()), 1e-14);
}

TEST(CvCluster, ThreeModePathDecodesToTheIdealCluster) {
    const QuditDims dims(2);
    const int n_max = nmax_for(4.0);
    const auto basis = codeword_subspace(dims, {4.0, 0.0}, n_max);
    const auto cv_state = build_cv_cluster(qudit::ClusterGraph::path(3), dims, {4.0, 0.0}, KerrPhase::controlled_z(dims), n_max);
    const auto decoded = decode_cv(cv_state, basis);
    const auto ideal = qudit::ideal_cluster(qudit::ClusterGraph::path(3), dims);
    EXPECT_GE(qudit::fidelity(ideal.amplitudes(), decoded.state.amplitudes()), 0.999);
    EXPECT_LT(decoded.leakage, 1e-9);
}

TEST(CvCluster, RejectsMismatchedPeriodAndTooManyModes) {
    const QuditDims dims(3);
    EXPECT_THROW(build_cv_cluster(qudit::ClusterGraph::path(2), dims, {2.0, 0.0}, KerrPhase::controlled_z(QuditDims(4)), 20),
                 std::invalid_argument);
    EXPECT_THROW(build_cv_cluster(qudit::ClusterGraph::path(4), dims, {2.0, 0.0}, KerrPhase::controlled_z(dims), 10),
                 CapacityError);
}

TEST(Encode, BasisKetAndUniformState) {
    const QuditDims dims(4);
    const int n_max = nmax_for(5.0);
    const auto basis = codeword_subspace(dims, {5.0, 0.0}, n_max);
    const auto e0 = encode_qudit(QuditState::basis(dims, 0), basis);
    EXPECT_LT(max_amp_diff(e0.amplitudes(), basis.number_kets[0].amplitudes()), 1e-15);
    const auto eu = encode_qudit(QuditState::uniform(dims), basis);
    EXPECT_NEAR(eu.norm_squared(), 1.0, 1e-12);
    EXPECT_GE(fock::fidelity(eu, fock::coherent_state({5.0, 0.0}, n_max)), 1.0 - 1e-7);
}

TEST(Decode, RoundTrip) {
    const QuditDims dims(5);
    const auto basis = codeword_subspace(dims, std::polar(4.5, 1.0), nmax_for(4.5));
    Rng rng(31);
    for (int t = 0; t < 10; ++t) {
        const auto q = QuditState::random(dims, rng);
        const auto decoded = decode_cv(MultiModeState::single(encode_qudit(q, basis)), basis);
        EXPECT_LT(decoded.leakage, 1e-12);
        EXPECT_NEAR(qudit::fidelity(q, decoded.state.as_qudit()), 1.0, 1e-12);
    }
}

TEST(Decode, BellPairIsMaximallyEntangled) {
    const QuditDims dims(4);
    const int n_max = nmax_for(5.0);
    const auto basis = codeword_subspace(dims, {5.0, 0.0}, n_max);
    const auto bell = build_cv_cluster(qudit::ClusterGraph::path(2), dims, {5.0, 0.0}, KerrPhase::controlled_z(dims), n_max);
    const auto decoded = decode_cv(bell, basis);
    EXPECT_LT(decoded.leakage, 1e-6);
    EXPECT_NEAR(qudit::entanglement_entropy(decoded.state, 1), std::log(4.0), 1e-4);
}

TEST(Decode, OffsetCoherentStateLeaks) {
    const QuditDims dims(4);
    const int n_max = nmax_for(6.0);
    const auto basis = codeword_subspace(dims, {5.0, 0.0}, n_max);
    const double offset = 0.5 * 4 / (2.0 * kPi);
    const auto shifted = fock::coherent_state({5.0 + offset, 0.0}, n_max);
    const auto decoded = decode_cv(MultiModeState::single(shifted), basis);
    EXPECT_GT(decoded.leakage, 1e-4);
    EXPECT_LT(decoded.leakage, 0.5);
    // Direct projection: leakage = 1 - sum_k |<k|psi>|^2.
    double kept = 0.0;
    for (const auto &ket : basis.number_kets) kept += std::norm(fock::overlap(ket, shifted));
    EXPECT_NEAR(decoded.leakage, 1.0 - kept / shifted.norm_squared(), 1e-12);
}

TEST(Decode, FarFromTheCodeAborts) {
    const QuditDims dims(4);
    const int n_max = nmax_for(5.0);
    const auto basis = codeword_subspace(dims, {5.0, 0.0}, n_max);
    EXPECT_THROW(decode_cv(MultiModeState::single(FockVector::basis(1, n_max)), basis), LeakageError);
    EXPECT_THROW(decode_cv(MultiModeState::single(FockVector::basis(1, n_max + 1)), basis), std::invalid_argument);
}

TEST(Decode, BellFidelityImprovesWithAmplitude) {
    for (int d : {4, 8}) {
        double prev = 0.0;
        for (double a : {2.0, 3.0, 4.0, 5.0, 6.0}) {
            const double f = decoded_bell_fidelity(d, a);
            EXPECT_GE(f, prev - 1e-9) << d << " " << a;
            prev = f;
        }
    }
}

TEST(ReducedDensity, CoherentModeIsPure) {
    const auto a = fock::coherent_state({1.0, 1.0}, 20);
    const auto b = fock::coherent_state({0.5, 0.0}, 15);
    const std::array<FockVector, 2> modes{a, b};
    const auto rho = reduced_density(tensor(modes), 1);
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
    EXPECT_NEAR((rho * rho).trace().real(), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(rho(1, 0) - b[1] * std::conj(b[0])), 0.0, 1e-14);
}
