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

#include <cmath>
#include <variant>
#include <vector>

#include "optqudit/errors.hpp"
#include "optqudit/protocols.hpp"

using namespace optqudit;
using namespace optqudit::protocols;
using qudit::GateKind;

namespace {

int nmax_for(double alpha) { return fock::truncation_dim({alpha, 0.0}); }

ProtocolDescriptor cv_descriptor(Protocol p, int d, double alpha, MeasurementModel model) {
    ProtocolDescriptor desc;
    desc.protocol = p;
    desc.dims = QuditDims(d);
    desc.alpha = {alpha, 0.0};
    desc.engine = Engine::cv;
    desc.model = model;
    return desc;
}

void expect_same_summary(const TrialSummary &a, const TrialSummary &b) {
    EXPECT_EQ(a.num_trials, b.num_trials);
    EXPECT_EQ(a.failed_trials, b.failed_trials);
    EXPECT_EQ(a.mean_fidelity_pre, b.mean_fidelity_pre);
    EXPECT_EQ(a.min_fidelity_pre, b.min_fidelity_pre);
    EXPECT_EQ(a.mean_fidelity_post, b.mean_fidelity_post);
    EXPECT_EQ(a.min_fidelity_post, b.min_fidelity_post);
    EXPECT_EQ(a.mean_infidelity, b.mean_infidelity);
    EXPECT_EQ(a.fidelity_stderr, b.fidelity_stderr);
    EXPECT_EQ(a.mean_leakage, b.mean_leakage);
    EXPECT_EQ(a.outcome_histogram, b.outcome_histogram);
    EXPECT_EQ(a.chi_square, b.chi_square);
}

}  // namespace

TEST(BellPair, IdealSchmidtCoefficientsAreFlat) {
    for (int d = 2; d <= 8; ++d) {
        const auto bell = std::get<qudit::MultiQuditState>(bell_pair(QuditDims(d), {}, Engine::ideal, 0));
        for (double c : qudit::schmidt_coefficients(bell, 1)) EXPECT_NEAR(c, 1.0 / std::sqrt(double(d)), 1e-14);
    }
}

TEST(BellPair, CvEntropyApproachesLogD) {
    const QuditDims dims(4);
    auto entropy = [&](double a) {
        const auto basis = cv::codeword_subspace(dims, {a, 0.0}, nmax_for(a));
        const auto bell = std::get<cv::MultiModeState>(bell_pair(dims, {a, 0.0}, Engine::cv, nmax_for(a)));
        return qudit::entanglement_entropy(cv::decode_cv(bell, basis).state, 1);
    };
    const double s5 = entropy(5.0), s2 = entropy(2.0);
    EXPECT_NEAR(s5 / std::log(4.0), 1.0, 1e-4);
    EXPECT_GT(std::log(4.0) - s2, std::log(4.0) - s5);
}

TEST(OneStep, IdealEveryBranchLeavesHZInverse) {
    for (int d = 2; d <= 8; ++d) {
        const QuditDims dims(d);
        Rng rng(40 + d);
        const auto phi = QuditState::random(dims, rng);
        for (int k = 0; k < d; ++k) {
            const auto rec = one_step_teleport(phi, {}, Engine::ideal, MeasurementModel::subspace_projective, rng, {}, k);
            EXPECT_EQ(rec.k, k);
            EXPECT_NEAR(rec.fidelity_pre_correction, 1.0, 1e-12);
            EXPECT_LT(rec.infidelity_pre_correction, 1e-12);
            EXPECT_FALSE(rec.fidelity_post_correction);
            ASSERT_EQ(rec.byproduct.size(), 2u);
            EXPECT_EQ(rec.byproduct[0], (qudit::Gate{GateKind::Z, -k}));
            EXPECT_EQ(rec.byproduct[1], (qudit::Gate{GateKind::H, 1}));
        }
    }
}

TEST(OneStep, CvSubspaceResidual) {
    const QuditDims dims(4);
    const auto basis = cv::codeword_subspace(dims, {5.0, 0.0}, nmax_for(5.0));
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        Rng rng(seed);
        const auto phi = QuditState::random(dims, rng);
        const auto rec = one_step_teleport_cv(phi, basis, MeasurementModel::subspace_projective, rng);
        EXPECT_GE(rec.fidelity_pre_correction, 0.999);
        EXPECT_EQ(rec.engine, Engine::cv);
        EXPECT_LT(rec.leakage_total, 1e-6);
    }
}

TEST(OneStep, CvHeterodyneMeanResidual) {
    const auto sum = run_trials(cv_descriptor(Protocol::one_step, 4, 5.0, MeasurementModel::heterodyne_bin), 1000, 2024);
    EXPECT_EQ(sum.failed_trials, 0);
    EXPECT_GE(sum.mean_fidelity_pre, 0.99);
    EXPECT_FALSE(sum.mean_fidelity_post);
}

TEST(FullTeleport, IdealEveryBranchThroughTheProtocolApi) {
    for (int d = 2; d <= 8; ++d) {
        const QuditDims dims(d);
        Rng rng(70 + d);
        const auto phi = QuditState::random(dims, rng);
        for (int k = 0; k < d; ++k) {
            for (int s = 0; s < d; ++s) {
                const auto rec = full_teleport(phi, {}, Engine::ideal, MeasurementModel::subspace_projective, true, rng, {}, {k, s});
                EXPECT_NEAR(*rec.fidelity_post_correction, 1.0, 1e-12);
                const auto tracked = full_teleport(phi, {}, Engine::ideal, MeasurementModel::subspace_projective, false, rng, {}, {k, s});
                EXPECT_NEAR(tracked.fidelity_pre_correction, 1.0, 1e-12);
                EXPECT_FALSE(tracked.fidelity_post_correction);
            }
        }
    }
}

TEST(FullTeleport, CvSubspaceQubit) {
    const QuditDims dims(2);
    const auto basis = cv::codeword_subspace(dims, {4.0, 0.0}, nmax_for(4.0));
    for (std::uint64_t seed : {5u, 6u, 7u}) {
        Rng rng(seed);
        const auto phi = QuditState::random(dims, rng);
        const auto rec = full_teleport_cv(phi, basis, MeasurementModel::subspace_projective, true, rng);
        EXPECT_GE(*rec.fidelity_post_correction, 0.99);
        EXPECT_EQ(rec.messages.size(), 2u);
    }
    Rng rng(8);
    const auto phi = QuditState::random(dims, rng);
    for (int k = 0; k < 2; ++k)
        for (int s = 0; s < 2; ++s)
            EXPECT_GE(*full_teleport_cv(phi, basis, MeasurementModel::subspace_projective, true, rng, {}, {k, s})
                           .fidelity_post_correction,
                      0.99);
}

TEST(FullTeleport, CvHeterodyneMeanFidelity) {
    const auto sum = run_trials(cv_descriptor(Protocol::full, 4, 5.0, MeasurementModel::heterodyne_bin), 1000, 99);
    EXPECT_EQ(sum.failed_trials, 0);
    ASSERT_TRUE(sum.mean_fidelity_post);
    EXPECT_GE(*sum.mean_fidelity_post, 0.98);
}

TEST(FullTeleport, CvFrameTrackingWithoutCorrections) {
    const QuditDims dims(3);
    const auto basis = cv::codeword_subspace(dims, {4.5, 0.0}, nmax_for(4.5));
    Rng rng(9);
    const auto phi = QuditState::random(dims, rng);
    const auto rec = full_teleport_cv(phi, basis, MeasurementModel::subspace_projective, false, rng);
    EXPECT_GE(rec.fidelity_pre_correction, 0.99);
    EXPECT_FALSE(rec.fidelity_post_correction);
    EXPECT_TRUE(rec.correction.empty());
}

TEST(FullTeleport, ForcedBranchesNeedTheSubspaceModel) {
    const QuditDims dims(2);
    const auto basis = cv::codeword_subspace(dims, {3.0, 0.0}, nmax_for(3.0));
    Rng rng(10);
    EXPECT_THROW(full_teleport_cv(QuditState::basis(dims, 0), basis, MeasurementModel::heterodyne_bin, true, rng, {}, {0, 0}),
                 std::invalid_argument);
}

TEST(FullTeleport, LeakageAbortThrows) {
    const QuditDims dims(4);
    const auto basis = cv::codeword_subspace(dims, {2.0, 0.0}, nmax_for(2.0));
    ProtocolOptions options;
    options.leakage_abort = 0.0;
    Rng rng(3);
    const auto phi = QuditState::random(dims, rng);
    bool threw = false;
    for (int t = 0; t < 10 && !threw; ++t) {
        try {
            full_teleport_cv(phi, basis, MeasurementModel::subspace_projective, true, rng, options);
        } catch (const LeakageError &e) {
            threw = true;
            EXPECT_GT(e.leakage(), 0.0);
        }
    }
    EXPECT_TRUE(threw);
}

TEST(RunTrials, FailuresAreRecordedNotFatal) {
    auto desc = cv_descriptor(Protocol::full, 4, 3.0, MeasurementModel::subspace_projective);
    desc.fixed_input = QuditState::uniform(QuditDims(3));
    const auto sum = run_trials(desc, 3, 1);
    EXPECT_EQ(sum.failed_trials, 3);
    ASSERT_EQ(sum.failures.size(), 3u);
    EXPECT_NE(sum.failures[0].find("trial 0"), std::string::npos);
    EXPECT_TRUE(sum.records.empty());
}

TEST(FullTeleport, BobUsesOnlyTheMessages) {
    const QuditDims dims(5);
    Rng rng(11);
    const auto phi = QuditState::random(dims, rng);
    const auto rec = full_teleport(phi, {}, Engine::ideal, MeasurementModel::subspace_projective, true, rng, {}, {2, 3});
    EXPECT_EQ(rec.correction, qudit::correction_from_messages(rec.messages));
    // Tampering with the message changes what Bob does.
    auto forged = rec.messages;
    forged[1].value = 4;
    const auto tracked = full_teleport(phi, {}, Engine::ideal, MeasurementModel::subspace_projective, false, rng, {}, {2, 3});
    const auto wrong = qudit::apply_word(qudit::correction_from_messages(forged), *tracked.output);
    EXPECT_LT(qudit::fidelity(phi, wrong), 0.999);
}

TEST(CorrectionOps, TrivialBranch) {
    const auto ops = correction_ops(0, 0, QuditDims(4));
    const qudit::GateWord r{{GateKind::R, 1}};
    EXPECT_EQ(ops.byproduct, r);
    EXPECT_EQ(ops.exact_inverse, r);
    EXPECT_EQ(ops.stated_sequence, r);
}

TEST(CorrectionOps, InverseUndoesByproduct) {
    for (int d = 2; d <= 8; ++d) {
        const QuditDims dims(d);
        for (int k = 0; k < d; ++k) {
            for (int s = 0; s < d; ++s) {
                const auto ops = correction_ops(k, s, dims);
                const auto net = qudit::word_matrix(ops.exact_inverse, dims) * qudit::word_matrix(ops.byproduct, dims);
                EXPECT_LT((net.entries() - qudit::Matrix::Identity(d, d)).cwiseAbs().maxCoeff(), 1e-12);
            }
        }
    }
    EXPECT_THROW(correction_ops(4, 0, QuditDims(4)), std::out_of_range);
}

TEST(CorrectionOps, ChronologicalReadingIsExact) {
    for (int d = 2; d <= 8; ++d) {
        const auto check = check_stated_sequence(QuditDims(d));
        EXPECT_TRUE(check.all_match) << d;
        EXPECT_FALSE(check.counterexample);
        EXPECT_LT(check.worst_infidelity, 1e-12);
    }
}

TEST(CorrectionOps, ProductReadingFailsAboveQubits) {
    EXPECT_TRUE(check_product_reading(QuditDims(2)).all_match);
    for (int d = 3; d <= 8; ++d) {
        const auto check = check_product_reading(QuditDims(d));
        EXPECT_FALSE(check.all_match) << d;
        ASSERT_TRUE(check.counterexample);
        EXPECT_GT(check.worst_infidelity, 0.5);
    }
}

TEST(CorrectionOps, CanonicalReducesPowers) {
    const QuditDims dims(3);
    const qudit::GateWord word{{GateKind::X, -1}, {GateKind::Z, 3}, {GateKind::R, 2}, {GateKind::H, 5}};
    const qudit::GateWord expect{{GateKind::X, 2}, {GateKind::H, 1}};
    EXPECT_EQ(canonical(word, dims), expect);
}

TEST(RunTrials, FixedSeedIsDeterministic) {
    const auto desc = cv_descriptor(Protocol::full, 3, 3.5, MeasurementModel::subspace_projective);
    expect_same_summary(run_trials(desc, 6, 1234), run_trials(desc, 6, 1234));
    const auto het = cv_descriptor(Protocol::one_step, 3, 3.5, MeasurementModel::heterodyne_bin);
    expect_same_summary(run_trials(het, 4, 77), run_trials(het, 4, 77));
}

TEST(RunTrials, SingleTrialReproducesAFullTeleportCall) {
    const auto desc = cv_descriptor(Protocol::full, 2, 3.0, MeasurementModel::subspace_projective);
    const auto sum = run_trials(desc, 1, 555);
    ASSERT_EQ(sum.records.size(), 1u);
    Rng rng(derive_seed(555, 0));
    const auto input = QuditState::random(desc.dims, rng);
    const auto rec = full_teleport(input, desc.alpha, Engine::cv, desc.model, true, rng);
    const auto &got = sum.records[0];
    EXPECT_EQ(got.k, rec.k);
    EXPECT_EQ(got.s, rec.s);
    EXPECT_EQ(got.messages, rec.messages);
    EXPECT_EQ(got.byproduct, rec.byproduct);
    EXPECT_EQ(got.correction, rec.correction);
    EXPECT_EQ(got.fidelity_pre_correction, rec.fidelity_pre_correction);
    EXPECT_EQ(got.fidelity_post_correction, rec.fidelity_post_correction);
    EXPECT_EQ(got.leakage_total, rec.leakage_total);
    EXPECT_EQ(got.seed, rec.seed);
}

TEST(RunTrials, IdealHistogramIsUniform) {
    ProtocolDescriptor desc;
    desc.dims = QuditDims(3);
    const int n = 10000;
    const auto sum = run_trials(desc, n, 31337);
    ASSERT_EQ(sum.outcome_histogram.size(), 9u);
    const double p = 1.0 / 9.0;
    for (long c : sum.outcome_histogram) EXPECT_NEAR(c, n * p, 3.0 * std::sqrt(n * p * (1 - p)));
    EXPECT_NEAR(*sum.mean_fidelity_post, 1.0, 1e-12);
    EXPECT_LE(sum.records.size(), 64u);
}

TEST(RunTrials, CvInfidelityShrinksWithAmplitude) {
    double prev = 1.0;
    for (double a : {2.0, 3.0, 4.0, 5.0}) {
        const auto sum = run_trials(cv_descriptor(Protocol::full, 4, a, MeasurementModel::subspace_projective), 20, 42);
        EXPECT_EQ(sum.failed_trials, 0);
        EXPECT_LT(sum.mean_infidelity, prev + 1e-9) << a;
        prev = sum.mean_infidelity;
    }
    EXPECT_LE(prev, 1e-2);
}

TEST(RunTrials, HeterodyneIsNoBetterThanSubspace) {
    for (double a : {3.0, 5.0}) {
        const auto sub = run_trials(cv_descriptor(Protocol::one_step, 4, a, MeasurementModel::subspace_projective), 200, 8);
        const auto het = run_trials(cv_descriptor(Protocol::one_step, 4, a, MeasurementModel::heterodyne_bin), 200, 8);
        const double sigma = std::hypot(sub.fidelity_stderr, het.fidelity_stderr);
        EXPECT_LE(het.mean_fidelity_pre, sub.mean_fidelity_pre + 3 * sigma) << a;
    }
}

TEST(RunTrials, RejectsZeroTrials) {
    EXPECT_THROW(run_trials(ProtocolDescriptor{}, 0, 1), std::invalid_argument);
}
