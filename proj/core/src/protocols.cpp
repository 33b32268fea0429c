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

#include "optqudit/protocols.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "optqudit/errors.hpp"

namespace optqudit::protocols {

namespace {

using qudit::Gate;
using qudit::GateKind;
using qudit::MeasurementBasis;

int mod(long long a, int d) {
    const long long r = a % d;
    return static_cast<int>(r < 0 ? r + d : r);
}

void score_one_step(TeleportRecord &rec, const QuditState &input, const QuditState &residual) {
    rec.byproduct = qudit::one_step_byproduct(rec.k);
    const QuditState expected = qudit::apply_word(rec.byproduct, input);
    rec.fidelity_pre_correction = qudit::fidelity(expected, residual);
    rec.infidelity_pre_correction = qudit::infidelity(expected.amplitudes(), residual.amplitudes());
    rec.output = residual;
}

void score_full(TeleportRecord &rec, const QuditState &input, const QuditState &bob, bool apply_corrections) {
    rec.byproduct = qudit::full_byproduct(rec.k, *rec.s);
    const QuditState expected = qudit::apply_word(rec.byproduct, input);
    rec.fidelity_pre_correction = qudit::fidelity(expected, bob);
    rec.infidelity_pre_correction = qudit::infidelity(expected.amplitudes(), bob.amplitudes());
    if (apply_corrections) {
        // Bob sees only the message list.
        rec.correction = qudit::correction_from_messages(rec.messages);
        const QuditState corrected = qudit::apply_word(rec.correction, bob);
        rec.fidelity_post_correction = qudit::fidelity(input, corrected);
        rec.infidelity_post_correction = qudit::infidelity(input.amplitudes(), corrected.amplitudes());
        rec.output = corrected;
    } else {
        rec.output = bob;
    }
}

// Pseudo-phase measurement of mode 0; throws on the leak outcome.
measure::MeasureOutcome measure_first_mode(const cv::MultiModeState &state, MeasurementModel model,
                                           const cv::CodewordBasis &basis, const ProtocolOptions &options, Rng &rng,
                                           std::optional<int> forced) {
    if (forced) {
        if (model != MeasurementModel::subspace_projective)
            throw std::invalid_argument("forced outcomes need the subspace measurement model");
        auto res = measure::subspace_projective_measure(state, 0, MeasurementBasis::pseudo_phase, basis, rng, forced);
        return {std::move(res.record), std::move(res.post)};
    }
    auto res = measure::measure_pseudo_phase(state, 0, model, basis, options.heterodyne, rng);
    if (res.record.leaked())
        throw LeakageError("pseudo-phase measurement of " + res.record.mode + " left the codeword subspace",
                           res.record.leak_probability);
    return res;
}

}  // namespace

int ProtocolOptions::resolve_n_max(cplx alpha) const {
    return n_max ? *n_max : fock::truncation_dim(alpha, truncation);
}

qudit::MultiQuditState ideal_bell_pair(QuditDims dims) {
    return qudit::ideal_cluster(qudit::ClusterGraph::path(2), dims);
}

cv::MultiModeState cv_bell_pair(QuditDims dims, cplx alpha, int n_max) {
    return cv::build_cv_cluster(qudit::ClusterGraph::path(2), dims, alpha, cv::KerrPhase::controlled_z(dims), n_max);
}

BellState bell_pair(QuditDims dims, cplx alpha, Engine engine, int n_max) {
    if (engine == Engine::ideal) return ideal_bell_pair(dims);
    return cv_bell_pair(dims, alpha, n_max);
}

TeleportRecord one_step_teleport(const QuditState &input, cplx alpha, Engine engine, MeasurementModel model, Rng &rng,
                                 const ProtocolOptions &options, std::optional<int> forced_k) {
    if (engine == Engine::cv) {
        const auto basis = cv::codeword_subspace(input.dims(), alpha, options.resolve_n_max(alpha));
        return one_step_teleport_cv(input, basis, model, rng, options, forced_k);
    }
    const QuditDims dims = input.dims();
    const std::array<QuditState, 2> sites{input, QuditState::uniform(dims)};
    const auto pair = qudit::cz_apply(qudit::MultiQuditState::product(sites), 0, 1);
    const auto m = qudit::ideal_measure(pair, 0, MeasurementBasis::pseudo_phase, rng, forced_k);

    TeleportRecord rec;
    rec.engine = Engine::ideal;
    rec.meas_model = MeasurementModel::subspace_projective;
    rec.seed = rng.seed();
    rec.k = m.outcome;
    rec.messages = {{"Alice", "Bob", "k", m.outcome}};
    score_one_step(rec, input, m.post.as_qudit());
    return rec;
}

TeleportRecord one_step_teleport_cv(const QuditState &input, const cv::CodewordBasis &basis, MeasurementModel model,
                                    Rng &rng, const ProtocolOptions &options, std::optional<int> forced_k) {
    if (!(input.dims() == basis.dims)) throw std::invalid_argument("one_step_teleport: dimension mismatch");
    const std::array<fock::FockVector, 2> modes{cv::encode_qudit(input, basis), fock::coherent_state(basis.alpha, basis.n_max)};
    cv::MultiModeState state = cv::tensor(modes).normalized();
    state = cv::apply_cross_kerr(state, 0, 1, cv::KerrPhase::controlled_z(basis.dims));

    TeleportRecord rec;
    rec.engine = Engine::cv;
    rec.meas_model = model;
    rec.seed = rng.seed();
    const auto m = measure_first_mode(state, model, basis, options, rng, forced_k);
    rec.k = m.record.outcome;
    rec.messages = {{"Alice", "Bob", "k", rec.k}};
    const auto decoded = cv::decode_cv(*m.post, basis, options.leakage_abort);
    rec.leakage_total = m.record.leak_probability + decoded.leakage;
    score_one_step(rec, input, decoded.state.as_qudit());
    return rec;
}

TeleportRecord full_teleport(const QuditState &input, cplx alpha, Engine engine, MeasurementModel model,
                             bool apply_corrections, Rng &rng, const ProtocolOptions &options,
                             qudit::ForcedOutcomes forced) {
    if (engine == Engine::ideal) return qudit::ideal_teleport(input, rng, forced, apply_corrections);
    const auto basis = cv::codeword_subspace(input.dims(), alpha, options.resolve_n_max(alpha));
    return full_teleport_cv(input, basis, model, apply_corrections, rng, options, forced);
}

TeleportRecord full_teleport_cv(const QuditState &input, const cv::CodewordBasis &basis, MeasurementModel model,
                                bool apply_corrections, Rng &rng, const ProtocolOptions &options,
                                qudit::ForcedOutcomes forced) {
    if (!(input.dims() == basis.dims)) throw std::invalid_argument("full_teleport: dimension mismatch");
    const auto coherent = fock::coherent_state(basis.alpha, basis.n_max);
    const std::array<fock::FockVector, 3> modes{cv::encode_qudit(input, basis), coherent, coherent};
    const cv::KerrPhase cz = cv::KerrPhase::controlled_z(basis.dims);
    cv::MultiModeState state = cv::tensor(modes).normalized();
    state = cv::apply_cross_kerr(state, 1, 2, cz);  // Bob's pair
    state = cv::apply_cross_kerr(state, 0, 1, cz);  // Alice entangles her input

    TeleportRecord rec;
    rec.engine = Engine::cv;
    rec.meas_model = model;
    rec.seed = rng.seed();
    const auto first = measure_first_mode(state, model, basis, options, rng, forced.k);
    const auto second = measure_first_mode(*first.post, model, basis, options, rng, forced.s);
    rec.k = first.record.outcome;
    rec.s = second.record.outcome;
    rec.messages = {{"Alice", "Bob", "k", rec.k}, {"Alice", "Bob", "s", *rec.s}};

    const auto decoded = cv::decode_cv(*second.post, basis, options.leakage_abort);
    rec.leakage_total = first.record.leak_probability + second.record.leak_probability + decoded.leakage;
    score_full(rec, input, decoded.state.as_qudit(), apply_corrections);
    return rec;
}

GateWord canonical(const GateWord &word, QuditDims dims) {
    GateWord out;
    for (const Gate &g : word) {
        int p = 0;
        switch (g.kind) {
            case GateKind::X:
            case GateKind::Z: p = mod(g.power, dims.d()); break;
            case GateKind::R: p = mod(g.power, 2); break;
            case GateKind::H: p = mod(g.power, 4); break;
        }
        if (p != 0) out.push_back({g.kind, p});
    }
    return out;
}

CorrectionOps correction_ops(int k, int s, QuditDims dims) {
    if (k < 0 || k >= dims.d() || s < 0 || s >= dims.d()) throw std::out_of_range("correction_ops: k and s must lie in [0, d)");
    CorrectionOps ops;
    ops.byproduct = canonical(qudit::full_byproduct(k, s), dims);
    ops.exact_inverse = canonical(qudit::inverse(qudit::full_byproduct(k, s)), dims);
    const std::array<ClassicalMessage, 2> msgs{ClassicalMessage{"Alice", "Bob", "k", k}, ClassicalMessage{"Alice", "Bob", "s", s}};
    ops.stated_sequence = canonical(qudit::correction_from_messages(msgs), dims);
    return ops;
}

bool equal_up_to_phase(const qudit::GateMatrix &a, const qudit::GateMatrix &b, double tol) {
    const auto &ma = a.entries();
    const auto &mb = b.entries();
    // Fix the phase on the largest entry of a.
    Eigen::Index r = 0, c = 0;
    ma.cwiseAbs().maxCoeff(&r, &c);
    if (std::abs(mb(r, c)) < 1e-300) return false;
    const cplx phase = ma(r, c) / mb(r, c);
    if (std::abs(std::abs(phase) - 1.0) > tol) return false;
    return (ma - phase * mb).cwiseAbs().maxCoeff() <= tol;
}

namespace {

template <typename ReadingFn>
CorrectionCheck check_reading(QuditDims dims, ReadingFn reading) {
    CorrectionCheck check;
    const int d = dims.d();
    for (int k = 0; k < d; ++k) {
        for (int s = 0; s < d; ++s) {
            const auto byproduct = qudit::word_matrix(qudit::full_byproduct(k, s), dims);
            const auto corrected = qudit::word_matrix(reading(k, s), dims) * byproduct;
            const qudit::GateMatrix identity(dims, qudit::Matrix::Identity(d, d));
            // Worst-case state infidelity of the net operator against identity, via its trace.
            const double overlap = std::abs(corrected.entries().trace()) / d;
            check.worst_infidelity = std::max(check.worst_infidelity, std::max(0.0, 1.0 - overlap * overlap));
            if (!equal_up_to_phase(corrected, identity) && check.all_match) {
                check.all_match = false;
                check.counterexample = std::make_pair(k, s);
            }
        }
    }
    return check;
}

}  // namespace

CorrectionCheck check_stated_sequence(QuditDims dims) {
    return check_reading(dims, [dims](int k, int s) { return correction_ops(k, s, dims).stated_sequence; });
}

CorrectionCheck check_product_reading(QuditDims dims) {
    // X^s R Z^k as a product: Z^k acts first.
    return check_reading(dims, [](int k, int s) {
        return GateWord{{GateKind::Z, k}, {GateKind::R, 1}, {GateKind::X, s}};
    });
}

TrialSummary run_trials(const ProtocolDescriptor &desc, int num_trials, std::uint64_t seed, std::size_t record_cap) {
    if (num_trials < 1) throw std::invalid_argument("run_trials: need at least one trial");
    const int d = desc.dims.d();
    std::optional<cv::CodewordBasis> basis;
    if (desc.engine == Engine::cv) basis = cv::codeword_subspace(desc.dims, desc.alpha, desc.options.resolve_n_max(desc.alpha));

    TrialSummary sum;
    sum.num_trials = num_trials;
    sum.outcome_histogram.assign(desc.protocol == Protocol::full ? static_cast<std::size_t>(d) * d : static_cast<std::size_t>(d), 0);
    double infid_sq = 0.0, pre_sum = 0.0, post_sum = 0.0, infid_sum = 0.0, leak_sum = 0.0;
    double post_min = 1.0;
    bool have_post = false;
    int ok = 0;

    for (int i = 0; i < num_trials; ++i) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
        try {
            const QuditState input = desc.fixed_input ? *desc.fixed_input : QuditState::random(desc.dims, rng);
            TeleportRecord rec;
            if (desc.protocol == Protocol::one_step) {
                rec = basis ? one_step_teleport_cv(input, *basis, desc.model, rng, desc.options)
                            : one_step_teleport(input, desc.alpha, Engine::ideal, desc.model, rng, desc.options);
            } else {
                rec = basis ? full_teleport_cv(input, *basis, desc.model, desc.apply_corrections, rng, desc.options)
                            : full_teleport(input, desc.alpha, Engine::ideal, desc.model, desc.apply_corrections, rng, desc.options);
            }
            ++ok;
            pre_sum += rec.fidelity_pre_correction;
            sum.min_fidelity_pre = std::min(sum.min_fidelity_pre, rec.fidelity_pre_correction);
            const double infid = rec.infidelity_post_correction.value_or(rec.infidelity_pre_correction);
            if (rec.fidelity_post_correction) {
                have_post = true;
                post_sum += *rec.fidelity_post_correction;
                post_min = std::min(post_min, *rec.fidelity_post_correction);
            }
            infid_sum += infid;
            infid_sq += infid * infid;
            leak_sum += rec.leakage_total;
            sum.max_leakage = std::max(sum.max_leakage, rec.leakage_total);
            const std::size_t cell = desc.protocol == Protocol::full ? static_cast<std::size_t>(rec.k * d + *rec.s)
                                                                     : static_cast<std::size_t>(rec.k);
            ++sum.outcome_histogram[cell];
            if (sum.records.size() < record_cap) sum.records.push_back(std::move(rec));
        } catch (const std::exception &e) {
            ++sum.failed_trials;
            if (sum.failures.size() < record_cap) sum.failures.push_back("trial " + std::to_string(i) + ": " + e.what());
        }
    }

    if (ok > 0) {
        sum.mean_fidelity_pre = pre_sum / ok;
        sum.mean_infidelity = infid_sum / ok;
        sum.mean_leakage = leak_sum / ok;
        if (have_post) {
            sum.mean_fidelity_post = post_sum / ok;
            sum.min_fidelity_post = post_min;
        }
        // Fidelity and infidelity share a variance; the infidelities are small, so this sum loses nothing.
        const double mean = sum.mean_infidelity;
        const double var = ok > 1 ? std::max(0.0, (infid_sq - ok * mean * mean) / (ok - 1)) : 0.0;
        sum.fidelity_stderr = std::sqrt(var / ok);
        const double expected = static_cast<double>(ok) / static_cast<double>(sum.outcome_histogram.size());
        for (const long c : sum.outcome_histogram) sum.chi_square += (c - expected) * (c - expected) / expected;
    } else {
        sum.min_fidelity_pre = 0.0;
    }
    return sum;
}

}  // namespace optqudit::protocols
