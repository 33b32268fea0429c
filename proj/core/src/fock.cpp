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

#include "optqudit/fock.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <string>

#include "optqudit/errors.hpp"

namespace optqudit::fock {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Largest x for which e^x is finite in double precision.
constexpr double kMaxExpArgument = 709.78;
constexpr double kSeriesCutoff = 1e-18;

void check_sector_args(int k, int d, double x) {
    if (d < 1) throw std::invalid_argument("partial_exp_sum: d must be >= 1");
    if (k < 0 || k >= d) throw std::invalid_argument("partial_exp_sum: k must lie in [0, d)");
    if (!(x >= 0.0) || !std::isfinite(x)) throw std::invalid_argument("partial_exp_sum: x must be finite and >= 0");
}

}  // namespace

void TruncationPolicy::validate() const {
    if (!(margin_sigmas > 0.0)) throw std::invalid_argument("TruncationPolicy: margin_sigmas must be > 0");
    if (hard_cap < 1) throw std::invalid_argument("TruncationPolicy: hard_cap must be >= 1");
    if (!(tail_tolerance > 0.0 && tail_tolerance < 1.0))
        throw std::invalid_argument("TruncationPolicy: tail_tolerance must lie in (0, 1)");
}

FockVector::FockVector(std::vector<cplx> amplitudes, std::optional<cplx> alpha_ref, double tail_mass)
    : amplitudes_(std::move(amplitudes)), alpha_ref_(alpha_ref), tail_mass_(tail_mass) {
    if (amplitudes_.empty()) throw std::invalid_argument("FockVector: needs at least one amplitude (n_max >= 0)");
}

FockVector FockVector::basis(int n, int n_max) {
    if (n_max < 0 || n < 0 || n > n_max) throw std::invalid_argument("FockVector::basis: need 0 <= n <= n_max");
    std::vector<cplx> amps(static_cast<std::size_t>(n_max) + 1, cplx{});
    amps[static_cast<std::size_t>(n)] = 1.0;
    return FockVector(std::move(amps));
}

double FockVector::norm_squared() const {
    double s = 0.0;
    for (const auto &a : amplitudes_) s += std::norm(a);
    return s;
}

FockVector FockVector::normalized() const {
    const double nrm = std::sqrt(norm_squared());
    if (nrm == 0.0) throw std::domain_error("FockVector::normalized: zero vector");
    std::vector<cplx> out(amplitudes_);
    for (auto &a : out) a /= nrm;
    return FockVector(std::move(out), alpha_ref_, tail_mass_);
}

double poisson_tail_above(double mean, int n_max) {
    if (mean < 0.0 || !std::isfinite(mean)) throw std::invalid_argument("poisson_tail_above: bad mean");
    if (mean == 0.0) return 0.0;
    const int start = std::max(n_max + 1, 0);
    double term = std::exp(-mean + start * std::log(mean) - std::lgamma(start + 1.0));
    double tail = 0.0;
    for (int n = start;; ++n) {
        tail += term;
        term *= mean / (n + 1);
        if (n + 1 > mean && (term == 0.0 || term < tail * kSeriesCutoff)) break;
    }
    return std::min(tail, 1.0);
}

int truncation_dim(cplx alpha, const TruncationPolicy &policy) {
    policy.validate();
    const double r = std::abs(alpha);
    const double wanted = std::ceil(r * r + policy.margin_sigmas * r + policy.margin_sigmas);
    const int n_max = static_cast<int>(std::min<double>(policy.hard_cap, wanted));
    const double tail = poisson_tail_above(r * r, n_max);
    if (tail > policy.tail_tolerance) {
        char msg[160];
        std::snprintf(msg, sizeof msg, "truncation_dim: |alpha|=%g leaves tail mass %.3e above n_max=%d (hard_cap %d)", r,
                      tail, n_max, policy.hard_cap);
        throw TruncationError(msg);
    }
    return n_max;
}

FockVector coherent_state(cplx alpha, int n_max, double tail_tolerance) {
    if (n_max < 0) throw std::invalid_argument("coherent_state: n_max must be >= 0");
    const double mean = std::norm(alpha);
    const double tail = poisson_tail_above(mean, n_max);
    if (tail > tail_tolerance) {
        char msg[160];
        std::snprintf(msg, sizeof msg, "coherent_state: tail mass %.3e above n_max=%d exceeds tolerance %.1e", tail, n_max,
                      tail_tolerance);
        throw TruncationError(msg);
    }
    std::vector<cplx> amps(static_cast<std::size_t>(n_max) + 1);
    amps[0] = std::exp(-0.5 * mean);
    if (amps[0] == 0.0) throw TruncationError("coherent_state: |alpha| too large for double precision");
    for (int n = 0; n < n_max; ++n) amps[n + 1] = amps[n] * alpha / std::sqrt(n + 1.0);
    return FockVector(std::move(amps), alpha, tail);
}

FockVector apply_phase_rotation(const FockVector &state, double theta) {
    const double reduced = std::remainder(theta, kTwoPi);
    std::vector<cplx> out(state.amplitudes().begin(), state.amplitudes().end());
    for (std::size_t n = 0; n < out.size(); ++n) out[n] *= std::polar(1.0, reduced * static_cast<double>(n));
    std::optional<cplx> ref;
    if (state.alpha_ref()) ref = *state.alpha_ref() * std::polar(1.0, reduced);
    return FockVector(std::move(out), ref, state.tail_mass());
}

cplx overlap(const FockVector &a, const FockVector &b) {
    const std::size_t n = std::min(a.dim(), b.dim());
    cplx s{};
    for (std::size_t i = 0; i < n; ++i) s += std::conj(a[i]) * b[i];
    return s;
}

double fidelity(const FockVector &a, const FockVector &b) {
    const double na = a.norm_squared();
    const double nb = b.norm_squared();
    if (na == 0.0 || nb == 0.0) return 0.0;
    return std::norm(overlap(a, b)) / (na * nb);
}

double partial_exp_sum(int k, int d, double x) {
    check_sector_args(k, d, x);
    if (x > kMaxExpArgument) throw std::overflow_error("partial_exp_sum: e^x overflows; use scaled_partial_exp_sum");
    // term_n = x^n / n!; bucket k collects n = k, k + d, k + 2d, ...
    double term = 1.0;
    double total = 0.0;
    double sector = 0.0;
    for (long n = 0;; ++n) {
        if (n > 0) term *= x / static_cast<double>(n);
        total += term;
        if (n % d == k) sector += term;
        if (n > x + 1 && (term == 0.0 || term < total * kSeriesCutoff)) break;
    }
    return sector;
}

double scaled_partial_exp_sum(int k, int d, double x) {
    check_sector_args(k, d, x);
    if (x == 0.0) return k == 0 ? 1.0 : 0.0;
    // Seed at the Poisson mode, where e^{-x} x^n / n! is largest, and walk both ways.
    const long mode = static_cast<long>(std::floor(x));
    const double peak = std::exp(-x + static_cast<double>(mode) * std::log(x) - std::lgamma(mode + 1.0));
    double total = peak;
    double sector = (mode % d == k) ? peak : 0.0;
    double term = peak;
    for (long n = mode + 1;; ++n) {
        term *= x / static_cast<double>(n);
        total += term;
        if (n % d == k) sector += term;
        if (term == 0.0 || term < total * kSeriesCutoff) break;
    }
    term = peak;
    for (long n = mode - 1; n >= 0; --n) {
        term *= static_cast<double>(n + 1) / x;
        total += term;
        if (n % d == k) sector += term;
        if (term == 0.0 || term < total * kSeriesCutoff) break;
    }
    return sector;
}

std::vector<AsymptoticRow> asymptotic_ratio_report(int d, std::span<const double> xs) {
    if (d < 1) throw std::invalid_argument("asymptotic_ratio_report: d must be >= 1");
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0)) throw std::invalid_argument("asymptotic_ratio_report: x values must be positive");
        if (i > 0 && !(xs[i] > xs[i - 1]))
            throw std::invalid_argument("asymptotic_ratio_report: x values must be strictly increasing");
    }
    std::vector<AsymptoticRow> rows;
    rows.reserve(xs.size());
    for (const double x : xs) {
        double worst = 0.0;
        // d = 1 is the full exponential series; the ratio is 1 by definition.
        if (d > 1) {
            for (int k = 0; k < d; ++k) worst = std::max(worst, std::abs(d * scaled_partial_exp_sum(k, d, x) - 1.0));
        }
        rows.push_back({x, worst});
    }
    return rows;
}

}  // namespace optqudit::fock
