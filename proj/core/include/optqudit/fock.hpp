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

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace optqudit {

using cplx = std::complex<double>;

namespace fock {

/// How many photon numbers to keep for a coherent amplitude.
struct TruncationPolicy {
    double margin_sigmas = 8.0;    // widths sqrt(<n>) kept above |alpha|^2
    int hard_cap = 256;            // largest admissible n_max
    double tail_tolerance = 1e-10; // allowed Poisson mass above n_max

    /// Throws std::invalid_argument on out-of-range fields.
    void validate() const;
};

/// Amplitudes over |0>, ..., |n_max> of a single optical mode.
class FockVector {
  public:
    FockVector() : amplitudes_(1, cplx{1.0, 0.0}) {}
    explicit FockVector(std::vector<cplx> amplitudes, std::optional<cplx> alpha_ref = std::nullopt,
                        double tail_mass = 0.0);

    /// Fock basis state |n> embedded in n_max + 1 levels.
    static FockVector basis(int n, int n_max);

    int n_max() const noexcept { return static_cast<int>(amplitudes_.size()) - 1; }
    std::size_t dim() const noexcept { return amplitudes_.size(); }
    std::span<const cplx> amplitudes() const noexcept { return amplitudes_; }
    const cplx &operator[](std::size_t n) const { return amplitudes_[n]; }

    /// Reference amplitude when built as a coherent state.
    const std::optional<cplx> &alpha_ref() const noexcept { return alpha_ref_; }
    /// Poisson mass dropped above n_max when built as a coherent state, else 0.
    double tail_mass() const noexcept { return tail_mass_; }

    double norm_squared() const;
    FockVector normalized() const;

  private:
    std::vector<cplx> amplitudes_;
    std::optional<cplx> alpha_ref_;
    double tail_mass_ = 0.0;
};

/// Probability mass of Poisson(mean) strictly above n_max.
double poisson_tail_above(double mean, int n_max);

/// n_max = min(hard_cap, ceil(|a|^2 + m|a| + m)) with m = margin_sigmas.
///
/// Throws TruncationError when the Poisson tail above that n_max exceeds policy.tail_tolerance,
/// which happens when the amplitude is too large for the hard cap.
int truncation_dim(cplx alpha, const TruncationPolicy &policy = {});

/// e^{-|a|^2/2} sum_n a^n / sqrt(n!) |n>, truncated at n_max.
///
/// Throws TruncationError when the discarded tail exceeds tail_tolerance.
FockVector coherent_state(cplx alpha, int n_max, double tail_tolerance = TruncationPolicy{}.tail_tolerance);

/// Applies exp(i theta n) to a single mode.
FockVector apply_phase_rotation(const FockVector &state, double theta);

/// <a|b>, zero-padding the shorter vector.
cplx overlap(const FockVector &a, const FockVector &b);

/// |<a|b>|^2 / (|a|^2 |b|^2).
double fidelity(const FockVector &a, const FockVector &b);

/// f_k(x) = sum_{m >= 0} x^{k + m d} / (k + m d)!.
///
/// Requires 0 <= k < d and x >= 0. Throws std::overflow_error when e^x is not representable
/// (x > 709); use scaled_partial_exp_sum in that range.
double partial_exp_sum(int k, int d, double x);

/// e^{-x} f_k(x), accumulated in the log domain so it is finite for any x >= 0.
double scaled_partial_exp_sum(int k, int d, double x);

struct AsymptoticRow {
    double x;
    double max_deviation;  // max_k |d e^{-x} f_k(x) - 1|
};

/// Deviation of the d partial sums from the even split e^x / d, one row per x.
std::vector<AsymptoticRow> asymptotic_ratio_report(int d, std::span<const double> xs);

}  // namespace fock
}  // namespace optqudit
