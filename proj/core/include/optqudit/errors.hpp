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

#include <stdexcept>
#include <string>

namespace optqudit {

/// Probability mass above the Fock truncation exceeds the configured tolerance.
class TruncationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A state would exceed the configured amplitude or mode cap.
class CapacityError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A pseudo-number sector carries no weight under the current truncation.
class EmptySectorError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Population outside the codeword subspace exceeds the abort threshold.
class LeakageError : public std::runtime_error {
  public:
    LeakageError(const std::string &what, double leakage) : std::runtime_error(what), leakage_(leakage) {}
    double leakage() const noexcept { return leakage_; }

  private:
    double leakage_;
};

/// Born probabilities are inconsistent (unnormalized input, all-zero vector, impossible forced outcome).
class ProbabilityError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Heterodyne grid does not hold enough of the Q-function mass.
class GridCoverageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Quadrature sample at the origin has no phase; draw again.
class ZeroSampleError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace optqudit
