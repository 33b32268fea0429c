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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "optqudit/qudit.hpp"

namespace optqudit {

enum class Engine { ideal, cv };
enum class MeasurementModel { subspace_projective, heterodyne_bin };

std::string to_string(Engine engine);
std::string to_string(MeasurementModel model);

/// One classical value sent between the parties.
struct ClassicalMessage {
    std::string sender;
    std::string receiver;
    std::string key;  // "k" or "s"
    int value;

    friend bool operator==(const ClassicalMessage &, const ClassicalMessage &) = default;
};

struct TeleportRecord {
    Engine engine = Engine::ideal;
    MeasurementModel meas_model = MeasurementModel::subspace_projective;
    int k = 0;
    std::optional<int> s;
    std::vector<ClassicalMessage> messages;
    /// Operator left on the output, in application order.
    qudit::GateWord byproduct;
    /// Gates Bob applied, built from `messages` alone; empty when corrections are off.
    qudit::GateWord correction;
    double fidelity_pre_correction = 0.0;
    std::optional<double> fidelity_post_correction;
    /// 1 - fidelity, computed from the orthogonal residual so values far below 1e-16 survive.
    double infidelity_pre_correction = 1.0;
    std::optional<double> infidelity_post_correction;
    double leakage_total = 0.0;
    std::uint64_t seed = 0;
    /// Receiver's (decoded) qudit after any correction.
    std::optional<qudit::QuditState> output;
};

namespace qudit {

/// Byproduct of a single pseudo-phase measurement with outcome k: H Z^{-k}.
GateWord one_step_byproduct(int k);

/// Byproduct of the two-measurement chain: X^{-s} R Z^{-k}, i.e. Z^{-k}, then R, then X^{-s}.
GateWord full_byproduct(int k, int s);

/// Bob's correction, read from the message list only: X^s, then R, then Z^k.
///
/// Throws std::invalid_argument when the list does not carry exactly one "k" and one "s".
GateWord correction_from_messages(std::span<const ClassicalMessage> messages);

/// Forced measurement branches for exhaustive checks.
struct ForcedOutcomes {
    std::optional<int> k;
    std::optional<int> s;
};

/// Ideal-engine teleportation through the three-site chain Z12 Z23 |phi>|u>|u>.
///
/// Measures sites 1 and 2 in the pseudo-phase basis, sends (k, s) to Bob as messages and, when
/// `apply_corrections` is set, applies the correction Bob derives from those messages.
TeleportRecord ideal_teleport(const QuditState &input, Rng &rng, ForcedOutcomes forced = {},
                              bool apply_corrections = true);

}  // namespace qudit
}  // namespace optqudit
