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

#include "optqudit/teleport_record.hpp"

#include <array>
#include <stdexcept>

namespace optqudit {

std::string to_string(Engine engine) { return engine == Engine::ideal ? "ideal" : "cv"; }

std::string to_string(MeasurementModel model) {
    return model == MeasurementModel::subspace_projective ? "subspace" : "heterodyne";
}

namespace qudit {

GateWord one_step_byproduct(int k) { return {{GateKind::Z, -k}, {GateKind::H, 1}}; }

GateWord full_byproduct(int k, int s) { return {{GateKind::Z, -k}, {GateKind::R, 1}, {GateKind::X, -s}}; }

GateWord correction_from_messages(std::span<const ClassicalMessage> messages) {
    std::optional<int> k, s;
    for (const auto &msg : messages) {
        if (msg.key != "k" && msg.key != "s") throw std::invalid_argument("unknown message key " + msg.key);
        auto &slot = msg.key == "k" ? k : s;
        if (slot) throw std::invalid_argument("duplicate message for " + msg.key);
        slot = msg.value;
    }
    if (!k || !s) throw std::invalid_argument("correction needs both k and s");
    return {{GateKind::X, *s}, {GateKind::R, 1}, {GateKind::Z, *k}};
}

TeleportRecord ideal_teleport(const QuditState &input, Rng &rng, ForcedOutcomes forced, bool apply_corrections) {
    const QuditDims dims = input.dims();
    const std::array<QuditState, 3> sites{input, QuditState::uniform(dims), QuditState::uniform(dims)};
    MultiQuditState chain = MultiQuditState::product(sites);
    chain = cz_apply(chain, 1, 2);  // Bob's pair
    chain = cz_apply(chain, 0, 1);  // Alice entangles her input

    const auto first = ideal_measure(chain, 0, MeasurementBasis::pseudo_phase, rng, forced.k);
    const auto second = ideal_measure(first.post, 0, MeasurementBasis::pseudo_phase, rng, forced.s);
    const QuditState bob = second.post.as_qudit();

    TeleportRecord rec;
    rec.engine = Engine::ideal;
    rec.meas_model = MeasurementModel::subspace_projective;
    rec.k = first.outcome;
    rec.s = second.outcome;
    rec.seed = rng.seed();
    rec.messages = {{"Alice", "Bob", "k", first.outcome}, {"Alice", "Bob", "s", second.outcome}};
    rec.byproduct = full_byproduct(first.outcome, second.outcome);
    const QuditState expected = apply_word(rec.byproduct, input);
    rec.fidelity_pre_correction = fidelity(expected, bob);
    rec.infidelity_pre_correction = infidelity(expected.amplitudes(), bob.amplitudes());
    if (apply_corrections) {
        rec.correction = correction_from_messages(rec.messages);
        const QuditState corrected = apply_word(rec.correction, bob);
        rec.fidelity_post_correction = fidelity(corrected, input);
        rec.infidelity_post_correction = infidelity(input.amplitudes(), corrected.amplitudes());
        rec.output = corrected;
    } else {
        rec.output = bob;
    }
    return rec;
}

}  // namespace qudit
}  // namespace optqudit
