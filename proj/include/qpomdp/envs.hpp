// Copyright 2026 The qpomdp Authors
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

// Benchmark environments. The simulator samples from the very tables the
// agent plans with, so model and environment cannot diverge.

#include <cstdint>
#include <vector>

#include "qpomdp/pomdp.hpp"
#include "qpomdp/rng.hpp"

namespace qpomdp {

namespace tiger {
inline constexpr std::size_t kTigerLeft = 0, kTigerRight = 1;
inline constexpr std::size_t kListen = 0, kOpenLeft = 1, kOpenRight = 2;
inline constexpr std::size_t kHearLeft = 0, kHearRight = 1;
inline constexpr double kListenAccuracy = 0.85;
}  // namespace tiger

/// Two doors, one tiger. Listening costs 1 and reports the tiger's side with
/// 85% accuracy; opening pays +5 (treasure) or -10 (tiger) and reshuffles.
inline Pomdp tiger_pomdp(double gamma = 0.9) {
    using namespace tiger;
    const std::vector<double> rewards{5.0, -10.0, -1.0, 0.0};
    constexpr std::size_t kTreasure = 0, kTiger = 1, kListenCost = 2;
    const std::size_t S = 2, A = 3, O = 2, R = rewards.size();

    std::vector<double> T(S * A * S), Z(S * A * O), Rw(S * A * R, 0.0);
    for (std::size_t s = 0; s < S; ++s) {
        T[(s * A + kListen) * S + s] = 1.0;
        for (std::size_t a : {kOpenLeft, kOpenRight}) {
            T[(s * A + a) * S + 0] = 0.5;
            T[(s * A + a) * S + 1] = 0.5;
        }
    }
    for (std::size_t s2 = 0; s2 < S; ++s2) {
        const std::size_t correct = s2 == kTigerLeft ? kHearLeft : kHearRight;
        Z[(s2 * A + kListen) * O + correct] = kListenAccuracy;
        Z[(s2 * A + kListen) * O + (1 - correct)] = 1.0 - kListenAccuracy;
        for (std::size_t a : {kOpenLeft, kOpenRight}) {
            Z[(s2 * A + a) * O + 0] = 0.5;
            Z[(s2 * A + a) * O + 1] = 0.5;
        }
    }
    for (std::size_t s = 0; s < S; ++s) {
        Rw[(s * A + kListen) * R + kListenCost] = 1.0;
        Rw[(s * A + kOpenLeft) * R + (s == kTigerLeft ? kTiger : kTreasure)] = 1.0;
        Rw[(s * A + kOpenRight) * R + (s == kTigerRight ? kTiger : kTreasure)] = 1.0;
    }
    return Pomdp({"tiger-left", "tiger-right"}, {"listen", "open-left", "open-right"}, {"hear-left", "hear-right"},
                 rewards, std::move(T), std::move(Z), std::move(Rw), gamma, {0.5, 0.5});
}

namespace robot {
inline constexpr std::size_t kRooms = 4;
inline constexpr std::size_t kClockwise = 0, kCounterClockwise = 1, kLeverA = 2, kLeverB = 3;
inline constexpr std::size_t kInTreasureRoom = 0, kNotInTreasureRoom = 1;
inline constexpr double kSensorError = 0.10;
}  // namespace robot

struct RobotLayout {
    std::size_t initial_room = 0;
    std::size_t treasure_room = 1;
};

/// Four rooms on a ring. Moving either way costs 1. In the treasure room the
/// levers pay +10 with probability 0.7 (else -5) and 0.9 (else -20), then the
/// robot is returned to the initial room; elsewhere levers do nothing. A noisy
/// sensor reports whether the robot is in the treasure room.
inline Pomdp robot_pomdp(double gamma = 0.9, RobotLayout layout = {}) {
    using namespace robot;
    const std::vector<double> rewards{-1.0, 10.0, -5.0, -20.0, 0.0};
    constexpr std::size_t kMove = 0, kTreasure = 1, kSmallDamage = 2, kBigDamage = 3, kNothing = 4;
    const std::size_t S = kRooms, A = 4, O = 2, R = rewards.size();
    if (layout.initial_room >= S || layout.treasure_room >= S) {
        throw Error(ErrorCode::InvalidConfig, "robot layout room out of range");
    }

    std::vector<double> T(S * A * S, 0.0), Z(S * A * O), Rw(S * A * R, 0.0);
    for (std::size_t s = 0; s < S; ++s) {
        T[(s * A + kClockwise) * S + (s + 1) % S] = 1.0;
        T[(s * A + kCounterClockwise) * S + (s + S - 1) % S] = 1.0;
        Rw[(s * A + kClockwise) * R + kMove] = 1.0;
        Rw[(s * A + kCounterClockwise) * R + kMove] = 1.0;
        for (std::size_t a : {kLeverA, kLeverB}) {
            const bool here = s == layout.treasure_room;
            T[(s * A + a) * S + (here ? layout.initial_room : s)] = 1.0;
            if (!here) Rw[(s * A + a) * R + kNothing] = 1.0;
        }
        if (s == layout.treasure_room) {
            Rw[(s * A + kLeverA) * R + kTreasure] = 0.7;
            Rw[(s * A + kLeverA) * R + kSmallDamage] = 0.3;
            Rw[(s * A + kLeverB) * R + kTreasure] = 0.9;
            Rw[(s * A + kLeverB) * R + kBigDamage] = 0.1;
        }
    }
    for (std::size_t s2 = 0; s2 < S; ++s2) {
        const bool in = s2 == layout.treasure_room;
        for (std::size_t a = 0; a < A; ++a) {
            Z[(s2 * A + a) * O + kInTreasureRoom] = in ? 1.0 - kSensorError : kSensorError;
            Z[(s2 * A + a) * O + kNotInTreasureRoom] = in ? kSensorError : 1.0 - kSensorError;
        }
    }
    std::vector<double> b0(S, 0.0);
    b0[layout.initial_room] = 1.0;
    return Pomdp({"room-0", "room-1", "room-2", "room-3"},
                 {"clockwise", "counterclockwise", "lever-A", "lever-B"},
                 {"in-treasure-room", "not-in-treasure-room"}, rewards, std::move(T), std::move(Z), std::move(Rw),
                 gamma, std::move(b0));
}

struct StepOutcome {
    std::size_t next_state = 0;
    std::size_t observation = 0;
    std::size_t reward_index = 0;
    double reward = 0.0;
};

/// Samples s' ~ P(.|s,a), then o ~ P(.|s',a), then r ~ P(.|s,a).
inline StepOutcome step(const Pomdp& model, std::size_t state, std::size_t action, Rng& rng) {
    if (action >= model.num_actions()) throw Error(ErrorCode::UnknownAction, "action index out of range");
    if (state >= model.num_states()) throw Error(ErrorCode::InvalidVariable, "state index out of range");
    StepOutcome out;
    out.next_state = sample_index(model.transition_row(state, action), rng);
    out.observation = sample_index(model.sensor_row(out.next_state, action), rng);
    out.reward_index = sample_index(model.reward_row(state, action), rng);
    out.reward = model.reward_values()[out.reward_index];
    return out;
}

/// Draws the initial hidden state from b0.
inline std::size_t sample_initial_state(const Pomdp& model, Rng& rng) {
    return sample_index(model.initial_belief(), rng);
}

struct Episode {
    std::vector<std::size_t> states;  // T + 1 entries, states[0] initial
    std::vector<std::size_t> actions;
    std::vector<std::size_t> observations;
    std::vector<double> rewards;
    std::vector<std::uint64_t> queries;  // per step

    std::size_t length() const noexcept { return actions.size(); }

    bool consistent() const noexcept {
        const std::size_t t = actions.size();
        return states.size() == t + 1 && observations.size() == t && rewards.size() == t && queries.size() == t;
    }
};

}  // namespace qpomdp
