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

// Amplitude-level checks that quantum belief sampling is exact: after any
// number of Grover iterations, the evidence-matching part of the state,
// renormalized, is the exact posterior, and its mass follows the rotation
// formula.

#include <algorithm>
#include <cmath>
#include <vector>

#include "qpomdp/pomdp.hpp"
#include "qpomdp/quantum_sim.hpp"
#include "qpomdp/rng.hpp"

namespace qpomdp {

struct EquivalenceReport {
    std::size_t cases = 0;    // (belief, action, observation, k) tuples checked
    std::size_t skipped = 0;  // impossible observations or vanishing mass
    double max_posterior_error = 0.0;
    double max_mass_error = 0.0;
};

/// Point masses, the uniform belief, b0 and `random_count` seeded random
/// beliefs.
inline std::vector<BeliefState> belief_grid(const Pomdp& pomdp, std::size_t random_count, std::uint64_t seed) {
    const std::size_t S = pomdp.num_states();
    std::vector<BeliefState> out;
    out.push_back(BeliefState{pomdp.initial_belief()});
    out.push_back(BeliefState{std::vector<double>(S, 1.0 / static_cast<double>(S))});
    for (std::size_t s = 0; s < S; ++s) out.push_back(BeliefState::point_mass(S, s));
    Rng rng = substream(seed, 0, "belief-grid");
    for (std::size_t i = 0; i < random_count; ++i) {
        std::vector<double> b(S);
        double sum = 0.0;
        for (double& x : b) sum += x = -std::log(1.0 - rng.uniform());  // flat Dirichlet
        for (double& x : b) x /= sum;
        out.push_back(BeliefState{std::move(b)});
    }
    return out;
}

inline EquivalenceReport check_belief_equivalence(const Pomdp& pomdp, const std::vector<BeliefState>& beliefs,
                                                  std::size_t k_max) {
    EquivalenceReport rep;
    for (const auto& b : beliefs) {
        for (std::size_t a = 0; a < pomdp.num_actions(); ++a) {
            const DdnSlice slice = build_slice(pomdp, b, a);
            const AmplitudeState encoded = encode(slice.net);
            std::vector<std::vector<std::size_t>> decoded(encoded.dimension());
            for (std::size_t idx = 0; idx < decoded.size(); ++idx) decoded[idx] = slice.net.decode(idx);

            for (std::size_t o = 0; o < pomdp.num_observations(); ++o) {
                BeliefUpdateResult exact;
                try {
                    exact = exact_belief_update(pomdp, b, a, o);
                } catch (const Error& e) {
                    if (e.code() != ErrorCode::ImpossibleObservation) throw;
                    rep.skipped += k_max + 1;
                    continue;
                }
                const auto mask = evidence_mask(slice.net, Evidence{{DdnSlice::kObservation, o}});
                const double theta = std::asin(std::sqrt(std::min(exact.eta, 1.0)));
                AmplitudeState state = encoded;
                for (std::size_t k = 0; k <= k_max; ++k) {
                    if (k > 0) state = grover_iterate(std::move(state), encoded, mask);
                    const double mass = evidence_mass(state, mask);
                    const double predicted = std::pow(std::sin((2.0 * static_cast<double>(k) + 1.0) * theta), 2.0);
                    rep.max_mass_error = std::max(rep.max_mass_error, std::abs(mass - predicted));
                    if (mass < 1e-20) {
                        ++rep.skipped;
                        continue;
                    }
                    std::vector<double> post(pomdp.num_states(), 0.0);
                    for (std::size_t idx = 0; idx < mask.size(); ++idx) {
                        if (mask[idx]) post[decoded[idx][DdnSlice::kNextState]] += state.amplitudes[idx] * state.amplitudes[idx];
                    }
                    for (std::size_t s = 0; s < post.size(); ++s) {
                        rep.max_posterior_error =
                            std::max(rep.max_posterior_error, std::abs(post[s] / mass - exact.belief[s]));
                    }
                    ++rep.cases;
                }
            }
        }
    }
    return rep;
}

}  // namespace qpomdp
