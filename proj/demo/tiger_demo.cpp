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

// Plays a few steps of the tiger problem with a sampled two-step lookahead
// and prints what the agent believes, does and pays for.

#include <cstdio>

#include "qpomdp/qpomdp.hpp"

int main() {
    using namespace qpomdp;
    const Pomdp tiger = tiger_pomdp(0.9);

    LookaheadConfig config;
    config.horizon = 2;
    config.budget = {250, 250, 15};
    config.sampler = SamplerKind::quantum;
    config.belief_options.backend = QuantumBackend::amplitude;

    Rng env_rng = substream(7, 0, "env");
    std::size_t state = sample_initial_state(tiger, env_rng);
    BeliefState belief{tiger.initial_belief()};
    QueryLedger ledger;
    double total = 0.0;

    for (std::size_t t = 0; t < 8; ++t) {
        Rng plan_rng = substream(7, 0, "plan", t);
        const PlanResult pr = plan(tiger, belief, config, plan_rng, ledger);
        const StepOutcome out = step(tiger, state, pr.action, env_rng);
        total += out.reward;
        std::printf("t=%zu  b=(%.2f, %.2f)  %-10s -> %-10s  r=%+5.1f  queries=%llu\n", t, belief[0], belief[1],
                    tiger.action_names()[pr.action].c_str(), tiger.observation_names()[out.observation].c_str(),
                    out.reward, static_cast<unsigned long long>(pr.queries));
        Rng update_rng = substream(7, 0, "update", t);
        belief = sampled_belief_update(tiger, belief, pr.action, out.observation, config.budget.l, config.sampler,
                                       update_rng, ledger, config.belief_options)
                     .belief;
        state = out.next_state;
    }

    const ComplexityReport rep = summarize(ledger);
    std::printf("\ntotal reward %.1f, total queries %llu\n", total,
                static_cast<unsigned long long>(ledger.total_queries()));
    std::printf("c_l = %.2f, q_l = %.2f, ratio = %.3f over %zu belief updates\n", rep.c_l, rep.q_l, rep.ratio,
                rep.phi_size);
    return 0;
}
