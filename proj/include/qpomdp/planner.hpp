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

// Finite-horizon lookahead over belief states, and the sample-budget and
// confidence calculators that go with it.
//
// The tree alternates belief nodes (max over actions) and reward nodes.
// Reward nodes at depth d < H-1 expand one child belief per observation:
//   Q(b, a) = R(b, a) + gamma * sum_o P(o | b, a) V(b'_{a,o}),
// and those at depth H-1 are leaves, Q(b, a) = R(b, a). With sampling every
// reward node spends n reward samples and m observation samples, and every
// non-root belief node one belief update of l accepted samples, so a full
// tree has N_b = ((A Omega)^H - 1) / (A Omega - 1) belief nodes and
// N_o = A N_b reward nodes.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "qpomdp/error.hpp"
#include "qpomdp/ledger.hpp"
#include "qpomdp/pomdp.hpp"
#include "qpomdp/quantum_sim.hpp"
#include "qpomdp/rng.hpp"

namespace qpomdp {

struct SampleBudget {
    std::uint64_t n = 1;  // reward samples per reward node
    std::uint64_t m = 1;  // observation samples per reward node
    std::uint64_t l = 1;  // accepted samples per belief update

    friend bool operator==(const SampleBudget&, const SampleBudget&) = default;
};

/// How many accepted samples a belief update draws.
///   fixed:      always budget.l.
///   equal_cost: the quantum sampler spends the query budget the classical
///               sampler would need for l samples, l / P(e), and converts it
///               into floor((l / P(e)) / cost_q(P(e))) samples. Classical
///               samplers still draw l.
enum class BeliefSampleRule { fixed, equal_cost };

struct LookaheadConfig {
    std::size_t horizon = 1;
    SampleBudget budget;
    SamplerKind sampler = SamplerKind::classical;
    bool use_exact_inference = false;
    BeliefSampleRule sample_rule = BeliefSampleRule::fixed;
    BeliefSamplingOptions belief_options;

    void validate() const {
        if (horizon < 1) throw Error(ErrorCode::InvalidConfig, "horizon must be at least 1");
        if (budget.n < 1 || budget.m < 1 || budget.l < 1) throw Error(ErrorCode::InvalidConfig, "sample counts must be >= 1");
    }
};

inline std::uint64_t belief_sample_count(std::uint64_t l, double p_e, SamplerKind sampler, BeliefSampleRule rule) {
    if (rule == BeliefSampleRule::fixed || sampler == SamplerKind::classical) return l;
    const double budget = static_cast<double>(l) / p_e;
    const double per_sample = cost_model(p_e, SamplerKind::quantum);
    const auto boosted = static_cast<std::uint64_t>(std::floor(budget / per_sample * (1.0 + 1e-12)));
    return std::max(boosted, l);
}

struct PlanStats {
    std::uint64_t belief_nodes = 0;  // root included
    std::uint64_t reward_nodes = 0;
    std::uint64_t belief_updates = 0;
    std::uint64_t pruned_observations = 0;
    std::uint64_t reward_queries = 0;
    std::uint64_t observation_queries = 0;
    std::uint64_t belief_queries = 0;
};

struct PlanResult {
    std::size_t action = 0;
    std::vector<double> q_values;
    std::uint64_t queries = 0;
    std::vector<PhiEntry> phi;
    PlanStats stats;
};

/// Lowest index wins ties.
inline std::size_t argmax(const std::vector<double>& v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] > v[best]) best = i;
    }
    return best;
}

namespace detail {

class LookaheadTree {
   public:
    LookaheadTree(const Pomdp& pomdp, const LookaheadConfig& config, Rng& estimate_rng, Rng& belief_rng,
                  QueryLedger& ledger)
        : pomdp_(pomdp), config_(config), estimate_rng_(estimate_rng), belief_rng_(belief_rng), ledger_(ledger) {}

    std::vector<double> root_q_values(const BeliefState& belief) {
        ++stats.belief_nodes;
        std::vector<double> q(pomdp_.num_actions());
        for (std::size_t a = 0; a < q.size(); ++a) q[a] = q_value(belief, a, 0);
        return q;
    }

    PlanStats stats;

   private:
    double belief_value(const BeliefState& belief, std::size_t depth) {
        ++stats.belief_nodes;
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < pomdp_.num_actions(); ++a) best = std::max(best, q_value(belief, a, depth));
        return best;
    }

    double q_value(const BeliefState& belief, std::size_t action, std::size_t depth) {
        ++stats.reward_nodes;
        const bool leaf = depth + 1 >= config_.horizon;
        const double gamma = pomdp_.gamma();
        if (config_.use_exact_inference) {
            double q = exact_expected_reward(pomdp_, belief, action);
            if (leaf) return q;
            const auto probs = exact_observation_probabilities(pomdp_, belief, action);
            for (std::size_t o = 0; o < probs.size(); ++o) {
                if (probs[o] <= 0.0) {
                    ++stats.pruned_observations;
                    continue;
                }
                const auto next = exact_belief_update(pomdp_, belief, action, o);
                ++stats.belief_updates;
                q += gamma * probs[o] * belief_value(next.belief, depth + 1);
            }
            return q;
        }

        const DdnSlice slice = build_slice(pomdp_, belief, action);
        const auto before_reward = ledger_.queries(Site::reward);
        const auto before_obs = ledger_.queries(Site::observation);
        double q = expected_reward(slice, pomdp_.reward_values(), config_.budget.n, estimate_rng_, ledger_);
        const auto probs =
            observation_probabilities(slice, pomdp_.num_observations(), config_.budget.m, estimate_rng_, ledger_);
        stats.reward_queries += ledger_.queries(Site::reward) - before_reward;
        stats.observation_queries += ledger_.queries(Site::observation) - before_obs;
        if (leaf) return q;

        for (std::size_t o = 0; o < probs.size(); ++o) {
            if (probs[o] <= 0.0) {
                ++stats.pruned_observations;
                continue;
            }
            const double eta = exact_belief_update(pomdp_, belief, action, o).eta;
            const std::uint64_t l =
                belief_sample_count(config_.budget.l, std::min(eta, 1.0), config_.sampler, config_.sample_rule);
            const auto update = sampled_belief_update(pomdp_, belief, action, o, l, config_.sampler, belief_rng_,
                                                      ledger_, config_.belief_options);
            ++stats.belief_updates;
            stats.belief_queries += update.queries;
            q += gamma * probs[o] * belief_value(update.belief, depth + 1);
        }
        return q;
    }

    const Pomdp& pomdp_;
    const LookaheadConfig& config_;
    Rng& estimate_rng_;
    Rng& belief_rng_;
    QueryLedger& ledger_;
};

}  // namespace detail

/// Evaluates the lookahead tree rooted at `belief` and returns the greedy
/// action. Reward/observation estimates and belief sampling draw from two
/// child streams of `rng`, so the estimate stream is unaffected by how many
/// belief samples are taken.
inline PlanResult plan(const Pomdp& pomdp, const BeliefState& belief, const LookaheadConfig& config, Rng& rng,
                       QueryLedger& ledger) {
    config.validate();
    belief.validate(pomdp.num_states());
    Rng estimate_rng = rng.split("estimate");
    Rng belief_rng = rng.split("belief");
    const auto queries_before = ledger.total_queries();
    const auto phi_before = ledger.phi().size();

    detail::LookaheadTree tree(pomdp, config, estimate_rng, belief_rng, ledger);
    PlanResult result;
    result.q_values = tree.root_q_values(belief);
    result.action = argmax(result.q_values);
    result.queries = ledger.total_queries() - queries_before;
    for (std::size_t i = phi_before; i < ledger.phi().size(); ++i) result.phi.push_back(ledger.phi()[i]);
    result.stats = tree.stats;
    return result;
}

inline PlanResult plan(const Pomdp& pomdp, const BeliefState& belief, const LookaheadConfig& config, Rng& rng) {
    QueryLedger scratch;
    return plan(pomdp, belief, config, rng, scratch);
}

/// Full-tree node counts (N_b, N_o) for branching A * Omega and horizon H.
struct NodeCounts {
    std::uint64_t belief_nodes = 0;
    std::uint64_t reward_nodes = 0;
};

inline NodeCounts lookahead_node_counts(std::uint64_t actions, std::uint64_t observations, std::size_t horizon) {
    const std::uint64_t branching = actions * observations;
    std::uint64_t nb = 0, level = 1;
    for (std::size_t i = 0; i < horizon; ++i) {
        nb += level;
        level *= branching;
    }
    return {nb, actions * nb};
}

struct PomdpSizes {
    std::uint64_t states = 1;
    std::uint64_t actions = 1;
    std::uint64_t observations = 1;
    std::uint64_t rewards = 1;

    static PomdpSizes of(const Pomdp& p) {
        return {p.num_states(), p.num_actions(), p.num_observations(), p.num_rewards()};
    }
};

/// Budget with equal error contribution from the reward, observation and
/// belief sampling terms of the lookahead error bound.
struct DerivedBudget {
    SampleBudget budget;
    double m_over_n = 0.0;
    double l_over_n = 0.0;
};

inline std::uint64_t ceil_count(double x) {
    // Guard against products like (0.9 * 10)^2 landing a hair above an integer.
    const double c = std::ceil(x * (1.0 - 1e-12));
    return c < 1.0 ? 1 : static_cast<std::uint64_t>(c);
}

inline DerivedBudget derive_budget(std::uint64_t n, const PomdpSizes& sizes, double gamma, std::size_t horizon) {
    if (n < 1) throw Error(ErrorCode::InvalidConfig, "n must be at least 1");
    if (!(gamma > 0.0 && gamma < 1.0)) throw Error(ErrorCode::InvalidConfig, "gamma must lie in (0, 1)");
    if (horizon < 1) throw Error(ErrorCode::InvalidConfig, "horizon must be at least 1");
    if (sizes.states == 0 || sizes.observations == 0 || sizes.rewards == 0 || sizes.actions == 0) {
        throw Error(ErrorCode::DegenerateSizes, "empty state/action/observation/reward set");
    }
    const double big_gamma = 1.0 / (1.0 - gamma);
    const double S = static_cast<double>(sizes.states);
    const double Omega = static_cast<double>(sizes.observations);
    const double R = static_cast<double>(sizes.rewards);
    const double H = static_cast<double>(horizon);

    DerivedBudget out;
    out.m_over_n = std::pow(gamma * big_gamma, 2.0);
    if (sizes.states == 1) {
        // Limit S -> 1 of the closed form below.
        double plain = 0.0, weighted = 0.0;
        for (std::size_t k = 0; k < horizon; ++k) {
            plain += std::pow(gamma, static_cast<double>(k));
            weighted += static_cast<double>(k + 1) * std::pow(gamma, static_cast<double>(k));
        }
        out.l_over_n = std::pow(0.25 * (R + gamma * big_gamma * Omega) * weighted / plain, 2.0);
    } else {
        const double gs = gamma * S;
        const double geometric = std::abs(gs - 1.0) < 1e-12 ? H : (std::pow(gs, H) - 1.0) / (gs - 1.0);
        const double inner = S / (big_gamma * (1.0 - std::pow(gamma, H))) * geometric - 1.0;
        out.l_over_n = std::pow(0.25 * (R + gamma * big_gamma * Omega) / (S - 1.0) * inner, 2.0);
    }
    const double nd = static_cast<double>(n);
    out.budget = {n, ceil_count(out.m_over_n * nd), ceil_count(out.l_over_n * nd)};
    return out;
}

/// Hoeffding half-width sqrt(log(2 / sigma) / (2 m)).
inline double hoeffding(double m, double sigma) {
    if (!(m >= 1.0)) throw Error(ErrorCode::InvalidConfig, "sample count must be at least 1");
    if (!(sigma > 0.0 && sigma <= 2.0)) throw Error(ErrorCode::InvalidSigma, "sigma must lie in (0, 2]");
    return std::sqrt(std::log(2.0 / sigma) / (2.0 * m));
}

struct PacParams {
    double epsilon = 0.1;
    double delta = 0.1;
    std::uint64_t stopping_time = 1;  // T
    double gamma = 0.9;
    double r_max = 1.0;
    PomdpSizes sizes;
    std::size_t horizon = 1;
};

struct PacBounds {
    double n_min = 0.0;
    double sigma_max = 0.0;
    std::size_t horizon_min = 0;
};

/// Smallest H with 2 gamma^H Gamma r_max < epsilon.
inline std::size_t minimum_horizon(double epsilon, double gamma, double r_max) {
    if (!(epsilon > 0.0)) throw Error(ErrorCode::UnattainableEpsilon, "epsilon must be positive");
    if (!(gamma > 0.0 && gamma < 1.0)) throw Error(ErrorCode::InvalidConfig, "gamma must lie in (0, 1)");
    const double big_gamma = 1.0 / (1.0 - gamma);
    const double x = epsilon / (2.0 * big_gamma * r_max);
    if (x > 1.0) return 0;
    const double bound = std::log(x) / std::log(gamma);
    return static_cast<std::size_t>(std::floor(bound)) + 1;
}

inline PacBounds pac_bounds(const PacParams& p) {
    if (!(p.epsilon > 0.0)) throw Error(ErrorCode::UnattainableEpsilon, "epsilon must be positive");
    if (!(p.delta > 0.0 && p.delta < 1.0)) throw Error(ErrorCode::InvalidConfig, "delta must lie in (0, 1)");
    if (!(p.r_max > 0.0)) throw Error(ErrorCode::InvalidConfig, "r_max must be positive");
    if (p.horizon < 1) throw Error(ErrorCode::InvalidConfig, "horizon must be at least 1");
    const double big_gamma = 1.0 / (1.0 - p.gamma);
    const double H = static_cast<double>(p.horizon);
    const double T = static_cast<double>(p.stopping_time);
    const double A = static_cast<double>(p.sizes.actions);
    const double Omega = static_cast<double>(p.sizes.observations);
    const double S = static_cast<double>(p.sizes.states);
    const double finite_horizon_error = 2.0 * std::pow(p.gamma, H) * big_gamma * p.r_max;
    if (!(p.epsilon > finite_horizon_error)) {
        throw Error(ErrorCode::UnattainableEpsilon, "epsilon does not exceed the finite-horizon error");
    }

    PacBounds out;
    out.horizon_min = minimum_horizon(p.epsilon, p.gamma, p.r_max);
    const double ao = A * Omega;
    // AOmega = 1 makes the (H-1)/(AOmega-1)^2 term singular; the sum it bounds
    // is then finite, so only H = 1 (where it vanishes) is accepted.
    double tail = 0.0;
    if (p.horizon > 1) {
        if (ao == 1.0) throw Error(ErrorCode::DegenerateSizes, "A * Omega = 1 with H > 1");
        tail = ao * (H - 1.0) / ((ao - 1.0) * (ao - 1.0));
    }
    out.sigma_max = p.delta * std::pow(ao, -H) / (2.0 + A * (T + 4.0 + tail));
    const double scale = p.r_max / (p.epsilon - finite_horizon_error) * (8.0 * big_gamma + 4.0 * std::pow(S, T));
    out.n_min = 0.5 * std::log(2.0 / out.sigma_max) * scale * scale;
    return out;
}

}  // namespace qpomdp
