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

// POMDP models, one-step dynamic decision network slices, and belief updates
// by exact inference, classical rejection sampling, or quantum rejection
// sampling.

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qpomdp/bayes_net.hpp"
#include "qpomdp/error.hpp"
#include "qpomdp/ledger.hpp"
#include "qpomdp/quantum_sim.hpp"
#include "qpomdp/rng.hpp"

namespace qpomdp {

/// Finite POMDP with a finite-support reward distribution P(r | s, a).
///
/// Tables are dense and row-normalized:
///   transition(s, a, s'), sensor(s', a, o), reward_probability(s, a, r).
class Pomdp {
   public:
    Pomdp() = default;

    Pomdp(std::vector<std::string> states, std::vector<std::string> actions, std::vector<std::string> observations,
          std::vector<double> reward_values, std::vector<double> transition, std::vector<double> sensor,
          std::vector<double> reward, double gamma, std::vector<double> initial_belief)
        : states_(std::move(states)),
          actions_(std::move(actions)),
          observations_(std::move(observations)),
          reward_values_(std::move(reward_values)),
          transition_(std::move(transition)),
          sensor_(std::move(sensor)),
          reward_(std::move(reward)),
          gamma_(gamma),
          initial_(std::move(initial_belief)) {
        validate();
    }

    std::size_t num_states() const noexcept { return states_.size(); }
    std::size_t num_actions() const noexcept { return actions_.size(); }
    std::size_t num_observations() const noexcept { return observations_.size(); }
    std::size_t num_rewards() const noexcept { return reward_values_.size(); }

    const std::vector<std::string>& state_names() const noexcept { return states_; }
    const std::vector<std::string>& action_names() const noexcept { return actions_; }
    const std::vector<std::string>& observation_names() const noexcept { return observations_; }
    const std::vector<double>& reward_values() const noexcept { return reward_values_; }
    double gamma() const noexcept { return gamma_; }
    const std::vector<double>& initial_belief() const noexcept { return initial_; }

    double transition(std::size_t s, std::size_t a, std::size_t s2) const {
        return transition_[(s * num_actions() + a) * num_states() + s2];
    }
    double sensor(std::size_t s2, std::size_t a, std::size_t o) const {
        return sensor_[(s2 * num_actions() + a) * num_observations() + o];
    }
    double reward_probability(std::size_t s, std::size_t a, std::size_t r) const {
        return reward_[(s * num_actions() + a) * num_rewards() + r];
    }

    std::span<const double> transition_row(std::size_t s, std::size_t a) const {
        return {transition_.data() + (s * num_actions() + a) * num_states(), num_states()};
    }
    std::span<const double> sensor_row(std::size_t s2, std::size_t a) const {
        return {sensor_.data() + (s2 * num_actions() + a) * num_observations(), num_observations()};
    }
    std::span<const double> reward_row(std::size_t s, std::size_t a) const {
        return {reward_.data() + (s * num_actions() + a) * num_rewards(), num_rewards()};
    }

    /// E(r | s, a) = sum_r r P(r | s, a).
    double expected_reward(std::size_t s, std::size_t a) const {
        double e = 0.0;
        for (std::size_t r = 0; r < num_rewards(); ++r) e += reward_values_[r] * reward_probability(s, a, r);
        return e;
    }

    double max_abs_reward() const {
        double m = 0.0;
        for (double r : reward_values_) m = std::max(m, std::abs(r));
        return m;
    }

    std::size_t action_index(std::string_view name) const { return find(actions_, name, ErrorCode::UnknownAction); }
    std::size_t state_index(std::string_view name) const { return find(states_, name, ErrorCode::InvalidVariable); }
    std::size_t observation_index(std::string_view name) const {
        return find(observations_, name, ErrorCode::InvalidVariable);
    }

    /// Same model with every reward value shifted by `offset`.
    Pomdp with_reward_offset(double offset) const {
        Pomdp p = *this;
        for (double& r : p.reward_values_) r += offset;
        return p;
    }

    Pomdp with_gamma(double gamma) const {
        Pomdp p = *this;
        p.gamma_ = gamma;
        p.validate();
        return p;
    }

    friend bool operator==(const Pomdp&, const Pomdp&) = default;

   private:
    static std::size_t find(const std::vector<std::string>& names, std::string_view name, ErrorCode code) {
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (names[i] == name) return i;
        }
        throw Error(code, "unknown name '" + std::string(name) + "'");
    }

    static void check_rows(std::vector<double>& table, std::size_t width, const char* what) {
        for (std::size_t off = 0; off < table.size(); off += width) {
            double sum = 0.0;
            for (std::size_t i = 0; i < width; ++i) {
                if (!(table[off + i] >= 0.0)) throw Error(ErrorCode::CptNotNormalized, std::string(what) + " has a negative entry");
                sum += table[off + i];
            }
            if (std::abs(sum - 1.0) > kInputNormTolerance) {
                throw Error(ErrorCode::CptNotNormalized, std::string(what) + " row does not sum to 1");
            }
            for (std::size_t i = 0; i < width; ++i) table[off + i] /= sum;
        }
    }

    void validate() {
        const std::size_t S = num_states(), A = num_actions(), O = num_observations(), R = num_rewards();
        if (S == 0 || A == 0 || O == 0 || R == 0) throw Error(ErrorCode::InvalidConfig, "empty state/action/observation/reward set");
        if (transition_.size() != S * A * S) throw Error(ErrorCode::CptShapeMismatch, "transition table has wrong size");
        if (sensor_.size() != S * A * O) throw Error(ErrorCode::CptShapeMismatch, "sensor table has wrong size");
        if (reward_.size() != S * A * R) throw Error(ErrorCode::CptShapeMismatch, "reward table has wrong size");
        if (initial_.size() != S) throw Error(ErrorCode::CptShapeMismatch, "initial belief has wrong size");
        if (!(gamma_ >= 0.0 && gamma_ < 1.0)) throw Error(ErrorCode::InvalidConfig, "gamma must lie in [0, 1)");
        check_rows(transition_, S, "transition");
        check_rows(sensor_, O, "sensor");
        check_rows(reward_, R, "reward");
        check_rows(initial_, S, "initial belief");
    }

    std::vector<std::string> states_, actions_, observations_;
    std::vector<double> reward_values_;
    std::vector<double> transition_, sensor_, reward_;
    double gamma_ = 0.9;
    std::vector<double> initial_;
};

/// Probability vector over hidden states.
struct BeliefState {
    std::vector<double> probabilities;

    static BeliefState point_mass(std::size_t num_states, std::size_t s) {
        BeliefState b{std::vector<double>(num_states, 0.0)};
        b.probabilities.at(s) = 1.0;
        return b;
    }

    std::size_t size() const noexcept { return probabilities.size(); }
    double operator[](std::size_t s) const { return probabilities[s]; }

    void validate(std::size_t num_states) const {
        if (probabilities.size() != num_states) throw Error(ErrorCode::InvalidBelief, "belief has wrong dimension");
        double sum = 0.0;
        for (double p : probabilities) {
            if (!(p >= 0.0)) throw Error(ErrorCode::InvalidBelief, "belief has a negative entry");
            sum += p;
        }
        if (std::abs(sum - 1.0) > kInputNormTolerance) throw Error(ErrorCode::InvalidBelief, "belief does not sum to 1");
    }

    friend bool operator==(const BeliefState&, const BeliefState&) = default;
};

/// One-step decision network: S_t -> S_{t+1} <- A_t, (S_{t+1}, A_t) -> O_{t+1},
/// (S_t, A_t) -> R_{t+1}. Belief and action are clamped as root CPTs.
struct DdnSlice {
    static constexpr std::size_t kState = 0;
    static constexpr std::size_t kAction = 1;
    static constexpr std::size_t kNextState = 2;
    static constexpr std::size_t kObservation = 3;
    static constexpr std::size_t kReward = 4;

    BayesNet net;
    std::size_t action = 0;
};

inline DdnSlice build_slice(const Pomdp& pomdp, const BeliefState& belief, std::size_t action) {
    if (action >= pomdp.num_actions()) throw Error(ErrorCode::UnknownAction, "action index out of range");
    belief.validate(pomdp.num_states());
    const std::size_t S = pomdp.num_states(), A = pomdp.num_actions(), O = pomdp.num_observations(),
                      R = pomdp.num_rewards();
    std::vector<RandomVariable> vars{
        {"S_t", S, {}},
        {"A_t", A, {}},
        {"S_t+1", S, {DdnSlice::kState, DdnSlice::kAction}},
        {"O_t+1", O, {DdnSlice::kNextState, DdnSlice::kAction}},
        {"R_t+1", R, {DdnSlice::kState, DdnSlice::kAction}},
    };
    std::vector<CptSpec> cpts(5);
    cpts[0] = {DdnSlice::kState, {belief.probabilities}};
    std::vector<double> delta(A, 0.0);
    delta[action] = 1.0;
    cpts[1] = {DdnSlice::kAction, {delta}};
    cpts[2].variable = DdnSlice::kNextState;
    cpts[3].variable = DdnSlice::kObservation;
    cpts[4].variable = DdnSlice::kReward;
    for (std::size_t s = 0; s < S; ++s) {
        for (std::size_t a = 0; a < A; ++a) {
            auto t = pomdp.transition_row(s, a);
            cpts[2].rows.emplace_back(t.begin(), t.end());
            auto r = pomdp.reward_row(s, a);
            cpts[4].rows.emplace_back(r.begin(), r.end());
        }
    }
    for (std::size_t s2 = 0; s2 < S; ++s2) {
        for (std::size_t a = 0; a < A; ++a) {
            auto o = pomdp.sensor_row(s2, a);
            cpts[3].rows.emplace_back(o.begin(), o.end());
        }
    }
    return DdnSlice{build_net(std::move(vars), std::move(cpts)), action};
}

struct BeliefUpdateResult {
    BeliefState belief;
    /// P(o | b, a).
    double eta = 0.0;
    std::uint64_t queries = 0;
};

/// b'(s') proportional to P(o | s', a) sum_s P(s' | s, a) b(s).
inline BeliefUpdateResult exact_belief_update(const Pomdp& pomdp, const BeliefState& belief, std::size_t action,
                                              std::size_t observation) {
    if (action >= pomdp.num_actions()) throw Error(ErrorCode::UnknownAction, "action index out of range");
    if (observation >= pomdp.num_observations()) throw Error(ErrorCode::InvalidVariable, "observation out of range");
    belief.validate(pomdp.num_states());
    const std::size_t S = pomdp.num_states();
    BeliefUpdateResult out;
    out.belief.probabilities.assign(S, 0.0);
    for (std::size_t s2 = 0; s2 < S; ++s2) {
        double predicted = 0.0;
        for (std::size_t s = 0; s < S; ++s) predicted += pomdp.transition(s, action, s2) * belief[s];
        out.belief.probabilities[s2] = pomdp.sensor(s2, action, observation) * predicted;
        out.eta += out.belief.probabilities[s2];
    }
    if (out.eta <= 0.0) throw Error(ErrorCode::ImpossibleObservation, "observation has probability zero");
    for (double& p : out.belief.probabilities) p /= out.eta;
    return out;
}

/// How quantum belief sampling is simulated.
///   amplitude: measure G^k B|0> on the slice's amplitude vector.
///   analytic:  accepted states drawn from the exact posterior and attempts
///              from a geometric law with success p_k; identical in
///              distribution and cost to the amplitude route, much cheaper.
enum class QuantumBackend { amplitude, analytic };

struct BeliefSamplingOptions {
    QuantumBackend backend = QuantumBackend::amplitude;
    std::uint64_t max_attempts = kDefaultRejectionBudget;
};

/// Approximate update from l accepted rejection samples with evidence
/// O_{t+1} = o: b'_l(s') is the fraction of accepted samples with S_{t+1} = s'.
/// Records the exact P(o | b, a) in the ledger's phi set.
inline BeliefUpdateResult sampled_belief_update(const Pomdp& pomdp, const BeliefState& belief, std::size_t action,
                                                std::size_t observation, std::uint64_t l, SamplerKind sampler,
                                                Rng& rng, QueryLedger& ledger, BeliefSamplingOptions options = {}) {
    if (l == 0) throw Error(ErrorCode::InvalidConfig, "belief sample count must be at least 1");
    const BeliefUpdateResult exact = exact_belief_update(pomdp, belief, action, observation);
    const double eta = std::min(exact.eta, 1.0);
    ledger.record_phi(eta, l);
    ledger.add_expected(Site::belief, static_cast<double>(l) * cost_model(eta, sampler));

    const std::size_t S = pomdp.num_states();
    std::vector<std::uint64_t> counts(S, 0);
    std::uint64_t queries = 0;

    if (sampler == SamplerKind::quantum && options.backend == QuantumBackend::analytic) {
        const auto plan = plan_amplification(eta);
        for (std::uint64_t i = 0; i < l; ++i) {
            const std::uint64_t attempts = rng.geometric(plan.p_k);
            if (attempts > options.max_attempts) {
                ledger.add(Site::belief, queries + options.max_attempts * plan.cost_per_attempt);
                throw Error(ErrorCode::RejectionBudgetExceeded, "attempt budget exceeded");
            }
            queries += attempts * plan.cost_per_attempt;
            ++counts[sample_index(exact.belief.probabilities, rng)];
        }
        ledger.add(Site::belief, queries);
        ledger.add_accepted(l);
    } else {
        const DdnSlice slice = build_slice(pomdp, belief, action);
        const Evidence evidence{{DdnSlice::kObservation, observation}};
        if (sampler == SamplerKind::classical) {
            for (std::uint64_t i = 0; i < l; ++i) {
                auto s = rejection_sample(slice.net, evidence, rng, ledger, Site::belief, options.max_attempts);
                queries += s.queries;
                ++counts[s.assignment[DdnSlice::kNextState]];
            }
        } else {
            const QuantumRejectionSampler qrs(slice.net, evidence, eta);
            for (std::uint64_t i = 0; i < l; ++i) {
                auto s = qrs.sample(rng, ledger, Site::belief, options.max_attempts);
                queries += s.queries;
                ++counts[s.assignment[DdnSlice::kNextState]];
            }
        }
    }

    BeliefUpdateResult out;
    out.eta = exact.eta;
    out.queries = queries;
    out.belief.probabilities.resize(S);
    for (std::size_t s = 0; s < S; ++s) {
        out.belief.probabilities[s] = static_cast<double>(counts[s]) / static_cast<double>(l);
    }
    return out;
}

/// P(o | b, a) by enumeration.
inline std::vector<double> exact_observation_probabilities(const Pomdp& pomdp, const BeliefState& belief,
                                                           std::size_t action) {
    if (action >= pomdp.num_actions()) throw Error(ErrorCode::UnknownAction, "action index out of range");
    belief.validate(pomdp.num_states());
    std::vector<double> p(pomdp.num_observations(), 0.0);
    for (std::size_t s = 0; s < pomdp.num_states(); ++s) {
        if (belief[s] == 0.0) continue;
        for (std::size_t s2 = 0; s2 < pomdp.num_states(); ++s2) {
            const double w = belief[s] * pomdp.transition(s, action, s2);
            if (w == 0.0) continue;
            for (std::size_t o = 0; o < pomdp.num_observations(); ++o) p[o] += w * pomdp.sensor(s2, action, o);
        }
    }
    return p;
}

/// Estimates P(o | b, a) from m direct samples of the slice (no evidence, so
/// no rejections); m queries charged to the observation site.
inline std::vector<double> observation_probabilities(const DdnSlice& slice, std::size_t num_observations,
                                                     std::uint64_t m, Rng& rng, QueryLedger& ledger) {
    if (m == 0) throw Error(ErrorCode::InvalidConfig, "observation sample count must be at least 1");
    std::vector<double> freq(num_observations, 0.0);
    Assignment a;
    for (std::uint64_t i = 0; i < m; ++i) {
        direct_sample_into(slice.net, rng, a);
        freq[a[DdnSlice::kObservation]] += 1.0;
    }
    ledger.add(Site::observation, m);
    ledger.add_expected(Site::observation, static_cast<double>(m));
    for (double& f : freq) f /= static_cast<double>(m);
    return freq;
}

inline std::vector<double> observation_probabilities(const Pomdp& pomdp, const BeliefState& belief,
                                                     std::size_t action, std::uint64_t m, Rng& rng,
                                                     QueryLedger& ledger) {
    return observation_probabilities(build_slice(pomdp, belief, action), pomdp.num_observations(), m, rng, ledger);
}

inline std::vector<double> observation_probabilities(const Pomdp& pomdp, const BeliefState& belief,
                                                     std::size_t action, std::uint64_t m, Rng& rng) {
    QueryLedger scratch;
    return observation_probabilities(pomdp, belief, action, m, rng, scratch);
}

/// sum_s b(s) E(r | s, a).
inline double exact_expected_reward(const Pomdp& pomdp, const BeliefState& belief, std::size_t action) {
    if (action >= pomdp.num_actions()) throw Error(ErrorCode::UnknownAction, "action index out of range");
    double e = 0.0;
    for (std::size_t s = 0; s < pomdp.num_states(); ++s) {
        if (belief[s] != 0.0) e += belief[s] * pomdp.expected_reward(s, action);
    }
    return e;
}

/// Mean of n rewards direct-sampled from the slice; n queries charged to the
/// reward site.
inline double expected_reward(const DdnSlice& slice, std::span<const double> reward_values, std::uint64_t n,
                              Rng& rng, QueryLedger& ledger) {
    if (n == 0) throw Error(ErrorCode::InvalidConfig, "reward sample count must be at least 1");
    double sum = 0.0;
    Assignment a;
    for (std::uint64_t i = 0; i < n; ++i) {
        direct_sample_into(slice.net, rng, a);
        sum += reward_values[a[DdnSlice::kReward]];
    }
    ledger.add(Site::reward, n);
    ledger.add_expected(Site::reward, static_cast<double>(n));
    return sum / static_cast<double>(n);
}

inline double expected_reward(const Pomdp& pomdp, const BeliefState& belief, std::size_t action, std::uint64_t n,
                              Rng& rng, QueryLedger& ledger) {
    return expected_reward(build_slice(pomdp, belief, action), pomdp.reward_values(), n, rng, ledger);
}

inline double expected_reward(const Pomdp& pomdp, const BeliefState& belief, std::size_t action, std::uint64_t n,
                              Rng& rng) {
    QueryLedger scratch;
    return expected_reward(pomdp, belief, action, n, rng, scratch);
}

}  // namespace qpomdp
