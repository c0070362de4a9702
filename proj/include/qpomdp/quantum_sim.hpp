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

// Amplitude-level simulation of quantum rejection sampling on a Bayesian
// network.
//
// States live on the mixed-radix joint assignment space of the network, not
// on a qubit register: the encoding operator B maps |0...0> to
//   sum_x prod_i sqrt(P(x_i | parents(x_i))) |x>,
// which we build directly. B S0 B^dagger acting on any state is the
// reflection about B|0...0>, so the amplification operator
//   G = (2|psi><psi| - I) S_e
// only ever needs the encoded state psi and the evidence predicate.
//
// Cost accounting: preparation costs one query, every G iteration two (it
// applies B and B^dagger). Phase flips and reflections are free.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <numbers>
#include <ostream>
#include <span>
#include <vector>

#include "qpomdp/bayes_net.hpp"
#include "qpomdp/error.hpp"
#include "qpomdp/ledger.hpp"
#include "qpomdp/rng.hpp"

namespace qpomdp {

/// Real amplitudes over joint assignments, indexed like exact_joint.
struct AmplitudeState {
    std::vector<double> amplitudes;

    std::size_t dimension() const noexcept { return amplitudes.size(); }

    double norm() const noexcept {
        double s = 0.0;
        for (double a : amplitudes) s += a * a;
        return std::sqrt(s);
    }

    std::vector<double> probabilities() const {
        std::vector<double> p(amplitudes.size());
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = amplitudes[i] * amplitudes[i];
        return p;
    }
};

/// Applies B to |0...0>: amplitude of x is prod_i sqrt(P(x_i | parents)).
inline AmplitudeState encode(const BayesNet& net, std::size_t limit = kDefaultJointLimit) {
    auto joint = exact_joint(net, limit);
    for (double& p : joint) p = std::sqrt(p);
    return AmplitudeState{std::move(joint)};
}

/// R_Y angle that maps |0> to sqrt(p0)|0> + sqrt(p1)|1>.
inline double rotation_angle(double p0, double p1) {
    if (!(p0 >= 0.0) || !(p1 >= 0.0) || std::abs(p0 + p1 - 1.0) > kInputNormTolerance) {
        throw Error(ErrorCode::NotNormalized, "rotation probabilities must be nonnegative and sum to 1");
    }
    if (p0 == 0.0) return std::numbers::pi;
    return 2.0 * std::atan(std::sqrt(p1 / p0));
}

/// One uniformly-controlled R_Y record: rotate `target` by `angle` when its
/// parents hold `control_values` (in parent order).
struct ControlledRotation {
    std::size_t target = 0;
    std::vector<std::size_t> controls;
    std::vector<std::size_t> control_values;
    double angle = 0.0;
};

struct BinaryGatePlan {
    std::vector<ControlledRotation> rotations;
};

/// Builds the controlled-rotation circuit for an all-binary network and
/// applies it gate by gate to |0...0>.
inline std::pair<BinaryGatePlan, AmplitudeState> encode_binary_gates(const BayesNet& net,
                                                                     std::size_t limit = kDefaultJointLimit) {
    for (const auto& v : net.variables()) {
        if (v.cardinality != 2) throw Error(ErrorCode::NonBinaryVariable, v.name + " is not binary");
    }
    const std::size_t dim = net.joint_size();
    if (dim > limit) throw Error(ErrorCode::JointTooLarge, "joint has " + std::to_string(dim) + " entries");

    BinaryGatePlan plan;
    for (std::size_t target : net.topo_order()) {
        const auto& parents = net.variable(target).parents;
        const Cpt& c = net.cpt(target);
        for (std::size_t row = 0; row < c.row_count(); ++row) {
            ControlledRotation g;
            g.target = target;
            g.controls = parents;
            g.control_values.resize(parents.size());
            std::size_t r = row;
            for (std::size_t k = parents.size(); k-- > 0;) {
                g.control_values[k] = r % 2;
                r /= 2;
            }
            g.angle = rotation_angle(c.row(row)[0], c.row(row)[1]);
            plan.rotations.push_back(std::move(g));
        }
    }

    AmplitudeState state{std::vector<double>(dim, 0.0)};
    state.amplitudes[0] = 1.0;
    const std::size_t n = net.size();
    for (const auto& g : plan.rotations) {
        const std::size_t stride = std::size_t{1} << (n - 1 - g.target);
        const double c = std::cos(g.angle / 2.0);
        const double s = std::sin(g.angle / 2.0);
        for (std::size_t idx = 0; idx < dim; ++idx) {
            if (idx & stride) continue;
            bool active = true;
            for (std::size_t k = 0; k < g.controls.size() && active; ++k) {
                const std::size_t bit = (idx >> (n - 1 - g.controls[k])) & 1U;
                active = bit == g.control_values[k];
            }
            if (!active) continue;
            const double a0 = state.amplitudes[idx];
            const double a1 = state.amplitudes[idx | stride];
            state.amplitudes[idx] = c * a0 - s * a1;
            state.amplitudes[idx | stride] = s * a0 + c * a1;
        }
    }
    return {std::move(plan), std::move(state)};
}

/// Precomputed evidence predicate over joint indices.
inline std::vector<bool> evidence_mask(const BayesNet& net, const Evidence& evidence) {
    net.check_evidence(evidence);
    const std::size_t dim = net.joint_size();
    std::vector<bool> mask(dim);
    for (std::size_t idx = 0; idx < dim; ++idx) mask[idx] = evidence.matches(net.decode(idx));
    return mask;
}

/// S_e: negate amplitudes of evidence-matching assignments.
inline AmplitudeState phase_flip(AmplitudeState state, const std::vector<bool>& mask) {
    if (mask.size() != state.dimension()) throw Error(ErrorCode::DimensionMismatch, "mask/state size differ");
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (mask[i]) state.amplitudes[i] = -state.amplitudes[i];
    }
    return state;
}

inline AmplitudeState phase_flip(const BayesNet& net, AmplitudeState state, const Evidence& evidence) {
    return phase_flip(std::move(state), evidence_mask(net, evidence));
}

/// One application of G = (2|psi><psi| - I) S_e with psi the encoded state.
inline AmplitudeState grover_iterate(AmplitudeState state, const AmplitudeState& encoded,
                                     const std::vector<bool>& mask) {
    if (state.dimension() != encoded.dimension()) {
        throw Error(ErrorCode::DimensionMismatch, "state and encoded reference differ in dimension");
    }
    state = phase_flip(std::move(state), mask);
    double overlap = 0.0;
    for (std::size_t i = 0; i < state.dimension(); ++i) overlap += encoded.amplitudes[i] * state.amplitudes[i];
    for (std::size_t i = 0; i < state.dimension(); ++i) {
        state.amplitudes[i] = 2.0 * overlap * encoded.amplitudes[i] - state.amplitudes[i];
    }
    return state;
}

inline AmplitudeState grover_iterate(const BayesNet& net, AmplitudeState state, const AmplitudeState& encoded,
                                     const Evidence& evidence) {
    return grover_iterate(std::move(state), encoded, evidence_mask(net, evidence));
}

/// Squared-amplitude mass on evidence-matching assignments.
inline double evidence_mass(const AmplitudeState& state, const std::vector<bool>& mask) {
    double m = 0.0;
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (mask[i]) m += state.amplitudes[i] * state.amplitudes[i];
    }
    return m;
}

struct AmplificationPlan {
    double p_e = 1.0;
    double theta_a = std::numbers::pi / 2.0;
    std::uint64_t k = 0;
    double p_k = 1.0;
    std::uint64_t cost_per_attempt = 1;

    double expected_cost() const noexcept { return static_cast<double>(cost_per_attempt) / p_k; }
};

/// Picks the iteration count minimizing expected queries per accepted sample,
/// (1 + 2k) / sin^2((2k + 1) theta_a), over k in [0, ceil(pi / (4 theta_a))].
/// Ties go to the smaller k, so p_e >= 0.5 always gives k = 0.
inline AmplificationPlan plan_amplification(double p_e) {
    if (!(p_e > 0.0 && p_e <= 1.0)) throw Error(ErrorCode::InvalidProbability, "acceptance probability not in (0, 1]");
    AmplificationPlan best;
    best.p_e = p_e;
    best.theta_a = std::asin(std::sqrt(p_e));
    best.k = 0;
    best.p_k = p_e;
    best.cost_per_attempt = 1;
    double best_cost = 1.0 / p_e;
    const auto k_max = static_cast<std::uint64_t>(std::ceil(std::numbers::pi / (4.0 * best.theta_a)));
    for (std::uint64_t k = 1; k <= k_max; ++k) {
        const double s = std::sin(static_cast<double>(2 * k + 1) * best.theta_a);
        const double pk = s * s;
        if (pk <= 0.0) continue;
        const double cost = static_cast<double>(1 + 2 * k) / pk;
        if (cost < best_cost * (1.0 - 1e-12)) {
            best_cost = cost;
            best.k = k;
            best.p_k = pk;
            best.cost_per_attempt = 1 + 2 * k;
        }
    }
    return best;
}

enum class SamplerKind { classical, quantum };

/// Expected queries per accepted sample.
inline double cost_model(double p_e, SamplerKind mode) {
    if (!(p_e > 0.0 && p_e <= 1.0)) throw Error(ErrorCode::InvalidProbability, "acceptance probability not in (0, 1]");
    if (mode == SamplerKind::classical) return 1.0 / p_e;
    return plan_amplification(p_e).expected_cost();
}

/// Quantum rejection sampler for one (network, evidence) pair. Builds G^k B|0>
/// once; each attempt measures it and keeps the outcome if the evidence holds.
class QuantumRejectionSampler {
   public:
    QuantumRejectionSampler(const BayesNet& net, const Evidence& evidence, double p_e,
                            std::size_t limit = kDefaultJointLimit)
        : plan_(plan_amplification(p_e)), net_(&net) {
        const auto mask = evidence_mask(net, evidence);
        const AmplitudeState encoded = encode(net, limit);
        AmplitudeState state = encoded;
        for (std::uint64_t i = 0; i < plan_.k; ++i) state = grover_iterate(std::move(state), encoded, mask);
        probabilities_ = state.probabilities();
        accept_ = mask;
    }

    /// Computes P(e) by enumeration first.
    QuantumRejectionSampler(const BayesNet& net, const Evidence& evidence, std::size_t limit = kDefaultJointLimit)
        : QuantumRejectionSampler(net, evidence, checked_pe(net, evidence, limit), limit) {}

    const AmplificationPlan& plan() const noexcept { return plan_; }
    const std::vector<double>& measurement_distribution() const noexcept { return probabilities_; }

    AcceptedSample sample(Rng& rng, QueryLedger& ledger, Site site = Site::other,
                          std::uint64_t max_attempts = kDefaultRejectionBudget) const {
        AcceptedSample s;
        for (std::uint64_t attempt = 1; attempt <= max_attempts; ++attempt) {
            const std::size_t idx = sample_index(probabilities_, rng);
            s.queries += plan_.cost_per_attempt;
            if (accept_[idx]) {
                s.assignment = net_->decode(idx);
                ledger.add(site, s.queries);
                ledger.add_accepted(1);
                return s;
            }
        }
        ledger.add(site, s.queries);
        throw Error(ErrorCode::RejectionBudgetExceeded,
                    "no accepted sample after " + std::to_string(max_attempts) + " attempts");
    }

   private:
    static double checked_pe(const BayesNet& net, const Evidence& evidence, std::size_t limit) {
        const double pe = evidence_probability(net, evidence, limit);
        if (pe <= 0.0) throw Error(ErrorCode::ZeroEvidenceProbability, "evidence has probability zero");
        return std::min(pe, 1.0);
    }

    AmplificationPlan plan_;
    const BayesNet* net_;
    std::vector<double> probabilities_;
    std::vector<bool> accept_;
};

inline AcceptedSample quantum_rejection_sample(const BayesNet& net, const Evidence& evidence, Rng& rng,
                                               QueryLedger& ledger, Site site = Site::other,
                                               std::uint64_t max_attempts = kDefaultRejectionBudget) {
    return QuantumRejectionSampler(net, evidence).sample(rng, ledger, site, max_attempts);
}

/// Debug dump: index, assignment tuple, amplitude.
inline void write_amplitudes_csv(std::ostream& os, const BayesNet& net, const AmplitudeState& state) {
    os << "index,assignment,amplitude\n";
    char buf[64];
    for (std::size_t i = 0; i < state.dimension(); ++i) {
        const auto a = net.decode(i);
        os << i << ",\"(";
        for (std::size_t k = 0; k < a.size(); ++k) os << (k ? "," : "") << a[k];
        std::snprintf(buf, sizeof buf, "%.17g", state.amplitudes[i]);
        os << ")\"," << buf << '\n';
    }
}

}  // namespace qpomdp
