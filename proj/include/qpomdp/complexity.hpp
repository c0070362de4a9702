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

#include <cmath>
#include <span>
#include <vector>

#include "qpomdp/error.hpp"
#include "qpomdp/ledger.hpp"

namespace qpomdp {

/// Symbol values plugged into the order-of-growth expressions.
struct ComplexitySymbols {
    double n = 1;        // reward samples
    double N = 1;        // variables in the network
    double M = 0;        // max parent count
    double actions = 1;  // A
    double observations = 1;
    double states = 1;
    double rewards = 1;
    double horizon = 1;
};

/// c_l = sum 1/p and q_l = sum 1/sqrt(p) over the phi set, plus the classical
/// and quantum lookahead cost expressions evaluated at the given symbols.
/// The two bounds are order-of-growth scores for comparing regimes, not
/// runtimes.
struct ComplexityReport {
    double c_l = 0.0;
    double q_l = 0.0;
    double ratio = 1.0;
    double classical_bound = 0.0;
    double quantum_bound = 0.0;
    std::size_t phi_size = 0;
    ComplexitySymbols symbols;
};

inline ComplexityReport summarize(std::span<const double> phi, const ComplexitySymbols& sym = {}) {
    if (phi.empty()) throw Error(ErrorCode::EmptyPhi, "no acceptance probabilities recorded");
    ComplexityReport r;
    for (double p : phi) {
        if (!(p > 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidProbability, "phi entry not in (0, 1]");
        r.c_l += 1.0 / p;
        r.q_l += 1.0 / std::sqrt(p);
    }
    r.ratio = r.c_l / r.q_l;
    r.phi_size = phi.size();
    r.symbols = sym;
    // n N M (A Omega)^(H-1) (A + ((R + Omega) S^(H-1))^2 x), x = c_l or q_l.
    const double prefix = sym.n * sym.N * sym.M * std::pow(sym.actions * sym.observations, sym.horizon - 1.0);
    const double belief_weight = std::pow((sym.rewards + sym.observations) * std::pow(sym.states, sym.horizon - 1.0), 2.0);
    r.classical_bound = prefix * (sym.actions + belief_weight * r.c_l);
    r.quantum_bound = prefix * (sym.actions + belief_weight * r.q_l);
    return r;
}

inline ComplexityReport summarize(const QueryLedger& ledger, const ComplexitySymbols& sym = {}) {
    std::vector<double> phi;
    phi.reserve(ledger.phi().size());
    for (const auto& e : ledger.phi()) phi.push_back(e.p);
    return summarize(phi, sym);
}

/// Whether 1/q_l << ((R + Omega) S^(H-1))^2 / A holds, read as
/// "left side <= right side / margin".
inline bool corollary_regime(const ComplexityReport& report, double actions, double observations, double states,
                             double rewards, double horizon, double margin = 10.0) {
    const double lhs = 1.0 / report.q_l;
    const double rhs = std::pow((rewards + observations) * std::pow(states, horizon - 1.0), 2.0) / actions;
    return lhs <= rhs / margin;
}

inline bool corollary_regime(const ComplexityReport& report, double margin = 10.0) {
    const auto& s = report.symbols;
    return corollary_regime(report, s.actions, s.observations, s.states, s.rewards, s.horizon, margin);
}

}  // namespace qpomdp
