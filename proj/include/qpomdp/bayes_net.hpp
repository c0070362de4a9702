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

// Discrete Bayesian networks: construction, exact enumeration, direct
// sampling and classical rejection sampling.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qpomdp/error.hpp"
#include "qpomdp/ledger.hpp"
#include "qpomdp/rng.hpp"

namespace qpomdp {

inline constexpr std::size_t kDefaultJointLimit = std::size_t{1} << 24;
inline constexpr std::uint64_t kDefaultRejectionBudget = 10'000'000;
inline constexpr double kInputNormTolerance = 1e-9;

struct RandomVariable {
    std::string name;
    std::size_t cardinality = 1;
    std::vector<std::size_t> parents;
};

/// Input form of a conditional probability table. Rows are ordered by the
/// mixed-radix parent assignment with the first parent most significant.
struct CptSpec {
    std::size_t variable = 0;
    std::vector<std::vector<double>> rows;
};

/// Dense conditional probability table.
class Cpt {
   public:
    Cpt() = default;
    Cpt(std::size_t variable, std::size_t cardinality, std::vector<std::size_t> parent_cards,
        std::vector<double> table)
        : variable_(variable),
          cardinality_(cardinality),
          parent_cards_(std::move(parent_cards)),
          table_(std::move(table)) {}

    std::size_t variable() const noexcept { return variable_; }
    std::size_t cardinality() const noexcept { return cardinality_; }
    std::size_t row_count() const noexcept { return table_.size() / cardinality_; }
    const std::vector<std::size_t>& parent_cardinalities() const noexcept { return parent_cards_; }

    std::span<const double> row(std::size_t row_index) const {
        return {table_.data() + row_index * cardinality_, cardinality_};
    }

    /// Row index for parent values given in parent order.
    template <typename Range>
    std::size_t row_index(const Range& parent_values) const {
        std::size_t idx = 0;
        std::size_t k = 0;
        for (auto v : parent_values) idx = idx * parent_cards_[k++] + static_cast<std::size_t>(v);
        return idx;
    }

   private:
    std::size_t variable_ = 0;
    std::size_t cardinality_ = 1;
    std::vector<std::size_t> parent_cards_;
    std::vector<double> table_;
};

/// Full assignment: one value index per variable.
using Assignment = std::vector<std::size_t>;

/// Partial assignment used as evidence; items are (variable, value) pairs.
class Evidence {
   public:
    Evidence() = default;
    Evidence(std::initializer_list<std::pair<std::size_t, std::size_t>> items) : items_(items) {
        normalize();
    }
    explicit Evidence(std::vector<std::pair<std::size_t, std::size_t>> items) : items_(std::move(items)) {
        normalize();
    }

    bool empty() const noexcept { return items_.empty(); }
    const std::vector<std::pair<std::size_t, std::size_t>>& items() const noexcept { return items_; }

    bool matches(std::span<const std::size_t> full) const noexcept {
        for (const auto& [var, val] : items_) {
            if (full[var] != val) return false;
        }
        return true;
    }

   private:
    void normalize() {
        std::sort(items_.begin(), items_.end());
        for (std::size_t i = 1; i < items_.size(); ++i) {
            if (items_[i].first == items_[i - 1].first) {
                throw Error(ErrorCode::InvalidAssignment, "evidence names a variable twice");
            }
        }
    }

    std::vector<std::pair<std::size_t, std::size_t>> items_;
};

class BayesNet {
   public:
    BayesNet() = default;

    std::size_t size() const noexcept { return variables_.size(); }
    /// Largest parent count over all variables.
    std::size_t max_parents() const noexcept {
        std::size_t m = 0;
        for (const auto& v : variables_) m = std::max(m, v.parents.size());
        return m;
    }
    const std::vector<RandomVariable>& variables() const noexcept { return variables_; }
    const RandomVariable& variable(std::size_t i) const { return variables_.at(i); }
    const Cpt& cpt(std::size_t i) const { return cpts_.at(i); }
    const std::vector<std::size_t>& topo_order() const noexcept { return topo_; }

    std::size_t index_of(std::string_view name) const {
        for (std::size_t i = 0; i < variables_.size(); ++i) {
            if (variables_[i].name == name) return i;
        }
        throw Error(ErrorCode::InvalidVariable, "no variable named '" + std::string(name) + "'");
    }

    /// Product of cardinalities, saturating at SIZE_MAX.
    std::size_t joint_size() const noexcept {
        std::size_t n = 1;
        for (const auto& v : variables_) {
            if (v.cardinality != 0 && n > SIZE_MAX / v.cardinality) return SIZE_MAX;
            n *= v.cardinality;
        }
        return n;
    }

    /// Mixed-radix joint index; variable 0 is most significant.
    std::size_t joint_index(std::span<const std::size_t> a) const {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < variables_.size(); ++i) idx = idx * variables_[i].cardinality + a[i];
        return idx;
    }

    Assignment decode(std::size_t index) const {
        Assignment a(variables_.size());
        for (std::size_t i = variables_.size(); i-- > 0;) {
            a[i] = index % variables_[i].cardinality;
            index /= variables_[i].cardinality;
        }
        return a;
    }

    /// P(x_i | parents(x_i)) read from the CPT.
    double local_probability(std::size_t i, std::span<const std::size_t> a) const {
        const Cpt& c = cpts_[i];
        std::size_t row = 0;
        const auto& ps = variables_[i].parents;
        for (std::size_t k = 0; k < ps.size(); ++k) row = row * c.parent_cardinalities()[k] + a[ps[k]];
        return c.row(row)[a[i]];
    }

    void check_evidence(const Evidence& e) const {
        for (const auto& [var, val] : e.items()) {
            if (var >= size()) throw Error(ErrorCode::InvalidVariable, "evidence variable out of range");
            if (val >= variables_[var].cardinality) {
                throw Error(ErrorCode::InvalidAssignment, "evidence value out of range for " + variables_[var].name);
            }
        }
    }

    friend BayesNet build_net(std::vector<RandomVariable> variables, std::vector<CptSpec> cpts);

   private:
    std::vector<RandomVariable> variables_;
    std::vector<Cpt> cpts_;
    std::vector<std::size_t> topo_;
};

/// Validates structure and tables, renormalizing rows that are within
/// kInputNormTolerance of summing to one.
inline BayesNet build_net(std::vector<RandomVariable> variables, std::vector<CptSpec> cpts) {
    const std::size_t n = variables.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& v = variables[i];
        if (v.cardinality == 0) throw Error(ErrorCode::InvalidVariable, v.name + " has cardinality 0");
        for (std::size_t p : v.parents) {
            if (p >= n) throw Error(ErrorCode::InvalidVariable, v.name + " names a parent out of range");
            if (p == i) throw Error(ErrorCode::CyclicGraph, v.name + " is its own parent");
        }
        auto sorted = v.parents;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw Error(ErrorCode::InvalidVariable, v.name + " lists a parent twice");
        }
    }

    // Kahn's algorithm; ties resolved by lowest index for a stable order.
    std::vector<std::size_t> indegree(n, 0);
    std::vector<std::vector<std::size_t>> children(n);
    for (std::size_t i = 0; i < n; ++i) {
        indegree[i] = variables[i].parents.size();
        for (std::size_t p : variables[i].parents) children[p].push_back(i);
    }
    std::vector<std::size_t> topo;
    topo.reserve(n);
    std::vector<bool> done(n, false);
    while (topo.size() < n) {
        std::size_t pick = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (!done[i] && indegree[i] == 0) {
                pick = i;
                break;
            }
        }
        if (pick == n) throw Error(ErrorCode::CyclicGraph, "parent relation contains a cycle");
        done[pick] = true;
        topo.push_back(pick);
        for (std::size_t c : children[pick]) --indegree[c];
    }

    std::vector<Cpt> tables(n);
    std::vector<bool> seen(n, false);
    if (cpts.size() != n) throw Error(ErrorCode::CptShapeMismatch, "expected exactly one CPT per variable");
    for (auto& spec : cpts) {
        if (spec.variable >= n) throw Error(ErrorCode::CptShapeMismatch, "CPT for unknown variable");
        if (seen[spec.variable]) throw Error(ErrorCode::CptShapeMismatch, "duplicate CPT");
        seen[spec.variable] = true;
        const auto& v = variables[spec.variable];
        std::vector<std::size_t> parent_cards;
        std::size_t rows = 1;
        for (std::size_t p : v.parents) {
            parent_cards.push_back(variables[p].cardinality);
            rows *= variables[p].cardinality;
        }
        if (spec.rows.size() != rows) {
            throw Error(ErrorCode::CptShapeMismatch, v.name + ": expected " + std::to_string(rows) + " rows, got " +
                                                         std::to_string(spec.rows.size()));
        }
        std::vector<double> flat;
        flat.reserve(rows * v.cardinality);
        for (std::size_t r = 0; r < rows; ++r) {
            auto& row = spec.rows[r];
            if (row.size() != v.cardinality) {
                throw Error(ErrorCode::CptShapeMismatch, v.name + ": row " + std::to_string(r) + " has " +
                                                             std::to_string(row.size()) + " entries");
            }
            double sum = 0.0;
            for (double x : row) {
                if (!(x >= 0.0) || !std::isfinite(x)) {
                    throw Error(ErrorCode::CptNotNormalized, v.name + ": negative or non-finite probability");
                }
                sum += x;
            }
            if (std::abs(sum - 1.0) > kInputNormTolerance) {
                throw Error(ErrorCode::CptNotNormalized, v.name + ": row " + std::to_string(r) + " sums to " +
                                                             std::to_string(sum));
            }
            for (double x : row) flat.push_back(x / sum);
        }
        tables[spec.variable] = Cpt(spec.variable, v.cardinality, std::move(parent_cards), std::move(flat));
    }

    BayesNet net;
    net.variables_ = std::move(variables);
    net.cpts_ = std::move(tables);
    net.topo_ = std::move(topo);
    return net;
}

/// Probability of every joint assignment, indexed by BayesNet::joint_index.
inline std::vector<double> exact_joint(const BayesNet& net, std::size_t limit = kDefaultJointLimit) {
    const std::size_t dim = net.joint_size();
    if (dim > limit) throw Error(ErrorCode::JointTooLarge, "joint has " + std::to_string(dim) + " entries");
    std::vector<double> joint(dim);
    Assignment a(net.size(), 0);
    for (std::size_t idx = 0; idx < dim; ++idx) {
        double p = 1.0;
        for (std::size_t i = 0; i < net.size() && p != 0.0; ++i) p *= net.local_probability(i, a);
        joint[idx] = p;
        // Odometer increment, last variable fastest.
        for (std::size_t i = net.size(); i-- > 0;) {
            if (++a[i] < net.variable(i).cardinality) break;
            a[i] = 0;
        }
    }
    return joint;
}

struct Posterior {
    /// Indexed mixed-radix over the query variables, first query most significant.
    std::vector<double> probabilities;
    double evidence_probability = 0.0;
};

inline Posterior exact_conditional(const BayesNet& net, std::span<const std::size_t> query_vars,
                                   const Evidence& evidence, std::size_t limit = kDefaultJointLimit) {
    net.check_evidence(evidence);
    std::size_t qdim = 1;
    for (std::size_t q : query_vars) {
        if (q >= net.size()) throw Error(ErrorCode::InvalidVariable, "query variable out of range");
        qdim *= net.variable(q).cardinality;
    }
    const auto joint = exact_joint(net, limit);
    Posterior post;
    post.probabilities.assign(qdim, 0.0);
    for (std::size_t idx = 0; idx < joint.size(); ++idx) {
        if (joint[idx] == 0.0) continue;
        const auto a = net.decode(idx);
        if (!evidence.matches(a)) continue;
        std::size_t qi = 0;
        for (std::size_t q : query_vars) qi = qi * net.variable(q).cardinality + a[q];
        post.probabilities[qi] += joint[idx];
        post.evidence_probability += joint[idx];
    }
    if (post.evidence_probability <= 0.0) {
        throw Error(ErrorCode::ZeroEvidenceProbability, "evidence has probability zero");
    }
    for (double& p : post.probabilities) p /= post.evidence_probability;
    return post;
}

inline double evidence_probability(const BayesNet& net, const Evidence& evidence,
                                   std::size_t limit = kDefaultJointLimit) {
    net.check_evidence(evidence);
    const auto joint = exact_joint(net, limit);
    double pe = 0.0;
    for (std::size_t idx = 0; idx < joint.size(); ++idx) {
        if (joint[idx] != 0.0 && evidence.matches(net.decode(idx))) pe += joint[idx];
    }
    return pe;
}

/// Ancestral sample: each variable drawn in topological order from its CPT
/// row given the already-sampled parents.
inline void direct_sample_into(const BayesNet& net, Rng& rng, Assignment& out) {
    out.resize(net.size());
    for (std::size_t i : net.topo_order()) {
        const Cpt& c = net.cpt(i);
        std::size_t row = 0;
        const auto& ps = net.variable(i).parents;
        for (std::size_t k = 0; k < ps.size(); ++k) row = row * c.parent_cardinalities()[k] + out[ps[k]];
        out[i] = sample_index(c.row(row), rng);
    }
}

inline Assignment direct_sample(const BayesNet& net, Rng& rng) {
    Assignment a;
    direct_sample_into(net, rng, a);
    return a;
}

/// Direct sample charged as one query to `site`.
inline Assignment direct_sample(const BayesNet& net, Rng& rng, QueryLedger& ledger, Site site = Site::other) {
    ledger.add(site, 1);
    ledger.add_expected(site, 1.0);
    return direct_sample(net, rng);
}

struct AcceptedSample {
    Assignment assignment;
    /// Queries spent to obtain this sample, rejected attempts included.
    std::uint64_t queries = 0;
};

/// Classical rejection sampling: direct-sample until the evidence matches.
/// Every generated sample is charged as one query.
inline AcceptedSample rejection_sample(const BayesNet& net, const Evidence& evidence, Rng& rng,
                                       QueryLedger& ledger, Site site = Site::other,
                                       std::uint64_t max_attempts = kDefaultRejectionBudget) {
    AcceptedSample s;
    while (s.queries < max_attempts) {
        direct_sample_into(net, rng, s.assignment);
        ++s.queries;
        if (evidence.matches(s.assignment)) {
            ledger.add(site, s.queries);
            ledger.add_accepted(1);
            return s;
        }
    }
    ledger.add(site, s.queries);
    throw Error(ErrorCode::RejectionBudgetExceeded,
                "no accepted sample after " + std::to_string(max_attempts) + " attempts");
}

}  // namespace qpomdp
