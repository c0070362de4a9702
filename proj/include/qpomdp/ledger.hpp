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

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "qpomdp/error.hpp"

namespace qpomdp {

/// Where a query was spent. Belief queries come from (quantum) rejection
/// sampling; reward and observation queries from direct sampling.
enum class Site : std::size_t { reward = 0, observation = 1, belief = 2, other = 3 };

inline constexpr std::size_t kSiteCount = 4;

inline std::string_view site_name(Site s) {
    switch (s) {
        case Site::reward: return "reward";
        case Site::observation: return "observation";
        case Site::belief: return "belief";
        case Site::other: return "other";
    }
    return "other";
}

/// One belief-update invocation: its exact acceptance probability and how
/// many accepted samples it drew.
struct PhiEntry {
    double p = 1.0;
    std::uint64_t accepted = 0;

    friend bool operator==(const PhiEntry&, const PhiEntry&) = default;
};

/// Per-run query accounting.
///
/// A query is one generated sample (classical) or one application of the
/// network encoding operator (quantum). Measured counters hold what the
/// samplers actually spent; expected counters accumulate the analytic cost
/// model and are used by the equal-performance experiment.
class QueryLedger {
   public:
    void add(Site site, std::uint64_t queries) { measured_[index(site)] += queries; }

    void add_expected(Site site, double queries) { expected_[index(site)] += queries; }

    void add_accepted(std::uint64_t samples) { accepted_ += samples; }

    void record_phi(double p, std::uint64_t accepted) {
        if (!(p > 0.0 && p <= 1.0 + 1e-12)) {
            throw Error(ErrorCode::InvalidProbability, "phi entry must lie in (0, 1]");
        }
        phi_.push_back({p > 1.0 ? 1.0 : p, accepted});
    }

    std::uint64_t total_queries() const {
        std::uint64_t t = 0;
        for (auto v : measured_) t += v;
        return t;
    }
    std::uint64_t queries(Site site) const { return measured_[index(site)]; }

    double expected_total() const {
        double t = 0.0;
        for (auto v : expected_) t += v;
        return t;
    }
    double expected(Site site) const { return expected_[index(site)]; }

    std::uint64_t accepted_samples() const { return accepted_; }
    const std::vector<PhiEntry>& phi() const { return phi_; }

    /// Associative and commutative on counters; phi sets concatenate.
    void merge(const QueryLedger& other) {
        for (std::size_t i = 0; i < kSiteCount; ++i) {
            measured_[i] += other.measured_[i];
            expected_[i] += other.expected_[i];
        }
        accepted_ += other.accepted_;
        phi_.insert(phi_.end(), other.phi_.begin(), other.phi_.end());
    }

    friend bool operator==(const QueryLedger&, const QueryLedger&) = default;

   private:
    static constexpr std::size_t index(Site s) { return static_cast<std::size_t>(s); }

    std::array<std::uint64_t, kSiteCount> measured_{};
    std::array<double, kSiteCount> expected_{};
    std::uint64_t accepted_ = 0;
    std::vector<PhiEntry> phi_;
};

}  // namespace qpomdp
