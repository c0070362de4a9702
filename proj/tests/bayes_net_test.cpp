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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "oracles/fixtures.hpp"
#include "oracles/joint_oracle.hpp"
#include "qpomdp/bayes_net.hpp"

using namespace qpomdp;
using fixtures::kRain;
using fixtures::kSprinkler;
using fixtures::kWet;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::IoError;
}

}  // namespace

TEST(BuildNet, SprinklerHasThreeVariablesAndTwoMaxParents) {
    const BayesNet net = fixtures::sprinkler();
    EXPECT_EQ(net.size(), 3u);
    EXPECT_EQ(net.max_parents(), 2u);
    const auto& order = net.topo_order();
    ASSERT_EQ(order.size(), 3u);
    EXPECT_EQ(order[0], kRain);
    EXPECT_EQ(order[2], kWet);
}

TEST(BuildNet, ConstantNetIsValid) {
    const BayesNet net = fixtures::constant();
    EXPECT_EQ(net.size(), 1u);
    EXPECT_EQ(net.max_parents(), 0u);
    EXPECT_EQ(exact_joint(net), std::vector<double>{1.0});
}

TEST(BuildNet, TopologicalOrderRespectsParentsListedLater) {
    const BayesNet net = fixtures::mixed();
    std::vector<std::size_t> pos(net.size());
    for (std::size_t i = 0; i < net.topo_order().size(); ++i) pos[net.topo_order()[i]] = i;
    for (std::size_t v = 0; v < net.size(); ++v) {
        for (std::size_t p : net.variable(v).parents) EXPECT_LT(pos[p], pos[v]);
    }
}

TEST(BuildNet, RejectsTwoCycle) {
    EXPECT_EQ(code_of([] {
                  build_net({{"A", 2, {1}}, {"B", 2, {0}}},
                            {{0, {{0.5, 0.5}, {0.5, 0.5}}}, {1, {{0.5, 0.5}, {0.5, 0.5}}}});
              }),
              ErrorCode::CyclicGraph);
}

TEST(BuildNet, RejectsWrongRowCount) {
    EXPECT_EQ(code_of([] { build_net({{"A", 2, {}}, {"B", 2, {0}}}, {{0, {{0.5, 0.5}}}, {1, {{0.5, 0.5}}}}); }),
              ErrorCode::CptShapeMismatch);
}

TEST(BuildNet, RejectsWrongRowWidth) {
    EXPECT_EQ(code_of([] { build_net({{"A", 3, {}}}, {{0, {{0.5, 0.5}}}}); }), ErrorCode::CptShapeMismatch);
}

TEST(BuildNet, RejectsRowsOffByMoreThanTolerance) {
    EXPECT_EQ(code_of([] { build_net({{"A", 2, {}}}, {{0, {{0.5, 0.5 + 1e-6}}}}); }), ErrorCode::CptNotNormalized);
    EXPECT_EQ(code_of([] { build_net({{"A", 2, {}}}, {{0, {{1.5, -0.5}}}}); }), ErrorCode::CptNotNormalized);
}

TEST(BuildNet, RenormalizesRowsWithinTolerance) {
    const BayesNet net = build_net({{"A", 2, {}}}, {{0, {{0.3, 0.7 + 5e-10}}}});
    const auto row = net.cpt(0).row(0);
    EXPECT_NEAR(row[0] + row[1], 1.0, 1e-15);
}

TEST(BuildNet, RejectsBadParents) {
    EXPECT_EQ(code_of([] { build_net({{"A", 2, {0}}}, {{0, {{0.5, 0.5}, {0.5, 0.5}}}}); }), ErrorCode::CyclicGraph);
    EXPECT_EQ(code_of([] { build_net({{"A", 2, {3}}}, {{0, {{0.5, 0.5}}}}); }), ErrorCode::InvalidVariable);
}

TEST(ExactJoint, SprinklerAllTrueEntry) {
    const BayesNet net = fixtures::sprinkler();
    const auto joint = exact_joint(net);
    EXPECT_NEAR(joint[net.joint_index(Assignment{1, 1, 1})], 9.9e-4, 1e-15);
}

TEST(ExactJoint, MatchesIndependentOracleAndSumsToOne) {
    for (const auto& net : {fixtures::sprinkler(), fixtures::mixed(), fixtures::constant()}) {
        const auto joint = exact_joint(net);
        const auto ref = oracle::joint(net);
        ASSERT_EQ(joint.size(), ref.size());
        for (std::size_t i = 0; i < joint.size(); ++i) EXPECT_NEAR(joint[i], ref[i], 1e-15);
        EXPECT_NEAR(std::accumulate(joint.begin(), joint.end(), 0.0), 1.0, 1e-12);
    }
}

TEST(ExactJoint, RespectsLimit) {
    EXPECT_EQ(code_of([] { exact_joint(fixtures::mixed(), 10); }), ErrorCode::JointTooLarge);
}

TEST(ExactConditional, SprinklerGivenRainReadsCptRow) {
    const BayesNet net = fixtures::sprinkler();
    const std::size_t q[] = {kSprinkler};
    const auto post = exact_conditional(net, q, Evidence{{kRain, 1}});
    EXPECT_NEAR(post.probabilities[1], 0.01, 1e-15);
    EXPECT_NEAR(post.evidence_probability, 0.1, 1e-15);
}

TEST(ExactConditional, EmptyEvidenceGivesMarginal) {
    const BayesNet net = fixtures::sprinkler();
    const std::size_t q[] = {kRain};
    const auto post = exact_conditional(net, q, Evidence{});
    EXPECT_NEAR(post.probabilities[1], 0.1, 1e-15);
    EXPECT_DOUBLE_EQ(post.evidence_probability, 1.0);
}

TEST(ExactConditional, RainGivenWetMatchesHandSummation) {
    const BayesNet net = fixtures::sprinkler();
    const std::size_t q[] = {kRain};
    const auto post = exact_conditional(net, q, Evidence{{kWet, 1}});
    // Hand sum: P(R=1, W=1) = 0.1 (0.99 * 0.99 + 0.01 * 0.99) = 0.099
    //           P(R=0, W=1) = 0.9 (0.6 * 0.4 + 0.4 * 0.9)    = 0.54
    const double r1 = 0.1 * (0.99 * 0.99 + 0.01 * 0.99);
    const double r0 = 0.9 * (0.6 * 0.4 + 0.4 * 0.9);
    EXPECT_NEAR(post.probabilities[1], r1 / (r0 + r1), 1e-14);
    EXPECT_NEAR(post.evidence_probability, r0 + r1, 1e-14);
    const auto ref = oracle::conditional(net, kRain, {{kWet, 1}});
    EXPECT_NEAR(post.probabilities[1], ref[1], 1e-14);
}

TEST(ExactConditional, MultipleQueryVariablesFirstIsMostSignificant) {
    const BayesNet net = fixtures::mixed();
    const std::size_t q[] = {0, 3};
    const auto post = exact_conditional(net, q, Evidence{{1, 1}});
    const auto joint = oracle::joint(net);
    double mass = 0.0;
    std::vector<double> ref(12, 0.0);
    for (std::size_t idx = 0; idx < joint.size(); ++idx) {
        const auto x = net.decode(idx);
        if (x[1] != 1) continue;
        ref[x[0] * 4 + x[3]] += joint[idx];
        mass += joint[idx];
    }
    for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(post.probabilities[i], ref[i] / mass, 1e-14);
}

TEST(ExactConditional, ZeroEvidenceThrows) {
    const BayesNet net = build_net({{"A", 2, {}}}, {{0, {{1.0, 0.0}}}});
    const std::size_t q[] = {0};
    EXPECT_EQ(code_of([&] { exact_conditional(net, q, Evidence{{0, 1}}); }), ErrorCode::ZeroEvidenceProbability);
}

TEST(Evidence, RejectsDuplicateVariable) {
    EXPECT_EQ(code_of([] { Evidence e{{0, 1}, {0, 0}}; }), ErrorCode::InvalidAssignment);
}

TEST(Evidence, OutOfRangeValueRejectedByNet) {
    const BayesNet net = fixtures::sprinkler();
    EXPECT_EQ(code_of([&] { evidence_probability(net, Evidence{{kRain, 2}}); }), ErrorCode::InvalidAssignment);
}

TEST(DirectSample, ConstantAndCertainRoot) {
    Rng rng(3);
    const BayesNet c = fixtures::constant();
    const BayesNet certain = build_net({{"X", 2, {}}}, {{0, {{0.0, 1.0}}}});
    for (int i = 0; i < 100; ++i) {
        EXPECT_EQ(direct_sample(c, rng), Assignment{0});
        EXPECT_EQ(direct_sample(certain, rng), Assignment{1});
    }
}

TEST(DirectSample, ChargesOneQuery) {
    Rng rng(5);
    QueryLedger ledger;
    direct_sample(fixtures::sprinkler(), rng, ledger, Site::reward);
    EXPECT_EQ(ledger.total_queries(), 1u);
    EXPECT_EQ(ledger.queries(Site::reward), 1u);
}

TEST(DirectSample, SprinklerRainFrequency) {
    Rng rng(11);
    const BayesNet net = fixtures::sprinkler();
    int rain = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) rain += static_cast<int>(direct_sample(net, rng)[kRain]);
    EXPECT_NEAR(static_cast<double>(rain) / n, 0.1, 0.01);
}

TEST(RejectionSample, CertainEvidenceAcceptsFirstAttempt) {
    Rng rng(2);
    QueryLedger ledger;
    const BayesNet net = build_net({{"X", 2, {}}, {"Y", 2, {0}}}, {{0, {{0.0, 1.0}}}, {1, {{0.5, 0.5}, {0.3, 0.7}}}});
    const auto s = rejection_sample(net, Evidence{{0, 1}}, rng, ledger);
    EXPECT_EQ(s.queries, 1u);
    EXPECT_EQ(ledger.total_queries(), 1u);
    EXPECT_EQ(ledger.accepted_samples(), 1u);
}

TEST(RejectionSample, MeanAttemptsIsInverseEvidenceProbability) {
    Rng rng(17);
    QueryLedger ledger;
    const BayesNet net = fixtures::sprinkler();
    const int n = 10000;
    for (int i = 0; i < n; ++i) rejection_sample(net, Evidence{{kRain, 1}}, rng, ledger);
    const double mean = static_cast<double>(ledger.total_queries()) / n;
    EXPECT_NEAR(mean, 10.0, 0.5);
}

TEST(RejectionSample, AcceptedLawMatchesExactConditional) {
    Rng rng(23);
    QueryLedger ledger;
    const BayesNet net = fixtures::sprinkler();
    const Evidence ev{{kWet, 1}};
    const std::size_t q[] = {kRain, kSprinkler};
    const auto exact = exact_conditional(net, q, ev);
    std::vector<double> freq(4, 0.0);
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        const auto s = rejection_sample(net, ev, rng, ledger);
        freq[s.assignment[kRain] * 2 + s.assignment[kSprinkler]] += 1.0 / n;
    }
    double tv = 0.0;
    for (std::size_t i = 0; i < 4; ++i) tv += 0.5 * std::abs(freq[i] - exact.probabilities[i]);
    EXPECT_LT(tv, 0.02);
}

TEST(RejectionSample, BudgetExceeded) {
    Rng rng(1);
    QueryLedger ledger;
    const BayesNet net = build_net({{"X", 2, {}}}, {{0, {{1.0, 0.0}}}});
    EXPECT_EQ(code_of([&] { rejection_sample(net, Evidence{{0, 1}}, rng, ledger, Site::other, 50); }),
              ErrorCode::RejectionBudgetExceeded);
    EXPECT_EQ(ledger.total_queries(), 50u);
}

TEST(RejectionSample, SameSeedSameSequenceAndLedger) {
    const BayesNet net = fixtures::mixed();
    auto run = [&] {
        Rng rng(99);
        QueryLedger ledger;
        std::vector<Assignment> out;
        for (int i = 0; i < 200; ++i) out.push_back(rejection_sample(net, Evidence{{3, 2}}, rng, ledger).assignment);
        return std::make_pair(out, ledger);
    };
    EXPECT_EQ(run(), run());
}

TEST(JointIndex, DecodeRoundTrip) {
    const BayesNet net = fixtures::mixed();
    for (std::size_t idx = 0; idx < net.joint_size(); ++idx) EXPECT_EQ(net.joint_index(net.decode(idx)), idx);
}
