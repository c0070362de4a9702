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
#include <vector>

#include "qpomdp/envs.hpp"
#include "qpomdp/pomdp.hpp"

using namespace qpomdp;

namespace {

double total_variation(const std::vector<double>& a, const std::vector<double>& b) {
    double tv = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) tv += std::abs(a[i] - b[i]);
    return 0.5 * tv;
}

const Pomdp& tiger_model() {
    static const Pomdp p = tiger_pomdp();
    return p;
}

}  // namespace

TEST(Slice, ShapeAndRoots) {
    const DdnSlice slice = build_slice(tiger_model(), BeliefState{{0.5, 0.5}}, tiger::kListen);
    EXPECT_EQ(slice.net.size(), 5u);
    std::size_t max_parents = 0;
    for (const auto& v : slice.net.variables()) max_parents = std::max(max_parents, v.parents.size());
    EXPECT_EQ(max_parents, 2u);
    EXPECT_TRUE(slice.net.variable(DdnSlice::kState).parents.empty());
    EXPECT_TRUE(slice.net.variable(DdnSlice::kAction).parents.empty());
    EXPECT_EQ(slice.net.cpt(DdnSlice::kAction).row(0)[tiger::kListen], 1.0);
}

TEST(Slice, RejectsBadInputs) {
    try {
        build_slice(tiger_model(), BeliefState{{0.5, 0.5}}, 3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnknownAction);
    }
    try {
        build_slice(tiger_model(), BeliefState{{0.7, 0.7}}, 0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidBelief);
    }
}

TEST(ExactUpdate, ListenHearLeft) {
    const auto r = exact_belief_update(tiger_model(), BeliefState{{0.5, 0.5}}, tiger::kListen, tiger::kHearLeft);
    EXPECT_NEAR(r.belief[0], 0.85, 1e-15);
    EXPECT_NEAR(r.belief[1], 0.15, 1e-15);
    EXPECT_NEAR(r.eta, 0.5, 1e-15);
}

TEST(ExactUpdate, SecondListenMatchesHandValue) {
    const auto r = exact_belief_update(tiger_model(), BeliefState{{0.85, 0.15}}, tiger::kListen, tiger::kHearLeft);
    const double num = 0.85 * 0.85;
    EXPECT_NEAR(r.belief[0], num / (num + 0.15 * 0.15), 1e-15);
    EXPECT_NEAR(r.eta, num + 0.15 * 0.15, 1e-15);
}

TEST(ExactUpdate, ImpossibleObservation) {
    const Pomdp robot = robot_pomdp();
    // Sensor noise makes every observation possible in the robot world, so
    // build a certain-sensor variant of tiger.
    std::vector<double> T, Z, Rw;
    for (std::size_t s = 0; s < 2; ++s)
        for (std::size_t a = 0; a < 3; ++a)
            for (std::size_t s2 = 0; s2 < 2; ++s2) T.push_back(tiger_model().transition(s, a, s2));
    for (std::size_t s2 = 0; s2 < 2; ++s2)
        for (std::size_t a = 0; a < 3; ++a)
            for (std::size_t o = 0; o < 2; ++o) Z.push_back(o == s2 ? 1.0 : 0.0);
    for (std::size_t s = 0; s < 2; ++s)
        for (std::size_t a = 0; a < 3; ++a)
            for (std::size_t r = 0; r < 4; ++r) Rw.push_back(tiger_model().reward_probability(s, a, r));
    const Pomdp sharp(tiger_model().state_names(), tiger_model().action_names(), tiger_model().observation_names(),
                      tiger_model().reward_values(), T, Z, Rw, 0.9, {0.5, 0.5});
    try {
        exact_belief_update(sharp, BeliefState::point_mass(2, 0), tiger::kListen, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ImpossibleObservation);
    }
    EXPECT_EQ(robot.num_states(), 4u);
}

TEST(SampledUpdate, SingleSampleIsPointMass) {
    for (auto sampler : {SamplerKind::classical, SamplerKind::quantum}) {
        Rng rng(3);
        QueryLedger ledger;
        const auto r = sampled_belief_update(tiger_model(), BeliefState{{0.5, 0.5}}, tiger::kListen,
                                             tiger::kHearLeft, 1, sampler, rng, ledger);
        EXPECT_TRUE(r.belief[0] == 1.0 || r.belief[1] == 1.0);
        EXPECT_EQ(r.belief[0] + r.belief[1], 1.0);
        ASSERT_EQ(ledger.phi().size(), 1u);
        EXPECT_NEAR(ledger.phi()[0].p, 0.5, 1e-15);
    }
}

TEST(SampledUpdate, ConvergesForEverySamplerAndBackend) {
    const BeliefState b{{0.3, 0.7}};
    const auto exact = exact_belief_update(tiger_model(), b, tiger::kListen, tiger::kHearLeft);
    for (auto sampler : {SamplerKind::classical, SamplerKind::quantum}) {
        for (auto backend : {QuantumBackend::amplitude, QuantumBackend::analytic}) {
            Rng rng(11);
            QueryLedger ledger;
            const auto r = sampled_belief_update(tiger_model(), b, tiger::kListen, tiger::kHearLeft, 20000, sampler,
                                                 rng, ledger, {backend});
            EXPECT_LT(total_variation(r.belief.probabilities, exact.belief.probabilities), 0.02);
            EXPECT_EQ(ledger.queries(Site::belief), r.queries);
            EXPECT_EQ(ledger.accepted_samples(), 20000u);
        }
    }
}

TEST(SampledUpdate, MeanQueriesFollowCostModel) {
    // P(hear-right | b, listen) = 0.85 * 0.1 + 0.15 * 0.9 = 0.22 < 1/2, so
    // quantum sampling amplifies.
    const BeliefState b{{0.9, 0.1}};
    const double eta = 0.9 * 0.15 + 0.1 * 0.85;
    constexpr std::uint64_t l = 40000;
    for (auto sampler : {SamplerKind::classical, SamplerKind::quantum}) {
        for (auto backend : {QuantumBackend::amplitude, QuantumBackend::analytic}) {
            Rng rng(5);
            QueryLedger ledger;
            const auto r = sampled_belief_update(tiger_model(), b, tiger::kListen, tiger::kHearRight, l, sampler, rng,
                                                 ledger, {backend});
            EXPECT_NEAR(r.eta, eta, 1e-15);
            const double mean = static_cast<double>(r.queries) / l;
            EXPECT_NEAR(mean, cost_model(eta, sampler), 0.05 * cost_model(eta, sampler));
            EXPECT_NEAR(ledger.expected(Site::belief), l * cost_model(eta, sampler), 1e-6);
        }
    }
}

TEST(SampledUpdate, ZeroSamplesRejected) {
    Rng rng(1);
    QueryLedger ledger;
    try {
        sampled_belief_update(tiger_model(), BeliefState{{0.5, 0.5}}, 0, 0, 0, SamplerKind::classical, rng, ledger);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidConfig);
    }
}

TEST(ObservationProbabilities, ExactAndSampled) {
    const BeliefState b{{0.85, 0.15}};
    const auto exact = exact_observation_probabilities(tiger_model(), b, tiger::kListen);
    EXPECT_NEAR(exact[0], 0.85 * 0.85 + 0.15 * 0.15, 1e-15);
    EXPECT_NEAR(exact[0] + exact[1], 1.0, 1e-15);
    Rng rng(2);
    QueryLedger ledger;
    const auto est = observation_probabilities(tiger_model(), b, tiger::kListen, 50000, rng, ledger);
    EXPECT_NEAR(est[0], exact[0], 0.01);
    EXPECT_EQ(ledger.queries(Site::observation), 50000u);
}

TEST(ObservationProbabilities, EtaConsistency) {
    const BeliefState b{{0.2, 0.8}};
    const auto p = exact_observation_probabilities(tiger_model(), b, tiger::kListen);
    for (std::size_t o = 0; o < 2; ++o) {
        EXPECT_NEAR(exact_belief_update(tiger_model(), b, tiger::kListen, o).eta, p[o], 1e-15);
    }
}

TEST(ExpectedReward, TigerAtUniformBelief) {
    const BeliefState b{{0.5, 0.5}};
    EXPECT_DOUBLE_EQ(exact_expected_reward(tiger_model(), b, tiger::kListen), -1.0);
    EXPECT_DOUBLE_EQ(exact_expected_reward(tiger_model(), b, tiger::kOpenLeft), -2.5);
    EXPECT_DOUBLE_EQ(exact_expected_reward(tiger_model(), b, tiger::kOpenRight), -2.5);
    Rng rng(9);
    QueryLedger ledger;
    EXPECT_NEAR(expected_reward(tiger_model(), b, tiger::kOpenLeft, 40000, rng, ledger), -2.5, 0.15);
    EXPECT_EQ(ledger.queries(Site::reward), 40000u);
    Rng again(9);
    EXPECT_DOUBLE_EQ(expected_reward(tiger_model(), b, tiger::kListen, 10, again), -1.0);
}

TEST(Pomdp, RewardOffsetAndGamma) {
    const Pomdp shifted = tiger_model().with_reward_offset(3.0);
    EXPECT_DOUBLE_EQ(shifted.expected_reward(0, tiger::kListen), 2.0);
    EXPECT_DOUBLE_EQ(tiger_model().with_gamma(0.5).gamma(), 0.5);
    EXPECT_DOUBLE_EQ(tiger_model().max_abs_reward(), 10.0);
}
