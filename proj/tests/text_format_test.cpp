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

#include <sstream>
#include <string>

#include "oracles/fixtures.hpp"
#include "qpomdp/envs.hpp"
#include "qpomdp/text_format.hpp"

using namespace qpomdp;

namespace {

ParseError net_error(const std::string& text) {
    try {
        parse_net(text);
    } catch (const ParseError& e) {
        return e;
    }
    ADD_FAILURE() << "no parse error for:\n" << text;
    return ParseError(0, 0, "");
}

ParseError pomdp_error(const std::string& text) {
    try {
        parse_pomdp(text);
    } catch (const ParseError& e) {
        return e;
    }
    ADD_FAILURE() << "no parse error for:\n" << text;
    return ParseError(0, 0, "");
}

}  // namespace

TEST(NetFormat, RoundTrip) {
    for (const BayesNet& net : {fixtures::sprinkler(), fixtures::mixed(), fixtures::constant()}) {
        std::ostringstream os;
        write_net(os, net);
        const BayesNet back = parse_net(os.str());
        ASSERT_EQ(back.size(), net.size());
        for (std::size_t i = 0; i < net.size(); ++i) {
            EXPECT_EQ(back.variable(i).name, net.variable(i).name);
            EXPECT_EQ(back.variable(i).parents, net.variable(i).parents);
            for (std::size_t r = 0; r < net.cpt(i).row_count(); ++r) {
                const auto a = net.cpt(i).row(r);
                const auto b = back.cpt(i).row(r);
                for (std::size_t k = 0; k < a.size(); ++k) EXPECT_DOUBLE_EQ(a[k], b[k]);
            }
        }
    }
}

TEST(NetFormat, HandWritten) {
    const BayesNet net = parse_net(
        "bayesnet 1\n"
        "# rain and a wet lawn\n"
        "variable Rain 2\n"
        "variable Wet 2 parents Rain\n"
        "cpt Rain\n"
        ": 0.8 0.2\n"
        "cpt Wet\n"
        "1 : 0.1 0.9\n"
        "0 : 0.9 0.1   # rows may come in any order\n");
    EXPECT_EQ(net.size(), 2u);
    EXPECT_DOUBLE_EQ(net.cpt(1).row(1)[1], 0.9);
}

TEST(NetFormat, PositionalErrors) {
    auto e = net_error("bayesnet 1\nvariable A 2\ncpt A\n: 0.5 0.6\n");
    EXPECT_EQ(e.line(), 4u);
    e = net_error("bayesnet 1\nvariable A 2\ncpt A\n: 0.5\n");
    EXPECT_EQ(e.line(), 4u);
    e = net_error("bayesnet 1\nvariable A 2\ncpt A\n: 0.5 x\n");
    EXPECT_EQ(e.line(), 4u);
    EXPECT_EQ(e.column(), 7u);
    e = net_error("bayesnet 1\nvariable B 2 parents A\n");
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 22u);
    e = net_error("bayesnet 1\nvariable A 2\n");
    EXPECT_EQ(e.line(), 2u);
    e = net_error("bayesnet 2\n");
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.column(), 10u);
    e = net_error("");
    EXPECT_EQ(e.line(), 1u);
    e = net_error("bayesnet 1\nvariable A 2\nvariable A 3\n");
    EXPECT_EQ(e.line(), 3u);
    e = net_error("bayesnet 1\nvariable A 2\nvariable B 2 parents A\ncpt A\n: 0.5 0.5\ncpt B\n0 : 1 0\n");
    EXPECT_EQ(e.line(), 6u);
    EXPECT_NE(std::string(e.what()).find("line 6"), std::string::npos);
    EXPECT_EQ(e.message().rfind("line 6, column 1: ", 0), 0u);
}

TEST(PomdpFormat, RoundTripBuiltins) {
    for (const Pomdp& p : {tiger_pomdp(), robot_pomdp(), robot_pomdp(0.5, {3, 2})}) {
        std::ostringstream os;
        write_pomdp(os, p);
        const Pomdp back = parse_pomdp(os.str());
        EXPECT_EQ(back.state_names(), p.state_names());
        EXPECT_EQ(back.action_names(), p.action_names());
        EXPECT_EQ(back.observation_names(), p.observation_names());
        EXPECT_EQ(back.reward_values(), p.reward_values());
        EXPECT_EQ(back.gamma(), p.gamma());
        EXPECT_EQ(back.initial_belief(), p.initial_belief());
        for (std::size_t s = 0; s < p.num_states(); ++s) {
            for (std::size_t a = 0; a < p.num_actions(); ++a) {
                for (std::size_t s2 = 0; s2 < p.num_states(); ++s2) EXPECT_EQ(back.transition(s, a, s2), p.transition(s, a, s2));
                for (std::size_t o = 0; o < p.num_observations(); ++o) EXPECT_EQ(back.sensor(s, a, o), p.sensor(s, a, o));
                for (std::size_t r = 0; r < p.num_rewards(); ++r)
                    EXPECT_EQ(back.reward_probability(s, a, r), p.reward_probability(s, a, r));
            }
        }
    }
}

TEST(PomdpFormat, ShippedModelsMatchBuiltins) {
    const Pomdp tiger = load_pomdp_file(std::string(QPOMDP_MODELS_DIR) + "/tiger.pomdp");
    EXPECT_EQ(tiger.reward_values(), tiger_pomdp().reward_values());
    EXPECT_DOUBLE_EQ(tiger.sensor(0, 0, 0), 0.85);
    const Pomdp robot = load_pomdp_file(std::string(QPOMDP_MODELS_DIR) + "/robot.pomdp");
    EXPECT_DOUBLE_EQ(robot.expected_reward(1, robot::kLeverB), 7.0);
}

TEST(PomdpFormat, MissingFile) {
    try {
        load_pomdp_file("/nonexistent/file.pomdp");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::IoError);
    }
}

TEST(PomdpFormat, PositionalErrors) {
    const std::string head =
        "pomdp 1\nstates a b\nactions x\nobservations o\nrewards 0 1\ngamma 0.9\ninitial 1 0\n";
    auto e = pomdp_error(head + "transition a y : 1 0\n");
    EXPECT_EQ(e.line(), 8u);
    EXPECT_EQ(e.column(), 14u);
    e = pomdp_error(head + "transition a x : 1 0 0\n");
    EXPECT_EQ(e.line(), 8u);
    e = pomdp_error(head + "transition a x : 1 0\n");  // remaining rows missing
    EXPECT_EQ(e.line(), 1u);
    e = pomdp_error("pomdp 1\nstates a\ngamma 1.5\n");
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.column(), 7u);
    e = pomdp_error("pomdp 1\nfrobnicate\n");
    EXPECT_EQ(e.line(), 2u);
    e = pomdp_error("pomdp 1\nstates a a\n");
    EXPECT_EQ(e.column(), 10u);
}
