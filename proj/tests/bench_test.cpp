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
#include <vector>

#include "qpomdp/bench.hpp"
#include "qpomdp/envs.hpp"

using namespace qpomdp;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.steps = 4;
    cfg.runs = 3;
    cfg.n = 20;
    cfg.samples = {5, 15};
    cfg.threads = 1;
    return cfg;
}

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

}  // namespace

TEST(Csv, HeaderAndNumbers) {
    std::ostringstream os;
    CsvWriter csv(os, "demo", {"a", "b", "c"});
    csv << 0.1 << std::uint64_t{7} << "x";
    csv.end_row();
    const auto lines = lines_of(os.str());
    ASSERT_EQ(lines.size(), 3u);
    EXPECT_EQ(lines[0], "# qpomdp-csv v1 kind=demo");
    EXPECT_EQ(lines[1], "a,b,c");
    EXPECT_EQ(lines[2], "0.10000000000000001,7,x");
    EXPECT_EQ(std::stod(csv_number(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Csv, FieldCountChecked) {
    std::ostringstream os;
    CsvWriter csv(os, "demo", {"a", "b"});
    csv << 1.0;
    EXPECT_THROW(csv.end_row(), Error);
    csv << 2.0;
    EXPECT_THROW(csv << 3.0, Error);
}

TEST(Stats, MeanStdAndSlope) {
    const std::vector<double> xs{1, 2, 3, 4};
    const auto ms = mean_std(xs);
    EXPECT_DOUBLE_EQ(ms.mean, 2.5);
    EXPECT_DOUBLE_EQ(ms.std, std::sqrt(1.25));
    const std::vector<double> x{1, 2, 4, 8}, y{8, 4, 2, 1};
    EXPECT_NEAR(loglog_slope(x, y), -1.0, 1e-12);
}

TEST(Stats, BootstrapContainsMeanAndIsSeeded) {
    std::vector<double> xs;
    Rng rng(1);
    for (int i = 0; i < 200; ++i) xs.push_back(rng.uniform());
    const auto a = bootstrap_mean_ci(xs, 0.9, 2000, 5);
    const auto b = bootstrap_mean_ci(xs, 0.9, 2000, 5);
    EXPECT_LT(a.lower, a.mean);
    EXPECT_GT(a.upper, a.mean);
    EXPECT_EQ(a.lower, b.lower);
    EXPECT_EQ(a.upper, b.upper);
    // Normal-theory width for 200 uniforms: 2 * 1.645 * sqrt(1/12/200).
    EXPECT_NEAR(a.upper - a.lower, 2 * 1.645 * std::sqrt(1.0 / 12.0 / 200.0), 0.01);
}

TEST(Binning, EqualWidthAndClosedLastBin) {
    const std::vector<double> xs{0, 1, 2, 9, 10}, ys{1, 2, 3, 4, 5};
    const auto bins = bin_points(xs, ys, 5);
    ASSERT_EQ(bins.size(), 3u);  // [0,2) [2,4) [8,10]
    EXPECT_EQ(bins[0].count, 2u);
    EXPECT_DOUBLE_EQ(bins[0].mean_y, 1.5);
    EXPECT_EQ(bins[1].count, 1u);
    EXPECT_EQ(bins[2].count, 2u);
    EXPECT_DOUBLE_EQ(bins[2].x_hi, 10.0);
}

TEST(Binning, SinglePointAndZeroWidth) {
    const std::vector<double> one{5}, y1{2};
    const auto bins = bin_points(one, y1, 4);
    ASSERT_EQ(bins.size(), 1u);
    EXPECT_EQ(bins[0].count, 1u);
    EXPECT_DOUBLE_EQ(bins[0].std_y, 0.0);
    const std::vector<double> same{3, 3, 3}, y3{1, 2, 3};
    const auto b3 = bin_points(same, y3, 10);
    ASSERT_EQ(b3.size(), 1u);
    EXPECT_DOUBLE_EQ(b3[0].mean_y, 2.0);
    EXPECT_TRUE(bin_points(std::vector<double>{}, std::vector<double>{}, 3).empty());
}

TEST(ParallelFor, CoversEveryIndexAndRethrows) {
    std::vector<int> hit(100, 0);
    parallel_for(hit.size(), 4, [&](std::size_t i) { ++hit[i]; });
    for (int h : hit) EXPECT_EQ(h, 1);
    EXPECT_THROW(parallel_for(10, 3, [](std::size_t i) {
                     if (i == 7) throw Error(ErrorCode::InvalidConfig, "boom");
                 }),
                 Error);
}

TEST(Config, Validation) {
    ExperimentConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    EXPECT_EQ(cfg.observation_samples(), cfg.n);
    cfg.samples = {};
    EXPECT_THROW(cfg.validate(), Error);
    cfg = ExperimentConfig{};
    cfg.gamma = 1.0;
    EXPECT_THROW(cfg.validate(), Error);
}

TEST(Agent, RunRecordShapeAndLedgerAgreement) {
    const auto cfg = small_config();
    const Pomdp p = tiger_pomdp();
    const RunRecord r = run_agent(p, cfg, equal_cost_quantum_agent(5), 0);
    EXPECT_EQ(r.steps.size(), cfg.steps);
    EXPECT_TRUE(r.episode.consistent());
    std::uint64_t sum = 0;
    for (auto q : r.episode.queries) sum += q;
    EXPECT_EQ(sum, r.ledger.total_queries());
    EXPECT_EQ(r.steps.back().cumulative_queries, r.ledger.total_queries());
    EXPECT_EQ(r.ledger.queries(Site::reward) + r.ledger.queries(Site::observation) + r.ledger.queries(Site::belief),
              r.ledger.total_queries());
}

TEST(Agent, SameActionsSeeSameWorld) {
    // Agents with the same first action see the same first outcome.
    const auto cfg = small_config();
    const Pomdp p = tiger_pomdp();
    const auto a = run_agent(p, cfg, classical_agent(5), 2);
    const auto b = run_agent(p, cfg, classical_agent(50), 2);
    EXPECT_EQ(a.episode.states[0], b.episode.states[0]);
    if (a.episode.actions[0] == b.episode.actions[0]) {
        EXPECT_EQ(a.episode.observations[0], b.episode.observations[0]);
        EXPECT_EQ(a.episode.rewards[0], b.episode.rewards[0]);
    }
}

TEST(Sweep, ExpectedCostsAndDeterminism) {
    const auto grid = dyadic_grid(1, 4);
    const auto pts = sweep_pe(grid, 200, 3, 2);
    ASSERT_EQ(pts.size(), 8u);
    for (const auto& pt : pts) EXPECT_DOUBLE_EQ(pt.expected_cost, cost_model(pt.p_e, pt.sampler));
    std::ostringstream a, b;
    write_sweep_csv(a, pts);
    write_sweep_csv(b, sweep_pe(grid, 200, 3, 1));
    EXPECT_EQ(a.str(), b.str());
}

TEST(RewardExperiment, CsvIsDeterministicAcrossThreadCounts) {
    auto cfg = small_config();
    const Pomdp p = tiger_pomdp();
    std::ostringstream a, b;
    write_reward_csv(a, run_reward_experiment(p, cfg), cfg.steps);
    cfg.threads = 3;
    write_reward_csv(b, run_reward_experiment(p, cfg), cfg.steps);
    EXPECT_EQ(a.str(), b.str());
    // header comment, column row, and (classical, quantum, difference) x steps x arms
    EXPECT_EQ(lines_of(a.str()).size(), 2 + 3 * cfg.steps * cfg.samples.size());
}

TEST(CostExperiment, DifferenceIsNonpositiveAndMonotone) {
    auto cfg = small_config();
    cfg.steps = 6;
    const auto ex = run_cost_experiment(tiger_pomdp(), cfg);
    for (const auto& arm : ex.arms) {
        for (const auto& run : arm.runs) {
            double last = 0.0;
            for (std::size_t t = 0; t < run.difference.size(); ++t) {
                EXPECT_LE(run.difference[t], 0.0);
                EXPECT_LE(run.difference[t], last);
                EXPECT_NEAR(run.quantum[t] - run.classical[t], run.difference[t], 1e-6);
                last = run.difference[t];
            }
        }
    }
}

TEST(CostExperiment, ClassicalTotalMatchesLedgerExpectation) {
    auto cfg = small_config();
    const auto ex = run_cost_experiment(tiger_pomdp(), cfg);
    for (const auto& arm : ex.arms) {
        for (std::size_t r = 0; r < arm.runs.size(); ++r) {
            EXPECT_NEAR(arm.runs[r].classical.back(), arm.trajectories[r].ledger.expected_total(), 1e-6);
        }
    }
}

TEST(CostVsReward, OnePointPerRunAndSharedEdges) {
    auto cfg = small_config();
    const auto ex = run_cost_vs_reward(tiger_pomdp(), cfg, 4);
    EXPECT_EQ(ex.points.size(), 2 * cfg.runs * cfg.samples.size());
    ASSERT_EQ(ex.series.size(), 2 * cfg.samples.size());
    std::uint64_t count = 0;
    for (const auto& s : ex.series)
        for (const auto& b : s.bins) count += b.count;
    EXPECT_EQ(count, ex.points.size());
    EXPECT_EQ(ex.groups().size(), 2 * cfg.samples.size());
}
