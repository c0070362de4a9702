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

// Experiment harness: agent loop, the P(e) sweep, the equal-cost reward
// experiment, the equal-performance cost experiment and the cost-vs-reward
// scatter, plus CSV output, binning and bootstrap intervals.
//
// Every run draws from substreams keyed by (seed, run, site, step), so the
// output is a function of the configuration alone. Runs are spread over a
// worker pool and merged in run order.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numeric>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "qpomdp/bayes_net.hpp"
#include "qpomdp/complexity.hpp"
#include "qpomdp/envs.hpp"
#include "qpomdp/ledger.hpp"
#include "qpomdp/planner.hpp"
#include "qpomdp/pomdp.hpp"
#include "qpomdp/quantum_sim.hpp"
#include "qpomdp/rng.hpp"

namespace qpomdp {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kCsvSchemaVersion = 1;

// ---------------------------------------------------------------------------
// CSV output

inline std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Writes "# qpomdp-csv v1 kind=<kind>" followed by the header row. Values are
/// written in the column order given here; doubles use 17 significant digits.
class CsvWriter {
   public:
    CsvWriter(std::ostream& os, std::string_view kind, std::vector<std::string> columns)
        : os_(os), columns_(std::move(columns)) {
        os_ << "# qpomdp-csv v" << kCsvSchemaVersion << " kind=" << kind << '\n';
        for (std::size_t i = 0; i < columns_.size(); ++i) os_ << (i ? "," : "") << columns_[i];
        os_ << '\n';
    }

    CsvWriter& operator<<(double v) { return field(csv_number(v)); }
    CsvWriter& operator<<(std::uint64_t v) { return field(std::to_string(v)); }
    CsvWriter& operator<<(int v) { return field(std::to_string(v)); }
    CsvWriter& operator<<(std::string_view v) { return field(std::string(v)); }
    CsvWriter& operator<<(const char* v) { return field(v); }

    /// Ends the current row; throws if the field count does not match.
    void end_row() {
        if (col_ != columns_.size()) throw Error(ErrorCode::InvalidConfig, "csv row has wrong field count");
        os_ << '\n';
        col_ = 0;
    }

   private:
    CsvWriter& field(const std::string& s) {
        if (col_ >= columns_.size()) throw Error(ErrorCode::InvalidConfig, "csv row has too many fields");
        os_ << (col_ ? "," : "") << s;
        ++col_;
        return *this;
    }

    std::ostream& os_;
    std::vector<std::string> columns_;
    std::size_t col_ = 0;
};

// ---------------------------------------------------------------------------
// Statistics

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;  // population standard deviation
};

inline MeanStd mean_std(std::span<const double> xs) {
    MeanStd out;
    if (xs.empty()) return out;
    const double n = static_cast<double>(xs.size());
    out.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.std = std::sqrt(ss / n);
    return out;
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2) throw Error(ErrorCode::InvalidConfig, "need two or more points");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        lx.push_back(std::log(xs[i]));
        ly.push_back(std::log(ys[i]));
    }
    const double mx = mean_std(lx).mean, my = mean_std(ly).mean;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        num += (lx[i] - mx) * (ly[i] - my);
        den += (lx[i] - mx) * (lx[i] - mx);
    }
    return num / den;
}

struct ConfidenceInterval {
    double mean = 0.0;
    double lower = 0.0;
    double upper = 0.0;
};

/// Percentile bootstrap interval for the mean.
inline ConfidenceInterval bootstrap_mean_ci(std::span<const double> xs, double level, std::size_t resamples,
                                            std::uint64_t seed) {
    if (xs.empty()) throw Error(ErrorCode::InvalidConfig, "bootstrap of an empty sample");
    if (!(level > 0.0 && level < 1.0)) throw Error(ErrorCode::InvalidConfig, "level must lie in (0, 1)");
    Rng rng = substream(seed, 0, "bootstrap");
    std::vector<double> means(resamples);
    for (auto& m : means) {
        double s = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) s += xs[rng.below(xs.size())];
        m = s / static_cast<double>(xs.size());
    }
    std::sort(means.begin(), means.end());
    auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(means.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const auto hi = std::min(lo + 1, means.size() - 1);
        return means[lo] + (pos - static_cast<double>(lo)) * (means[hi] - means[lo]);
    };
    const double alpha = (1.0 - level) / 2.0;
    return {mean_std(xs).mean, quantile(alpha), quantile(1.0 - alpha)};
}

struct Bin {
    double x_lo = 0.0, x_hi = 0.0;
    double mean_x = 0.0, mean_y = 0.0;
    double std_x = 0.0, std_y = 0.0;
    std::uint64_t count = 0;
};

/// Splits [lo, hi] into bin_count equal-width bins and averages x and y
/// independently inside each. The last bin is closed; empty bins are omitted.
inline std::vector<Bin> bin_points(std::span<const double> xs, std::span<const double> ys, std::size_t bin_count,
                                   double lo, double hi) {
    if (bin_count < 1) throw Error(ErrorCode::InvalidConfig, "bin count must be at least 1");
    if (xs.size() != ys.size()) throw Error(ErrorCode::DimensionMismatch, "x and y differ in length");
    const double width = (hi - lo) / static_cast<double>(bin_count);
    std::vector<std::vector<double>> bx(bin_count), by(bin_count);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        std::size_t b = 0;
        if (width > 0.0) {
            const double f = std::floor((xs[i] - lo) / width);
            b = f < 0.0 ? 0 : std::min(static_cast<std::size_t>(f), bin_count - 1);
        }
        bx[b].push_back(xs[i]);
        by[b].push_back(ys[i]);
    }
    std::vector<Bin> out;
    for (std::size_t b = 0; b < bin_count; ++b) {
        if (bx[b].empty()) continue;
        const auto mx = mean_std(bx[b]), my = mean_std(by[b]);
        out.push_back({lo + width * static_cast<double>(b), lo + width * static_cast<double>(b + 1), mx.mean, my.mean,
                       mx.std, my.std, bx[b].size()});
    }
    return out;
}

inline std::vector<Bin> bin_points(std::span<const double> xs, std::span<const double> ys, std::size_t bin_count) {
    if (xs.empty()) return {};
    const auto [mn, mx] = std::minmax_element(xs.begin(), xs.end());
    return bin_points(xs, ys, bin_count, *mn, *mx);
}

// ---------------------------------------------------------------------------
// Worker pool

/// Calls fn(i) for i in [0, count) on up to `threads` workers. The first
/// exception thrown by any call is rethrown after all workers stop.
template <class Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, std::max<std::size_t>(count, 1));
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next = count;
            }
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);
}

// ---------------------------------------------------------------------------
// Agent loop

struct ExperimentConfig {
    std::string env = "tiger";
    double gamma = 0.9;
    std::size_t horizon = 2;
    std::size_t steps = 50;
    std::size_t runs = 100;
    std::uint64_t n = 250;
    /// Observation samples per reward node; 0 means "same as n".
    std::uint64_t m = 0;
    std::vector<std::uint64_t> samples{5, 15, 50, 100};
    std::uint64_t seed = 1;
    std::size_t threads = 0;  // 0: hardware concurrency

    std::uint64_t observation_samples() const { return m == 0 ? n : m; }

    void validate() const {
        if (runs < 1) throw Error(ErrorCode::InvalidConfig, "runs must be at least 1");
        if (steps < 1) throw Error(ErrorCode::InvalidConfig, "steps must be at least 1");
        if (horizon < 1) throw Error(ErrorCode::InvalidConfig, "horizon must be at least 1");
        if (n < 1) throw Error(ErrorCode::InvalidConfig, "n must be at least 1");
        if (samples.empty()) throw Error(ErrorCode::InvalidConfig, "no belief sample counts given");
        for (auto l : samples) {
            if (l < 1) throw Error(ErrorCode::InvalidConfig, "belief sample counts must be at least 1");
        }
        if (!(gamma >= 0.0 && gamma < 1.0)) throw Error(ErrorCode::InvalidConfig, "gamma must lie in [0, 1)");
    }
};

/// One algorithm variant as run by the agent.
struct AgentSpec {
    SamplerKind sampler = SamplerKind::classical;
    BeliefSampleRule rule = BeliefSampleRule::fixed;
    QuantumBackend backend = QuantumBackend::analytic;
    std::uint64_t l = 1;
};

struct StepRecord {
    std::size_t step = 0;  // 1-based
    std::size_t action = 0;
    double reward = 0.0;
    double cumulative_reward = 0.0;
    std::uint64_t cumulative_queries = 0;
    double cumulative_expected_queries = 0.0;
    std::size_t phi_count = 0;  // ledger phi entries so far
    std::vector<double> q_values;
};

struct RunRecord {
    std::size_t run_id = 0;
    Episode episode;
    std::vector<StepRecord> steps;
    QueryLedger ledger;
    std::uint64_t belief_resets = 0;
};

inline LookaheadConfig lookahead_for(const ExperimentConfig& cfg, const AgentSpec& agent) {
    LookaheadConfig lc;
    lc.horizon = cfg.horizon;
    lc.budget = {cfg.n, cfg.observation_samples(), agent.l};
    lc.sampler = agent.sampler;
    lc.sample_rule = agent.rule;
    lc.belief_options.backend = agent.backend;
    return lc;
}

/// Plays one episode of cfg.steps steps. The environment draws from the
/// "env" substream of (seed, run, step) only, so agents that choose the same
/// actions see the same outcomes.
inline RunRecord run_agent(const Pomdp& pomdp, const ExperimentConfig& cfg, const AgentSpec& agent,
                           std::size_t run_id) {
    const LookaheadConfig lc = lookahead_for(cfg, agent);
    RunRecord rec;
    rec.run_id = run_id;
    Rng init_rng = substream(cfg.seed, run_id, "env", 0);
    std::size_t state = sample_initial_state(pomdp, init_rng);
    BeliefState belief{pomdp.initial_belief()};
    rec.episode.states.push_back(state);
    double cumulative = 0.0;

    for (std::size_t t = 0; t < cfg.steps; ++t) {
        Rng plan_rng = substream(cfg.seed, run_id, "plan", t);
        const auto before = rec.ledger.total_queries();
        const PlanResult pr = plan(pomdp, belief, lc, plan_rng, rec.ledger);

        Rng env_rng = substream(cfg.seed, run_id, "env", t + 1);
        const StepOutcome out = step(pomdp, state, pr.action, env_rng);
        cumulative += out.reward;
        state = out.next_state;

        Rng update_rng = substream(cfg.seed, run_id, "update", t);
        try {
            const double eta = exact_belief_update(pomdp, belief, pr.action, out.observation).eta;
            const std::uint64_t l = belief_sample_count(agent.l, std::min(eta, 1.0), agent.sampler, agent.rule);
            belief = sampled_belief_update(pomdp, belief, pr.action, out.observation, l, agent.sampler, update_rng,
                                           rec.ledger, lc.belief_options)
                         .belief;
        } catch (const Error& e) {
            // A sampled belief can rule out the observation the world just
            // produced; restart from the prior rather than abort the run.
            if (e.code() != ErrorCode::ImpossibleObservation) throw;
            belief = BeliefState{pomdp.initial_belief()};
            ++rec.belief_resets;
        }

        rec.episode.actions.push_back(pr.action);
        rec.episode.observations.push_back(out.observation);
        rec.episode.rewards.push_back(out.reward);
        rec.episode.states.push_back(state);
        rec.episode.queries.push_back(rec.ledger.total_queries() - before);
        rec.steps.push_back({t + 1, pr.action, out.reward, cumulative, rec.ledger.total_queries(),
                             rec.ledger.expected_total(), rec.ledger.phi().size(), pr.q_values});
    }
    return rec;
}

inline std::vector<RunRecord> run_agents(const Pomdp& pomdp, const ExperimentConfig& cfg, const AgentSpec& agent) {
    std::vector<RunRecord> runs(cfg.runs);
    parallel_for(cfg.runs, cfg.threads, [&](std::size_t r) { runs[r] = run_agent(pomdp, cfg, agent, r); });
    return runs;
}

inline AgentSpec classical_agent(std::uint64_t l) { return {SamplerKind::classical, BeliefSampleRule::fixed, QuantumBackend::analytic, l}; }

/// Quantum agent under the equal-cost rule: per belief update it gets the
/// classical query budget l / P(e) and turns it into floor(budget / cost_q)
/// accepted samples.
inline AgentSpec equal_cost_quantum_agent(std::uint64_t l) {
    return {SamplerKind::quantum, BeliefSampleRule::equal_cost, QuantumBackend::analytic, l};
}

inline AgentSpec fixed_quantum_agent(std::uint64_t l) {
    return {SamplerKind::quantum, BeliefSampleRule::fixed, QuantumBackend::analytic, l};
}

/// Per-run trace rows: one per (run, step).
inline void write_trace(CsvWriter& csv, std::uint64_t samples, std::string_view algo,
                        const std::vector<RunRecord>& runs) {
    for (const auto& run : runs) {
        for (const auto& s : run.steps) {
            std::string q;
            for (std::size_t i = 0; i < s.q_values.size(); ++i) q += (i ? ";" : "") + csv_number(s.q_values[i]);
            csv << samples << algo << static_cast<std::uint64_t>(run.run_id) << static_cast<std::uint64_t>(s.step)
                << static_cast<std::uint64_t>(s.action) << s.reward << s.cumulative_reward << s.cumulative_queries
                << s.cumulative_expected_queries << q;
            csv.end_row();
        }
    }
}

inline std::vector<std::string> trace_columns() {
    return {"samples", "algo",           "run_id", "step", "action", "reward", "cumulative_reward", "cumulative_queries",
            "expected_queries", "q_values"};
}

// ---------------------------------------------------------------------------
// P(e) sweep

struct SweepPoint {
    double p_e = 1.0;
    SamplerKind sampler = SamplerKind::classical;
    double mean_cost = 0.0;
    double std_cost = 0.0;
    double expected_cost = 0.0;
    std::uint64_t samples = 0;
};

/// One binary root X with P(X = 1) = p and evidence X = 1.
inline BayesNet evidence_net(double p) {
    return build_net({{"X", 2, {}}}, {{0, {{1.0 - p, p}}}});
}

/// Measured queries per accepted sample on evidence_net(p) for both samplers:
/// classical rejection and the amplitude-level quantum sampler.
inline std::vector<SweepPoint> sweep_pe(const std::vector<double>& grid, std::uint64_t accepted, std::uint64_t seed,
                                        std::size_t threads = 0) {
    if (accepted < 1) throw Error(ErrorCode::InvalidConfig, "accepted samples must be at least 1");
    for (double p : grid) {
        if (!(p > 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidProbability, "grid point not in (0, 1]");
    }
    std::vector<SweepPoint> out(grid.size() * 2);
    parallel_for(out.size(), threads, [&](std::size_t job) {
        const std::size_t i = job / 2;
        const SamplerKind kind = job % 2 == 0 ? SamplerKind::classical : SamplerKind::quantum;
        const double p = grid[i];
        const BayesNet net = evidence_net(p);
        const Evidence ev{{0, 1}};
        Rng rng = substream(seed, i, kind == SamplerKind::classical ? "sweep-classical" : "sweep-quantum");
        QueryLedger ledger;
        std::vector<double> costs;
        costs.reserve(accepted);
        if (kind == SamplerKind::classical) {
            for (std::uint64_t s = 0; s < accepted; ++s) {
                costs.push_back(static_cast<double>(rejection_sample(net, ev, rng, ledger).queries));
            }
        } else {
            const QuantumRejectionSampler qrs(net, ev, p);
            for (std::uint64_t s = 0; s < accepted; ++s) costs.push_back(static_cast<double>(qrs.sample(rng, ledger).queries));
        }
        const auto ms = mean_std(costs);
        out[job] = {p, kind, ms.mean, ms.std, cost_model(p, kind), accepted};
    });
    return out;
}

inline std::vector<double> dyadic_grid(int lo_exponent, int hi_exponent) {
    std::vector<double> g;
    for (int e = lo_exponent; e <= hi_exponent; ++e) g.push_back(std::ldexp(1.0, -e));
    return g;
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepPoint>& pts) {
    CsvWriter csv(os, "pe-sweep", {"p_e", "algo", "mean_cost", "std_cost", "expected_cost", "samples"});
    for (const auto& p : pts) {
        csv << p.p_e << (p.sampler == SamplerKind::classical ? "classical" : "quantum") << p.mean_cost << p.std_cost
            << p.expected_cost << p.samples;
        csv.end_row();
    }
}

// ---------------------------------------------------------------------------
// Reward experiment (equal cost)

struct SeriesPoint {
    std::size_t step = 0;
    MeanStd value;
};

/// Per-step mean/std across runs of a per-run series.
template <class Get>
std::vector<SeriesPoint> aggregate_steps(std::size_t steps, std::size_t runs, Get&& get) {
    std::vector<SeriesPoint> out;
    std::vector<double> xs(runs);
    for (std::size_t t = 0; t < steps; ++t) {
        for (std::size_t r = 0; r < runs; ++r) xs[r] = get(r, t);
        out.push_back({t + 1, mean_std(xs)});
    }
    return out;
}

struct RewardArm {
    std::uint64_t samples = 0;
    std::vector<RunRecord> classical;
    std::vector<RunRecord> quantum;

    /// Final quantum-minus-classical cumulative reward, per run (paired).
    std::vector<double> final_differences() const {
        std::vector<double> d;
        for (std::size_t r = 0; r < std::min(classical.size(), quantum.size()); ++r) {
            d.push_back(quantum[r].steps.back().cumulative_reward - classical[r].steps.back().cumulative_reward);
        }
        return d;
    }
};

struct RewardExperiment {
    std::vector<RewardArm> arms;

    /// Arm with the largest mean final difference; first one wins ties.
    const RewardArm& best_arm() const {
        std::size_t best = 0;
        double best_mean = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < arms.size(); ++i) {
            const double m = mean_std(arms[i].final_differences()).mean;
            if (m > best_mean) {
                best_mean = m;
                best = i;
            }
        }
        return arms[best];
    }
};

/// Runs the classical agent and the equal-cost quantum agent for every belief
/// sample count in cfg.samples. Either side can be switched off; the
/// difference series needs both.
inline RewardExperiment run_reward_experiment(const Pomdp& pomdp, const ExperimentConfig& cfg,
                                              bool with_classical = true, bool with_quantum = true) {
    cfg.validate();
    RewardExperiment ex;
    for (auto l : cfg.samples) {
        RewardArm arm;
        arm.samples = l;
        if (with_classical) arm.classical = run_agents(pomdp, cfg, classical_agent(l));
        if (with_quantum) arm.quantum = run_agents(pomdp, cfg, equal_cost_quantum_agent(l));
        ex.arms.push_back(std::move(arm));
    }
    return ex;
}

inline void write_reward_csv(std::ostream& os, const RewardExperiment& ex, std::size_t steps) {
    CsvWriter csv(os, "reward",
                  {"samples", "algo", "step", "mean_cumulative_reward", "std_cumulative_reward", "mean_cumulative_queries",
                   "std_cumulative_queries", "runs"});
    for (const auto& arm : ex.arms) {
        const std::size_t runs = std::max(arm.classical.size(), arm.quantum.size());
        auto emit = [&](std::string_view algo, auto&& reward, auto&& queries) {
            const auto rs = aggregate_steps(steps, runs, reward);
            const auto qs = aggregate_steps(steps, runs, queries);
            for (std::size_t t = 0; t < steps; ++t) {
                csv << arm.samples << algo << static_cast<std::uint64_t>(t + 1) << rs[t].value.mean << rs[t].value.std
                    << qs[t].value.mean << qs[t].value.std << static_cast<std::uint64_t>(runs);
                csv.end_row();
            }
        };
        for (const auto* side : {&arm.classical, &arm.quantum}) {
            if (side->empty()) continue;
            const auto& runs_ref = *side;
            emit(side == &arm.classical ? "classical" : "quantum",
                 [&](std::size_t r, std::size_t t) { return runs_ref[r].steps[t].cumulative_reward; },
                 [&](std::size_t r, std::size_t t) {
                     return static_cast<double>(runs_ref[r].steps[t].cumulative_queries);
                 });
        }
        if (arm.classical.empty() || arm.quantum.empty()) continue;
        emit("difference",
             [&](std::size_t r, std::size_t t) {
                 return arm.quantum[r].steps[t].cumulative_reward - arm.classical[r].steps[t].cumulative_reward;
             },
             [&](std::size_t r, std::size_t t) {
                 return static_cast<double>(arm.quantum[r].steps[t].cumulative_queries) -
                        static_cast<double>(arm.classical[r].steps[t].cumulative_queries);
             });
    }
}

struct RunGroup {
    std::uint64_t samples = 0;
    std::string algo;
    const std::vector<RunRecord>* runs = nullptr;
};

/// Per-run totals: final reward, measured queries and complexity factors.
inline void write_run_summary_csv(std::ostream& os, std::string_view kind, const std::vector<RunGroup>& groups) {
    CsvWriter csv(os, kind,
                  {"samples", "algo", "run_id", "cumulative_reward", "total_queries", "expected_queries",
                   "reward_queries", "observation_queries", "belief_queries", "phi_size", "c_l", "q_l", "ratio",
                   "belief_resets"});
    for (const auto& g : groups) {
        for (const auto& run : *g.runs) {
            const auto& L = run.ledger;
            double c = 0.0, q = 0.0, ratio = 1.0;
            if (!L.phi().empty()) {
                const auto rep = summarize(L);
                c = rep.c_l;
                q = rep.q_l;
                ratio = rep.ratio;
            }
            csv << g.samples << g.algo << static_cast<std::uint64_t>(run.run_id)
                << run.steps.back().cumulative_reward << L.total_queries() << L.expected_total()
                << L.queries(Site::reward) << L.queries(Site::observation) << L.queries(Site::belief)
                << static_cast<std::uint64_t>(L.phi().size()) << c << q << ratio << run.belief_resets;
            csv.end_row();
        }
    }
}

// ---------------------------------------------------------------------------
// Cost experiment (equal performance)

struct CostRun {
    std::vector<double> classical;   // cumulative expected queries per step
    std::vector<double> quantum;     // same, quantum cost model
    std::vector<double> difference;  // quantum - classical
};

struct CostArm {
    std::uint64_t samples = 0;
    std::vector<CostRun> runs;
    std::vector<RunRecord> trajectories;
};

struct CostExperiment {
    std::vector<CostArm> arms;
};

/// Expected cumulative queries along one trajectory for both samplers. Both
/// draw the same accepted-sample counts, and their accepted samples share one
/// law, so one trajectory serves both; only the cost per accepted sample
/// differs: 1/p classically, cost_q(p) quantumly. Reward and observation
/// sampling is classical in both and is included once in each total.
inline CostRun expected_costs(const RunRecord& run) {
    CostRun out;
    const auto& phi = run.ledger.phi();
    double shared = 0.0, belief_c = 0.0, belief_q = 0.0, difference = 0.0;
    std::size_t next_phi = 0;
    double prev_expected = 0.0;
    for (const auto& s : run.steps) {
        double step_belief_c = 0.0;
        for (; next_phi < s.phi_count; ++next_phi) {
            const double l = static_cast<double>(phi[next_phi].accepted);
            const double c = l * cost_model(phi[next_phi].p, SamplerKind::classical);
            const double q = l * cost_model(phi[next_phi].p, SamplerKind::quantum);
            step_belief_c += c;
            belief_q += q;
            // Summed term by term so rounding in the two totals cannot make
            // the series step upward.
            difference += q - c;
        }
        belief_c += step_belief_c;
        // The ledger's expected total mixes in the belief term at the run's own
        // sampler cost; strip it to get the shared classical part.
        shared += (s.cumulative_expected_queries - prev_expected) - step_belief_c;
        prev_expected = s.cumulative_expected_queries;
        out.classical.push_back(shared + belief_c);
        out.quantum.push_back(shared + belief_q);
        out.difference.push_back(difference);
    }
    return out;
}

inline CostExperiment run_cost_experiment(const Pomdp& pomdp, const ExperimentConfig& cfg) {
    cfg.validate();
    CostExperiment ex;
    for (auto l : cfg.samples) {
        CostArm arm;
        arm.samples = l;
        arm.trajectories = run_agents(pomdp, cfg, classical_agent(l));
        for (const auto& r : arm.trajectories) arm.runs.push_back(expected_costs(r));
        ex.arms.push_back(std::move(arm));
    }
    return ex;
}

inline void write_cost_csv(std::ostream& os, const CostExperiment& ex, std::size_t steps) {
    CsvWriter csv(os, "cost",
                  {"samples", "step", "mean_classical_queries", "std_classical_queries", "mean_quantum_queries",
                   "std_quantum_queries", "mean_difference", "std_difference", "runs"});
    for (const auto& arm : ex.arms) {
        const std::size_t runs = arm.runs.size();
        const auto c = aggregate_steps(steps, runs, [&](std::size_t r, std::size_t t) { return arm.runs[r].classical[t]; });
        const auto q = aggregate_steps(steps, runs, [&](std::size_t r, std::size_t t) { return arm.runs[r].quantum[t]; });
        const auto d = aggregate_steps(steps, runs, [&](std::size_t r, std::size_t t) { return arm.runs[r].difference[t]; });
        for (std::size_t t = 0; t < steps; ++t) {
            csv << arm.samples << static_cast<std::uint64_t>(t + 1) << c[t].value.mean << c[t].value.std
                << q[t].value.mean << q[t].value.std << d[t].value.mean << d[t].value.std
                << static_cast<std::uint64_t>(runs);
            csv.end_row();
        }
    }
}

// ---------------------------------------------------------------------------
// Cost vs reward

struct ScatterPoint {
    std::uint64_t samples = 0;
    std::string algo;
    std::size_t run_id = 0;
    double queries = 0.0;
    double reward = 0.0;
};

struct BinnedSeries {
    std::uint64_t samples = 0;
    std::string algo;
    std::vector<Bin> bins;
};

struct CostRewardExperiment {
    std::vector<ScatterPoint> points;
    std::vector<BinnedSeries> series;
    std::vector<RunGroup> groups() const;
    std::vector<std::pair<std::uint64_t, std::pair<std::vector<RunRecord>, std::vector<RunRecord>>>> runs;
};

/// For each belief sample count l, both samplers draw l accepted samples per
/// update and each run gives one (measured total queries, final cumulative
/// reward) point. Within one l the bins span the combined query range, so
/// the two algorithms share bin edges.
inline CostRewardExperiment run_cost_vs_reward(const Pomdp& pomdp, const ExperimentConfig& cfg,
                                               std::size_t bin_count) {
    cfg.validate();
    if (bin_count < 1) throw Error(ErrorCode::InvalidConfig, "bin count must be at least 1");
    CostRewardExperiment ex;
    for (auto l : cfg.samples) {
        auto classical = run_agents(pomdp, cfg, classical_agent(l));
        auto quantum = run_agents(pomdp, cfg, fixed_quantum_agent(l));
        const std::size_t first = ex.points.size();
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (const auto* side : {&classical, &quantum}) {
            const std::string algo = side == &classical ? "classical" : "quantum";
            for (const auto& r : *side) {
                const double q = static_cast<double>(r.ledger.total_queries());
                ex.points.push_back({l, algo, r.run_id, q, r.steps.back().cumulative_reward});
                lo = std::min(lo, q);
                hi = std::max(hi, q);
            }
        }
        for (const std::string algo : {"classical", "quantum"}) {
            std::vector<double> xs, ys;
            for (std::size_t i = first; i < ex.points.size(); ++i) {
                if (ex.points[i].algo == algo) {
                    xs.push_back(ex.points[i].queries);
                    ys.push_back(ex.points[i].reward);
                }
            }
            ex.series.push_back({l, algo, bin_points(xs, ys, bin_count, lo, hi)});
        }
        ex.runs.push_back({l, {std::move(classical), std::move(quantum)}});
    }
    return ex;
}

inline std::vector<RunGroup> CostRewardExperiment::groups() const {
    std::vector<RunGroup> g;
    for (const auto& [l, pair] : runs) {
        g.push_back({l, "classical", &pair.first});
        g.push_back({l, "quantum", &pair.second});
    }
    return g;
}

inline void write_cost_reward_points_csv(std::ostream& os, const CostRewardExperiment& ex) {
    CsvWriter csv(os, "cost-vs-reward-points", {"samples", "algo", "run_id", "total_queries", "cumulative_reward"});
    for (const auto& p : ex.points) {
        csv << p.samples << p.algo << static_cast<std::uint64_t>(p.run_id) << p.queries << p.reward;
        csv.end_row();
    }
}

inline void write_cost_reward_bins_csv(std::ostream& os, const CostRewardExperiment& ex) {
    CsvWriter csv(os, "cost-vs-reward-bins",
                  {"samples", "algo", "x_lo", "x_hi", "mean_queries", "mean_reward", "std_queries", "std_reward",
                   "count"});
    for (const auto& s : ex.series) {
        for (const auto& b : s.bins) {
            csv << s.samples << s.algo << b.x_lo << b.x_hi << b.mean_x << b.mean_y << b.std_x << b.std_y << b.count;
            csv.end_row();
        }
    }
}

}  // namespace qpomdp
