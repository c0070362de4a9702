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

// Command-line front end for the benchmark harness.
//
//   qpomdp sweep-pe        cost per accepted sample against P(e)
//   qpomdp reward          equal-cost cumulative reward, quantum vs classical
//   qpomdp cost            equal-performance expected query difference
//   qpomdp cost-vs-reward  per-run (queries, reward) points and bins
//   qpomdp pac             sample-complexity and confidence calculators
//   qpomdp validate        amplitude-level belief-update equivalence check
//   qpomdp dump-model      print a model in the POMDP text format
//
// Every experiment writes <out>/<name>.csv and <out>/<name>.meta.json.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qpomdp/qpomdp.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace qpomdp;

namespace {

struct Common {
    std::string env = "tiger";
    std::string algo = "both";
    std::string out = "out";
    std::optional<double> gamma;
    ExperimentConfig cfg;
};

Pomdp resolve_env(const std::string& env, std::optional<double> gamma) {
    const double g = gamma.value_or(0.9);
    if (env == "tiger") return tiger_pomdp(g);
    if (env == "robot") return robot_pomdp(g);
    if (env.rfind("file:", 0) == 0) {
        Pomdp p = load_pomdp_file(env.substr(5));
        return gamma ? p.with_gamma(*gamma) : p;
    }
    throw Error(ErrorCode::InvalidConfig, "unknown env '" + env + "' (expected tiger, robot or file:<path>)");
}

json config_json(const Common& c, const Pomdp& pomdp) {
    const auto& cfg = c.cfg;
    return {{"env", c.env},
            {"algo", c.algo},
            {"gamma", pomdp.gamma()},
            {"horizon", cfg.horizon},
            {"steps", cfg.steps},
            {"runs", cfg.runs},
            {"n", cfg.n},
            {"m", cfg.observation_samples()},
            {"samples", cfg.samples},
            {"seed", cfg.seed},
            {"sizes",
             {{"states", pomdp.num_states()},
              {"actions", pomdp.num_actions()},
              {"observations", pomdp.num_observations()},
              {"rewards", pomdp.num_rewards()}}}};
}

void write_file(const fs::path& path, const std::string& body) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
    f << body;
}

void write_meta(const fs::path& dir, const std::string& name, json meta) {
    meta["version"] = kVersion;
    meta["csv_schema"] = kCsvSchemaVersion;
    meta["experiment"] = name;
    write_file(dir / (name + ".meta.json"), meta.dump(2) + "\n");
}

fs::path prepare_out(const std::string& out) {
    fs::path dir(out);
    fs::create_directories(dir);
    return dir;
}

void add_experiment_flags(CLI::App* sub, Common& c) {
    sub->add_option("--env", c.env, "tiger, robot or file:<path>");
    sub->add_option("--algo", c.algo, "classical, quantum or both")
        ->check(CLI::IsMember({"classical", "quantum", "both"}));
    sub->add_option("--horizon", c.cfg.horizon, "lookahead horizon H")->check(CLI::PositiveNumber);
    sub->add_option("--steps", c.cfg.steps, "time steps T per run")->check(CLI::PositiveNumber);
    sub->add_option("--runs", c.cfg.runs, "independent runs R")->check(CLI::PositiveNumber);
    sub->add_option("--samples", c.cfg.samples, "belief sample counts l (list)");
    sub->add_option("--reward-samples", c.cfg.n, "reward samples n per reward node")->check(CLI::PositiveNumber);
    sub->add_option("--observation-samples", c.cfg.m, "observation samples m per reward node (default n)");
    sub->add_option("--gamma", c.gamma, "discount factor");
    sub->add_option("--seed", c.cfg.seed, "master seed");
    sub->add_option("--threads", c.cfg.threads, "worker threads (0: all cores)");
    sub->add_option("--out", c.out, "output directory");
}

int cmd_sweep(const Common& c, std::uint64_t accepted, int lo_exp, int hi_exp) {
    const auto grid = dyadic_grid(lo_exp, hi_exp);
    const auto pts = sweep_pe(grid, accepted, c.cfg.seed, c.cfg.threads);
    const auto dir = prepare_out(c.out);
    std::ostringstream csv;
    write_sweep_csv(csv, pts);
    write_file(dir / "pe_sweep.csv", csv.str());

    json meta{{"seed", c.cfg.seed}, {"accepted_per_point", accepted}, {"grid", grid}};
    for (auto kind : {SamplerKind::classical, SamplerKind::quantum}) {
        std::vector<double> xs, ys;
        for (const auto& p : pts) {
            if (p.sampler == kind) {
                xs.push_back(p.p_e);
                ys.push_back(p.mean_cost);
            }
        }
        const double slope = loglog_slope(xs, ys);
        const char* name = kind == SamplerKind::classical ? "classical" : "quantum";
        meta["loglog_slope"][name] = slope;
        std::printf("%-9s log-log slope %.4f\n", name, slope);
    }
    write_meta(dir, "pe_sweep", meta);
    return 0;
}

int cmd_reward(const Common& c) {
    const Pomdp pomdp = resolve_env(c.env, c.gamma);
    const bool with_c = c.algo != "quantum", with_q = c.algo != "classical";
    const auto ex = run_reward_experiment(pomdp, c.cfg, with_c, with_q);
    const auto dir = prepare_out(c.out);

    std::ostringstream csv, runs, trace;
    write_reward_csv(csv, ex, c.cfg.steps);
    std::vector<RunGroup> groups;
    for (const auto& arm : ex.arms) {
        if (with_c) groups.push_back({arm.samples, "classical", &arm.classical});
        if (with_q) groups.push_back({arm.samples, "quantum", &arm.quantum});
    }
    write_run_summary_csv(runs, "reward-runs", groups);
    {
        CsvWriter tw(trace, "reward-trace", trace_columns());
        for (const auto& g : groups) write_trace(tw, g.samples, g.algo, *g.runs);
    }
    write_file(dir / "reward.csv", csv.str());
    write_file(dir / "reward_runs.csv", runs.str());
    write_file(dir / "reward_trace.csv", trace.str());

    json meta = config_json(c, pomdp);
    meta["protocol"] =
        "equal cost: quantum belief updates get the classical budget l/P(e) queries and draw "
        "floor((l/P(e))/cost_q(P(e))) accepted samples; classical draws l";
    if (with_c && with_q) {
        for (const auto& arm : ex.arms) {
            const auto d = arm.final_differences();
            const auto ci = bootstrap_mean_ci(d, 0.90, 10000, c.cfg.seed);
            meta["final_difference"][std::to_string(arm.samples)] = {
                {"mean", ci.mean}, {"ci90_lower", ci.lower}, {"ci90_upper", ci.upper}};
            std::printf("l=%-4llu mean final reward difference %+.4f  90%% CI [%+.4f, %+.4f]\n",
                        static_cast<unsigned long long>(arm.samples), ci.mean, ci.lower, ci.upper);
        }
        meta["best_samples"] = ex.best_arm().samples;
    }
    write_meta(dir, "reward", meta);
    return 0;
}

int cmd_cost(const Common& c) {
    const Pomdp pomdp = resolve_env(c.env, c.gamma);
    const auto ex = run_cost_experiment(pomdp, c.cfg);
    const auto dir = prepare_out(c.out);
    std::ostringstream csv, runs;
    write_cost_csv(csv, ex, c.cfg.steps);
    std::vector<RunGroup> groups;
    for (const auto& arm : ex.arms) groups.push_back({arm.samples, "classical", &arm.trajectories});
    write_run_summary_csv(runs, "cost-runs", groups);
    write_file(dir / "cost.csv", csv.str());
    write_file(dir / "cost_runs.csv", runs.str());
    json meta = config_json(c, pomdp);
    meta["protocol"] =
        "equal performance: both samplers draw l accepted samples per update; costs are expected "
        "queries (1/P(e) classical, cost_q(P(e)) quantum) along one shared trajectory";
    for (const auto& arm : ex.arms) {
        std::vector<double> last;
        for (const auto& r : arm.runs) last.push_back(r.difference.back());
        std::printf("l=%-4llu mean final expected query difference %.2f\n",
                    static_cast<unsigned long long>(arm.samples), mean_std(last).mean);
    }
    write_meta(dir, "cost", meta);
    return 0;
}

int cmd_cost_vs_reward(const Common& c, std::size_t bins) {
    const Pomdp pomdp = resolve_env(c.env, c.gamma);
    const auto ex = run_cost_vs_reward(pomdp, c.cfg, bins);
    const auto dir = prepare_out(c.out);
    std::ostringstream pts, bin_csv, runs;
    write_cost_reward_points_csv(pts, ex);
    write_cost_reward_bins_csv(bin_csv, ex);
    write_run_summary_csv(runs, "cost-vs-reward-runs", ex.groups());
    write_file(dir / "cost_vs_reward_points.csv", pts.str());
    write_file(dir / "cost_vs_reward_bins.csv", bin_csv.str());
    write_file(dir / "cost_vs_reward_runs.csv", runs.str());
    json meta = config_json(c, pomdp);
    meta["bins"] = bins;
    write_meta(dir, "cost_vs_reward", meta);
    std::printf("%zu points, %zu binned series\n", ex.points.size(), ex.series.size());
    return 0;
}

int cmd_validate(const Common& c, std::size_t k_max, std::size_t random_beliefs) {
    const Pomdp pomdp = resolve_env(c.env, c.gamma);
    // Text round trip: the written model must parse back to the same tables.
    std::ostringstream text;
    write_pomdp(text, pomdp);
    const bool round_trip = parse_pomdp(text.str()) == pomdp;
    const auto rep = check_belief_equivalence(pomdp, belief_grid(pomdp, random_beliefs, c.cfg.seed), k_max);
    const bool ok = round_trip && rep.max_posterior_error <= 1e-10 && rep.max_mass_error <= 1e-10;
    std::printf("text round trip:           %s\n", round_trip ? "ok" : "MISMATCH");
    std::printf("cases checked:             %zu (skipped %zu)\n", rep.cases, rep.skipped);
    std::printf("max posterior error:       %.3e\n", rep.max_posterior_error);
    std::printf("max evidence-mass error:   %.3e\n", rep.max_mass_error);
    std::printf("%s\n", ok ? "PASS" : "FAIL");
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum and classical rejection sampling for POMDP lookahead planning"};
    app.require_subcommand(1);
    Common c;

    auto* sweep = app.add_subcommand("sweep-pe", "cost per accepted sample against P(e)");
    std::uint64_t accepted = 1000;
    int lo_exp = 1, hi_exp = 10;
    sweep->add_option("--accepted", accepted, "accepted samples per grid point")->check(CLI::PositiveNumber);
    sweep->add_option("--min-exponent", lo_exp, "largest P(e) is 2^-min");
    sweep->add_option("--max-exponent", hi_exp, "smallest P(e) is 2^-max");
    sweep->add_option("--seed", c.cfg.seed, "master seed");
    sweep->add_option("--threads", c.cfg.threads, "worker threads (0: all cores)");
    sweep->add_option("--out", c.out, "output directory");

    auto* reward = app.add_subcommand("reward", "equal-cost reward experiment");
    add_experiment_flags(reward, c);
    auto* cost = app.add_subcommand("cost", "equal-performance cost experiment");
    add_experiment_flags(cost, c);
    auto* cvr = app.add_subcommand("cost-vs-reward", "per-run cost and reward with binning");
    add_experiment_flags(cvr, c);
    std::size_t bins = 10;
    cvr->add_option("--bins", bins, "number of equal-width bins")->check(CLI::PositiveNumber);

    auto* pac = app.add_subcommand("pac", "sample-complexity calculators");
    PacParams pp;
    std::optional<double> r_max;
    std::uint64_t budget_n = 100;
    pac->add_option("--env", c.env, "model whose set sizes are used");
    pac->add_option("--gamma", c.gamma, "discount factor");
    pac->add_option("--horizon", pp.horizon, "lookahead horizon H")->check(CLI::PositiveNumber);
    pac->add_option("--epsilon", pp.epsilon, "target value error");
    pac->add_option("--delta", pp.delta, "failure probability");
    pac->add_option("--stopping-time", pp.stopping_time, "stopping time T");
    pac->add_option("--r-max", r_max, "reward bound (default: largest |reward| of the model)");
    pac->add_option("--n", budget_n, "reward samples for the derived budget");

    auto* validate = app.add_subcommand("validate", "amplitude-level belief-update equivalence check");
    std::size_t k_max = 3, random_beliefs = 8;
    validate->add_option("--env", c.env, "tiger, robot or file:<path>");
    validate->add_option("--gamma", c.gamma, "discount factor");
    validate->add_option("--k-max", k_max, "largest Grover iteration count checked");
    validate->add_option("--random-beliefs", random_beliefs, "random beliefs added to the grid");
    validate->add_option("--seed", c.cfg.seed, "seed for the random beliefs");

    auto* dump = app.add_subcommand("dump-model", "print a model in the POMDP text format");
    dump->add_option("--env", c.env, "tiger, robot or file:<path>");
    dump->add_option("--gamma", c.gamma, "discount factor");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c.gamma) c.cfg.gamma = *c.gamma;
        if (*sweep) return cmd_sweep(c, accepted, lo_exp, hi_exp);
        if (*reward) return cmd_reward(c);
        if (*cost) return cmd_cost(c);
        if (*cvr) return cmd_cost_vs_reward(c, bins);
        if (*validate) return cmd_validate(c, k_max, random_beliefs);
        if (*dump) {
            write_pomdp(std::cout, resolve_env(c.env, c.gamma));
            return 0;
        }
        if (*pac) {
            const Pomdp pomdp = resolve_env(c.env, c.gamma);
            pp.gamma = pomdp.gamma();
            pp.r_max = r_max.value_or(pomdp.max_abs_reward());
            pp.sizes = PomdpSizes::of(pomdp);
            std::printf("minimum horizon H_min:     %zu\n", minimum_horizon(pp.epsilon, pp.gamma, pp.r_max));
            const auto budget = derive_budget(budget_n, pp.sizes, pp.gamma, pp.horizon);
            std::printf("derived budget (n=%llu):   m=%llu l=%llu  (m/n=%.6g, l/n=%.6g)\n",
                        static_cast<unsigned long long>(budget_n),
                        static_cast<unsigned long long>(budget.budget.m),
                        static_cast<unsigned long long>(budget.budget.l), budget.m_over_n, budget.l_over_n);
            try {
                const auto b = pac_bounds(pp);
                std::printf("sigma_max:                 %.17g\n", b.sigma_max);
                std::printf("n_min:                     %.17g\n", b.n_min);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::UnattainableEpsilon) throw;
                std::printf("pac bounds:                unattainable at this epsilon and horizon (%s)\n", e.what());
            }
            return 0;
        }
    } catch (const ParseError& e) {
        std::fprintf(stderr, "parse error, %s\n", e.message().c_str());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "error [%s]: %s\n", std::string(error_code_name(e.code())).c_str(), e.message().c_str());
        return 2;
    }
    return 0;
}
