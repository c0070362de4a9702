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

// Line-oriented text formats for networks and POMDPs.
//
// Both formats share one lexical layer: '#' starts a comment, tokens are
// separated by whitespace, and the first directive names the format and its
// version. Errors carry the 1-based line and column of the offending token.
//
// Network format, version 1:
//
//   bayesnet 1
//   variable Rain 2
//   variable Sprinkler 2 parents Rain
//   cpt Rain
//     : 0.9 0.1
//   cpt Sprinkler
//     0 : 0.6 0.4          # parent values, in parent order, then the row
//     1 : 0.99 0.01
//
// POMDP format, version 1:
//
//   pomdp 1
//   states s0 s1 ...
//   actions a0 a1 ...
//   observations o0 o1 ...
//   rewards 5 -10 -1        # reward values (the support of P(r | s, a))
//   gamma 0.9
//   initial 0.5 0.5
//   transition <s> <a> : P(s'_0 | s, a) ...
//   observation <s'> <a> : P(o_0 | s', a) ...
//   reward <s> <a> : P(r_0 | s, a) ...
//
// Every (parent assignment) / (state, action) row must appear exactly once.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "qpomdp/bayes_net.hpp"
#include "qpomdp/error.hpp"
#include "qpomdp/pomdp.hpp"

namespace qpomdp {

inline constexpr int kNetFormatVersion = 1;
inline constexpr int kPomdpFormatVersion = 1;

namespace text {

struct Token {
    std::string text;
    std::size_t line = 0;
    std::size_t column = 0;
};

using Line = std::vector<Token>;

inline std::vector<Line> tokenize(std::istream& in) {
    std::vector<Line> lines;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
        Line toks;
        std::size_t i = 0;
        while (i < raw.size()) {
            while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
            if (i >= raw.size()) break;
            const std::size_t start = i;
            if (raw[i] == ':') {
                ++i;
            } else {
                while (i < raw.size() && !std::isspace(static_cast<unsigned char>(raw[i])) && raw[i] != ':') ++i;
            }
            toks.push_back({raw.substr(start, i - start), line_no, start + 1});
        }
        if (!toks.empty()) lines.push_back(std::move(toks));
    }
    return lines;
}

[[noreturn]] inline void fail(const Token& t, const std::string& msg) { throw ParseError(t.line, t.column, msg); }

inline double to_double(const Token& t) {
    double v = 0.0;
    const char* first = t.text.data();
    const char* last = first + t.text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) fail(t, "expected a number, got '" + t.text + "'");
    return v;
}

inline std::size_t to_size(const Token& t) {
    std::size_t v = 0;
    const char* first = t.text.data();
    const char* last = first + t.text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) fail(t, "expected a nonnegative integer, got '" + t.text + "'");
    return v;
}

inline void expect_header(const std::vector<Line>& lines, std::string_view keyword, int version) {
    if (lines.empty()) throw ParseError(1, 1, "empty input, expected '" + std::string(keyword) + "' header");
    const Line& h = lines.front();
    if (h[0].text != keyword) fail(h[0], "expected '" + std::string(keyword) + "' header");
    if (h.size() != 2) fail(h[0], "header takes exactly one version number");
    if (to_size(h[1]) != static_cast<std::size_t>(version)) fail(h[1], "unsupported format version");
}

/// Splits "<keys...> : <values...>" starting at token `from`.
inline std::pair<std::vector<Token>, std::vector<Token>> split_row(const Line& line, std::size_t from) {
    std::vector<Token> keys, values;
    bool seen_colon = false;
    for (std::size_t i = from; i < line.size(); ++i) {
        if (line[i].text == ":") {
            if (seen_colon) fail(line[i], "second ':' on one row");
            seen_colon = true;
        } else if (seen_colon) {
            values.push_back(line[i]);
        } else {
            keys.push_back(line[i]);
        }
    }
    if (!seen_colon) fail(line[from < line.size() ? from : 0], "expected ':' between keys and probabilities");
    return {keys, values};
}

inline std::vector<double> probability_row(const std::vector<Token>& values, std::size_t width, const Token& anchor) {
    if (values.size() != width) {
        fail(values.empty() ? anchor : values.front(),
             "expected " + std::to_string(width) + " probabilities, got " + std::to_string(values.size()));
    }
    std::vector<double> row;
    double sum = 0.0;
    for (const auto& t : values) {
        const double p = to_double(t);
        if (p < 0.0) fail(t, "negative probability");
        row.push_back(p);
        sum += p;
    }
    if (std::abs(sum - 1.0) > kInputNormTolerance) fail(values.front(), "row does not sum to 1");
    return row;
}

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace text

inline BayesNet parse_net(std::istream& in) {
    using namespace text;
    const auto lines = tokenize(in);
    expect_header(lines, "bayesnet", kNetFormatVersion);

    std::vector<RandomVariable> vars;
    std::map<std::string, std::size_t, std::less<>> index;
    std::vector<Token> var_tokens;
    struct PendingCpt {
        Token anchor;
        std::size_t variable;
        std::map<std::size_t, std::vector<double>> rows;
    };
    std::vector<PendingCpt> cpts;
    // Parent names may refer to variables declared further down, so they are
    // resolved once the first cpt (or the end of input) is reached.
    std::vector<std::vector<Token>> parent_tokens;
    bool resolved = false;
    auto resolve_parents = [&] {
        if (resolved) return;
        resolved = true;
        for (std::size_t i = 0; i < vars.size(); ++i) {
            for (const Token& t : parent_tokens[i]) {
                auto it = index.find(t.text);
                if (it == index.end()) fail(t, "unknown parent '" + t.text + "'");
                vars[i].parents.push_back(it->second);
            }
        }
    };

    for (std::size_t li = 1; li < lines.size(); ++li) {
        const Line& line = lines[li];
        const Token& kw = line[0];
        if (kw.text == "variable") {
            if (!cpts.empty()) fail(kw, "variables must be declared before any cpt");
            if (line.size() < 3) fail(kw, "expected 'variable <name> <cardinality> [parents ...]'");
            if (index.count(line[1].text)) fail(line[1], "duplicate variable '" + line[1].text + "'");
            RandomVariable v;
            v.name = line[1].text;
            v.cardinality = to_size(line[2]);
            if (v.cardinality == 0) fail(line[2], "cardinality must be positive");
            std::vector<Token> parents;
            if (line.size() > 3) {
                if (line[3].text != "parents") fail(line[3], "expected 'parents'");
                parents.assign(line.begin() + 4, line.end());
            }
            index.emplace(v.name, vars.size());
            vars.push_back(std::move(v));
            var_tokens.push_back(line[1]);
            parent_tokens.push_back(std::move(parents));
        } else if (kw.text == "cpt") {
            if (line.size() != 2) fail(kw, "expected 'cpt <variable>'");
            resolve_parents();
            auto it = index.find(line[1].text);
            if (it == index.end()) fail(line[1], "unknown variable '" + line[1].text + "'");
            for (const auto& c : cpts) {
                if (c.variable == it->second) fail(line[1], "duplicate cpt for '" + line[1].text + "'");
            }
            cpts.push_back({kw, it->second, {}});
        } else {
            if (cpts.empty()) fail(kw, "unexpected '" + kw.text + "'");
            resolve_parents();
            PendingCpt& cur = cpts.back();
            const RandomVariable& v = vars[cur.variable];
            auto [keys, values] = split_row(line, 0);
            if (keys.size() != v.parents.size()) {
                fail(keys.empty() ? line[0] : keys.front(),
                     "expected " + std::to_string(v.parents.size()) + " parent values");
            }
            std::size_t row = 0;
            for (std::size_t k = 0; k < keys.size(); ++k) {
                const std::size_t val = to_size(keys[k]);
                const std::size_t card = vars[v.parents[k]].cardinality;
                if (val >= card) fail(keys[k], "parent value out of range");
                row = row * card + val;
            }
            if (cur.rows.count(row)) fail(line[0], "duplicate row");
            cur.rows.emplace(row, probability_row(values, v.cardinality, line[0]));
        }
    }

    resolve_parents();
    std::vector<CptSpec> specs;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        const PendingCpt* found = nullptr;
        for (const auto& c : cpts) {
            if (c.variable == i) found = &c;
        }
        if (!found) fail(var_tokens[i], "no cpt for variable '" + vars[i].name + "'");
        std::size_t rows = 1;
        for (std::size_t p : vars[i].parents) rows *= vars[p].cardinality;
        if (found->rows.size() != rows) {
            fail(found->anchor, "cpt for '" + vars[i].name + "' has " + std::to_string(found->rows.size()) +
                                    " rows, expected " + std::to_string(rows));
        }
        CptSpec spec{i, {}};
        for (const auto& [_, r] : found->rows) spec.rows.push_back(r);
        specs.push_back(std::move(spec));
    }
    return build_net(std::move(vars), std::move(specs));
}

inline BayesNet parse_net(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_net(in);
}

inline void write_net(std::ostream& os, const BayesNet& net) {
    os << "bayesnet " << kNetFormatVersion << '\n';
    for (const auto& v : net.variables()) {
        os << "variable " << v.name << ' ' << v.cardinality;
        if (!v.parents.empty()) {
            os << " parents";
            for (std::size_t p : v.parents) os << ' ' << net.variable(p).name;
        }
        os << '\n';
    }
    for (std::size_t i = 0; i < net.size(); ++i) {
        const Cpt& c = net.cpt(i);
        os << "cpt " << net.variable(i).name << '\n';
        const auto& cards = c.parent_cardinalities();
        for (std::size_t row = 0; row < c.row_count(); ++row) {
            std::vector<std::size_t> vals(cards.size());
            std::size_t r = row;
            for (std::size_t k = cards.size(); k-- > 0;) {
                vals[k] = r % cards[k];
                r /= cards[k];
            }
            os << " ";
            for (std::size_t v : vals) os << ' ' << v;
            os << " :";
            for (double p : c.row(row)) os << ' ' << text::format_double(p);
            os << '\n';
        }
    }
}

inline Pomdp parse_pomdp(std::istream& in) {
    using namespace text;
    const auto lines = tokenize(in);
    expect_header(lines, "pomdp", kPomdpFormatVersion);

    std::vector<std::string> states, actions, observations;
    std::vector<double> rewards, initial;
    std::optional<double> gamma;
    const Token& header = lines.front()[0];

    auto names = [](const Line& line) {
        if (line.size() < 2) fail(line[0], "expected at least one name");
        std::vector<std::string> out;
        for (std::size_t k = 1; k < line.size(); ++k) {
            for (const auto& s : out) {
                if (s == line[k].text) fail(line[k], "duplicate name '" + line[k].text + "'");
            }
            out.push_back(line[k].text);
        }
        return out;
    };
    auto lookup = [](const std::vector<std::string>& set, const Token& t, const char* what) {
        for (std::size_t i = 0; i < set.size(); ++i) {
            if (set[i] == t.text) return i;
        }
        fail(t, std::string("unknown ") + what + " '" + t.text + "'");
    };

    struct Table {
        std::map<std::pair<std::size_t, std::size_t>, std::vector<double>> rows;
    };
    Table trans, sensor, reward;

    for (std::size_t li = 1; li < lines.size(); ++li) {
        const Line& line = lines[li];
        const Token& kw = line[0];
        const bool sets_done = !states.empty() && !actions.empty() && !observations.empty() && !rewards.empty();
        if (kw.text == "states") {
            if (!states.empty()) fail(kw, "states declared twice");
            states = names(line);
        } else if (kw.text == "actions") {
            if (!actions.empty()) fail(kw, "actions declared twice");
            actions = names(line);
        } else if (kw.text == "observations") {
            if (!observations.empty()) fail(kw, "observations declared twice");
            observations = names(line);
        } else if (kw.text == "rewards") {
            if (!rewards.empty()) fail(kw, "rewards declared twice");
            if (line.size() < 2) fail(kw, "expected at least one reward value");
            for (std::size_t k = 1; k < line.size(); ++k) rewards.push_back(to_double(line[k]));
        } else if (kw.text == "gamma") {
            if (line.size() != 2) fail(kw, "expected 'gamma <value>'");
            gamma = to_double(line[1]);
            if (!(*gamma >= 0.0 && *gamma < 1.0)) fail(line[1], "gamma must lie in [0, 1)");
        } else if (kw.text == "initial") {
            if (states.empty()) fail(kw, "declare states before the initial belief");
            std::vector<Token> vals(line.begin() + 1, line.end());
            initial = probability_row(vals, states.size(), kw);
        } else if (kw.text == "transition" || kw.text == "observation" || kw.text == "reward") {
            if (!sets_done) fail(kw, "declare states, actions, observations and rewards before tables");
            auto [keys, values] = split_row(line, 1);
            if (keys.size() != 2) fail(kw, "expected '<state> <action> : probabilities'");
            const std::size_t s = lookup(states, keys[0], "state");
            const std::size_t a = lookup(actions, keys[1], "action");
            Table& t = kw.text == "transition" ? trans : kw.text == "observation" ? sensor : reward;
            const std::size_t width = kw.text == "transition"    ? states.size()
                                      : kw.text == "observation" ? observations.size()
                                                                 : rewards.size();
            if (t.rows.count({s, a})) fail(kw, "duplicate " + kw.text + " row");
            t.rows.emplace(std::make_pair(s, a), probability_row(values, width, kw));
        } else {
            fail(kw, "unknown directive '" + kw.text + "'");
        }
    }

    if (states.empty() || actions.empty() || observations.empty() || rewards.empty()) {
        fail(header, "missing states, actions, observations or rewards");
    }
    if (!gamma) fail(header, "missing gamma");
    if (initial.empty()) fail(header, "missing initial belief");

    auto flatten = [&](const Table& t, const char* what, std::size_t width) {
        std::vector<double> flat;
        flat.reserve(states.size() * actions.size() * width);
        for (std::size_t s = 0; s < states.size(); ++s) {
            for (std::size_t a = 0; a < actions.size(); ++a) {
                auto it = t.rows.find({s, a});
                if (it == t.rows.end()) {
                    fail(header, std::string("missing ") + what + " row for (" + states[s] + ", " + actions[a] + ")");
                }
                flat.insert(flat.end(), it->second.begin(), it->second.end());
            }
        }
        return flat;
    };
    auto T = flatten(trans, "transition", states.size());
    auto Z = flatten(sensor, "observation", observations.size());
    auto R = flatten(reward, "reward", rewards.size());
    return Pomdp(std::move(states), std::move(actions), std::move(observations), std::move(rewards), std::move(T),
                 std::move(Z), std::move(R), *gamma, std::move(initial));
}

inline Pomdp parse_pomdp(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_pomdp(in);
}

inline Pomdp load_pomdp_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
    return parse_pomdp(in);
}

inline BayesNet load_net_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
    return parse_net(in);
}

inline void write_pomdp(std::ostream& os, const Pomdp& p) {
    using text::format_double;
    os << "pomdp " << kPomdpFormatVersion << '\n';
    auto list = [&](const char* kw, const std::vector<std::string>& names) {
        os << kw;
        for (const auto& n : names) os << ' ' << n;
        os << '\n';
    };
    list("states", p.state_names());
    list("actions", p.action_names());
    list("observations", p.observation_names());
    os << "rewards";
    for (double r : p.reward_values()) os << ' ' << format_double(r);
    os << "\ngamma " << format_double(p.gamma()) << "\ninitial";
    for (double b : p.initial_belief()) os << ' ' << format_double(b);
    os << '\n';
    auto row = [&](const char* kw, std::size_t s, std::size_t a, std::span<const double> probs) {
        os << kw << ' ' << p.state_names()[s] << ' ' << p.action_names()[a] << " :";
        for (double x : probs) os << ' ' << format_double(x);
        os << '\n';
    };
    for (std::size_t s = 0; s < p.num_states(); ++s)
        for (std::size_t a = 0; a < p.num_actions(); ++a) row("transition", s, a, p.transition_row(s, a));
    for (std::size_t s = 0; s < p.num_states(); ++s)
        for (std::size_t a = 0; a < p.num_actions(); ++a) row("observation", s, a, p.sensor_row(s, a));
    for (std::size_t s = 0; s < p.num_states(); ++s)
        for (std::size_t a = 0; a < p.num_actions(); ++a) row("reward", s, a, p.reward_row(s, a));
}

}  // namespace qpomdp
