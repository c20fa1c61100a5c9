#pragma once

#include "iptamc/imdp.hpp"
#include "iptamc/interval_distribution.hpp"
#include "iptamc/rational.hpp"

#include <array>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace testing_support {

using iptamc::Rational;

inline std::string source_path(const std::string& rel) { return std::string(IPTAMC_SOURCE_DIR) + "/" + rel; }

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string client_server() { return slurp(source_path("models/client_server.ipta")); }

struct CommandResult {
    int exit_code = -1;
    std::string out;
};

/// Runs the CLI with `args`; stderr is discarded unless `merge_stderr`.
inline CommandResult run_cli(const std::string& args, bool merge_stderr = false) {
    std::string cmd = std::string(IPTAMC_CLI) + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
    CommandResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

/// Value of `key=` in key=value output (the `nth` occurrence).
inline std::string field(const std::string& text, const std::string& key, int nth = 0) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (line.rfind(key + "=", 0) == 0 && nth-- == 0) return line.substr(key.size() + 1);
    return {};
}

/// Random valid interval distribution with `k` outcomes and bounds on a 1/`grid` grid.
inline std::vector<std::pair<std::int64_t, std::int64_t>> random_grid_bounds(std::mt19937& rng, std::size_t k,
                                                                            std::int64_t grid) {
    // A random grid point distribution, widened independently on both sides.
    std::vector<std::int64_t> cut;
    std::uniform_int_distribution<std::int64_t> any(0, grid);
    for (std::size_t i = 0; i + 1 < k; ++i) cut.push_back(any(rng));
    cut.push_back(0);
    cut.push_back(grid);
    std::sort(cut.begin(), cut.end());
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    std::uniform_int_distribution<std::int64_t> widen(0, grid / 4);
    for (std::size_t i = 0; i < k; ++i) {
        std::int64_t p = cut[i + 1] - cut[i];
        out.emplace_back(std::max<std::int64_t>(0, p - widen(rng)), std::min<std::int64_t>(grid, p + widen(rng)));
    }
    return out;
}

/// `r` in 1/`grid` units; `r` must lie on the grid.
inline std::int64_t grid_units(const Rational& r, std::int64_t grid) {
    Rational scaled = r * grid;
    return static_cast<std::int64_t>(boost::multiprecision::numerator(scaled));
}

/// Every distribution on the 1/`grid` grid conforming to integer bounds (in grid units).
inline std::vector<std::vector<std::int64_t>>
grid_conforming(const std::vector<std::pair<std::int64_t, std::int64_t>>& bounds, std::int64_t grid) {
    std::vector<std::vector<std::int64_t>> out;
    std::vector<std::int64_t> cur(bounds.size());
    std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t i, std::int64_t left) {
        if (i + 1 == bounds.size()) {
            if (left >= bounds[i].first && left <= bounds[i].second) {
                cur[i] = left;
                out.push_back(cur);
            }
            return;
        }
        for (std::int64_t v = bounds[i].first; v <= std::min(bounds[i].second, left); ++v) {
            cur[i] = v;
            rec(i + 1, left - v);
        }
    };
    rec(0, grid);
    return out;
}

/// Hand-built IMDP: `choices[s]` lists choices, each a list of (target, lower, upper).
struct Branch {
    iptamc::StateId target;
    Rational lower;
    Rational upper;
};

inline iptamc::Imdp make_imdp(const std::vector<std::vector<std::vector<Branch>>>& choices,
                               const std::vector<iptamc::StateId>& initial = {0}) {
    iptamc::Imdp m;
    for (std::size_t s = 0; s < choices.size(); ++s) {
        m.state_location.push_back(static_cast<iptamc::LocationId>(s));
        for (auto branches : choices[s]) {
            std::sort(branches.begin(), branches.end(), [](const Branch& a, const Branch& b) { return a.target < b.target; });
            m.choice_label.push_back("a");
            for (const auto& b : branches) {
                m.transition_target.push_back(b.target);
                m.transition_lower.push_back(b.lower);
                m.transition_upper.push_back(b.upper);
            }
            m.transition_begin.push_back(m.transition_target.size());
        }
        m.choice_begin.push_back(m.choice_label.size());
    }
    m.initial = initial;
    m.labels["init"] = initial;
    return m;
}

/// Random IMDP over `n` states on a 1/50 grid; the last state is the target, the one
/// before it is absorbing.
inline iptamc::Imdp random_imdp(std::mt19937& rng, std::size_t n, bool points) {
    std::vector<std::vector<std::vector<Branch>>> choices(n);
    for (std::size_t s = 0; s + 2 < n; ++s) {
        std::size_t k = 1 + rng() % 3;
        for (std::size_t c = 0; c < k; ++c) {
            std::vector<iptamc::StateId> targets(n);
            std::iota(targets.begin(), targets.end(), iptamc::StateId{0});
            std::shuffle(targets.begin(), targets.end(), rng);
            std::size_t support = 1 + rng() % 3;
            auto bounds = random_grid_bounds(rng, support, 50);
            if (points) {
                auto all = grid_conforming(bounds, 50);
                const auto& mu = all[rng() % all.size()];
                for (std::size_t i = 0; i < support; ++i) bounds[i] = {mu[i], mu[i]};
            }
            std::vector<Branch> branches;
            for (std::size_t i = 0; i < support; ++i)
                branches.push_back({targets[i], Rational(bounds[i].first, 50), Rational(bounds[i].second, 50)});
            choices[s].push_back(branches);
        }
    }
    return make_imdp(choices);
}

inline std::vector<bool> last_state(std::size_t n) {
    std::vector<bool> t(n, false);
    t.back() = true;
    return t;
}

/// Classical MDP value iteration on point distributions (lower bounds taken as probabilities),
/// run until the iterate stops changing in double precision.
inline std::vector<double> classical_reachability(const iptamc::Imdp& m, const std::vector<bool>& target, bool maximize) {
    std::vector<double> x(m.state_count(), 0.0);
    for (std::size_t s = 0; s < x.size(); ++s)
        if (target[s]) x[s] = 1.0;
    for (int it = 0; it < 1000000; ++it) {
        std::vector<double> y = x;
        for (std::size_t s = 0; s < x.size(); ++s) {
            if (target[s] || m.choices_begin(s) == m.choices_end(s)) continue;
            double best = maximize ? 0.0 : 1.0;
            for (std::size_t c = m.choices_begin(s); c < m.choices_end(s); ++c) {
                double v = 0;
                for (std::size_t t = m.transition_begin[c]; t < m.transition_begin[c + 1]; ++t)
                    v += iptamc::to_double(m.transition_lower[t]) * x[m.transition_target[t]];
                best = maximize ? std::max(best, v) : std::min(best, v);
            }
            y[s] = best;
        }
        double diff = 0;
        for (std::size_t s = 0; s < x.size(); ++s) diff = std::max(diff, std::abs(y[s] - x[s]));
        x.swap(y);
        if (diff < 1e-15) break;
    }
    return x;
}

} // namespace testing_support
