#pragma once

#include "iptamc/imdp.hpp"
#include "iptamc/inner_extreme.hpp"
#include "iptamc/lang/ast.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace iptamc {

enum class Criterion { Absolute, Relative };

struct SolveSettings {
    double epsilon = 1e-6;
    std::size_t max_iterations = 100000;
    Criterion criterion = Criterion::Absolute;
};

struct SolveResult {
    /// Optimum over the initial states (min for Direction::Min, max for Direction::Max).
    double value = 0;
    std::vector<double> values;
    std::size_t iterations = 0;
    bool converged = false;
};

/// States with no path into `target` through support edges, staying inside `constrain`
/// (when given) before reaching the target.
std::vector<bool> unreachable_set(const Imdp& m, const std::vector<bool>& target,
                                  const std::vector<bool>* constrain = nullptr);

/// Interval value iteration (Jacobi sweeps from 0). States outside `constrain` and
/// `target` are absorbing with value 0.
SolveResult value_iteration(const Imdp& m, const std::vector<bool>& target, Direction dir,
                            const std::vector<bool>* constrain = nullptr, const SolveSettings& settings = {});

struct CheckResult {
    lang::QueryMode mode = lang::QueryMode::Max;
    /// The requested optimum, or for thresholds the bound the verdict rests on.
    double value = 0;
    Direction direction = Direction::Max;
    std::optional<bool> verdict;
    SolveResult result;
};

/// Evaluates `q` using the `target` and (for until) `left` labels of `m`.
/// Thresholds `>=`/`>` compare the minimum, `<=`/`<` the maximum; values within
/// `settings.epsilon` of the threshold count as equal.
CheckResult check(const Imdp& m, const lang::Query& q, const SolveSettings& settings = {});

/// Membership vector of a label (empty label -> all false). Throws Error(UnknownLabel).
std::vector<bool> label_set(const Imdp& m, const std::string& label);

} // namespace iptamc
