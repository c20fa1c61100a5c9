#include "iptamc/solve.hpp"

#include "iptamc/error.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace iptamc {

std::vector<bool> label_set(const Imdp& m, const std::string& label) {
    auto it = m.labels.find(label);
    if (it == m.labels.end()) throw Error(ErrorKind::UnknownLabel, "state label '" + label + "' is not defined");
    std::vector<bool> out(m.state_count(), false);
    for (auto s : it->second) out[s] = true;
    return out;
}

std::vector<bool> unreachable_set(const Imdp& m, const std::vector<bool>& target, const std::vector<bool>* constrain) {
    const std::size_t n = m.state_count();
    if (target.size() != n) throw Error(ErrorKind::InvalidTarget, "target set does not match the state count");
    std::vector<std::size_t> pred_begin(n + 1, 0);
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t c = m.choices_begin(s); c < m.choices_end(s); ++c)
            for (std::size_t t = m.transition_begin[c]; t < m.transition_begin[c + 1]; ++t)
                if (m.transition_upper[t].sign() > 0) ++pred_begin[m.transition_target[t] + 1];
    for (std::size_t s = 0; s < n; ++s) pred_begin[s + 1] += pred_begin[s];
    std::vector<StateId> pred(pred_begin[n]);
    std::vector<std::size_t> fill(pred_begin.begin(), pred_begin.end() - 1);
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t c = m.choices_begin(s); c < m.choices_end(s); ++c)
            for (std::size_t t = m.transition_begin[c]; t < m.transition_begin[c + 1]; ++t)
                if (m.transition_upper[t].sign() > 0) pred[fill[m.transition_target[t]]++] = static_cast<StateId>(s);

    std::vector<bool> reaches(n, false);
    std::deque<StateId> queue;
    for (std::size_t s = 0; s < n; ++s)
        if (target[s]) {
            reaches[s] = true;
            queue.push_back(static_cast<StateId>(s));
        }
    while (!queue.empty()) {
        StateId s = queue.front();
        queue.pop_front();
        for (std::size_t i = pred_begin[s]; i < pred_begin[s + 1]; ++i) {
            StateId p = pred[i];
            if (reaches[p] || (constrain && !(*constrain)[p])) continue;
            reaches[p] = true;
            queue.push_back(p);
        }
    }
    std::vector<bool> out(n);
    for (std::size_t s = 0; s < n; ++s) out[s] = !reaches[s];
    return out;
}

SolveResult value_iteration(const Imdp& m, const std::vector<bool>& target, Direction dir,
                            const std::vector<bool>* constrain, const SolveSettings& settings) {
    if (!(settings.epsilon > 0)) throw Error(ErrorKind::InvalidArgument, "epsilon must be positive");
    if (settings.max_iterations < 1) throw Error(ErrorKind::InvalidArgument, "max iterations must be at least 1");
    const std::size_t n = m.state_count();
    const auto never = unreachable_set(m, target, constrain);

    std::vector<double> lower(m.transition_count()), upper(m.transition_count());
    for (std::size_t t = 0; t < m.transition_count(); ++t) {
        lower[t] = to_double(m.transition_lower[t]);
        upper[t] = to_double(m.transition_upper[t]);
    }
    std::vector<bool> point(m.choice_count(), true);
    for (std::size_t c = 0; c < m.choice_count(); ++c)
        for (std::size_t t = m.transition_begin[c]; t < m.transition_begin[c + 1]; ++t)
            if (lower[t] != upper[t]) point[c] = false;
    const bool all_point = std::find(point.begin(), point.end(), false) == point.end();

    enum : char { kFixedZero, kFixedOne, kFree };
    std::vector<char> status(n, kFree);
    std::vector<double> x(n, 0.0);
    for (std::size_t s = 0; s < n; ++s) {
        if (target[s]) {
            status[s] = kFixedOne;
            x[s] = 1.0;
        } else if (never[s] || (constrain && !(*constrain)[s]) || m.choices_begin(s) == m.choices_end(s)) {
            status[s] = kFixedZero;
        }
    }

    SolveResult result;
    std::vector<double> next = x;
    std::vector<double> vals;
    std::vector<std::size_t> order;
    while (result.iterations < settings.max_iterations) {
        ++result.iterations;
        double delta = 0;
        for (std::size_t s = 0; s < n; ++s) {
            if (status[s] != kFree) continue;
            double best = dir == Direction::Max ? -1.0 : 2.0;
            for (std::size_t c = m.choices_begin(s); c < m.choices_end(s); ++c) {
                const std::size_t b = m.transition_begin[c], e = m.transition_begin[c + 1];
                double v = 0;
                if (all_point || point[c]) {
                    for (std::size_t t = b; t < e; ++t) v += lower[t] * x[m.transition_target[t]];
                } else if (e - b == 2) {
                    // Two outcomes: the preferred one takes as much as the other's lower bound allows.
                    double va = x[m.transition_target[b]], vb = x[m.transition_target[b + 1]];
                    bool a_first = dir == Direction::Max ? va >= vb : va <= vb;
                    std::size_t f = a_first ? b : b + 1, o = a_first ? b + 1 : b;
                    double pf = std::max(lower[f], std::min(upper[f], 1.0 - lower[o]));
                    v = pf * x[m.transition_target[f]] + (1.0 - pf) * x[m.transition_target[o]];
                } else {
                    const std::size_t k = e - b;
                    vals.resize(k);
                    for (std::size_t i = 0; i < k; ++i) vals[i] = x[m.transition_target[b + i]];
                    order.resize(k);
                    for (std::size_t i = 0; i < k; ++i) order[i] = i;
                    // Transitions are sorted by target id, so index order is the id tie-break.
                    if (dir == Direction::Max)
                        std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return vals[i] > vals[j]; });
                    else
                        std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return vals[i] < vals[j]; });
                    double lower_rest = 0, assigned = 0;
                    for (std::size_t i = 0; i < k; ++i) lower_rest += lower[b + i];
                    for (auto i : order) {
                        lower_rest -= lower[b + i];
                        double mu = std::max(lower[b + i], std::min(upper[b + i], 1.0 - assigned - lower_rest));
                        assigned += mu;
                        v += mu * vals[i];
                    }
                }
                best = dir == Direction::Max ? std::max(best, v) : std::min(best, v);
            }
            best = std::clamp(best, 0.0, 1.0);
            double diff = std::abs(best - x[s]);
            if (settings.criterion == Criterion::Relative && best > 0) diff /= best;
            delta = std::max(delta, diff);
            next[s] = best;
        }
        x.swap(next);
        for (std::size_t s = 0; s < n; ++s)
            if (status[s] != kFree) next[s] = x[s];
        if (delta < settings.epsilon) {
            result.converged = true;
            break;
        }
    }
    result.values = std::move(x);
    if (!m.initial.empty()) {
        result.value = result.values[m.initial.front()];
        for (auto s : m.initial)
            result.value = dir == Direction::Max ? std::max(result.value, result.values[s]) : std::min(result.value, result.values[s]);
    }
    return result;
}

CheckResult check(const Imdp& m, const lang::Query& q, const SolveSettings& settings) {
    CheckResult out;
    out.mode = q.mode;
    auto target = label_set(m, "target");
    std::optional<std::vector<bool>> left;
    if (q.left) left = label_set(m, "left");
    switch (q.mode) {
    case lang::QueryMode::Min: out.direction = Direction::Min; break;
    case lang::QueryMode::Max: out.direction = Direction::Max; break;
    case lang::QueryMode::Threshold:
        out.direction = (q.threshold_relation == Relation::Ge || q.threshold_relation == Relation::Gt) ? Direction::Min
                                                                                                      : Direction::Max;
        break;
    }
    out.result = value_iteration(m, target, out.direction, left ? &*left : nullptr, settings);
    out.value = out.result.value;
    if (q.mode == lang::QueryMode::Threshold) {
        const double k = to_double(q.threshold), eps = settings.epsilon, p = out.value;
        switch (q.threshold_relation) {
        case Relation::Ge: out.verdict = p >= k - eps; break;
        case Relation::Gt: out.verdict = p > k + eps; break;
        case Relation::Le: out.verdict = p <= k + eps; break;
        case Relation::Lt: out.verdict = p < k - eps; break;
        }
    }
    return out;
}

} // namespace iptamc
