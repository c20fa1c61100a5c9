#include "iptamc/explore.hpp"

#include "iptamc/error.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace iptamc {

std::vector<std::int64_t> ceilings(const Ipta& m, const lang::BoundQuery* q) {
    std::vector<std::int64_t> k(m.clocks.size(), 0);
    auto visit = [&](const ClockConstraint& cc) {
        for (const auto& a : cc.atoms()) {
            k[a.clock] = std::max(k[a.clock], a.bound);
            if (a.other) k[*a.other] = std::max(k[*a.other], a.bound);
        }
    };
    for (const auto& inv : m.invariants) visit(inv);
    for (const auto& e : m.edges) visit(e.guard);
    if (q) {
        for (const auto& ds : q->target.disjuncts)
            for (const auto& cc : ds) visit(cc);
        if (q->left)
            for (const auto& ds : q->left->disjuncts)
                for (const auto& cc : ds) visit(cc);
    }
    return k;
}

namespace {

constexpr std::int64_t kInfinity = std::numeric_limits<std::int64_t>::max();

enum StateKind : std::int64_t { kNormal = 0, kStationary = 1 };

/// Interns (kind, location, clocks) records in an open-addressing hash table.
class StateStore {
public:
    StateStore(std::size_t clocks, std::size_t limit) : stride_(clocks + 2), limit_(limit) { slots_.assign(1024, kEmpty); }

    std::size_t size() const { return count_; }
    std::span<const std::int64_t> record(StateId s) const { return {data_.data() + s * stride_, stride_}; }

    /// Returns the id and whether it was newly created.
    std::pair<StateId, bool> intern(std::int64_t kind, LocationId l, std::span<const std::int64_t> clocks) {
        key_.clear();
        key_.push_back(kind);
        key_.push_back(l);
        key_.insert(key_.end(), clocks.begin(), clocks.end());
        std::size_t mask = slots_.size() - 1;
        std::size_t i = hash(key_) & mask;
        while (slots_[i] != kEmpty) {
            if (std::equal(key_.begin(), key_.end(), data_.begin() + slots_[i] * stride_)) return {slots_[i], false};
            i = (i + 1) & mask;
        }
        if (count_ >= limit_)
            throw Error(ErrorKind::StateExplosion,
                        "state limit of " + std::to_string(limit_) + " exceeded; raise --state-limit or shrink the model");
        auto id = static_cast<StateId>(count_++);
        data_.insert(data_.end(), key_.begin(), key_.end());
        slots_[i] = id;
        if (2 * count_ > slots_.size()) grow();
        return {id, true};
    }

private:
    static constexpr StateId kEmpty = std::numeric_limits<StateId>::max();

    static std::size_t hash(std::span<const std::int64_t> k) {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL;
        for (auto x : k) {
            h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            h *= 0xff51afd7ed558ccdULL;
        }
        return static_cast<std::size_t>(h ^ (h >> 33));
    }

    void grow() {
        std::vector<StateId> bigger(slots_.size() * 2, kEmpty);
        std::size_t mask = bigger.size() - 1;
        for (std::size_t s = 0; s < count_; ++s) {
            std::size_t i = hash(record(static_cast<StateId>(s))) & mask;
            while (bigger[i] != kEmpty) i = (i + 1) & mask;
            bigger[i] = static_cast<StateId>(s);
        }
        slots_ = std::move(bigger);
    }

    std::size_t stride_;
    std::size_t limit_;
    std::size_t count_ = 0;
    std::vector<std::int64_t> data_;
    std::vector<StateId> slots_;
    std::vector<std::int64_t> key_;
};

struct Transition {
    StateId target;
    Rational lower;
    Rational upper;
};

/// Per-location data for canonicalising deadline-only clocks.
struct LocationInfo {
    std::vector<std::size_t> edges;
    /// (clock, largest allowed value) for each single upper-bound invariant atom.
    std::vector<std::pair<ClockId, std::int64_t>> uppers;
    /// Deadline-only clocks in index order.
    std::vector<ClockId> deadline_only;
};

class Builder {
public:
    Builder(const Ipta& m, const lang::BoundQuery* q, const ExploreOptions& options)
        : m_(m), q_(q), options_(options), n_(m.clocks.size()), store_(m.clocks.size(), options.state_limit) {}

    ExploreResult run();

private:
    void prepare();
    bool is_target(LocationId l, std::span<const std::int64_t> v) const { return q_ && q_->target.holds(l, v); }
    bool is_dead(LocationId l, std::span<const std::int64_t> v) const {
        return q_ && q_->left && !is_target(l, v) && !q_->left->holds(l, v);
    }
    void cap(std::vector<std::int64_t>& v) const {
        for (std::size_t c = 0; c < n_; ++c) v[c] = std::min(v[c], cap_[c]);
    }
    void canonicalize(LocationId l, std::vector<std::int64_t>& v) const;
    StateId intern(std::int64_t kind, LocationId l, std::span<const std::int64_t> v);
    void emit_choice(std::string label, std::vector<Transition> transitions);
    /// Successors of edge `e` from valuation `w`, or false if some branch enters a state
    /// violating its invariant.
    bool successors(const Edge& e, std::span<const std::int64_t> w, bool canonical,
                    std::vector<std::pair<LocationId, std::vector<std::int64_t>>>& out) const;
    std::vector<Transition> aggregate(const Edge& e, const std::vector<std::pair<LocationId, std::vector<std::int64_t>>>& succ);
    void expand_collapsed(StateId s, LocationId l, std::vector<std::int64_t> v, std::int64_t kind);
    void expand_ticks(StateId s, LocationId l, const std::vector<std::int64_t>& v);

    const Ipta& m_;
    const lang::BoundQuery* q_;
    ExploreOptions options_;
    std::size_t n_;
    StateStore store_;
    std::vector<std::int64_t> cap_;
    std::vector<LocationInfo> info_;
    /// Locations from which no target location is reachable in the location graph.
    std::vector<bool> hopeless_;
    std::vector<std::int64_t> events_;
    ExploreResult result_;
};

void Builder::prepare() {
    result_.ceilings = ceilings(m_, q_);
    cap_.resize(n_);
    for (std::size_t c = 0; c < n_; ++c) cap_[c] = result_.ceilings[c] + 1;

    bool strict = false, diagonal = false;
    auto scan = [&](const ClockConstraint& cc) {
        for (const auto& a : cc.atoms()) {
            strict = strict || a.rel == Relation::Lt || a.rel == Relation::Gt;
            diagonal = diagonal || a.is_diagonal();
        }
    };
    for (const auto& inv : m_.invariants) scan(inv);
    for (const auto& e : m_.edges) scan(e.guard);
    if (strict)
        result_.warnings.push_back("strict clock constraints are evaluated over integer time; digital clocks are exact only "
                                   "for closed constraints");
    if (diagonal)
        result_.warnings.push_back("diagonal clock constraints combined with clock saturation may be inexact");

    ClockSet query_clocks = 0;
    if (q_) {
        query_clocks |= q_->target.clocks();
        if (q_->left) query_clocks |= q_->left->clocks();
    }
    auto by_source = edges_by_source(m_);
    hopeless_.assign(m_.location_count(), false);
    if (q_ && options_.semantics == Semantics::Collapsed) {
        std::vector<std::vector<LocationId>> pred(m_.location_count());
        for (const auto& e : m_.edges)
            for (const auto& o : e.distribution.entries()) pred[o.outcome.target].push_back(e.source);
        std::vector<bool> reaches(m_.location_count(), false);
        std::vector<LocationId> stack;
        for (LocationId l = 0; l < m_.location_count(); ++l)
            if (!q_->target.disjuncts[l].empty()) {
                reaches[l] = true;
                stack.push_back(l);
            }
        while (!stack.empty()) {
            LocationId l = stack.back();
            stack.pop_back();
            for (auto p : pred[l]) {
                if (reaches[p] || (q_->left && q_->left->disjuncts[p].empty())) continue;
                reaches[p] = true;
                stack.push_back(p);
            }
        }
        for (LocationId l = 0; l < m_.location_count(); ++l) hopeless_[l] = !reaches[l];
    }
    std::vector<std::int64_t> bounds;
    auto collect = [&](const ClockConstraint& cc) {
        for (const auto& a : cc.atoms()) bounds.push_back(a.bound < 0 ? -a.bound : a.bound);
    };
    for (const auto& inv : m_.invariants) collect(inv);
    for (const auto& e : m_.edges) collect(e.guard);
    if (q_) {
        for (const auto& ds : q_->target.disjuncts)
            for (const auto& cc : ds) collect(cc);
        if (q_->left)
            for (const auto& ds : q_->left->disjuncts)
                for (const auto& cc : ds) collect(cc);
    }
    for (const auto& inv : m_.invariants)
        for (const auto& a : inv.atoms())
            for (const auto& b : inv.atoms())
                if (a.is_upper() && b.is_upper()) {
                    auto diff = (a.rel == Relation::Lt ? a.bound - 1 : a.bound) -
                                (b.rel == Relation::Lt ? b.bound - 1 : b.bound);
                    if (diff > 0) bounds.push_back(diff);
                }
    for (auto b : bounds)
        for (std::int64_t off = -1; off <= 1; ++off) events_.push_back(b + off);
    events_.insert(events_.end(), cap_.begin(), cap_.end());
    std::sort(events_.begin(), events_.end());
    events_.erase(std::unique(events_.begin(), events_.end()), events_.end());

    info_.resize(m_.location_count());
    for (std::size_t l = 0; l < m_.location_count(); ++l) {
        auto& info = info_[l];
        info.edges = by_source[l];
        if (options_.semantics != Semantics::Collapsed) continue;
        bool has_diagonal = false;
        ClockSet non_upper = query_clocks;
        for (const auto& a : m_.invariants[l].atoms()) {
            if (a.is_diagonal()) {
                has_diagonal = true;
            } else if (a.is_upper()) {
                info.uppers.emplace_back(a.clock, a.rel == Relation::Lt ? a.bound - 1 : a.bound);
            } else {
                non_upper |= clock_bit(a.clock);
            }
        }
        if (has_diagonal || m_.invariants[l].is_unsatisfiable()) continue;
        ClockSet always_reset = n_ >= 64 ? ~ClockSet{0} : clock_bit(static_cast<ClockId>(n_)) - 1;
        for (auto e : info.edges) {
            for (const auto& a : m_.edges[e].guard.atoms()) {
                non_upper |= clock_bit(a.clock);
                if (a.other) non_upper |= clock_bit(*a.other);
            }
            for (const auto& o : m_.edges[e].distribution.entries()) always_reset &= o.outcome.resets;
        }
        for (std::size_t c = 0; c < n_; ++c) {
            auto bit = clock_bit(static_cast<ClockId>(c));
            if ((always_reset & bit) && !(non_upper & bit)) info.deadline_only.push_back(static_cast<ClockId>(c));
        }
    }
}

void Builder::canonicalize(LocationId l, std::vector<std::int64_t>& v) const {
    const auto& info = info_[l];
    for (ClockId y : info.deadline_only) {
        std::int64_t own = kInfinity, others = kInfinity;
        for (const auto& [c, bound] : info.uppers) {
            std::int64_t slack = bound - v[c];
            if (c == y) own = std::min(own, slack);
            else others = std::min(others, slack);
        }
        if (own >= others) v[y] = 0;
    }
}

StateId Builder::intern(std::int64_t kind, LocationId l, std::span<const std::int64_t> v) {
    auto [id, fresh] = store_.intern(kind, l, v);
    if (fresh) {
        auto& imdp = result_.imdp;
        imdp.state_location.push_back(l);
        imdp.state_clocks.insert(imdp.state_clocks.end(), v.begin(), v.end());
    }
    return id;
}

void Builder::emit_choice(std::string label, std::vector<Transition> transitions) {
    auto& imdp = result_.imdp;
    std::sort(transitions.begin(), transitions.end(), [](const Transition& a, const Transition& b) { return a.target < b.target; });
    imdp.choice_label.push_back(std::move(label));
    for (auto& t : transitions) {
        imdp.transition_target.push_back(t.target);
        imdp.transition_lower.push_back(std::move(t.lower));
        imdp.transition_upper.push_back(std::move(t.upper));
    }
    imdp.transition_begin.push_back(imdp.transition_target.size());
    if (imdp.transition_target.size() > options_.transition_limit)
        throw Error(ErrorKind::StateExplosion, "more than " + std::to_string(options_.transition_limit) +
                                                   " transitions; a query restricts exploration to relevant states");
}

bool Builder::successors(const Edge& e, std::span<const std::int64_t> w, bool canonical,
                         std::vector<std::pair<LocationId, std::vector<std::int64_t>>>& out) const {
    out.resize(e.distribution.size());
    for (std::size_t i = 0; i < e.distribution.size(); ++i) {
        const auto& o = e.distribution[i].outcome;
        auto& [target, u] = out[i];
        target = o.target;
        u.assign(w.begin(), w.end());
        for (std::size_t c = 0; c < n_; ++c)
            if (o.resets & clock_bit(static_cast<ClockId>(c))) u[c] = 0;
        if (!m_.invariants[target].satisfied_by(u)) return false;
        if (canonical) canonicalize(target, u);
    }
    return true;
}

std::vector<Transition> Builder::aggregate(const Edge& e,
                                           const std::vector<std::pair<LocationId, std::vector<std::int64_t>>>& succ) {
    std::vector<Transition> out;
    for (std::size_t i = 0; i < succ.size(); ++i) {
        StateId t = intern(kNormal, succ[i].first, succ[i].second);
        const auto& entry = e.distribution[i];
        auto it = std::find_if(out.begin(), out.end(), [&](const Transition& x) { return x.target == t; });
        if (it == out.end()) {
            out.push_back({t, entry.lower, entry.upper});
        } else {
            it->lower += entry.lower;
            it->upper += entry.upper;
        }
    }
    for (auto& t : out)
        if (t.upper > 1) t.upper = 1;
    return out;
}

void Builder::expand_collapsed(StateId s, LocationId l, std::vector<std::int64_t> v, std::int64_t kind) {
    if (kind == kStationary) {
        emit_choice("tick", {{s, 1, 1}});
        return;
    }
    if (hopeless_[l] || is_target(l, v) || is_dead(l, v)) return;
    const auto& info = info_[l];
    const bool timed_query =
        q_ && (q_->target.depends_on_clocks() || (q_->left && q_->left->depends_on_clocks()));
    const std::size_t first_choice = result_.imdp.choice_label.size();

    std::vector<std::vector<std::int64_t>> last(info.edges.size());
    std::set<std::vector<std::int64_t>> seen;
    std::vector<std::pair<LocationId, std::vector<std::int64_t>>> succ;
    std::vector<std::int64_t> key, next;
    const ClockConstraint& inv = m_.invariants[l];

    for (std::int64_t d = 0;; ++d) {
        if (d > 0) {
            if (!inv.satisfied_by(v)) break;
            if (timed_query && (is_target(l, v) || is_dead(l, v))) {
                emit_choice("delay@" + std::to_string(d), {{intern(kNormal, l, v), 1, 1}});
                break;
            }
        }
        std::size_t changed = 0;
        for (std::size_t k = 0; k < info.edges.size(); ++k) {
            const Edge& e = m_.edges[info.edges[k]];
            if (!e.guard.satisfied_by(v)) continue;
            if (!successors(e, v, true, succ)) continue;
            key.clear();
            key.push_back(static_cast<std::int64_t>(k));
            for (const auto& [t, u] : succ) {
                key.push_back(t);
                key.insert(key.end(), u.begin(), u.end());
            }
            if (key == last[k]) continue;
            ++changed;
            last[k] = key;
            if (!seen.insert(key).second) continue;
            emit_choice(e.action + "@" + std::to_string(d), aggregate(e, succ));
        }
        next = v;
        for (auto& x : next) ++x;
        cap(next);
        canonicalize(l, next);
        if (next == v) {
            if (d == 0)
                emit_choice("tick", {{s, 1, 1}});
            else
                emit_choice("wait@" + std::to_string(d), {{intern(kStationary, l, v), 1, 1}});
            break;
        }
        if (changed == 0) {
            std::int64_t jump = std::numeric_limits<std::int64_t>::max();
            bool steady = true;
            for (std::size_t c = 0; c < n_ && steady; ++c) {
                auto slope = next[c] - v[c];
                if (slope < 0 || slope > 1) steady = false;
                if (slope != 1) continue;
                auto it = std::upper_bound(events_.begin(), events_.end(), v[c]);
                jump = std::min(jump, (it == events_.end() ? cap_[c] : *it) - v[c]);
            }
            if (steady && jump >= 2 && jump != std::numeric_limits<std::int64_t>::max()) {
                for (std::size_t c = 0; c < n_; ++c) v[c] += (next[c] - v[c]) * (jump - 1);
                d += jump - 2;
                continue;
            }
        }
        v.swap(next);
    }
    if (result_.imdp.choice_label.size() == first_choice) result_.timelocks.push_back(s);
}

void Builder::expand_ticks(StateId s, LocationId l, const std::vector<std::int64_t>& v) {
    const std::size_t first_choice = result_.imdp.choice_label.size();
    std::vector<std::int64_t> next = v;
    for (auto& x : next) ++x;
    cap(next);
    if (m_.invariants[l].satisfied_by(next)) emit_choice("tick", {{intern(kNormal, l, next), 1, 1}});
    std::vector<std::pair<LocationId, std::vector<std::int64_t>>> succ;
    for (auto e : info_[l].edges) {
        const Edge& edge = m_.edges[e];
        if (!edge.guard.satisfied_by(v)) continue;
        if (!successors(edge, v, false, succ)) continue;
        emit_choice(edge.action, aggregate(edge, succ));
    }
    if (result_.imdp.choice_label.size() == first_choice && !is_target(l, v)) result_.timelocks.push_back(s);
}

ExploreResult Builder::run() {
    prepare();
    auto& imdp = result_.imdp;
    imdp.clock_names = m_.clocks;
    const bool collapsed = options_.semantics == Semantics::Collapsed;
    for (auto l : m_.initial) {
        std::vector<std::int64_t> zero(n_, 0);
        if (!m_.invariants[l].satisfied_by(zero)) continue;
        if (collapsed) canonicalize(l, zero);
        StateId s = intern(kNormal, l, zero);
        if (std::find(imdp.initial.begin(), imdp.initial.end(), s) == imdp.initial.end()) imdp.initial.push_back(s);
    }
    if (imdp.initial.empty())
        result_.warnings.push_back("no initial location satisfies its invariant with all clocks at zero");

    // States are expanded in id order so each state's choices form one contiguous block.
    for (StateId s = 0; s < store_.size(); ++s) {
        auto rec = store_.record(s);
        std::int64_t kind = rec[0];
        auto l = static_cast<LocationId>(rec[1]);
        std::vector<std::int64_t> v(rec.begin() + 2, rec.end());
        if (collapsed) expand_collapsed(s, l, std::move(v), kind);
        else expand_ticks(s, l, v);
        imdp.choice_begin.push_back(imdp.choice_label.size());
    }

    for (StateId s = 0; s < imdp.state_count(); ++s) {
        LocationId l = imdp.state_location[s];
        for (const auto& ap : m_.labels[l]) imdp.labels[ap].push_back(s);
        if (q_) {
            auto v = imdp.clocks_of(s);
            if (q_->target.holds(l, v)) imdp.labels["target"].push_back(s);
            if (q_->left && q_->left->holds(l, v)) imdp.labels["left"].push_back(s);
        }
    }
    if (q_ && !imdp.labels.contains("target")) imdp.labels["target"] = {};
    return std::move(result_);
}

} // namespace

ExploreResult explore(const Ipta& m, const lang::BoundQuery* q, const ExploreOptions& options) {
    return Builder(m, q, options).run();
}

Imdp build_imdp(const Ipta& m, const lang::BoundQuery* q, const ExploreOptions& options) {
    return explore(m, q, options).imdp;
}

} // namespace iptamc
