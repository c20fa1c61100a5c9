#include "iptamc/explore.hpp"
#include "iptamc/lang/parser.hpp"
#include "iptamc/pipeline.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace iptamc;
using testing_support::client_server;
using testing_support::slurp;
using testing_support::source_path;

namespace {

Rational q(const char* text) { return parse_rational(text); }

LoadedModel timed_server(std::int64_t t) { return load_model(slurp(source_path("models/timed_server.ipta")), {{"T", t}}); }

LoadedModel small_client_server(std::int64_t requests, std::int64_t timeout) {
    return load_model(client_server(), {{"L", q("0.7")}, {"U", q("0.8")}, {"REQUESTS", requests}, {"TIMEOUT", timeout}});
}

ExploreOptions ticks() { return {Semantics::Ticks, 10'000'000}; }

std::string exported(const Imdp& m) {
    std::ostringstream out;
    write_imdp(out, m);
    return out.str();
}

double value(const LoadedModel& model, const std::string& query, Semantics sem) {
    RunOptions options;
    options.explore.semantics = sem;
    options.solve.epsilon = 1e-12;
    return run_query(model.system, lang::parse_query(query), model.resolved.constants, options).check.value;
}

} // namespace

TEST(Ceilings, TimedServer) {
    for (std::int64_t t : {10, 30, 45}) {
        auto m = timed_server(t);
        auto k = ceilings(m.system);
        EXPECT_EQ(k[*m.system.find_clock("x")], std::max<std::int64_t>(20, t));
        EXPECT_EQ(k[*m.system.find_clock("y")], std::max<std::int64_t>(50, t));
    }
}

TEST(Ceilings, ClientServer) {
    auto m = load_model(client_server(), {{"L", q("0.7")}, {"U", q("0.8")}, {"REQUESTS", 2}});
    auto k = ceilings(m.system);
    EXPECT_EQ(k[*m.system.find_clock("x")], 30000);
    EXPECT_EQ(k[*m.system.find_clock("y")], 30000);
}

TEST(Ceilings, UnconstrainedClockAndQueryConstants) {
    auto m = load_model("ipta\nmodule M\n s : [0..1] init 0;\n x : clock;\n y : clock;\n"
                        " invariant (s=0 => x<=3) endinvariant\n [a] s=0 & x>=2 -> (s'=1);\nendmodule\n",
                        {});
    auto k = ceilings(m.system);
    EXPECT_EQ(k, (std::vector<std::int64_t>{3, 0}));
    auto bound = lang::bind_query(lang::parse_query("Pmax=? [ F (s=1 & y>=7) ]"), m.system, {});
    EXPECT_EQ(ceilings(m.system, &bound), (std::vector<std::int64_t>{3, 7}));
}

TEST(Explore, SingleLocationTickSelfLoop) {
    auto m = load_model("ipta\nmodule M\n s : [0..0] init 0;\n x : clock;\nendmodule\n", {});
    auto r = explore(m.system, nullptr, ticks());
    // k(x) = 0, so the cap is 1: the initial state ticks into the capped state, which loops.
    ASSERT_EQ(r.imdp.state_count(), 2u);
    const auto& imdp = r.imdp;
    ASSERT_EQ(imdp.choices_end(1) - imdp.choices_begin(1), 1u);
    auto c = imdp.choices_begin(1);
    EXPECT_EQ(imdp.choice_label[c], "tick");
    EXPECT_EQ(imdp.distribution(c), point<StateId>(1));
    EXPECT_TRUE(r.timelocks.empty());

    auto empty = load_model("ipta\nmodule M\n s : [0..0] init 0;\nendmodule\n", {});
    auto e = explore(empty.system, nullptr, ticks());
    ASSERT_EQ(e.imdp.state_count(), 1u);
    EXPECT_EQ(e.imdp.distribution(0), point<StateId>(0));
    EXPECT_EQ(build_imdp(empty.system).state_count(), 1u);
}

TEST(Explore, ResetSetsAggregate) {
    auto m = load_model("ipta\nmodule M\n s : [0..2] init 0;\n x : clock;\n y : clock;\n"
                        " [a] s=0 -> 0.2~0.3:(s'=1)&(x'=0) + 0.1~0.2:(s'=1)&(y'=0) + 0.5~0.7:(s'=2);\nendmodule\n",
                        {});
    for (auto sem : {Semantics::Collapsed, Semantics::Ticks}) {
        auto imdp = build_imdp(m.system, nullptr, {sem, 1000});
        bool found = false;
        for (std::size_t c = imdp.choices_begin(0); c < imdp.choices_end(0); ++c) {
            if (imdp.choice_label[c].rfind("a", 0) != 0) continue;
            auto d = imdp.distribution(c);
            ASSERT_EQ(d.size(), 2u);
            EXPECT_EQ(d[0].lower, q("0.3"));
            EXPECT_EQ(d[0].upper, q("0.5"));
            EXPECT_EQ(d[1].lower, q("0.5"));
            EXPECT_EQ(d[1].upper, q("0.7"));
            found = true;
            break;
        }
        EXPECT_TRUE(found);
    }
}

TEST(Explore, TickStatesRespectInvariants) {
    auto m = timed_server(30);
    auto r = explore(m.system, nullptr, ticks());
    const auto& imdp = r.imdp;
    auto cap = ceilings(m.system);
    for (StateId s = 0; s < imdp.state_count(); ++s) {
        auto v = imdp.clocks_of(s);
        EXPECT_TRUE(m.system.invariants[imdp.state_location[s]].satisfied_by(v));
        for (std::size_t c = 0; c < v.size(); ++c) EXPECT_LE(v[c], cap[c] + 1);
        bool has_tick = false;
        for (std::size_t c = imdp.choices_begin(s); c < imdp.choices_end(s); ++c) {
            EXPECT_TRUE(validate(imdp.distribution(c)).ok());
            if (imdp.choice_label[c] == "tick") {
                has_tick = true;
                EXPECT_TRUE(imdp.distribution(c).is_point_interval());
                EXPECT_EQ(imdp.distribution(c).size(), 1u);
            }
        }
        if (!has_tick) {
            std::vector<std::int64_t> next(v.begin(), v.end());
            for (std::size_t c = 0; c < next.size(); ++c) next[c] = std::min(next[c] + 1, cap[c] + 1);
            EXPECT_FALSE(m.system.invariants[imdp.state_location[s]].satisfied_by(next));
        }
    }
    for (StateId s : imdp.labels.at("slow")) EXPECT_EQ(m.system.locations[imdp.state_location[s]][0], 3);
}

TEST(Explore, CollapsedDistributionsAreValid) {
    auto m = small_client_server(3, 150);
    auto imdp = build_imdp(m.system);
    for (std::size_t c = 0; c < imdp.choice_count(); ++c) EXPECT_TRUE(validate(imdp.distribution(c)).ok());
}

TEST(Explore, Deterministic) {
    for (auto sem : {Semantics::Collapsed, Semantics::Ticks}) {
        auto m = small_client_server(2, 60);
        auto a = exported(build_imdp(m.system, nullptr, {sem, 10'000'000}));
        auto b = exported(build_imdp(m.system, nullptr, {sem, 10'000'000}));
        EXPECT_EQ(a, b);
    }
}

TEST(Explore, CollapsedAgreesWithTicks) {
    auto cs = small_client_server(3, 150);
    for (const char* query : {"Pmin=? [ F (t=2 & w=1) ]", "Pmax=? [ F (t=3 & w=1) ]", "Pmin=? [ F \"lessThan50PercentSlow\" ]",
                              "Pmax=? [ F (w=2) ]", "Pmin=? [ (w=0) U (t=2) ]",
                              "Pmax=? [ (x<=50) U (w=1) ]"}) {
        EXPECT_NEAR(value(cs, query, Semantics::Collapsed), value(cs, query, Semantics::Ticks), 1e-9) << query;
    }
    auto clocked = small_client_server(2, 60);
    EXPECT_NEAR(value(clocked, "Pmax=? [ F (t=2 & z<=30) ]", Semantics::Collapsed),
                value(clocked, "Pmax=? [ F (t=2 & z<=30) ]", Semantics::Ticks), 1e-9);
    for (std::int64_t t : {10, 30}) {
        auto f = timed_server(t);
        for (const char* query : {"Pmax=? [ F \"slow\" ]", "Pmin=? [ F \"slow\" ]", "Pmax=? [ F (s=3 & z<=60) ]",
                                  "Pmin=? [ F (c=2 & y>=25) ]", "Pmax=? [ F (s=1 & z>=100) ]"}) {
            EXPECT_NEAR(value(f, query, Semantics::Collapsed), value(f, query, Semantics::Ticks), 1e-9)
                << query << " T=" << t;
        }
    }
}

TEST(Explore, CapSoundness) {
    // The extra command is never enabled (x <= 100 in s=0) but raises k(x) to 400.
    std::string text = client_server();
    auto pos = text.find("  [response]");
    ASSERT_NE(pos, std::string::npos);
    text.insert(pos, "  [] s=0 & x>400 -> (s'=0);\n");
    auto base = small_client_server(2, 150);
    auto raised = load_model(text, {{"L", q("0.7")}, {"U", q("0.8")}, {"REQUESTS", 2}, {"TIMEOUT", 150}});
    EXPECT_GT(ceilings(raised.system)[0], ceilings(base.system)[0]);
    for (auto sem : {Semantics::Collapsed, Semantics::Ticks})
        for (const char* query : {"Pmin=? [ F (t=2 & w=1) ]", "Pmax=? [ F (t=2 & w=1) ]"})
            EXPECT_NEAR(value(base, query, sem), value(raised, query, sem), 1e-9);
}

TEST(Explore, StateLimit) {
    auto m = small_client_server(2, 150);
    try {
        explore(m.system, nullptr, {Semantics::Ticks, 100});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::StateExplosion);
    }
}

TEST(Explore, TimelocksAreReported) {
    auto m = load_model("ipta\nmodule M\n s : [0..0] init 0;\n x : clock;\n invariant x<=2 endinvariant\nendmodule\n", {});
    auto r = explore(m.system, nullptr, ticks());
    EXPECT_EQ(r.imdp.state_count(), 3u);
    ASSERT_EQ(r.timelocks.size(), 1u);
    EXPECT_EQ(r.imdp.clocks_of(r.timelocks[0])[0], 2);
    EXPECT_EQ(explore(m.system).timelocks.size(), 1u);
}

TEST(Explore, StrictConstraintWarning) {
    auto r = explore(timed_server(30).system);
    ASSERT_FALSE(r.warnings.empty());
    EXPECT_NE(r.warnings[0].find("strict"), std::string::npos);
}

TEST(Export, FormatAndRoundTrip) {
    auto m = small_client_server(2, 60);
    auto imdp = build_imdp(m.system);
    auto text = exported(imdp);
    std::istringstream in(text);
    std::string word;
    std::size_t states, choices, transitions;
    in >> word >> states >> choices >> transitions;
    EXPECT_EQ(word, "imdp");
    EXPECT_EQ(states, imdp.state_count());
    EXPECT_EQ(choices, imdp.choice_count());
    EXPECT_EQ(transitions, imdp.transition_count());
    std::string line;
    std::getline(in, line);
    std::size_t lines = 0;
    std::set<std::pair<std::string, std::string>> choice_keys;
    std::set<std::string> labels;
    while (std::getline(in, line)) {
        std::istringstream row(line);
        std::string src, choice, lo, hi, dst;
        row >> src;
        if (src == "label") {
            row >> choice;
            labels.insert(choice);
            continue;
        }
        row >> choice >> lo >> hi >> dst;
        ASSERT_NE(lo.find('/'), std::string::npos) << line;
        EXPECT_LE(parse_rational(lo), parse_rational(hi));
        choice_keys.emplace(src, choice);
        ++lines;
    }
    EXPECT_EQ(lines, transitions);
    EXPECT_EQ(choice_keys.size(), choices);
    EXPECT_TRUE(labels.contains("init:"));
}
