#include "support.hpp"

#include <json.hpp>

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <map>

using testing_support::CommandResult;
using testing_support::field;
using testing_support::run_cli;
using testing_support::slurp;
using testing_support::source_path;

namespace {

const std::string kModel = source_path("models/client_server.ipta");
const std::string kConsts = " --const L=0.7 --const U=0.8 --const REQUESTS=2";

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "iptamc_cli_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::string write_scratch(const std::string& name, const std::string& text) {
    auto p = scratch(name);
    std::ofstream(p) << text;
    return p.string();
}

std::map<std::string, std::string> parse_stats_line(const std::string& line) {
    std::map<std::string, std::string> out;
    std::istringstream in(line);
    std::string kv;
    while (in >> kv) {
        auto eq = kv.find('=');
        out[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    return out;
}

std::vector<std::map<std::string, std::string>> stats(const std::string& args) {
    auto r = run_cli("stats " + args);
    EXPECT_EQ(r.exit_code, 0) << r.out;
    std::vector<std::map<std::string, std::string>> rows;
    std::istringstream in(r.out);
    std::string line;
    while (std::getline(in, line)) rows.push_back(parse_stats_line(line));
    return rows;
}

} // namespace

TEST(Cli, CheckIntervalMinimum) {
    auto r = run_cli("check " + kModel + " 'Pmin=? [F (t=2 & w=1)]'" + kConsts);
    ASSERT_EQ(r.exit_code, 0) << r.out;
    EXPECT_NEAR(std::stod(field(r.out, "value")), 0.30, 1e-6);
    EXPECT_EQ(field(r.out, "engine"), "ipta");
    EXPECT_EQ(field(r.out, "converged"), "true");
    for (const char* key : {"states", "transitions", "iterations", "build_seconds", "solve_seconds"})
        EXPECT_FALSE(field(r.out, key).empty()) << key;
}

TEST(Cli, CheckSampleEngine) {
    auto r = run_cli("check " + kModel + " 'Pmin=? [F (t=2 & w=1)]'" + kConsts + " --engine sample --value 0.75");
    ASSERT_EQ(r.exit_code, 0);
    EXPECT_NEAR(std::stod(field(r.out, "value")), 0.375, 1e-6);
    auto frac = run_cli("check " + kModel + " 'Pmin=? [F (t=2 & w=1)]'" + kConsts + " --engine sample --value 4/5");
    EXPECT_NEAR(std::stod(field(frac.out, "value")), 0.32, 1e-6);
}

TEST(Cli, CheckPtaStarAgreesWithMoreTransitions) {
    auto a = run_cli("check " + kModel + " 'Pmin=? [F (t=2 & w=1)]'" + kConsts);
    auto b = run_cli("check " + kModel + " 'Pmin=? [F (t=2 & w=1)]'" + kConsts + " --engine ptastar");
    ASSERT_EQ(b.exit_code, 0);
    EXPECT_NEAR(std::stod(field(a.out, "value")), std::stod(field(b.out, "value")), 1e-9);
    EXPECT_GT(std::stoul(field(b.out, "transitions")), std::stoul(field(a.out, "transitions")));
}

TEST(Cli, PropertiesFile) {
    auto r = run_cli("check " + kModel + " " + source_path("models/client_server.props") + kConsts);
    ASSERT_EQ(r.exit_code, 0);
    EXPECT_NEAR(std::stod(field(r.out, "value", 0)), 0.30, 1e-6);
    EXPECT_NEAR(std::stod(field(r.out, "value", 1)), 0.45, 1e-6);
    EXPECT_FALSE(field(r.out, "value", 3).empty());
}

TEST(Cli, ExitCodes) {
    auto ok = run_cli("check " + kModel + " 'P>=0.3 [F (t=2 & w=1)]'" + kConsts);
    EXPECT_EQ(ok.exit_code, 0);
    EXPECT_EQ(field(ok.out, "verdict"), "true");
    auto violated = run_cli("check " + kModel + " 'P>=0.5 [F (t=2 & w=1)]'" + kConsts);
    EXPECT_EQ(violated.exit_code, 2);
    EXPECT_EQ(field(violated.out, "verdict"), "false");
    auto unbound = run_cli("check " + kModel + " 'Pmin=? [F (t=2 & w=1)]' --const L=0.7", true);
    EXPECT_EQ(unbound.exit_code, 1);
    EXPECT_NE(unbound.out.find("error:"), std::string::npos);
    EXPECT_NE(unbound.out.find("U"), std::string::npos);
    auto quiet = run_cli("check " + kModel + " 'Pmin=? [F (t=2 & w=1)]' --const L=0.7");
    EXPECT_TRUE(quiet.out.empty()) << "stdout carries results only";
    auto syntax = run_cli("check " + kModel + " 'Pmin=? [F (t=2 &]'" + kConsts, true);
    EXPECT_EQ(syntax.exit_code, 1);
    EXPECT_NE(syntax.out.find("1:"), std::string::npos) << syntax.out;
}

TEST(Cli, TimelockWarningOnStderr) {
    auto path = write_scratch("lock.ipta", "ipta\nmodule M\n s : [0..1] init 0;\n x : clock;\n"
                                           " invariant x<=2 endinvariant\n [a] s=0 & x>=1 -> (s'=1);\nendmodule\n");
    auto r = run_cli("check " + path + " 'Pmax=? [F (s=1 & x>=5)]'", true);
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.out.find("timelock"), std::string::npos) << r.out;
}

TEST(Cli, Json) {
    auto r = run_cli("check " + kModel + " 'Pmax=? [F (t=2 & w=1)]'" + kConsts + " --json");
    ASSERT_EQ(r.exit_code, 0);
    auto doc = nlohmann::json::parse(r.out);
    EXPECT_NEAR(doc["results"][0]["value"].get<double>(), 0.45, 1e-6);
    EXPECT_EQ(doc["results"][0]["engine"], "ipta");
}

TEST(Cli, StatsEngines) {
    auto rows = stats(kModel + " 'Pmin=? [F \"lessThan50PercentSlow\"]' --const L=0.7 --const U=0.8 --const REQUESTS=10");
    ASSERT_EQ(rows.size(), 3u);
    std::map<std::string, std::map<std::string, std::string>> by;
    for (auto& r : rows) by[r["engine"]] = r;
    EXPECT_EQ(by["ipta"]["transitions"], by["sample"]["transitions"]);
    EXPECT_EQ(by["ipta"]["states"], by["sample"]["states"]);
    EXPECT_GT(std::stoul(by["ptastar"]["transitions"]), std::stoul(by["ipta"]["transitions"]));
}

TEST(Cli, StatsEmptyModel) {
    auto path = write_scratch("empty.ipta", "ipta\nmodule M\n s : [0..0] init 0;\nendmodule\n");
    auto rows = stats(path + " --engine ipta");
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0]["states"], "1");
}

TEST(Cli, BenchSinglePoint) {
    auto r = run_cli("bench " + kModel + " 'Pmin=? [F (t=REQUESTS & w=1)]' --const L=0.7 --const U=0.8 --from 3 --to 3");
    ASSERT_EQ(r.exit_code, 0) << r.out;
    std::istringstream in(r.out);
    std::string header, line;
    std::getline(in, header);
    EXPECT_EQ(header.rfind("requests,states,engine,transitions,seconds,value", 0), 0u);
    std::map<std::string, double> value;
    int rows = 0;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        ASSERT_GE(cells.size(), 6u);
        EXPECT_EQ(cells[0], "3");
        value[cells[2]] = std::stod(cells[5]);
        ++rows;
    }
    EXPECT_EQ(rows, 3);
    EXPECT_NEAR(value["ipta"], value["ptastar"], 1e-9);
    auto hi = run_cli("check " + kModel + " 'Pmax=? [F (t=REQUESTS & w=1)]' --const L=0.7 --const U=0.8 --const REQUESTS=3");
    EXPECT_GE(value["sample"], value["ipta"] - 1e-9);
    EXPECT_LE(value["sample"], std::stod(field(hi.out, "value")) + 1e-9);
}

TEST(Cli, ExportDeterministicAndComparable) {
    auto a = scratch("a.imdp").string(), b = scratch("b.imdp").string(), c = scratch("c.imdp").string();
    const std::string q = " 'Pmin=? [F (t=2 & w=1)]'";
    ASSERT_EQ(run_cli("export " + kModel + q + kConsts + " -o " + a).exit_code, 0);
    ASSERT_EQ(run_cli("export " + kModel + q + kConsts + " -o " + b).exit_code, 0);
    ASSERT_EQ(run_cli("export " + kModel + q + kConsts + " --engine ptastar -o " + c).exit_code, 0);
    auto ta = slurp(a);
    EXPECT_FALSE(ta.empty());
    EXPECT_EQ(ta, slurp(b));
    auto header = [](const std::string& text) {
        std::istringstream in(text);
        std::string word;
        std::size_t s, ch, t;
        in >> word >> s >> ch >> t;
        return std::array<std::size_t, 3>{s, ch, t};
    };
    auto ha = header(ta), hc = header(slurp(c));
    EXPECT_GT(hc[1], ha[1]);
    auto checked = run_cli("check " + kModel + q + kConsts);
    EXPECT_EQ(std::to_string(ha[0]), field(checked.out, "states"));
    EXPECT_EQ(std::to_string(ha[2]), field(checked.out, "transitions"));
    auto via_check = scratch("d.imdp").string();
    run_cli("check " + kModel + q + kConsts + " --export " + via_check);
    EXPECT_EQ(slurp(via_check), ta);
}

TEST(Cli, Prune) {
    auto r = run_cli("prune " + source_path("models/nonminimal.ipta"));
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_EQ(field(r.out, "violations"), "2");
    EXPECT_NE(r.out.find("condition=2"), std::string::npos);
    auto minimal = run_cli("prune " + kModel + " --const L=0.95 --const U=1 --const REQUESTS=2");
    EXPECT_EQ(field(minimal.out, "violations"), "0");
    EXPECT_EQ(field(minimal.out, "minimal"), "true");

    auto out = scratch("fixed.ipta").string();
    auto fixed = run_cli("prune " + source_path("models/nonminimal.ipta") + " --fix -o " + out);
    EXPECT_EQ(fixed.exit_code, 0);
    auto text = slurp(out);
    EXPECT_NE(text.find("0.5~0.5"), std::string::npos) << text;
    EXPECT_EQ(field(run_cli("prune " + out).out, "violations"), "0");

    auto copy = write_scratch("coin.ipta", slurp(source_path("models/nonminimal.ipta")));
    auto defaulted = run_cli("prune " + copy + " --fix");
    EXPECT_EQ(field(defaulted.out, "fixed"), scratch("coin.pruned.ipta").string());
    EXPECT_TRUE(std::filesystem::exists(scratch("coin.pruned.ipta")));
}

TEST(Cli, Determinism) {
    auto a = run_cli("check " + kModel + " 'Pmax=? [F \"lessThan50PercentSlow\"]' --const L=0.7 --const U=0.8 --const REQUESTS=5");
    auto b = run_cli("check " + kModel + " 'Pmax=? [F \"lessThan50PercentSlow\"]' --const L=0.7 --const U=0.8 --const REQUESTS=5");
    for (const char* key : {"value", "states", "choices", "transitions", "iterations"})
        EXPECT_EQ(field(a.out, key), field(b.out, key)) << key;
}
