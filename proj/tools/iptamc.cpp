#include "iptamc/error.hpp"
#include "iptamc/pipeline.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

using namespace iptamc;
using json = nlohmann::json;

namespace {

struct Common {
    std::string model;
    std::vector<std::string> constants;
    std::string engine = "ipta";
    std::string value;
    std::string semantics = "collapsed";
    std::size_t state_limit = 10'000'000;
    std::size_t transition_limit = 5'000'000;
    bool json_output = false;
};

struct SolveFlags {
    double epsilon = 1e-6;
    std::size_t max_iters = 100000;
    std::string criterion = "absolute";
};

lang::Bindings bindings_of(const std::vector<std::string>& args) {
    lang::Bindings out;
    for (const auto& a : args) {
        auto [name, value] = lang::parse_binding(a);
        out[name] = value;
    }
    return out;
}

std::optional<Rational> sample_value(const Common& c) {
    if (c.value.empty()) return std::nullopt;
    try {
        return parse_rational(c.value);
    } catch (const std::invalid_argument&) {
        throw Error(ErrorKind::InvalidArgument, "--value expects a rational, got '" + c.value + "'");
    }
}

RunOptions run_options(const Common& c, const SolveFlags& s) {
    RunOptions o;
    if (c.semantics == "collapsed") o.explore.semantics = Semantics::Collapsed;
    else if (c.semantics == "ticks") o.explore.semantics = Semantics::Ticks;
    else throw Error(ErrorKind::InvalidArgument, "unknown semantics '" + c.semantics + "' (collapsed, ticks)");
    o.explore.state_limit = c.state_limit;
    o.explore.transition_limit = c.transition_limit;
    o.solve.epsilon = s.epsilon;
    o.solve.max_iterations = s.max_iters;
    if (s.criterion == "absolute") o.solve.criterion = Criterion::Absolute;
    else if (s.criterion == "relative") o.solve.criterion = Criterion::Relative;
    else throw Error(ErrorKind::InvalidArgument, "unknown criterion '" + s.criterion + "' (absolute, relative)");
    return o;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string query_text(const lang::Query& q) { return q.text.empty() ? lang::pretty_print(q) : q.text; }

void report_diagnostics(const QueryRun& run) {
    for (const auto& w : run.warnings) std::cerr << "warning: " << w << '\n';
    if (!run.timelocks.empty())
        std::cerr << "warning: " << run.timelocks.size() << " timelocked state(s) without any outgoing step (first: state "
                  << run.timelocks.front() << ")\n";
    if (!run.check.result.converged)
        std::cerr << "warning: value iteration stopped after " << run.check.result.iterations
                  << " iterations without converging\n";
}

std::string mode_name(lang::QueryMode m) {
    switch (m) {
    case lang::QueryMode::Min: return "min";
    case lang::QueryMode::Max: return "max";
    case lang::QueryMode::Threshold: return "threshold";
    }
    return "?";
}

json run_json(const QueryRun& run, Engine engine) {
    json j;
    j["query"] = query_text(run.query);
    j["engine"] = std::string(to_string(engine));
    j["mode"] = mode_name(run.query.mode);
    j["value"] = run.check.value;
    j["bound"] = run.check.direction == Direction::Min ? "min" : "max";
    if (run.check.verdict) j["verdict"] = *run.check.verdict;
    j["states"] = run.states;
    j["choices"] = run.choices;
    j["transitions"] = run.transitions;
    j["iterations"] = run.check.result.iterations;
    j["converged"] = run.check.result.converged;
    j["build_seconds"] = run.build_seconds;
    j["solve_seconds"] = run.solve_seconds;
    j["timelocks"] = run.timelocks.size();
    j["warnings"] = run.warnings;
    return j;
}

void print_run(const QueryRun& run, Engine engine) {
    std::cout << "query=" << query_text(run.query) << '\n'
              << "engine=" << to_string(engine) << '\n'
              << "mode=" << mode_name(run.query.mode) << '\n';
    if (run.check.verdict) {
        std::cout << "verdict=" << (*run.check.verdict ? "true" : "false") << '\n'
                  << "bound=" << (run.check.direction == Direction::Min ? "min" : "max") << '\n';
    }
    std::cout << "value=" << format_double(run.check.value) << '\n'
              << "states=" << run.states << '\n'
              << "choices=" << run.choices << '\n'
              << "transitions=" << run.transitions << '\n'
              << "iterations=" << run.check.result.iterations << '\n'
              << "converged=" << (run.check.result.converged ? "true" : "false") << '\n'
              << "timelocks=" << run.timelocks.size() << '\n'
              << "build_seconds=" << format_double(run.build_seconds) << '\n'
              << "solve_seconds=" << format_double(run.solve_seconds) << '\n';
}

std::ostream& output_stream(const std::string& path, std::ofstream& file) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path, std::ios::binary);
    if (!file) throw Error(ErrorKind::Io, "cannot write " + path);
    return file;
}

int cmd_check(const Common& c, const SolveFlags& s, const std::string& query_arg, const std::string& export_path) {
    Engine engine = parse_engine(c.engine);
    auto model = load_model(read_file(c.model), bindings_of(c.constants));
    auto system = apply_engine(model.system, engine, sample_value(c));
    auto queries = load_queries(query_arg);
    auto options = run_options(c, s);
    bool violated = false;
    json doc = json::array();
    for (std::size_t i = 0; i < queries.size(); ++i) {
        auto run = run_query(system, queries[i], model.resolved.constants, options);
        report_diagnostics(run);
        if (run.check.verdict && !*run.check.verdict) violated = true;
        if (c.json_output) {
            doc.push_back(run_json(run, engine));
        } else {
            if (i) std::cout << '\n';
            print_run(run, engine);
        }
    }
    if (!export_path.empty()) {
        Ipta bound_system = system;
        auto bound = lang::bind_query(queries.front(), bound_system, model.resolved.constants);
        auto imdp = build_imdp(bound_system, &bound, options.explore);
        std::ofstream file;
        write_imdp(output_stream(export_path, file), imdp);
    }
    if (c.json_output) std::cout << json{{"results", doc}}.dump(2) << '\n';
    return violated ? 2 : 0;
}

std::vector<Engine> engines_of(const std::string& name) {
    if (name == "all") return {Engine::Ipta, Engine::PtaStar, Engine::Sample};
    return {parse_engine(name)};
}

int cmd_stats(const Common& c, const std::string& query_arg) {
    auto model = load_model(read_file(c.model), bindings_of(c.constants));
    RunOptions options = run_options(c, {});
    json doc = json::array();
    for (Engine engine : engines_of(c.engine)) {
        Ipta system = apply_engine(model.system, engine, sample_value(c));
        std::optional<lang::BoundQuery> bound;
        if (!query_arg.empty()) bound = lang::bind_query(load_queries(query_arg).front(), system, model.resolved.constants);
        auto explored = explore(system, bound ? &*bound : nullptr, options.explore);
        for (const auto& w : explored.warnings) std::cerr << "warning: " << w << '\n';
        const auto& m = explored.imdp;
        if (c.json_output) {
            doc.push_back({{"engine", std::string(to_string(engine))},
                           {"locations", system.location_count()},
                           {"edges", system.edges.size()},
                           {"states", m.state_count()},
                           {"choices", m.choice_count()},
                           {"transitions", m.transition_count()},
                           {"timelocks", explored.timelocks.size()}});
        } else {
            std::cout << "engine=" << to_string(engine) << " locations=" << system.location_count()
                      << " edges=" << system.edges.size() << " states=" << m.state_count()
                      << " choices=" << m.choice_count() << " transitions=" << m.transition_count()
                      << " timelocks=" << explored.timelocks.size() << '\n';
        }
    }
    if (c.json_output) std::cout << json{{"stats", doc}}.dump(2) << '\n';
    return 0;
}

int cmd_export(const Common& c, const std::string& query_arg, const std::string& export_path) {
    auto model = load_model(read_file(c.model), bindings_of(c.constants));
    Ipta system = apply_engine(model.system, parse_engine(c.engine), sample_value(c));
    std::optional<lang::BoundQuery> bound;
    if (!query_arg.empty()) bound = lang::bind_query(load_queries(query_arg).front(), system, model.resolved.constants);
    auto explored = explore(system, bound ? &*bound : nullptr, run_options(c, {}).explore);
    for (const auto& w : explored.warnings) std::cerr << "warning: " << w << '\n';
    std::ofstream file;
    write_imdp(output_stream(export_path, file), explored.imdp);
    return 0;
}

struct BenchFlags {
    std::string sweep = "REQUESTS";
    std::int64_t from = 10, to = 50, step = 10;
    int repeat = 1;
    std::string engines = "all";
};

int cmd_bench(const Common& c, const SolveFlags& s, const std::string& query_arg, const BenchFlags& b) {
    if (b.step <= 0 || b.from > b.to) throw Error(ErrorKind::InvalidArgument, "empty sweep range");
    if (b.repeat < 1) throw Error(ErrorKind::InvalidArgument, "--repeat must be at least 1");
    const std::string text = read_file(c.model);
    const auto query = load_queries(query_arg).front();
    auto options = run_options(c, s);
    auto base = bindings_of(c.constants);
    json doc = json::array();
    if (!c.json_output) std::cout << "requests,states,engine,transitions,seconds,value,build_seconds,solve_seconds\n";
    for (std::int64_t r = b.from; r <= b.to; r += b.step) {
        auto bindings = base;
        bindings[b.sweep] = r;
        auto model = load_model(text, bindings);
        const auto engines = engines_of(b.engines);
        std::vector<QueryRun> bests(engines.size());
        std::vector<double> best_totals(engines.size(), std::numeric_limits<double>::infinity());
        for (int k = 0; k < b.repeat; ++k) {
            for (std::size_t j = 0; j < engines.size(); ++j) {
                const std::size_t i = (j + static_cast<std::size_t>(k)) % engines.size();
                using clock = std::chrono::steady_clock;
                auto t0 = clock::now();
                auto system = apply_engine(model.system, engines[i], sample_value(c));
                double encode = std::chrono::duration<double>(clock::now() - t0).count();
                auto run = run_query(system, query, model.resolved.constants, options);
                run.build_seconds += encode;
                double total = run.build_seconds + run.solve_seconds;
                if (k > 0) {
                    run.build_seconds = std::min(run.build_seconds, bests[i].build_seconds);
                    run.solve_seconds = std::min(run.solve_seconds, bests[i].solve_seconds);
                }
                best_totals[i] = std::min(best_totals[i], total);
                bests[i] = std::move(run);
            }
        }
        for (std::size_t i = 0; i < engines.size(); ++i) {
            const Engine engine = engines[i];
            const QueryRun& best = bests[i];
            const double best_total = best_totals[i];
            if (c.json_output) {
                doc.push_back({{"requests", r},
                               {"states", best.states},
                               {"engine", std::string(to_string(engine))},
                               {"transitions", best.transitions},
                               {"seconds", best_total},
                               {"value", best.check.value},
                               {"build_seconds", best.build_seconds},
                               {"solve_seconds", best.solve_seconds}});
            } else {
                std::cout << r << ',' << best.states << ',' << to_string(engine) << ',' << best.transitions << ','
                          << format_double(best_total) << ',' << format_double(best.check.value) << ','
                          << format_double(best.build_seconds) << ',' << format_double(best.solve_seconds) << '\n';
                std::cout.flush();
            }
        }
    }
    if (c.json_output) std::cout << json{{"bench", doc}}.dump(2) << '\n';
    return 0;
}

int cmd_prune(const Common& c, bool fix, const std::string& export_path) {
    auto model = load_model(read_file(c.model), bindings_of(c.constants));
    auto report = minimality_report(model);
    if (c.json_output) {
        json findings = json::array();
        for (const auto& f : report.findings)
            findings.push_back({{"module", f.module},
                                {"command", f.command},
                                {"line", f.line},
                                {"location", f.location},
                                {"alternative", f.alternative + 1},
                                {"condition", f.condition}});
        std::cout << json{{"edges", report.edges}, {"nonminimal", findings.size()}, {"findings", findings}}.dump(2) << '\n';
    } else {
        std::cout << "edges=" << report.edges << '\n' << "violations=" << report.findings.size() << '\n';
        for (const auto& f : report.findings)
            std::cout << "nonminimal module=" << f.module << " command=" << f.command << " line=" << f.line
                      << " location=" << f.location << " alternative=" << f.alternative + 1
                      << " condition=" << f.condition << '\n';
        if (report.findings.empty()) std::cout << "minimal=true\n";
    }
    if (fix) {
        auto fixed = pruned_source(model);
        std::string path = export_path;
        if (path.empty()) {
            path = c.model;
            if (path.size() > 5 && path.ends_with(".ipta")) path.resize(path.size() - 5);
            path += ".pruned.ipta";
        }
        std::ofstream file;
        output_stream(path, file) << lang::pretty_print(fixed);
        if (!c.json_output) std::cout << "fixed=" << path << '\n';
    }
    return 0;
}

void add_common(CLI::App* app, Common& c, bool with_engine = true) {
    app->add_option("model", c.model, "Model file (.ipta)")->required()->check(CLI::ExistingFile);
    app->add_option("--const", c.constants, "Constant binding NAME=VALUE (repeatable)");
    if (with_engine) {
        app->add_option("--engine", c.engine, "ipta | ptastar | sample");
        app->add_option("--value", c.value, "Probability of the first outcome of two-outcome interval edges (sample engine)");
    }
    app->add_option("--semantics", c.semantics, "collapsed | ticks");
    app->add_option("--state-limit", c.state_limit, "Abort exploration beyond this many states");
    app->add_option("--transition-limit", c.transition_limit, "Abort exploration beyond this many transitions");
    app->add_flag("--json", c.json_output, "Structured output");
}

void add_solve(CLI::App* app, SolveFlags& s) {
    app->add_option("--epsilon", s.epsilon, "Convergence threshold")->check(CLI::PositiveNumber);
    app->add_option("--max-iters", s.max_iters, "Iteration limit")->check(CLI::PositiveNumber);
    app->add_option("--criterion", s.criterion, "absolute | relative");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Model checker for interval probabilistic timed automata"};
    app.require_subcommand(1);

    Common common;
    SolveFlags solve;
    std::string query, export_path;
    bool fix = false;
    BenchFlags bench;

    auto* check = app.add_subcommand("check", "Compute probabilities or check thresholds");
    add_common(check, common);
    check->add_option("query", query, "Query text or .props file")->required();
    add_solve(check, solve);
    check->add_option("--export", export_path, "Also write the IMDP of the first query");

    auto* stats = app.add_subcommand("stats", "State, choice and transition counts");
    add_common(stats, common);
    stats->add_option("query", query, "Optional query whose target bounds exploration");
    stats->callback([&] {
        if (stats->count("--engine") == 0) common.engine = "all";
    });

    auto* bench_cmd = app.add_subcommand("bench", "Sweep a constant and time every engine (CSV)");
    add_common(bench_cmd, common, false);
    bench_cmd->add_option("query", query, "Query text or .props file (first query is used)")->required();
    add_solve(bench_cmd, solve);
    bench_cmd->add_option("--value", common.value, "Sample engine value (default: interval midpoint)");
    bench_cmd->add_option("--sweep", bench.sweep, "Constant to sweep");
    bench_cmd->add_option("--from", bench.from, "First value");
    bench_cmd->add_option("--to", bench.to, "Last value");
    bench_cmd->add_option("--step", bench.step, "Increment");
    bench_cmd->add_option("--repeat", bench.repeat, "Runs per cell; each timing column is the fastest run");
    bench_cmd->add_option("--engines", bench.engines, "all | ipta | ptastar | sample");

    auto* export_cmd = app.add_subcommand("export", "Write the IMDP in textual form");
    add_common(export_cmd, common);
    export_cmd->add_option("query", query, "Optional query adding target/left labels");
    export_cmd->add_option("--export,-o", export_path, "Output file (default stdout)");

    auto* prune_cmd = app.add_subcommand("prune", "Report non-minimal interval distributions");
    add_common(prune_cmd, common, false);
    prune_cmd->add_flag("--fix", fix, "Write the model with pruned bounds");
    prune_cmd->add_option("--export,-o", export_path, "Where --fix writes the model (default <model>.pruned.ipta)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (*check) return cmd_check(common, solve, query, export_path);
        if (*stats) return cmd_stats(common, query);
        if (*bench_cmd) return cmd_bench(common, solve, query, bench);
        if (*export_cmd) return cmd_export(common, query, export_path);
        if (*prune_cmd) return cmd_prune(common, fix, export_path);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
