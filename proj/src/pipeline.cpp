#include "iptamc/pipeline.hpp"

#include "iptamc/compose.hpp"
#include "iptamc/error.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace iptamc {

std::string_view to_string(Engine e) {
    switch (e) {
    case Engine::Ipta: return "ipta";
    case Engine::PtaStar: return "ptastar";
    case Engine::Sample: return "sample";
    }
    return "?";
}

Engine parse_engine(std::string_view name) {
    if (name == "ipta") return Engine::Ipta;
    if (name == "ptastar") return Engine::PtaStar;
    if (name == "sample") return Engine::Sample;
    throw Error(ErrorKind::InvalidArgument, "unknown engine '" + std::string(name) + "' (ipta, ptastar, sample)");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

LoadedModel load_model(std::string_view text, const lang::Bindings& bindings) {
    LoadedModel out;
    out.source = lang::parse_model(text);
    out.resolved = lang::resolve(out.source, bindings);
    out.system = compose_all(out.resolved.modules);
    lang::apply_labels(out.system, out.resolved.labels, out.resolved.constants);
    check_well_formed(out.system);
    return out;
}

Ipta apply_engine(const Ipta& system, Engine engine, const std::optional<Rational>& sample_value) {
    switch (engine) {
    case Engine::Ipta: return system;
    case Engine::PtaStar: return pta_star(system);
    case Engine::Sample: return scalar_sample(system, sample_value ? *sample_value : default_sample_value(system));
    }
    return system;
}

std::vector<lang::Query> load_queries(const std::string& arg) {
    std::error_code ec;
    if (std::filesystem::is_regular_file(arg, ec)) return lang::parse_properties(read_file(arg));
    return {lang::parse_query(arg)};
}

QueryRun run_query(const Ipta& system, const lang::Query& q, const lang::Bindings& constants, const RunOptions& options) {
    using clock = std::chrono::steady_clock;
    QueryRun run;
    auto t0 = clock::now();
    Ipta bound_system = system;
    auto bound = lang::bind_query(q, bound_system, constants);
    auto explored = explore(bound_system, &bound, options.explore);
    auto t1 = clock::now();
    run.check = check(explored.imdp, q, options.solve);
    auto t2 = clock::now();
    run.query = bound.query;
    run.states = explored.imdp.state_count();
    run.choices = explored.imdp.choice_count();
    run.transitions = explored.imdp.transition_count();
    run.build_seconds = std::chrono::duration<double>(t1 - t0).count();
    run.solve_seconds = std::chrono::duration<double>(t2 - t1).count();
    run.timelocks = std::move(explored.timelocks);
    run.warnings = std::move(explored.warnings);
    return run;
}

QueryRun check_text(std::string_view model_text, std::string_view query, const lang::Bindings& bindings, Engine engine,
                    const std::optional<Rational>& sample_value, const RunOptions& options) {
    auto model = load_model(model_text, bindings);
    auto system = apply_engine(model.system, engine, sample_value);
    return run_query(system, lang::parse_query(query), model.resolved.constants, options);
}

namespace {

// Edge indices of each command, keyed by (module, command).
std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> edges_by_command(const LoadedModel& model) {
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> out;
    const auto& modules = model.source.modules;
    for (std::size_t m = 0; m < modules.size(); ++m) {
        std::map<std::string, std::size_t> command_of;
        for (std::size_t k = 0; k < modules[m].commands.size(); ++k) command_of[lang::command_origin(modules[m], k)] = k;
        const auto& edges = model.resolved.modules[m].edges;
        for (std::size_t e = 0; e < edges.size(); ++e) out[{m, command_of.at(edges[e].origin)}].push_back(e);
    }
    return out;
}

lang::ExprPtr literal(const Rational& r) {
    if (is_integer(r)) return lang::Expr::integer(static_cast<std::int64_t>(boost::multiprecision::numerator(r)));
    std::string text = to_display_string(r);
    if (text.find('/') == std::string::npos) return lang::Expr::decimal(r, text);
    std::string num = boost::multiprecision::numerator(r).str() + ".0";
    return lang::Expr::make_binary(lang::BinaryOp::Div, lang::Expr::decimal(Rational(boost::multiprecision::numerator(r)), num),
                                   lang::Expr::integer(static_cast<std::int64_t>(boost::multiprecision::denominator(r))));
}

} // namespace

MinimalityReport minimality_report(const LoadedModel& model) {
    MinimalityReport report;
    for (const auto& [key, edges] : edges_by_command(model)) {
        const auto& decl = model.source.modules[key.first];
        const Ipta& m = model.resolved.modules[key.first];
        std::set<std::pair<LocationId, std::size_t>> seen;
        for (auto e : edges) {
            const Edge& edge = m.edges[e];
            if (!seen.insert({edge.source, 0}).second) continue;
            ++report.edges;
            for (const auto& v : minimality_violations(edge.distribution)) {
                report.findings.push_back({decl.name, key.second + 1, decl.commands[key.second].pos.line,
                                           m.describe_location(edge.source), v.entry, v.condition});
            }
        }
    }
    return report;
}

lang::ModelSource pruned_source(const LoadedModel& model) {
    lang::ModelSource out = model.source;
    for (const auto& [key, edges] : edges_by_command(model)) {
        auto& cmd = out.modules[key.first].commands[key.second];
        const Ipta& m = model.resolved.modules[key.first];
        std::optional<std::vector<std::pair<Rational, Rational>>> bounds;
        bool changed = false, uniform = true;
        std::string origin;
        for (auto e : edges) {
            const auto& d = m.edges[e].distribution;
            origin = m.edges[e].origin;
            bool minimal = is_minimal(d);
            changed = changed || !minimal;
            if (d.size() != cmd.alternatives.size()) {
                if (!minimal)
                    throw Error(ErrorKind::InvalidModel,
                                origin + ": alternatives share a target or have zero weight; cannot rewrite them");
                continue;
            }
            auto p = prune(d);
            std::vector<std::pair<Rational, Rational>> b;
            for (const auto& entry : d.entries()) {
                const auto* q = p.find(entry.outcome);
                b.emplace_back(q ? q->lower : Rational(0), q ? q->upper : Rational(0));
            }
            if (bounds && *bounds != b) uniform = false;
            bounds = std::move(b);
        }
        if (changed && !uniform)
            throw Error(ErrorKind::InvalidModel, origin + ": pruned bounds differ between locations; cannot rewrite the source");
        if (!changed || !bounds) continue;
        for (std::size_t i = 0; i < cmd.alternatives.size(); ++i) {
            auto& alt = cmd.alternatives[i];
            alt.lower = literal((*bounds)[i].first);
            alt.upper = literal((*bounds)[i].second);
            alt.is_interval = true;
            alt.implicit_weight = false;
        }
    }
    return out;
}

} // namespace iptamc
