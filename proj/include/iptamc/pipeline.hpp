#pragma once

#include "iptamc/encode.hpp"
#include "iptamc/explore.hpp"
#include "iptamc/lang/parser.hpp"
#include "iptamc/lang/resolve.hpp"
#include "iptamc/solve.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace iptamc {

enum class Engine { Ipta, PtaStar, Sample };

std::string_view to_string(Engine e);
Engine parse_engine(std::string_view name);

/// Parsed, resolved and composed model with labels applied.
struct LoadedModel {
    lang::ModelSource source;
    lang::ResolvedModel resolved;
    Ipta system;
};

std::string read_file(const std::string& path);

LoadedModel load_model(std::string_view text, const lang::Bindings& bindings);

/// Applies an encoding to the composed system. `sample_value` defaults to the midpoint of
/// the first interval edge's first outcome.
Ipta apply_engine(const Ipta& system, Engine engine, const std::optional<Rational>& sample_value = std::nullopt);

/// Reads queries from a `.props` file if `arg` names an existing file, else parses `arg`.
std::vector<lang::Query> load_queries(const std::string& arg);

struct RunOptions {
    ExploreOptions explore;
    SolveSettings solve;
};

struct QueryRun {
    lang::Query query;
    CheckResult check;
    std::size_t states = 0;
    std::size_t choices = 0;
    std::size_t transitions = 0;
    double build_seconds = 0;
    double solve_seconds = 0;
    std::vector<StateId> timelocks;
    std::vector<std::string> warnings;
};

/// Binds, explores and solves one query on an (encoded) system.
QueryRun run_query(const Ipta& system, const lang::Query& q, const lang::Bindings& constants,
                   const RunOptions& options = {});

/// Convenience: load, encode and check in one call.
QueryRun check_text(std::string_view model_text, std::string_view query, const lang::Bindings& bindings,
                    Engine engine = Engine::Ipta, const std::optional<Rational>& sample_value = std::nullopt,
                    const RunOptions& options = {});

/// One failed minimality condition of a module edge.
struct MinimalityFinding {
    std::string module;
    /// 1-based command index within the module.
    std::size_t command = 0;
    int line = 0;
    std::string location;
    /// 0-based alternative index.
    std::size_t alternative = 0;
    /// 1 (upper bound unattainable) or 2 (lower bound unattainable).
    int condition = 0;
};

struct MinimalityReport {
    std::size_t edges = 0;
    std::vector<MinimalityFinding> findings;
};

/// Checks every module edge for minimality.
MinimalityReport minimality_report(const LoadedModel& model);

/// Source with every non-minimal command's weights replaced by pruned literal bounds.
/// Throws Error(InvalidModel) when the pruned bounds differ between locations.
lang::ModelSource pruned_source(const LoadedModel& model);

} // namespace iptamc
