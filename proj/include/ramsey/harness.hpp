#pragma once

#include "ramsey/cnf.hpp"
#include "ramsey/graph.hpp"
#include "ramsey/sat.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ramsey
{
    class SpecError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    struct GameSpec
    {
        std::vector<std::string> provers{"random", "greedy"};
        std::vector<std::string> adversaries{"lemma23"};
        std::vector<std::string> memories{"lemma23"}; // numbers, or lemma23 / lemma34 for the strategy budgets
        std::uint64_t max_moves = 10'000;
        unsigned repeats = 1;
    };

    /// Text configuration, one "key = value" per line, '#' starts a comment.
    struct ExperimentSpec
    {
        std::string name = "experiment";
        unsigned k = 4;
        unsigned s = 4;
        std::vector<std::uint64_t> seeds;
        std::optional<std::filesystem::path> graph_file;
        std::vector<Encoding> encodings{Encoding::clique};
        GameSpec games;
        std::string solver = "internal"; // or a command template containing {}
        double timeout = 10.0;           // seconds
        std::string property_p = "off";  // off | exhaustive | sampled
        std::uint64_t property_p_trials = 10'000;
        std::uint64_t oracle_budget = 100'000'000;
        double epsilon = 1.0 / 3.0;
        std::optional<double> alpha;     // default 0.5
        double beta = 0.2;
        std::optional<double> delta;     // default: measured density floor on S = V
        std::uint64_t seed = 1;          // master seed for games and sampling
        std::filesystem::path output = "experiment-out";
        bool csv = false;
        unsigned workers = 1;

        /// Canonical key = value text; the hash covers exactly this.
        [[nodiscard]] auto canonical() const -> std::string;
        [[nodiscard]] auto hash() const -> std::string;
    };

    [[nodiscard]] auto parse_experiment_spec(std::istream & in) -> ExperimentSpec;
    [[nodiscard]] auto parse_seed_list(std::string_view text) -> std::vector<std::uint64_t>;

    enum class SolverStatus
    {
        sat,
        unsat,
        unknown,
        timeout
    };

    [[nodiscard]] auto solver_status_name(SolverStatus s) -> std::string;

    struct SolverStats
    {
        SolverStatus status = SolverStatus::unknown;
        std::optional<std::uint64_t> conflicts;
        std::optional<std::uint64_t> decisions;
        double wall_seconds = 0.0;
        std::optional<Assignment> model;
        int exit_code = -1;
        std::string error;
    };

    /// Environment variable consulted for the default solver template.
    inline constexpr const char * solver_env = "RAMSEY_SOLVER";

    /// Replaces {} in the template by the quoted path and runs it through /bin/sh. The process is
    /// killed after `timeout`. Parses "s ..." and "v ..." lines and "c conflicts: N" style statistics.
    [[nodiscard]] auto run_solver(const std::filesystem::path & dimacs, const std::string & command_template, std::chrono::duration<double> timeout)
        -> SolverStats;

    /// Parses competition-format solver output; num_vars sizes the model.
    [[nodiscard]] auto parse_solver_output(std::string_view text, Var num_vars) -> SolverStats;

    /// Prints the result of the internal solver in competition format.
    void write_solver_output(std::ostream & out, const SatResult & r, Var num_vars);

    /// Fields that vary from run to run; removed before comparing rows.
    [[nodiscard]] auto strip_timing(nlohmann::ordered_json row) -> nlohmann::ordered_json;

    [[nodiscard]] auto csv_header() -> std::string;
    [[nodiscard]] auto csv_line(const nlohmann::ordered_json & row) -> std::string;

    using RowSink = std::function<void(const nlohmann::ordered_json &)>;

    /// Runs the spec: writes graphs and DIMACS files under spec.output, results.jsonl (and
    /// results.csv), and passes every row to `sink` in row order. `solver_default` replaces
    /// "internal" when non-empty. Returns the number of rows.
    auto run_experiment(const ExperimentSpec & spec, const RowSink & sink = {}, const std::string & solver_default = {}) -> std::size_t;
}
