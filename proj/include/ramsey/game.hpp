#pragma once

#include "ramsey/cnf.hpp"
#include "ramsey/graph.hpp"
#include "ramsey/rng.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace ramsey
{
    /// The Prover's memory: a partial assignment holding each variable at most once.
    class Memory
    {
    public:
        Memory() = default;
        explicit Memory(Var num_vars) : _values(static_cast<std::size_t>(num_vars) + 1, -1) { }

        [[nodiscard]] auto num_vars() const -> Var { return static_cast<Var>(_values.size() - 1); }
        [[nodiscard]] auto size() const -> std::size_t { return _count; }
        [[nodiscard]] auto contains(Var v) const -> bool { return v < _values.size() && _values[v] >= 0; }
        [[nodiscard]] auto value(Var v) const -> std::optional<bool>
        {
            if (! contains(v))
                return std::nullopt;
            return _values[v] == 1;
        }
        [[nodiscard]] auto falsifies(Literal l) const -> bool { return contains(l.var) && (_values[l.var] == 1) != l.positive; }
        [[nodiscard]] auto satisfies(Literal l) const -> bool { return contains(l.var) && (_values[l.var] == 1) == l.positive; }
        [[nodiscard]] auto stored() const -> std::vector<Var>;

        void store(Var v, bool value);
        void forget(Var v);

    private:
        std::vector<std::int8_t> _values;
        std::size_t _count = 0;
    };

    struct Move
    {
        enum class Kind
        {
            query,
            forget
        };
        Kind kind = Kind::query;
        Var var = 0;

        [[nodiscard]] static auto query(Var v) -> Move { return {Kind::query, v}; }
        [[nodiscard]] static auto forget(Var v) -> Move { return {Kind::forget, v}; }
        auto operator==(const Move &) const -> bool = default;
    };

    /// A CNF as seen by the game: falsification checks and per-variable clause pressure.
    class Formula
    {
    public:
        virtual ~Formula() = default;

        [[nodiscard]] virtual auto num_vars() const -> Var = 0;
        [[nodiscard]] virtual auto has_empty_clause() const -> bool = 0;
        /// A clause falsified by memory that contains `touched`, the variable just stored.
        [[nodiscard]] virtual auto falsified_clause(const Memory & memory, Var touched) const -> std::optional<Clause> = 0;
        /// For every variable, the weight of clauses containing it that memory does not satisfy,
        /// each counted as 2^-(u-1) for u unassigned literals. Index 0 unused.
        [[nodiscard]] virtual auto pressure(const Memory & memory) const -> std::vector<double> = 0;
        /// Present for clique-game formulas.
        [[nodiscard]] virtual auto var_map() const -> const VarMap * { return nullptr; }
        [[nodiscard]] virtual auto graph() const -> const Graph * { return nullptr; }
    };

    /// Explicit clause list with per-variable occurrence lists.
    class CnfFormula final : public Formula
    {
    public:
        explicit CnfFormula(Cnf cnf, std::optional<VarMap> map = std::nullopt, std::optional<Graph> g = std::nullopt);

        [[nodiscard]] auto num_vars() const -> Var override { return _cnf.num_vars; }
        [[nodiscard]] auto has_empty_clause() const -> bool override;
        [[nodiscard]] auto falsified_clause(const Memory & memory, Var touched) const -> std::optional<Clause> override;
        [[nodiscard]] auto pressure(const Memory & memory) const -> std::vector<double> override;
        [[nodiscard]] auto var_map() const -> const VarMap * override { return _map ? &*_map : nullptr; }
        [[nodiscard]] auto graph() const -> const Graph * override { return _graph ? &*_graph : nullptr; }
        [[nodiscard]] auto cnf() const -> const Cnf & { return _cnf; }

    private:
        Cnf _cnf;
        std::optional<VarMap> _map;
        std::optional<Graph> _graph;
        std::vector<std::vector<std::uint32_t>> _occurs;
    };

    /// Clique(G) with s indices, without materializing its clauses: a clause is falsified exactly
    /// when two indices are fully specified to equal or non-adjacent vertices.
    class CliqueFormula final : public Formula
    {
    public:
        CliqueFormula(Graph g, unsigned s);

        [[nodiscard]] auto num_vars() const -> Var override { return _map.num_vars(); }
        [[nodiscard]] auto has_empty_clause() const -> bool override { return false; }
        [[nodiscard]] auto falsified_clause(const Memory & memory, Var touched) const -> std::optional<Clause> override;
        [[nodiscard]] auto pressure(const Memory & memory) const -> std::vector<double> override;
        [[nodiscard]] auto var_map() const -> const VarMap * override { return &_map; }
        [[nodiscard]] auto graph() const -> const Graph * override { return &_graph; }

    private:
        auto bad_pairs(const Pattern & a, const Pattern & b) const -> double;

        Graph _graph;
        VarMap _map;
        mutable std::mutex _cache_mutex;
        mutable std::unordered_map<std::uint64_t, double> _bad_pair_cache;
    };

    /// Pattern p^i: the restriction of memory to index i's bit variables.
    [[nodiscard]] auto index_pattern(const Memory & memory, const VarMap & m, unsigned i) -> Pattern;
    /// p^1 .. p^s in index order. Rejects unary maps.
    [[nodiscard]] auto clique_game_view(const Memory & memory, const VarMap & m) -> std::vector<Pattern>;

    struct GameState
    {
        const Formula * formula = nullptr;
        Memory memory;
        unsigned capacity = 0;
        std::uint64_t moves = 0;
    };

    struct Resignation
    {
        std::string condition;
        nlohmann::ordered_json details;
    };

    struct AdversaryReply
    {
        bool value = false;
        std::optional<Resignation> resignation;
    };

    class ProverStrategy
    {
    public:
        virtual ~ProverStrategy() = default;
        [[nodiscard]] virtual auto name() const -> std::string = 0;
        /// nullopt ends the game (the Prover stops).
        [[nodiscard]] virtual auto next(const GameState & state) -> std::optional<Move> = 0;
    };

    class AdversaryStrategy
    {
    public:
        virtual ~AdversaryStrategy() = default;
        [[nodiscard]] virtual auto name() const -> std::string = 0;
        /// Called before the answer is stored; state.memory does not yet contain `var`.
        [[nodiscard]] virtual auto answer(const GameState & state, Var var) -> AdversaryReply = 0;
        /// Called after `var` has been removed from memory.
        virtual void forgotten(const GameState &, Var) { }
        /// Self-check of the strategy's invariants; a message describes the first violation.
        [[nodiscard]] virtual auto check_invariants(const GameState &) const -> std::optional<std::string> { return std::nullopt; }
    };

    enum class Outcome
    {
        prover_won,
        adversary_survived,
        adversary_resigned,
        prover_stopped,
        prover_forfeit
    };

    [[nodiscard]] auto outcome_name(Outcome o) -> std::string;

    struct MoveRecord
    {
        Move move;
        std::optional<bool> answer;
        std::size_t memory_after = 0;
    };

    struct Transcript
    {
        std::string prover;
        std::string adversary;
        unsigned capacity = 0;
        std::uint64_t max_moves = 0;
        std::vector<MoveRecord> moves;
        Outcome outcome = Outcome::adversary_survived;
        std::optional<Clause> falsified;
        std::optional<Resignation> resignation;
        std::string forfeit_reason;
        std::size_t high_water = 0;
    };

    using MoveObserver = std::function<void(const GameState &, const MoveRecord &)>;

    inline constexpr std::uint64_t default_move_cap = 100'000;

    /// Plays until a clause is falsified, a strategy gives up or breaks a rule, or max_moves
    /// moves have been made. Queries need free memory; a stored variable cannot be re-queried.
    [[nodiscard]] auto play(const Formula & formula, ProverStrategy & prover, AdversaryStrategy & adversary, unsigned capacity,
        std::uint64_t max_moves = default_move_cap, const MoveObserver & observer = {}) -> Transcript;

    /// One JSON object per move, then a final {"outcome": ...} record.
    void write_transcript(std::ostream & out, const Transcript & t);
    [[nodiscard]] auto transcript_jsonl(const Transcript & t) -> std::string;
    [[nodiscard]] auto read_transcript_moves(std::istream & in) -> std::vector<Move>;

    [[nodiscard]] auto make_random_prover(std::uint64_t seed) -> std::unique_ptr<ProverStrategy>;
    [[nodiscard]] auto make_greedy_prover() -> std::unique_ptr<ProverStrategy>;
    /// Reads "q <var>", "f <var>", "state", "quit" from `in`; prints the state before each move.
    [[nodiscard]] auto make_interactive_prover(std::istream & in, std::ostream & out) -> std::unique_ptr<ProverStrategy>;
    /// Plays the given moves in order, then stops.
    [[nodiscard]] auto make_scripted_prover(std::vector<Move> moves) -> std::unique_ptr<ProverStrategy>;
    /// Clique-game Prover that keeps driving indices up to `threshold` bits and, when memory is
    /// full, forgets a bit of a fixed-size index so that it has to be fixed again.
    [[nodiscard]] auto make_fixation_cycler(const VarMap & m, unsigned threshold, std::uint64_t seed) -> std::unique_ptr<ProverStrategy>;

    [[nodiscard]] auto make_random_adversary(std::uint64_t seed) -> std::unique_ptr<AdversaryStrategy>;
    [[nodiscard]] auto make_constant_adversary(bool value) -> std::unique_ptr<AdversaryStrategy>;
    /// Answers along a fixed total assignment.
    [[nodiscard]] auto make_assignment_adversary(Assignment a) -> std::unique_ptr<AdversaryStrategy>;
}
