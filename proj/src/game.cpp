#include "ramsey/game.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace ramsey
{
    auto Memory::stored() const -> std::vector<Var>
    {
        std::vector<Var> result;
        for (Var v = 1; v < _values.size(); ++v)
            if (_values[v] >= 0)
                result.push_back(v);
        return result;
    }

    void Memory::store(Var v, bool value)
    {
        if (v == 0 || v >= _values.size())
            throw std::out_of_range("variable outside memory range");
        if (_values[v] < 0)
            ++_count;
        _values[v] = value ? 1 : 0;
    }

    void Memory::forget(Var v)
    {
        if (contains(v)) {
            _values[v] = -1;
            --_count;
        }
    }

    CnfFormula::CnfFormula(Cnf cnf, std::optional<VarMap> map, std::optional<Graph> g) :
        _cnf(std::move(cnf)), _map(std::move(map)), _graph(std::move(g)), _occurs(static_cast<std::size_t>(_cnf.num_vars) + 1)
    {
        for (std::uint32_t idx = 0; idx < _cnf.clauses.size(); ++idx)
            for (auto lit : _cnf.clauses[idx])
                _occurs[lit.var].push_back(idx);
    }

    auto CnfFormula::has_empty_clause() const -> bool
    {
        return std::any_of(_cnf.clauses.begin(), _cnf.clauses.end(), [](const Clause & c) { return c.empty(); });
    }

    auto CnfFormula::falsified_clause(const Memory & memory, Var touched) const -> std::optional<Clause>
    {
        if (touched == 0 || touched >= _occurs.size())
            return std::nullopt;
        for (auto idx : _occurs[touched]) {
            const auto & clause = _cnf.clauses[idx];
            if (std::all_of(clause.begin(), clause.end(), [&](Literal l) { return memory.falsifies(l); }))
                return clause;
        }
        return std::nullopt;
    }

    auto CnfFormula::pressure(const Memory & memory) const -> std::vector<double>
    {
        std::vector<double> result(static_cast<std::size_t>(_cnf.num_vars) + 1, 0.0);
        for (const auto & clause : _cnf.clauses) {
            if (std::any_of(clause.begin(), clause.end(), [&](Literal l) { return memory.satisfies(l); }))
                continue;
            auto unassigned = std::count_if(clause.begin(), clause.end(), [&](Literal l) { return ! memory.contains(l.var); });
            auto weight = std::ldexp(1.0, -static_cast<int>(std::max<std::ptrdiff_t>(unassigned, 1) - 1));
            for (auto lit : clause)
                result[lit.var] += weight;
        }
        return result;
    }

    CliqueFormula::CliqueFormula(Graph g, unsigned s) : _graph(std::move(g)), _map(Encoding::clique, _graph.bits(), s)
    {
        if (s < 2)
            throw CnfError("clique formula needs at least two indices");
    }

    auto CliqueFormula::falsified_clause(const Memory & memory, Var touched) const -> std::optional<Clause>
    {
        if (touched == 0 || touched > _map.num_vars())
            return std::nullopt;
        const auto k = _map.bits();
        auto full_vertex = [&](unsigned i) -> std::optional<VertexId> {
            auto p = index_pattern(memory, _map, i);
            if (p.size() != k)
                return std::nullopt;
            return p.value_mask();
        };
        const auto i = _map.slot(touched).index;
        auto u = full_vertex(i);
        if (! u)
            return std::nullopt;
        for (unsigned j = 1; j <= _map.indices(); ++j) {
            if (j == i)
                continue;
            auto w = full_vertex(j);
            if (! w || (*u != *w && _graph.adjacent(*u, *w)))
                continue;
            std::vector<Literal> lits;
            for (unsigned b = 1; b <= k; ++b) {
                lits.push_back({_map.x(i, b), ! vertex_bit(*u, k, b)});
                lits.push_back({_map.x(j, b), ! vertex_bit(*w, k, b)});
            }
            return Clause(std::move(lits));
        }
        return std::nullopt;
    }

    auto CliqueFormula::bad_pairs(const Pattern & a, const Pattern & b) const -> double
    {
        // ordered (u, w) in C_a x C_b with u == w or {u, w} a non-edge
        auto key = (std::uint64_t{a.care_mask()} << 48) ^ (std::uint64_t{a.value_mask()} << 32) ^ (std::uint64_t{b.care_mask()} << 16) ^ b.value_mask();
        {
            std::lock_guard lock(_cache_mutex);
            if (auto it = _bad_pair_cache.find(key); it != _bad_pair_cache.end())
                return it->second;
        }
        auto ca = consistent_set(_graph, a), cb = consistent_set(_graph, b);
        auto bad = static_cast<double>(ca.size()) * static_cast<double>(cb.size()) - static_cast<double>(edge_count(_graph, ca, cb));
        std::lock_guard lock(_cache_mutex);
        _bad_pair_cache.emplace(key, bad);
        return bad;
    }

    auto CliqueFormula::pressure(const Memory & memory) const -> std::vector<double>
    {
        const auto s = _map.indices(), k = _map.bits();
        auto view = clique_game_view(memory, _map);
        std::vector<double> score(s + 1, 0.0);
        for (unsigned i = 1; i <= s; ++i)
            for (unsigned j = i + 1; j <= s; ++j) {
                auto bad = bad_pairs(view[i - 1], view[j - 1]);
                if (bad == 0.0)
                    continue;
                int unassigned = static_cast<int>(2 * k - view[i - 1].size() - view[j - 1].size());
                auto weight = bad * std::ldexp(1.0, -(std::max(unassigned, 1) - 1));
                score[i] += weight;
                score[j] += weight;
            }
        std::vector<double> result(static_cast<std::size_t>(_map.num_vars()) + 1, 0.0);
        for (Var v = 1; v <= _map.num_vars(); ++v)
            result[v] = score[_map.slot(v).index];
        return result;
    }

    auto index_pattern(const Memory & memory, const VarMap & m, unsigned i) -> Pattern
    {
        if (m.kind() == Encoding::unary)
            throw CnfError("pattern views need a binary variable map");
        Pattern p(m.bits());
        for (unsigned b = 1; b <= m.bits(); ++b)
            if (auto value = memory.value(m.x(i, b)))
                p.set(b, *value);
        return p;
    }

    auto clique_game_view(const Memory & memory, const VarMap & m) -> std::vector<Pattern>
    {
        std::vector<Pattern> result;
        for (unsigned i = 1; i <= m.indices(); ++i)
            result.push_back(index_pattern(memory, m, i));
        return result;
    }

    auto outcome_name(Outcome o) -> std::string
    {
        switch (o) {
        case Outcome::prover_won: return "prover-won";
        case Outcome::adversary_survived: return "adversary-survived";
        case Outcome::adversary_resigned: return "adversary-resigned";
        case Outcome::prover_stopped: return "prover-stopped";
        case Outcome::prover_forfeit: return "prover-forfeit";
        }
        return "unknown";
    }

    auto play(const Formula & formula, ProverStrategy & prover, AdversaryStrategy & adversary, unsigned capacity, std::uint64_t max_moves,
        const MoveObserver & observer) -> Transcript
    {
        if (capacity < 1)
            throw std::invalid_argument("memory capacity must be at least 1");
        Transcript t;
        t.prover = prover.name();
        t.adversary = adversary.name();
        t.capacity = capacity;
        t.max_moves = max_moves;

        GameState state{&formula, Memory(formula.num_vars()), capacity, 0};
        if (formula.has_empty_clause()) {
            t.outcome = Outcome::prover_won;
            t.falsified = Clause{};
            return t;
        }

        t.outcome = Outcome::adversary_survived;
        while (state.moves < max_moves) {
            auto move = prover.next(state);
            if (! move) {
                t.outcome = Outcome::prover_stopped;
                break;
            }
            MoveRecord record{*move, std::nullopt, 0};
            if (move->var == 0 || move->var > formula.num_vars()) {
                t.outcome = Outcome::prover_forfeit;
                t.forfeit_reason = "variable " + std::to_string(move->var) + " does not exist";
                break;
            }
            if (move->kind == Move::Kind::query) {
                if (state.memory.contains(move->var)) {
                    t.outcome = Outcome::prover_forfeit;
                    t.forfeit_reason = "query of variable " + std::to_string(move->var) + " already in memory";
                    break;
                }
                if (state.memory.size() >= capacity) {
                    t.outcome = Outcome::prover_forfeit;
                    t.forfeit_reason = "query with full memory (" + std::to_string(capacity) + " locations)";
                    break;
                }
                auto reply = adversary.answer(state, move->var);
                if (reply.resignation) {
                    t.outcome = Outcome::adversary_resigned;
                    t.resignation = std::move(reply.resignation);
                    break;
                }
                state.memory.store(move->var, reply.value);
                record.answer = reply.value;
            }
            else {
                if (! state.memory.contains(move->var)) {
                    t.outcome = Outcome::prover_forfeit;
                    t.forfeit_reason = "forget of variable " + std::to_string(move->var) + " not in memory";
                    break;
                }
                state.memory.forget(move->var);
                adversary.forgotten(state, move->var);
            }
            ++state.moves;
            if (state.memory.size() > capacity)
                throw std::logic_error("memory bound exceeded");
            record.memory_after = state.memory.size();
            t.high_water = std::max(t.high_water, state.memory.size());
            t.moves.push_back(record);
            if (observer)
                observer(state, record);
            if (record.answer) {
                if (auto clause = formula.falsified_clause(state.memory, move->var)) {
                    t.outcome = Outcome::prover_won;
                    t.falsified = std::move(clause);
                    break;
                }
            }
        }
        return t;
    }

    void write_transcript(std::ostream & out, const Transcript & t)
    {
        for (const auto & r : t.moves) {
            nlohmann::ordered_json j;
            j["move"] = r.move.kind == Move::Kind::query ? "q" : "f";
            j["var"] = r.move.var;
            if (r.answer)
                j["answer"] = *r.answer ? 1 : 0;
            j["memory"] = r.memory_after;
            out << j.dump() << '\n';
        }
        nlohmann::ordered_json end;
        end["outcome"] = outcome_name(t.outcome);
        end["prover"] = t.prover;
        end["adversary"] = t.adversary;
        end["capacity"] = t.capacity;
        end["max_moves"] = t.max_moves;
        end["moves"] = t.moves.size();
        end["high_water"] = t.high_water;
        if (t.outcome == Outcome::adversary_survived)
            end["note"] = "survived the move cap; not a proof that the Adversary wins forever";
        if (t.falsified)
            end["falsified"] = t.falsified->to_string();
        if (t.resignation) {
            end["resignation"] = t.resignation->condition;
            end["diagnostics"] = t.resignation->details;
        }
        if (! t.forfeit_reason.empty())
            end["forfeit"] = t.forfeit_reason;
        out << end.dump() << '\n';
    }

    auto transcript_jsonl(const Transcript & t) -> std::string
    {
        std::ostringstream out;
        write_transcript(out, t);
        return out.str();
    }

    auto read_transcript_moves(std::istream & in) -> std::vector<Move>
    {
        std::vector<Move> moves;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty())
                continue;
            auto j = nlohmann::json::parse(line);
            if (! j.contains("move"))
                continue;
            auto var = j.at("var").get<Var>();
            moves.push_back(j.at("move") == "q" ? Move::query(var) : Move::forget(var));
        }
        return moves;
    }

    namespace
    {
        auto unassigned_vars(const GameState & state) -> std::vector<Var>
        {
            std::vector<Var> result;
            for (Var v = 1; v <= state.formula->num_vars(); ++v)
                if (! state.memory.contains(v))
                    result.push_back(v);
            return result;
        }

        class RandomProver final : public ProverStrategy
        {
        public:
            explicit RandomProver(std::uint64_t seed) : _rng(seed) { }
            auto name() const -> std::string override { return "random"; }
            auto next(const GameState & state) -> std::optional<Move> override
            {
                auto free = unassigned_vars(state);
                if (state.memory.size() >= state.capacity || free.empty()) {
                    auto stored = state.memory.stored();
                    if (stored.empty())
                        return std::nullopt;
                    return Move::forget(stored[uniform_below(_rng, stored.size())]);
                }
                return Move::query(free[uniform_below(_rng, free.size())]);
            }

        private:
            Rng _rng;
        };

        class GreedyProver final : public ProverStrategy
        {
        public:
            auto name() const -> std::string override { return "greedy"; }
            auto next(const GameState & state) -> std::optional<Move> override
            {
                auto pressure = state.formula->pressure(state.memory);
                auto free = unassigned_vars(state);
                if (state.memory.size() >= state.capacity || free.empty()) {
                    auto stored = state.memory.stored();
                    if (stored.empty())
                        return std::nullopt;
                    auto best = *std::min_element(stored.begin(), stored.end(), [&](Var a, Var b) { return pressure[a] < pressure[b]; });
                    return Move::forget(best);
                }
                auto best = *std::max_element(free.begin(), free.end(), [&](Var a, Var b) { return pressure[a] < pressure[b]; });
                return Move::query(best);
            }
        };

        class InteractiveProver final : public ProverStrategy
        {
        public:
            InteractiveProver(std::istream & in, std::ostream & out) : _in(in), _out(out) { }
            auto name() const -> std::string override { return "interactive"; }
            auto next(const GameState & state) -> std::optional<Move> override
            {
                print_state(state);
                std::string line;
                while (true) {
                    _out << "> " << std::flush;
                    if (! std::getline(_in, line))
                        return std::nullopt;
                    std::istringstream words(line);
                    std::string cmd;
                    if (! (words >> cmd))
                        continue;
                    if (cmd == "quit")
                        return std::nullopt;
                    if (cmd == "state") {
                        print_state(state);
                        continue;
                    }
                    long long var = 0;
                    if ((cmd == "q" || cmd == "f") && (words >> var) && var > 0)
                        return cmd == "q" ? Move::query(static_cast<Var>(var)) : Move::forget(static_cast<Var>(var));
                    _out << "commands: q <var>, f <var>, state, quit\n";
                }
            }

        private:
            void print_state(const GameState & state)
            {
                _out << "move " << state.moves << ", memory " << state.memory.size() << '/' << state.capacity << ':';
                for (auto v : state.memory.stored())
                    _out << ' ' << v << '=' << (*state.memory.value(v) ? 1 : 0);
                _out << '\n';
                if (const auto * m = state.formula->var_map(); m && m->kind() != Encoding::unary) {
                    auto view = clique_game_view(state.memory, *m);
                    for (unsigned i = 1; i <= view.size(); ++i)
                        _out << "  p^" << i << " = " << view[i - 1].to_string() << '\n';
                }
            }

            std::istream & _in;
            std::ostream & _out;
        };

        class ScriptedProver final : public ProverStrategy
        {
        public:
            explicit ScriptedProver(std::vector<Move> moves) : _moves(std::move(moves)) { }
            auto name() const -> std::string override { return "scripted"; }
            auto next(const GameState &) -> std::optional<Move> override
            {
                if (_pos >= _moves.size())
                    return std::nullopt;
                return _moves[_pos++];
            }

        private:
            std::vector<Move> _moves;
            std::size_t _pos = 0;
        };

        class FixationCycler final : public ProverStrategy
        {
        public:
            FixationCycler(const VarMap & m, unsigned threshold, std::uint64_t seed) : _map(m), _threshold(std::max(1U, threshold)), _rng(seed)
            {
                if (m.kind() == Encoding::unary)
                    throw CnfError("fixation cycler needs a binary variable map");
            }
            auto name() const -> std::string override { return "fixation-cycler"; }
            auto next(const GameState & state) -> std::optional<Move> override
            {
                auto view = clique_game_view(state.memory, _map);
                const auto s = _map.indices();
                if (state.memory.size() >= state.capacity) {
                    // unfix: drop one bit of a random index at or above the threshold
                    std::vector<unsigned> fixed, any;
                    for (unsigned i = 1; i <= s; ++i) {
                        if (view[i - 1].size() >= _threshold)
                            fixed.push_back(i);
                        if (view[i - 1].size() > 0)
                            any.push_back(i);
                    }
                    const auto & pool = fixed.empty() ? any : fixed;
                    auto i = pool[uniform_below(_rng, pool.size())];
                    return Move::forget(random_bit(view[i - 1], i, true));
                }
                // deepen the index closest to the threshold, else start a fresh one
                std::optional<unsigned> target;
                for (unsigned i = 1; i <= s; ++i) {
                    auto size = view[i - 1].size();
                    if (size < _threshold && size > 0 && (! target || size > view[*target - 1].size()))
                        target = i;
                }
                if (! target) {
                    std::vector<unsigned> open;
                    for (unsigned i = 1; i <= s; ++i)
                        if (view[i - 1].size() < _map.bits())
                            open.push_back(i);
                    if (open.empty())
                        return std::nullopt;
                    std::vector<unsigned> fresh;
                    for (auto i : open)
                        if (view[i - 1].size() == 0)
                            fresh.push_back(i);
                    const auto & pool = fresh.empty() ? open : fresh;
                    target = pool[uniform_below(_rng, pool.size())];
                }
                return Move::query(random_bit(view[*target - 1], *target, false));
            }

        private:
            auto random_bit(const Pattern & p, unsigned i, bool set) -> Var
            {
                std::vector<unsigned> bits;
                for (unsigned b = 1; b <= _map.bits(); ++b)
                    if ((p.at(b) != '*') == set)
                        bits.push_back(b);
                return _map.x(i, bits[uniform_below(_rng, bits.size())]);
            }

            VarMap _map;
            unsigned _threshold;
            Rng _rng;
        };

        class RandomAdversary final : public AdversaryStrategy
        {
        public:
            explicit RandomAdversary(std::uint64_t seed) : _rng(seed) { }
            auto name() const -> std::string override { return "random"; }
            auto answer(const GameState &, Var) -> AdversaryReply override { return {(_rng() & 1U) != 0, std::nullopt}; }

        private:
            Rng _rng;
        };

        class ConstantAdversary final : public AdversaryStrategy
        {
        public:
            explicit ConstantAdversary(bool value) : _value(value) { }
            auto name() const -> std::string override { return _value ? "always-1" : "always-0"; }
            auto answer(const GameState &, Var) -> AdversaryReply override { return {_value, std::nullopt}; }

        private:
            bool _value;
        };

        class AssignmentAdversary final : public AdversaryStrategy
        {
        public:
            explicit AssignmentAdversary(Assignment a) : _a(std::move(a)) { }
            auto name() const -> std::string override { return "assignment"; }
            auto answer(const GameState &, Var var) -> AdversaryReply override { return {var < _a.size() && _a[var], std::nullopt}; }

        private:
            Assignment _a;
        };
    }

    auto make_random_prover(std::uint64_t seed) -> std::unique_ptr<ProverStrategy> { return std::make_unique<RandomProver>(seed); }
    auto make_greedy_prover() -> std::unique_ptr<ProverStrategy> { return std::make_unique<GreedyProver>(); }
    auto make_interactive_prover(std::istream & in, std::ostream & out) -> std::unique_ptr<ProverStrategy>
    {
        return std::make_unique<InteractiveProver>(in, out);
    }
    auto make_scripted_prover(std::vector<Move> moves) -> std::unique_ptr<ProverStrategy> { return std::make_unique<ScriptedProver>(std::move(moves)); }
    auto make_fixation_cycler(const VarMap & m, unsigned threshold, std::uint64_t seed) -> std::unique_ptr<ProverStrategy>
    {
        return std::make_unique<FixationCycler>(m, threshold, seed);
    }

    auto make_random_adversary(std::uint64_t seed) -> std::unique_ptr<AdversaryStrategy> { return std::make_unique<RandomAdversary>(seed); }
    auto make_constant_adversary(bool value) -> std::unique_ptr<AdversaryStrategy> { return std::make_unique<ConstantAdversary>(value); }
    auto make_assignment_adversary(Assignment a) -> std::unique_ptr<AdversaryStrategy> { return std::make_unique<AssignmentAdversary>(std::move(a)); }
}
