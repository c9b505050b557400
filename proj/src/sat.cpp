#include "ramsey/sat.hpp"

#include <algorithm>
#include <vector>

namespace ramsey
{
    namespace
    {
        using Lit = std::uint32_t;
        constexpr std::uint32_t no_reason = UINT32_MAX;
        constexpr std::uint8_t unassigned = 2;

        auto make_lit(Literal l) -> Lit { return 2 * l.var + (l.positive ? 0U : 1U); }
        auto var_of(Lit l) -> Var { return l >> 1; }

        auto luby(std::uint64_t i) -> std::uint64_t
        {
            // i >= 1
            std::uint64_t size = 1, seq = 0, x = i - 1;
            while (size < x + 1) {
                ++seq;
                size = 2 * size + 1;
            }
            while (size - 1 != x) {
                size = (size - 1) >> 1;
                --seq;
                x = x % size;
            }
            return std::uint64_t{1} << seq;
        }

        class Solver
        {
        public:
            explicit Solver(const Cnf & cnf) :
                _n(cnf.num_vars),
                _watches(2 * (static_cast<std::size_t>(_n) + 1)),
                _value(static_cast<std::size_t>(_n) + 1, unassigned),
                _level(static_cast<std::size_t>(_n) + 1, 0),
                _reason(static_cast<std::size_t>(_n) + 1, no_reason),
                _activity(static_cast<std::size_t>(_n) + 1, 0.0),
                _phase(static_cast<std::size_t>(_n) + 1, 0),
                _seen(static_cast<std::size_t>(_n) + 1, 0)
            {
                for (const auto & clause : cnf.clauses) {
                    if (_inconsistent)
                        break;
                    std::vector<Lit> lits;
                    for (auto l : clause)
                        lits.push_back(make_lit(l));
                    add_input(std::move(lits));
                }
            }

            auto run(const SatLimits & limits) -> SatResult
            {
                SatResult result;
                auto deadline = limits.time_limit ? std::optional(std::chrono::steady_clock::now() + *limits.time_limit) : std::nullopt;
                if (_inconsistent || propagate() != no_reason) {
                    result.status = SatStatus::unsat;
                    return finish(result);
                }
                std::uint64_t restart_count = 1, conflicts_since_restart = 0;
                while (true) {
                    auto confl = propagate();
                    if (confl != no_reason) {
                        ++_conflicts;
                        ++conflicts_since_restart;
                        if (decision_level() == 0) {
                            result.status = SatStatus::unsat;
                            return finish(result);
                        }
                        learn(confl);
                        decay();
                        if (limits.max_conflicts && _conflicts >= *limits.max_conflicts)
                            return finish(result);
                        if (deadline && (_conflicts & 63) == 0 && std::chrono::steady_clock::now() > *deadline)
                            return finish(result);
                        if (conflicts_since_restart >= 100 * luby(restart_count)) {
                            ++restart_count;
                            conflicts_since_restart = 0;
                            backtrack(0);
                        }
                        continue;
                    }
                    auto next = pick_branch();
                    if (next == 0) {
                        result.status = SatStatus::sat;
                        result.model.assign(static_cast<std::size_t>(_n) + 1, false);
                        for (Var v = 1; v <= _n; ++v)
                            result.model[v] = _value[v] == 1;
                        return finish(result);
                    }
                    if (deadline && (_decisions & 255) == 0 && std::chrono::steady_clock::now() > *deadline)
                        return finish(result);
                    ++_decisions;
                    _trail_lim.push_back(_trail.size());
                    assign(2 * next + (_phase[next] ? 0U : 1U), no_reason);
                }
            }

        private:
            auto finish(SatResult & r) -> SatResult
            {
                r.conflicts = _conflicts;
                r.decisions = _decisions;
                r.propagations = _propagations;
                return std::move(r);
            }

            auto lit_value(Lit l) const -> std::uint8_t
            {
                auto v = _value[var_of(l)];
                if (v == unassigned)
                    return unassigned;
                return static_cast<std::uint8_t>(v ^ (l & 1U));
            }

            auto decision_level() const -> std::uint32_t { return static_cast<std::uint32_t>(_trail_lim.size()); }

            void assign(Lit l, std::uint32_t reason)
            {
                auto v = var_of(l);
                _value[v] = static_cast<std::uint8_t>((l & 1U) ^ 1U);
                _level[v] = decision_level();
                _reason[v] = reason;
                _trail.push_back(l);
            }

            void add_input(std::vector<Lit> lits)
            {
                if (lits.empty()) {
                    _inconsistent = true;
                    return;
                }
                if (lits.size() == 1) {
                    auto val = lit_value(lits[0]);
                    if (val == 0)
                        _inconsistent = true;
                    else if (val == unassigned)
                        assign(lits[0], no_reason);
                    return;
                }
                attach(std::move(lits));
            }

            auto attach(std::vector<Lit> lits) -> std::uint32_t
            {
                auto idx = static_cast<std::uint32_t>(_clauses.size());
                _watches[lits[0]].push_back(idx);
                _watches[lits[1]].push_back(idx);
                _clauses.push_back(std::move(lits));
                return idx;
            }

            auto propagate() -> std::uint32_t
            {
                while (_qhead < _trail.size()) {
                    Lit p = _trail[_qhead++];
                    Lit false_lit = p ^ 1U;
                    ++_propagations;
                    auto & ws = _watches[false_lit];
                    std::size_t i = 0, j = 0;
                    while (i < ws.size()) {
                        auto ci = ws[i++];
                        auto & c = _clauses[ci];
                        if (c[0] == false_lit)
                            std::swap(c[0], c[1]);
                        if (lit_value(c[0]) == 1) {
                            ws[j++] = ci;
                            continue;
                        }
                        bool moved = false;
                        for (std::size_t k = 2; k < c.size(); ++k)
                            if (lit_value(c[k]) != 0) {
                                std::swap(c[1], c[k]);
                                _watches[c[1]].push_back(ci);
                                moved = true;
                                break;
                            }
                        if (moved)
                            continue;
                        ws[j++] = ci;
                        if (lit_value(c[0]) == 0) {
                            while (i < ws.size())
                                ws[j++] = ws[i++];
                            ws.resize(j);
                            _qhead = _trail.size();
                            return ci;
                        }
                        assign(c[0], ci);
                    }
                    ws.resize(j);
                }
                return no_reason;
            }

            void bump(Var v)
            {
                if ((_activity[v] += _var_inc) > 1e100) {
                    for (auto & a : _activity)
                        a *= 1e-100;
                    _var_inc *= 1e-100;
                }
            }

            void decay() { _var_inc /= 0.95; }

            void learn(std::uint32_t confl)
            {
                std::vector<Lit> learnt{0};
                int path = 0;
                Lit p = 0;
                bool have_p = false;
                auto idx = _trail.size();
                do {
                    const auto & c = _clauses[confl];
                    for (std::size_t j = have_p ? 1 : 0; j < c.size(); ++j) {
                        auto v = var_of(c[j]);
                        if (! _seen[v] && _level[v] > 0) {
                            _seen[v] = 1;
                            bump(v);
                            if (_level[v] >= decision_level())
                                ++path;
                            else
                                learnt.push_back(c[j]);
                        }
                    }
                    while (! _seen[var_of(_trail[--idx])]) { }
                    p = _trail[idx];
                    have_p = true;
                    confl = _reason[var_of(p)];
                    _seen[var_of(p)] = 0;
                    --path;
                } while (path > 0);
                learnt[0] = p ^ 1U;

                std::uint32_t back_level = 0;
                if (learnt.size() > 1) {
                    std::size_t max_i = 1;
                    for (std::size_t i = 2; i < learnt.size(); ++i)
                        if (_level[var_of(learnt[i])] > _level[var_of(learnt[max_i])])
                            max_i = i;
                    std::swap(learnt[1], learnt[max_i]);
                    back_level = _level[var_of(learnt[1])];
                }
                for (auto l : learnt)
                    _seen[var_of(l)] = 0;

                backtrack(back_level);
                if (learnt.size() == 1)
                    assign(learnt[0], no_reason);
                else {
                    auto first = learnt[0];
                    auto ci = attach(std::move(learnt));
                    assign(first, ci);
                }
            }

            void backtrack(std::uint32_t level)
            {
                if (decision_level() <= level)
                    return;
                auto stop = _trail_lim[level];
                for (auto i = _trail.size(); i > stop; --i) {
                    auto v = var_of(_trail[i - 1]);
                    _phase[v] = _value[v];
                    _value[v] = unassigned;
                    _reason[v] = no_reason;
                }
                _trail.resize(stop);
                _trail_lim.resize(level);
                _qhead = std::min(_qhead, _trail.size());
            }

            auto pick_branch() const -> Var
            {
                Var best = 0;
                double best_act = -1.0;
                for (Var v = 1; v <= _n; ++v)
                    if (_value[v] == unassigned && _activity[v] > best_act) {
                        best = v;
                        best_act = _activity[v];
                    }
                return best;
            }

            Var _n;
            std::vector<std::vector<Lit>> _clauses;
            std::vector<std::vector<std::uint32_t>> _watches;
            std::vector<std::uint8_t> _value;
            std::vector<std::uint32_t> _level;
            std::vector<std::uint32_t> _reason;
            std::vector<double> _activity;
            std::vector<std::uint8_t> _phase;
            std::vector<std::uint8_t> _seen;
            std::vector<Lit> _trail;
            std::vector<std::size_t> _trail_lim;
            std::size_t _qhead = 0;
            double _var_inc = 1.0;
            bool _inconsistent = false;
            std::uint64_t _conflicts = 0, _decisions = 0, _propagations = 0;
        };
    }

    auto sat_status_name(SatStatus s) -> std::string
    {
        switch (s) {
        case SatStatus::sat: return "SAT";
        case SatStatus::unsat: return "UNSAT";
        case SatStatus::unknown: return "UNKNOWN";
        }
        return "UNKNOWN";
    }

    auto solve_cnf(const Cnf & cnf, const SatLimits & limits) -> SatResult
    {
        Solver solver(cnf);
        auto result = solver.run(limits);
        if (result.status == SatStatus::sat && ! satisfies(cnf, result.model))
            throw std::logic_error("solver produced a model that falsifies a clause");
        return result;
    }
}
