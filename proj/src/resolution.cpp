#include "ramsey/resolution.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace ramsey
{
    namespace
    {
        // nullopt when a clash other than the pivot remains
        auto resolve_on(const Clause & pos, const Clause & neg, Var pivot) -> std::optional<Clause>
        {
            std::vector<Literal> lits;
            for (auto l : pos)
                if (l.var != pivot)
                    lits.push_back(l);
            for (auto l : neg)
                if (l.var != pivot)
                    lits.push_back(l);
            return Clause::make(std::move(lits));
        }

        // the unique clashing variable of two clauses, if exactly one
        auto single_clash(const Clause & a, const Clause & b) -> std::optional<Var>
        {
            std::optional<Var> clash;
            auto i = a.begin(), j = b.begin();
            while (i != a.end() && j != b.end()) {
                if (i->var < j->var)
                    ++i;
                else if (j->var < i->var)
                    ++j;
                else {
                    if (i->positive != j->positive) {
                        if (clash)
                            return std::nullopt;
                        clash = i->var;
                    }
                    ++i;
                    ++j;
                }
            }
            return clash;
        }
    }

    auto size_width_exponent(std::size_t width, std::size_t formula_width, Var vars) -> double
    {
        if (vars == 0 || width <= formula_width)
            return 0.0;
        auto d = static_cast<double>(width - formula_width);
        return d * d / vars;
    }

    auto check_refutation(const Cnf & c, const Refutation & r) -> RefutationCheck
    {
        RefutationCheck result;
        auto fail = [&](std::size_t step, std::string msg) {
            result.failure = RefutationFailure{step, std::move(msg)};
            return result;
        };
        if (r.steps.empty())
            return fail(0, "refutation has no steps");

        std::size_t width = 0;
        for (std::size_t i = 0; i < r.steps.size(); ++i) {
            const auto & s = r.steps[i];
            if (s.kind == Step::Kind::axiom) {
                if (s.axiom >= c.clauses.size())
                    return fail(i, "axiom index " + std::to_string(s.axiom) + " out of range (" + std::to_string(c.clauses.size()) + " clauses)");
                result.derived.push_back(c.clauses[s.axiom]);
            }
            else {
                if (s.a >= i || s.b >= i)
                    return fail(i, "parent step not strictly earlier");
                const auto & pa = result.derived[s.a];
                const auto & pb = result.derived[s.b];
                if (pa.polarity(s.pivot) != std::optional(true))
                    return fail(i, "pivot " + std::to_string(s.pivot) + " not positive in step " + std::to_string(s.a));
                if (pb.polarity(s.pivot) != std::optional(false))
                    return fail(i, "pivot " + std::to_string(s.pivot) + " not negative in step " + std::to_string(s.b));
                auto clause = resolve_on(pa, pb, s.pivot);
                if (! clause)
                    return fail(i, "resolvent on " + std::to_string(s.pivot) + " keeps a complementary pair");
                result.derived.push_back(std::move(*clause));
            }
            width = std::max(width, result.derived.back().width());
        }
        if (! result.derived.back().empty())
            return fail(r.steps.size() - 1, "final clause " + result.derived.back().to_string() + " is not empty");

        WidthReport w;
        w.width = width;
        w.formula_width = c.width();
        w.vars = c.num_vars;
        w.size = r.steps.size();
        w.exponent = size_width_exponent(w.width, w.formula_width, w.vars);
        result.report = w;
        return result;
    }

    auto size_width_bound(const WidthReport & w) -> SizeWidthBound
    {
        SizeWidthBound b;
        b.report = w;
        b.exponent = size_width_exponent(w.width, w.formula_width, w.vars);
        std::ostringstream text;
        text << "L >= 2^Omega((W - k)^2 / m) with W=" << w.width << " k=" << w.formula_width << " m=" << w.vars << ": exponent " << b.exponent
             << " (asymptotic shape only, constant unknown; observed L=" << w.size << ")";
        b.rendered = text.str();
        return b;
    }

    auto width_report_json(const WidthReport & w) -> nlohmann::ordered_json
    {
        nlohmann::ordered_json j;
        j["width"] = w.width;
        j["formula_width"] = w.formula_width;
        j["vars"] = w.vars;
        j["size"] = w.size;
        j["exponent"] = w.exponent;
        return j;
    }

    auto saturate(const Cnf & c, std::size_t w, std::size_t budget) -> Saturation
    {
        Saturation sat;
        sat.width = w;
        std::set<Clause> seen;
        auto add = [&](const Clause & clause, Step origin) {
            if (! seen.insert(clause).second)
                return;
            sat.clauses.push_back(clause);
            sat.origin.push_back(origin);
            if (clause.empty())
                sat.refuted = true;
        };
        for (std::size_t i = 0; i < c.clauses.size() && ! sat.refuted; ++i)
            if (c.clauses[i].width() <= w)
                add(c.clauses[i], Step::input(i));

        std::size_t fresh = 0;
        while (! sat.refuted && fresh < sat.clauses.size()) {
            ++sat.rounds;
            auto end = sat.clauses.size();
            for (std::size_t j = fresh; j < end && ! sat.refuted; ++j)
                for (std::size_t i = 0; i < j && ! sat.refuted; ++i) {
                    auto pivot = single_clash(sat.clauses[i], sat.clauses[j]);
                    if (! pivot)
                        continue;
                    bool i_pos = *sat.clauses[i].polarity(*pivot);
                    auto pos = i_pos ? i : j, neg = i_pos ? j : i;
                    auto clause = resolve_on(sat.clauses[pos], sat.clauses[neg], *pivot);
                    if (clause && clause->width() <= w)
                        add(*clause, Step::resolve(pos, neg, *pivot));
                    if (sat.clauses.size() > budget) {
                        sat.budget_exceeded = true;
                        return sat;
                    }
                }
            fresh = end;
        }
        return sat;
    }

    auto width_status_name(WidthStatus s) -> std::string
    {
        switch (s) {
        case WidthStatus::refuted: return "refuted";
        case WidthStatus::not_within_bound: return "not-within-bound";
        case WidthStatus::budget_exceeded: return "budget-exceeded";
        }
        return "unknown";
    }

    namespace
    {
        auto extract(const Saturation & sat) -> Refutation
        {
            auto target = static_cast<std::size_t>(std::find_if(sat.clauses.begin(), sat.clauses.end(), [](const Clause & c) { return c.empty(); }) -
                sat.clauses.begin());
            std::vector<char> needed(sat.clauses.size(), 0);
            std::vector<std::size_t> stack{target};
            while (! stack.empty()) {
                auto i = stack.back();
                stack.pop_back();
                if (needed[i])
                    continue;
                needed[i] = 1;
                if (sat.origin[i].kind == Step::Kind::resolvent) {
                    stack.push_back(sat.origin[i].a);
                    stack.push_back(sat.origin[i].b);
                }
            }
            Refutation r;
            std::vector<std::size_t> renumber(sat.clauses.size(), 0);
            for (std::size_t i = 0; i <= target; ++i) {
                if (! needed[i])
                    continue;
                auto s = sat.origin[i];
                if (s.kind == Step::Kind::resolvent) {
                    s.a = renumber[s.a];
                    s.b = renumber[s.b];
                }
                renumber[i] = r.steps.size();
                r.steps.push_back(s);
            }
            return r;
        }
    }

    auto width_oracle(const Cnf & c, std::size_t w_max, std::size_t budget) -> WidthOracleResult
    {
        if (c.num_vars > width_oracle_var_guard)
            throw CnfError("width oracle limited to " + std::to_string(width_oracle_var_guard) + " variables");
        WidthOracleResult result;
        for (std::size_t w = 0; w <= w_max; ++w) {
            auto sat = saturate(c, w, budget);
            result.width = w;
            result.closure_size = sat.clauses.size();
            if (sat.refuted) {
                result.status = WidthStatus::refuted;
                result.refutation = extract(sat);
                return result;
            }
            if (sat.budget_exceeded) {
                result.status = WidthStatus::budget_exceeded;
                return result;
            }
        }
        result.status = WidthStatus::not_within_bound;
        return result;
    }

    namespace
    {
        class DecisionTree
        {
        public:
            explicit DecisionTree(const Cnf & c) :
                _cnf(c), _occurs(static_cast<std::size_t>(c.num_vars) + 1), _falsified(c.clauses.size(), 0), _value(static_cast<std::size_t>(c.num_vars) + 1, 0)
            {
                for (std::size_t i = 0; i < c.clauses.size(); ++i)
                    for (auto l : c.clauses[i])
                        _occurs[l.var].push_back({i, l.positive});
            }

            auto run() -> TreelikeResult
            {
                TreelikeResult result;
                std::optional<std::size_t> hint;
                for (std::size_t i = 0; i < _cnf.clauses.size() && ! hint; ++i)
                    if (_cnf.clauses[i].empty())
                        hint = i;
                auto root = node(1, hint);
                if (! root) {
                    result.satisfying = _model;
                    return result;
                }
                result.refutation = std::move(_refutation);
                return result;
            }

        private:
            struct Occurrence
            {
                std::size_t clause;
                bool positive;
            };

            auto axiom(std::size_t idx) -> std::size_t
            {
                if (auto it = _axiom_step.find(idx); it != _axiom_step.end())
                    return it->second;
                _axiom_step[idx] = _refutation.steps.size();
                _refutation.steps.push_back(Step::input(idx));
                _clauses.push_back(_cnf.clauses[idx]);
                return _refutation.steps.size() - 1;
            }

            auto set(Var v, bool value) -> std::optional<std::size_t>
            {
                _value[v] = value;
                std::optional<std::size_t> hit;
                for (auto o : _occurs[v])
                    if (o.positive != value && ++_falsified[o.clause] == _cnf.clauses[o.clause].width() && ! hit)
                        hit = o.clause;
                return hit;
            }

            void unset(Var v)
            {
                for (auto o : _occurs[v])
                    if (o.positive != _value[v])
                        --_falsified[o.clause];
            }

            // step index of a clause falsified by the current partial assignment of 1..v-1
            auto node(Var v, std::optional<std::size_t> falsified) -> std::optional<std::size_t>
            {
                if (falsified)
                    return axiom(*falsified);
                if (v > _cnf.num_vars) {
                    _model.assign(static_cast<std::size_t>(_cnf.num_vars) + 1, false);
                    for (Var u = 1; u <= _cnf.num_vars; ++u)
                        _model[u] = _value[u];
                    return std::nullopt;
                }
                std::size_t child[2];
                for (int branch = 0; branch < 2; ++branch) {
                    auto hit = set(v, branch == 1);
                    auto sub = node(v + 1, hit);
                    unset(v);
                    if (! sub)
                        return std::nullopt;
                    if (! _clauses[*sub].polarity(v))
                        return sub;
                    child[branch] = *sub;
                }
                // v = 0 falsifies a clause holding v positively
                _refutation.steps.push_back(Step::resolve(child[0], child[1], v));
                _clauses.push_back(*resolve_on(_clauses[child[0]], _clauses[child[1]], v));
                return _refutation.steps.size() - 1;
            }

            const Cnf & _cnf;
            std::vector<std::vector<Occurrence>> _occurs;
            std::vector<std::size_t> _falsified;
            std::vector<bool> _value;
            Refutation _refutation;
            std::vector<Clause> _clauses;
            std::map<std::size_t, std::size_t> _axiom_step;
            Assignment _model;
        };
    }

    auto treelike_bruteforce(const Cnf & c, Var guard) -> TreelikeResult
    {
        if (c.num_vars > guard)
            throw CnfError("treelike search limited to " + std::to_string(guard) + " variables, formula has " + std::to_string(c.num_vars));
        return DecisionTree(c).run();
    }

    void write_refutation(std::ostream & out, const Refutation & r)
    {
        for (const auto & s : r.steps) {
            if (s.kind == Step::Kind::axiom)
                out << "a " << s.axiom << '\n';
            else
                out << "r " << s.a << ' ' << s.b << ' ' << s.pivot << '\n';
        }
    }

    auto parse_refutation(std::istream & in) -> Refutation
    {
        Refutation r;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            std::istringstream words(line);
            std::string tag;
            if (! (words >> tag) || tag[0] == '#')
                continue;
            auto bad = [&] { return CnfError("refutation line " + std::to_string(lineno) + ": cannot parse '" + line + "'"); };
            if (tag == "a") {
                long long idx = -1;
                if (! (words >> idx) || idx < 0)
                    throw bad();
                r.steps.push_back(Step::input(static_cast<std::size_t>(idx)));
            }
            else if (tag == "r") {
                long long a = -1, b = -1, pivot = 0;
                if (! (words >> a >> b >> pivot) || a < 0 || b < 0 || pivot <= 0)
                    throw bad();
                r.steps.push_back(Step::resolve(static_cast<std::size_t>(a), static_cast<std::size_t>(b), static_cast<Var>(pivot)));
            }
            else
                throw bad();
            std::string extra;
            if (words >> extra)
                throw bad();
        }
        return r;
    }

    namespace
    {
        class RefutationProver final : public ProverStrategy
        {
        public:
            RefutationProver(Refutation r, std::vector<Clause> clauses) : _r(std::move(r)), _clauses(std::move(clauses)), _current(_r.steps.size() - 1) { }

            auto name() const -> std::string override { return "refutation"; }

            auto next(const GameState & state) -> std::optional<Move> override
            {
                if (_awaiting) {
                    const auto & s = _r.steps[_current];
                    auto answer = state.memory.value(s.pivot);
                    if (! answer)
                        return std::nullopt;
                    // x = 1 falsifies the parent holding not-x
                    _current = *answer ? s.b : s.a;
                    _awaiting = false;
                }
                const auto & clause = _clauses[_current];
                for (auto v : state.memory.stored())
                    if (! clause.polarity(v))
                        return Move::forget(v);
                const auto & s = _r.steps[_current];
                if (s.kind == Step::Kind::axiom)
                    return std::nullopt;
                _awaiting = true;
                return Move::query(s.pivot);
            }

        private:
            Refutation _r;
            std::vector<Clause> _clauses;
            std::size_t _current;
            bool _awaiting = false;
        };
    }

    auto prover_from_refutation(const Cnf & c, const Refutation & r) -> std::unique_ptr<ProverStrategy>
    {
        auto check = check_refutation(c, r);
        if (! check.ok())
            throw CnfError("invalid refutation at step " + std::to_string(check.failure->step) + ": " + check.failure->message);
        return std::make_unique<RefutationProver>(r, std::move(check.derived));
    }
}
