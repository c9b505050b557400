#include "ramsey/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ramsey
{
    auto binary_entropy(double x) -> double
    {
        if (! (x >= 0.0 && x <= 1.0))
            throw std::domain_error("binary entropy needs 0 <= x <= 1");
        if (x == 0.0 || x == 1.0)
            return 0.0;
        return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
    }

    auto alpha_floor(double epsilon) -> double { return 4.0 / 3.0 * (epsilon + binary_entropy(epsilon)); }

    auto alpha_ceiling(double epsilon, double beta, double delta) -> double
    {
        return beta - 8.0 / 3.0 * epsilon - 4.0 / 3.0 * binary_entropy(epsilon) + 4.0 / 3.0 * epsilon * std::log2(delta);
    }

    auto star_holds(const ParamConfig & p) -> bool { return 0.75 * p.alpha > p.epsilon + binary_entropy(p.epsilon); }

    auto dagger_holds(const ParamConfig & p) -> bool
    {
        return p.beta - p.alpha > 8.0 / 3.0 * p.epsilon + 4.0 / 3.0 * binary_entropy(p.epsilon) - 4.0 / 3.0 * p.epsilon * std::log2(p.delta);
    }

    auto param_json(const ParamConfig & p) -> nlohmann::ordered_json
    {
        nlohmann::ordered_json j;
        j["epsilon"] = p.epsilon;
        j["alpha"] = p.alpha;
        j["beta"] = p.beta;
        j["delta"] = p.delta;
        j["s"] = p.s;
        j["star"] = star_holds(p);
        j["dagger"] = dagger_holds(p);
        return j;
    }

    auto solve_parameters(double beta, double delta) -> std::optional<ParameterChoice>
    {
        if (! (beta > 0.0 && beta < 1.0 && delta > 0.0 && delta < 1.0))
            throw std::domain_error("beta and delta must lie in (0, 1)");
        // keep a margin so the midpoint survives rounding as a strict inequality
        constexpr double margin = 1e-9;
        auto feasible = [&](double eps) { return alpha_ceiling(eps, beta, delta) - alpha_floor(eps) > margin; };
        const double lowest = std::ldexp(1.0, -20);

        double prev = 0.25;
        if (! feasible(prev)) {
            std::optional<double> found;
            for (double eps = prev * 0.9; eps >= lowest; prev = eps, eps *= 0.9)
                if (feasible(eps)) {
                    found = eps;
                    break;
                }
            if (! found && feasible(lowest))
                found = lowest;
            if (! found)
                return std::nullopt;
            double lo = *found, hi = prev;
            for (int iter = 0; iter < 60; ++iter) {
                auto mid = 0.5 * (lo + hi);
                (feasible(mid) ? lo : hi) = mid;
            }
            prev = lo;
        }
        ParameterChoice c;
        c.epsilon = prev;
        c.alpha = 0.5 * (alpha_floor(prev) + alpha_ceiling(prev, beta, delta));
        ParamConfig check{c.epsilon, c.alpha, beta, delta, 0};
        if (! star_holds(check) || ! dagger_holds(check) || c.alpha <= 0.0 || c.alpha >= 1.0)
            return std::nullopt;
        return c;
    }

    auto lemma23_threshold(unsigned k) -> unsigned { return std::max(1U, k / 3); }
    auto lemma23_memory(unsigned k) -> unsigned { return k * k / 9; }
    auto lemma34_threshold(double epsilon, unsigned k) -> unsigned
    {
        return std::max(1U, static_cast<unsigned>(std::ceil(epsilon * k - 1e-9)));
    }
    auto lemma34_memory(double epsilon, unsigned k) -> unsigned
    {
        return std::max(1U, static_cast<unsigned>(std::floor(epsilon * epsilon * k * k + 1e-9)));
    }

    namespace
    {
        auto require_map(const GameState & state) -> const VarMap &
        {
            const auto * m = state.formula->var_map();
            if (! m || m->kind() == Encoding::unary)
                throw std::invalid_argument("clique-game adversary needs a binary or clique formula");
            return *m;
        }

        auto vertex_list(const std::map<unsigned, VertexId> & fixed) -> std::vector<VertexId>
        {
            std::vector<VertexId> u;
            for (auto [i, v] : fixed)
                u.push_back(v);
            return u;
        }

        auto as_set(const Graph & g, const std::vector<VertexId> & vs) -> VertexSet
        {
            VertexSet s(g.order());
            for (auto v : vs)
                s.insert(v);
            return s;
        }

        auto fixed_json(const std::map<unsigned, VertexId> & fixed) -> nlohmann::ordered_json
        {
            auto j = nlohmann::ordered_json::array();
            for (auto [i, v] : fixed)
                j.push_back({{"index", i}, {"vertex", v}});
            return j;
        }

        class Lemma23Adversary final : public AdversaryStrategy
        {
        public:
            explicit Lemma23Adversary(const Graph & g) : _g(g), _t(lemma23_threshold(g.bits())) { }

            auto name() const -> std::string override { return "lemma23"; }

            auto answer(const GameState & state, Var var) -> AdversaryReply override
            {
                const auto & m = require_map(state);
                if (m.is_guard(var))
                    return {true, std::nullopt};
                auto [i, b] = m.slot(var);
                if (auto it = _fixed.find(i); it != _fixed.end())
                    return {vertex_bit(it->second, m.bits(), b), std::nullopt};
                auto p = index_pattern(state.memory, m, i);
                if (p.size() + 1 < _t)
                    return {false, std::nullopt};
                auto u = vertex_list(_fixed);
                auto x = consistent_set(_g, p) & common_neighbors(_g, as_set(_g, u));
                if (x.empty()) {
                    Resignation r;
                    r.condition = "no vertex consistent with p is adjacent to all of U";
                    r.details["index"] = i;
                    r.details["U"] = u;
                    r.details["p"] = p.to_string();
                    r.details["within_property_p_bounds"] = u.size() <= property_bound() && p.size() <= property_bound();
                    return {false, std::move(r)};
                }
                auto v = x.front();
                _fixed[i] = v;
                return {vertex_bit(v, m.bits(), b), std::nullopt};
            }

            void forgotten(const GameState & state, Var var) override
            {
                const auto & m = require_map(state);
                if (m.is_guard(var))
                    return;
                auto i = m.slot(var).index;
                if (_fixed.contains(i) && index_pattern(state.memory, m, i).size() < _t)
                    _fixed.erase(i);
            }

            auto check_invariants(const GameState & state) const -> std::optional<std::string> override
            {
                const auto & m = require_map(state);
                for (unsigned i = 1; i <= m.indices(); ++i) {
                    auto p = index_pattern(state.memory, m, i);
                    auto it = _fixed.find(i);
                    if ((p.size() >= _t) != (it != _fixed.end()))
                        return "index " + std::to_string(i) + " fixed status disagrees with |p| = " + std::to_string(p.size());
                    if (it != _fixed.end() && ! p.consistent_with(it->second))
                        return "fixed vertex of index " + std::to_string(i) + " inconsistent with " + p.to_string();
                }
                for (auto a = _fixed.begin(); a != _fixed.end(); ++a)
                    for (auto b = std::next(a); b != _fixed.end(); ++b)
                        if (! _g.adjacent(a->second, b->second))
                            return "fixed vertices " + std::to_string(a->second) + " and " + std::to_string(b->second) + " are not adjacent";
                return std::nullopt;
            }

        private:
            auto property_bound() const -> unsigned { return _g.bits() / 3; }

            const Graph & _g;
            unsigned _t;
            std::map<unsigned, VertexId> _fixed;
        };
    }

    auto make_lemma23_adversary(const Graph & g) -> std::unique_ptr<AdversaryStrategy> { return std::make_unique<Lemma23Adversary>(g); }

    auto build_s_star(const Graph & g, const VertexSet & s_set, double epsilon, double alpha) -> SStar
    {
        SStar result;
        const auto k = g.bits();
        result.t = lemma34_threshold(epsilon, k);
        if (result.t > k)
            throw std::invalid_argument("ceil(eps k) exceeds k");
        result.m = s_set.size();
        result.threshold = std::pow(static_cast<double>(result.m), 1.0 - alpha);
        result.set = s_set;

        auto patterns = enumerate_patterns(k, result.t);
        std::vector<VertexSet> traces;
        traces.reserve(patterns.size());
        for (const auto & p : patterns)
            traces.push_back(consistent_set(g, p));

        while (true) {
            std::optional<std::size_t> hit;
            for (std::size_t j = 0; j < patterns.size() && ! hit; ++j) {
                auto size = result.set.intersection_size(traces[j]);
                if (size > 0 && static_cast<double>(size) <= result.threshold)
                    hit = j;
            }
            if (! hit)
                break;
            result.set -= traces[*hit];
            result.removed.push_back(patterns[*hit]);
        }
        for (std::size_t j = 0; j < patterns.size(); ++j)
            result.counts.emplace(patterns[j], result.set.intersection_size(traces[j]));
        if (result.set.empty())
            result.diagnostic = "S* is empty after " + std::to_string(result.removed.size()) + " removals (m = " + std::to_string(result.m) +
                ", threshold " + std::to_string(result.threshold) + ")";
        return result;
    }

    auto choose_vertex(const Graph & g, const VertexSet & x, const std::vector<VertexSet> & ys, double delta) -> std::optional<VertexId>
    {
        for (auto v : x) {
            const auto & nv = g.neighbors(v);
            bool ok = std::all_of(ys.begin(), ys.end(),
                [&](const VertexSet & y) { return static_cast<double>(nv.intersection_size(y)) >= delta * static_cast<double>(y.size()); });
            if (ok)
                return v;
        }
        return std::nullopt;
    }

    auto choose_vertex_guaranteed(const VertexSet & x, const std::vector<VertexSet> & ys, std::size_t m, double beta) -> bool
    {
        auto floor_size = std::pow(static_cast<double>(m), 1.0 - beta);
        if (static_cast<double>(x.size()) < static_cast<double>(ys.size()) * floor_size)
            return false;
        return std::all_of(ys.begin(), ys.end(), [&](const VertexSet & y) { return static_cast<double>(y.size()) >= floor_size; });
    }

    auto density_targets(const Graph & g, const SStar & s, const std::vector<VertexId> & fixed) -> std::vector<VertexSet>
    {
        std::vector<VertexSet> neighbourhoods;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << fixed.size()); ++mask) {
            VertexSet sub(g.order());
            for (std::size_t j = 0; j < fixed.size(); ++j)
                if ((mask >> j) & 1U)
                    sub.insert(fixed[j]);
            neighbourhoods.push_back(common_neighbors(g, sub) & s.set);
        }
        std::vector<VertexSet> ys;
        for (const auto & [p, count] : s.counts) {
            if (count == 0)
                continue;
            auto cp = consistent_set(g, p);
            for (const auto & n : neighbourhoods)
                ys.push_back(cp & n);
        }
        return ys;
    }

    auto lemma34_violation(const Graph & g, const SStar & s, double delta, const Memory & memory, const VarMap & m,
        const std::map<unsigned, VertexId> & fixed) -> std::optional<std::string>
    {
        for (unsigned i = 1; i <= m.indices(); ++i) {
            auto p = index_pattern(memory, m, i);
            auto it = fixed.find(i);
            if (p.size() < s.t) {
                if (it != fixed.end())
                    return "index " + std::to_string(i) + " fixed with |p| = " + std::to_string(p.size()) + " below threshold";
                if (! consistent_set(g, p).intersects(s.set))
                    return "condition 1: C_p cap S* empty for index " + std::to_string(i) + ", p = " + p.to_string();
            }
            else {
                if (it == fixed.end())
                    return "condition 2: index " + std::to_string(i) + " has |p| = " + std::to_string(p.size()) + " but is not fixed";
                if (! p.consistent_with(it->second) || ! s.set.contains(it->second))
                    return "condition 2: fixed vertex " + std::to_string(it->second) + " of index " + std::to_string(i) + " not in C_p cap S*";
            }
        }
        auto u = vertex_list(fixed);
        for (std::size_t a = 0; a < u.size(); ++a)
            for (std::size_t b = a + 1; b < u.size(); ++b)
                if (! g.adjacent(u[a], u[b]))
                    return "condition 2: fixed vertices " + std::to_string(u[a]) + " and " + std::to_string(u[b]) + " not adjacent";
        for (const auto & [p, count] : s.counts) {
            if (count == 0)
                continue;
            auto trace = consistent_set(g, p) & s.set;
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << u.size()); ++mask) {
                VertexSet sub(g.order());
                for (std::size_t j = 0; j < u.size(); ++j)
                    if ((mask >> j) & 1U)
                        sub.insert(u[j]);
                auto lhs = static_cast<double>(trace.intersection_size(common_neighbors(g, sub)));
                auto rhs = static_cast<double>(trace.size()) * std::pow(delta, static_cast<double>(sub.size()));
                if (lhs < rhs * (1.0 - 1e-12))
                    return "condition 3: p = " + p.to_string() + ", |U'| = " + std::to_string(sub.size()) + ", " + std::to_string(lhs) + " < " +
                        std::to_string(rhs);
            }
        }
        return std::nullopt;
    }

    namespace
    {
        class Lemma34Adversary final : public AdversaryStrategy
        {
        public:
            Lemma34Adversary(const Graph & g, SStar s, const ParamConfig & params) : _g(g), _s(std::move(s)), _params(params)
            {
            }

            auto name() const -> std::string override { return "lemma34"; }

            auto answer(const GameState & state, Var var) -> AdversaryReply override
            {
                const auto & m = require_map(state);
                if (m.is_guard(var))
                    return {true, std::nullopt};
                if (_s.set.empty())
                    return {false, resign("S* empty", {})};
                auto [i, b] = m.slot(var);
                if (auto it = _fixed.find(i); it != _fixed.end())
                    return {vertex_bit(it->second, m.bits(), b), std::nullopt};
                auto p = index_pattern(state.memory, m, i);
                if (p.size() + 1 < _s.t) {
                    auto trace = consistent_set(_g, p) & _s.set;
                    if (trace.empty())
                        return {false, resign("condition 1", {{"index", i}, {"p", p.to_string()}})};
                    return {vertex_bit(trace.front(), m.bits(), b), std::nullopt};
                }
                auto u = vertex_list(_fixed);
                auto x = consistent_set(_g, p) & common_neighbors(_g, as_set(_g, u)) & _s.set;
                auto ys = density_targets(_g, _s, u);
                auto v = choose_vertex(_g, x, ys, _params.delta);
                if (! v) {
                    nlohmann::ordered_json d;
                    d["index"] = i;
                    d["p"] = p.to_string();
                    d["U"] = u;
                    d["fixed"] = fixed_json(_fixed);
                    d["X_size"] = x.size();
                    d["Y_count"] = ys.size();
                    d["S_star_size"] = _s.set.size();
                    d["delta"] = _params.delta;
                    d["corollary_sizes_met"] = choose_vertex_guaranteed(x, ys, _s.m, _params.beta);
                    return {false, resign(x.empty() ? "choose_vertex: X empty" : "choose_vertex: no vertex of X is delta-dense into every Y", std::move(d))};
                }
                _fixed[i] = *v;
                return {vertex_bit(*v, m.bits(), b), std::nullopt};
            }

            void forgotten(const GameState & state, Var var) override
            {
                const auto & m = require_map(state);
                if (m.is_guard(var))
                    return;
                auto i = m.slot(var).index;
                if (_fixed.contains(i) && index_pattern(state.memory, m, i).size() < _s.t)
                    _fixed.erase(i);
            }

            auto check_invariants(const GameState & state) const -> std::optional<std::string> override
            {
                return lemma34_violation(_g, _s, _params.delta, state.memory, require_map(state), _fixed);
            }

        private:
            auto resign(std::string condition, nlohmann::ordered_json details) const -> std::optional<Resignation>
            {
                if (details.is_null())
                    details = nlohmann::ordered_json::object();
                return Resignation{std::move(condition), std::move(details)};
            }

            const Graph & _g;
            SStar _s;
            ParamConfig _params;
            std::map<unsigned, VertexId> _fixed;
        };
    }

    auto make_lemma34_adversary(const Graph & g, SStar s_star, const ParamConfig & params) -> std::unique_ptr<AdversaryStrategy>
    {
        return std::make_unique<Lemma34Adversary>(g, std::move(s_star), params);
    }
}
