#include "ramsey/oracle.hpp"
#include "ramsey/hash.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ramsey
{
    auto random_subset(const VertexSet & from, std::size_t size, Rng & rng) -> VertexSet
    {
        auto pool = from.to_vector();
        if (size > pool.size())
            throw GraphError("subset size " + std::to_string(size) + " exceeds set size " + std::to_string(pool.size()));
        VertexSet result(from.universe());
        for (std::size_t i = 0; i < size; ++i) {
            auto j = i + static_cast<std::size_t>(uniform_below(rng, pool.size() - i));
            std::swap(pool[i], pool[j]);
            result.insert(pool[i]);
        }
        return result;
    }

    namespace
    {
        /// Clique search on a degree-descending relabelling of the graph.
        class CliqueSearch
        {
        public:
            CliqueSearch(const Graph & g, unsigned target, std::uint64_t budget) : _g(g), _target(target), _budget(budget)
            {
                auto n = g.order();
                _order.resize(n);
                std::iota(_order.begin(), _order.end(), VertexId{0});
                std::stable_sort(_order.begin(), _order.end(),
                    [&](VertexId a, VertexId b) { return g.neighbors(a).size() > g.neighbors(b).size(); });
                std::vector<VertexId> position(n);
                for (std::size_t i = 0; i < n; ++i)
                    position[_order[i]] = static_cast<VertexId>(i);
                _adj.assign(n, VertexSet(n));
                for (VertexId u = 0; u < n; ++u)
                    for (auto v : g.neighbors(u))
                        _adj[position[u]].insert(position[v]);
            }

            auto run() -> std::pair<SearchStatus, std::optional<VertexSet>>
            {
                if (_target == 0)
                    return {SearchStatus::found, VertexSet(_g.order())};
                auto cand = VertexSet::full(_g.order());
                if (expand(cand)) {
                    VertexSet result(_g.order());
                    for (auto v : _current)
                        result.insert(_order[v]);
                    return {SearchStatus::found, result};
                }
                return {_exhausted ? SearchStatus::budget_exceeded : SearchStatus::none, std::nullopt};
            }

            auto nodes() const -> std::uint64_t { return _nodes; }

        private:
            auto expand(VertexSet cand) -> bool
            {
                if (++_nodes > _budget) {
                    _exhausted = true;
                    return false;
                }
                if (_current.size() == _target)
                    return true;
                while (! cand.empty()) {
                    if (_current.size() + cand.size() < _target)
                        return false;
                    auto v = cand.front();
                    cand.erase(v);
                    _current.push_back(v);
                    // later vertices only: cand already excludes everything tried before v
                    if (expand(cand & _adj[v]))
                        return true;
                    _current.pop_back();
                    if (_exhausted)
                        return false;
                }
                return false;
            }

            const Graph & _g;
            unsigned _target;
            std::uint64_t _budget;
            std::uint64_t _nodes = 0;
            bool _exhausted = false;
            std::vector<VertexId> _order;
            std::vector<VertexSet> _adj;
            std::vector<VertexId> _current;
        };

        auto binomial(std::uint64_t n, std::uint64_t r) -> double
        {
            if (r > n)
                return 0.0;
            double result = 1.0;
            for (std::uint64_t i = 0; i < r; ++i)
                result = result * static_cast<double>(n - i) / static_cast<double>(i + 1);
            return result;
        }

        struct SubsetWalker
        {
            const Graph & g;
            const std::vector<VertexSet> & consistent;
            const std::vector<Pattern> & patterns;
            unsigned bound;
            VertexSet u;
            std::optional<std::pair<VertexSet, Pattern>> failure;
            std::uint64_t work = 0;

            // Visits every U of size <= bound containing `u` plus members >= start.
            void visit(const VertexSet & common, VertexId start)
            {
                for (std::size_t i = 0; i < patterns.size(); ++i) {
                    ++work;
                    if (! consistent[i].intersects(common)) {
                        failure.emplace(u, patterns[i]);
                        return;
                    }
                }
                if (u.size() == bound)
                    return;
                for (VertexId v = start; v < g.order() && ! failure; ++v) {
                    u.insert(v);
                    visit(common & g.neighbors(v), v + 1);
                    u.erase(v);
                }
            }
        };
    }

    auto homogeneous_kind_name(HomogeneousKind k) -> std::string
    {
        return k == HomogeneousKind::clique ? "clique" : "independent";
    }

    auto verify_witness(const Graph & g, const HomogeneousWitness & w, unsigned s) -> bool
    {
        auto members = w.vertices.to_vector();
        if (members.size() != s)
            return false;
        for (std::size_t a = 0; a < members.size(); ++a)
            for (std::size_t b = a + 1; b < members.size(); ++b)
                if (g.adjacent(members[a], members[b]) != (w.kind == HomogeneousKind::clique))
                    return false;
        return true;
    }

    auto find_clique(const Graph & g, unsigned s, std::uint64_t node_budget) -> HomogeneousSearch
    {
        CliqueSearch search(g, s, node_budget);
        auto [status, set] = search.run();
        HomogeneousSearch result{status, std::nullopt, search.nodes()};
        if (set)
            result.witness = HomogeneousWitness{HomogeneousKind::clique, *set};
        return result;
    }

    auto find_homogeneous(const Graph & g, unsigned s, std::uint64_t node_budget) -> HomogeneousSearch
    {
        if (s < 2 || s > g.order())
            throw GraphError("homogeneous set size must lie in [2, n]");
        auto clique = find_clique(g, s, node_budget);
        if (clique.status == SearchStatus::found)
            return clique;
        auto remaining = node_budget > clique.nodes ? node_budget - clique.nodes : 0;
        auto indep = find_clique(g.complement(), s, remaining);
        HomogeneousSearch result{indep.status, std::nullopt, clique.nodes + indep.nodes};
        if (indep.witness)
            result.witness = HomogeneousWitness{HomogeneousKind::independent, indep.witness->vertices};
        if (clique.status == SearchStatus::budget_exceeded && indep.status == SearchStatus::none)
            result.status = SearchStatus::budget_exceeded;
        return result;
    }

    auto is_c_ramsey(const Graph & g, unsigned s, std::uint64_t node_budget) -> std::optional<bool>
    {
        auto search = find_homogeneous(g, s, node_budget);
        switch (search.status) {
        case SearchStatus::found: return false;
        case SearchStatus::none: return true;
        case SearchStatus::budget_exceeded: return std::nullopt;
        }
        return std::nullopt;
    }

    auto property_p_verdict_name(PropertyPVerdict v) -> std::string
    {
        switch (v) {
        case PropertyPVerdict::holds_verified: return "holds-verified";
        case PropertyPVerdict::holds_sampled: return "holds-sampled";
        case PropertyPVerdict::fails: return "fails";
        case PropertyPVerdict::budget_exceeded: return "budget-exceeded";
        }
        return "unknown";
    }

    auto property_p_bound(unsigned k) -> unsigned
    {
        return k / 3;
    }

    auto is_property_p_counterexample(const Graph & g, const VertexSet & u, const Pattern & p) -> bool
    {
        auto t = property_p_bound(g.bits());
        if (u.size() > t || p.size() > t)
            return false;
        auto common = g.all_vertices();
        for (auto v : u)
            for (VertexId w = 0; w < g.order(); ++w)
                if (! g.adjacent(v, w))
                    common.erase(w);
        for (VertexId w = 0; w < g.order(); ++w)
            if (common.contains(w) && p.consistent_with(w))
                return false;
        return true;
    }

    auto check_property_p(const Graph & g, PropertyPMode mode, std::uint64_t trials, std::uint64_t seed, std::uint64_t work_budget) -> PropertyPReport
    {
        PropertyPReport report;
        report.bound = property_p_bound(g.bits());
        auto patterns = enumerate_patterns(g.bits(), report.bound);
        std::vector<VertexSet> consistent;
        consistent.reserve(patterns.size());
        for (const auto & p : patterns)
            consistent.push_back(consistent_set(g, p));

        if (mode == PropertyPMode::exhaustive) {
            double subsets = 0.0;
            for (unsigned i = 0; i <= report.bound; ++i)
                subsets += binomial(g.order(), i);
            double work = subsets * static_cast<double>(patterns.size());
            if (work > static_cast<double>(work_budget)) {
                report.verdict = PropertyPVerdict::budget_exceeded;
                report.work = static_cast<std::uint64_t>(work);
                return report;
            }
            SubsetWalker walker{g, consistent, patterns, report.bound, VertexSet(g.order()), std::nullopt};
            walker.visit(g.all_vertices(), 0);
            report.work = walker.work;
            if (walker.failure) {
                report.verdict = PropertyPVerdict::fails;
                report.counterexample_set = walker.failure->first;
                report.counterexample_pattern = walker.failure->second;
            }
            return report;
        }

        Rng rng(seed);
        std::vector<double> size_weight;
        double total = 0.0;
        for (unsigned i = 0; i <= report.bound; ++i) {
            size_weight.push_back(binomial(g.order(), i));
            total += size_weight.back();
        }
        report.verdict = PropertyPVerdict::holds_sampled;
        auto all = g.all_vertices();
        for (std::uint64_t trial = 0; trial < trials; ++trial) {
            double pick = uniform_unit(rng) * total;
            unsigned size = 0;
            while (size < report.bound && pick >= size_weight[size]) {
                pick -= size_weight[size];
                ++size;
            }
            auto u = random_subset(all, size, rng);
            auto pi = static_cast<std::size_t>(uniform_below(rng, patterns.size()));
            ++report.trials;
            ++report.work;
            if (! consistent[pi].intersects(common_neighbors(g, u))) {
                report.verdict = PropertyPVerdict::fails;
                report.counterexample_set = u;
                report.counterexample_pattern = patterns[pi];
                break;
            }
        }
        return report;
    }

    auto dense_subset_size(std::size_t m, double beta) -> std::size_t
    {
        auto size = static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(m), 1.0 - beta) - 1e-9));
        return std::max<std::size_t>(size, 1);
    }

    auto density_floor(const Graph & g, const VertexSet & s_set, double beta, std::uint64_t trials, std::uint64_t seed) -> DensityFloorReport
    {
        if (s_set.size() < 2)
            throw GraphError("density floor needs |S| >= 2");
        if (! (beta > 0.0 && beta < 1.0))
            throw GraphError("beta must lie in (0, 1)");
        if (trials == 0)
            throw GraphError("density floor needs at least one trial");
        DensityFloorReport report;
        report.beta = beta;
        report.sample_size = s_set.size();
        report.subset_size = dense_subset_size(report.sample_size, beta);
        if (report.subset_size > report.sample_size)
            throw GraphError("subset size exceeds |S|");
        report.min_density = 1.0;
        report.max_density = 0.0;
        Rng rng(seed);
        for (std::uint64_t t = 0; t < trials; ++t) {
            auto a = random_subset(s_set, report.subset_size, rng);
            auto b = random_subset(s_set, report.subset_size, rng);
            auto d = density(g, a, b);
            report.min_density = std::min(report.min_density, d);
            report.max_density = std::max(report.max_density, d);
            ++report.trials;
        }
        return report;
    }

    auto find_dense_subset(const Graph & g, const DenseSubsetOptions & options) -> std::optional<VertexSet>
    {
        auto n = static_cast<double>(g.order());
        auto min_size = static_cast<std::size_t>(std::ceil(std::pow(n, 0.75) - 1e-9));
        min_size = std::max<std::size_t>(min_size, 2);
        for (unsigned restart = 0; restart < std::max(1U, options.restarts); ++restart) {
            Rng rng(split_seed(options.seed, restart));
            auto candidate = g.all_vertices();
            while (candidate.size() >= min_size) {
                auto report = density_floor(g, candidate, options.beta, options.trials, split_seed(options.seed, 1000 + restart + candidate.size()));
                if (report.min_density >= options.delta_target)
                    return candidate;
                if (candidate.size() == min_size)
                    break;
                // drop a vertex of minimum degree into the candidate; restarts break ties randomly
                std::size_t best_degree = SIZE_MAX;
                std::vector<VertexId> ties;
                for (auto v : candidate) {
                    auto d = g.neighbors(v).intersection_size(candidate);
                    if (d < best_degree) {
                        best_degree = d;
                        ties.clear();
                    }
                    if (d == best_degree)
                        ties.push_back(v);
                }
                auto pick = restart == 0 ? ties.front() : ties[static_cast<std::size_t>(uniform_below(rng, ties.size()))];
                candidate.erase(pick);
            }
        }
        return std::nullopt;
    }
}
