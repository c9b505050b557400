#pragma once

// Brute-force reference implementations used as oracles by the tests.

#include "ramsey/cnf.hpp"
#include "ramsey/graph.hpp"

#include <bit>
#include <optional>
#include <vector>

namespace testing
{
    using namespace ramsey;

    // every s-subset of V checked pairwise; n <= 20
    inline auto brute_homogeneous(const Graph & g, unsigned s) -> std::optional<std::vector<VertexId>>
    {
        const auto n = static_cast<unsigned>(g.order());
        for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
            if (static_cast<unsigned>(std::popcount(mask)) != s)
                continue;
            std::vector<VertexId> vs;
            for (VertexId v = 0; v < n; ++v)
                if ((mask >> v) & 1U)
                    vs.push_back(v);
            bool clique = true, indep = true;
            for (std::size_t a = 0; a < vs.size(); ++a)
                for (std::size_t b = a + 1; b < vs.size(); ++b) {
                    bool e = g.adjacent(vs[a], vs[b]);
                    clique = clique && e;
                    indep = indep && ! e;
                }
            if (clique || indep)
                return vs;
        }
        return std::nullopt;
    }

    inline auto brute_clique(const Graph & g, unsigned s) -> bool
    {
        const auto n = static_cast<unsigned>(g.order());
        for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
            if (static_cast<unsigned>(std::popcount(mask)) != s)
                continue;
            bool ok = true;
            for (VertexId a = 0; a < n && ok; ++a)
                for (VertexId b = a + 1; b < n && ok; ++b)
                    if (((mask >> a) & 1U) && ((mask >> b) & 1U) && ! g.adjacent(a, b))
                        ok = false;
            if (ok)
                return true;
        }
        return false;
    }

    // clause-by-clause evaluation over all 2^m assignments; m <= 24
    inline auto brute_satisfiable(const Cnf & c) -> std::optional<Assignment>
    {
        const auto m = c.num_vars;
        Assignment a(static_cast<std::size_t>(m) + 1, false);
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << m); ++bits) {
            for (Var v = 1; v <= m; ++v)
                a[v] = ((bits >> (v - 1)) & 1U) != 0;
            bool all = true;
            for (const auto & clause : c.clauses) {
                bool sat = false;
                for (auto l : clause)
                    if (a[l.var] == l.positive) {
                        sat = true;
                        break;
                    }
                if (! sat) {
                    all = false;
                    break;
                }
            }
            if (all)
                return a;
        }
        return std::nullopt;
    }

    inline auto graph_from(unsigned k, std::initializer_list<std::pair<VertexId, VertexId>> edges) -> Graph
    {
        std::vector<std::pair<VertexId, VertexId>> list(edges);
        return Graph(k, list);
    }

    // 8-cycle plus the four long diagonals: triangle-free, largest independent set 3
    inline auto wagner() -> Graph
    {
        std::vector<std::pair<VertexId, VertexId>> e;
        for (VertexId v = 0; v < 8; ++v) {
            e.emplace_back(v, (v + 1) % 8);
            if (v < 4)
                e.emplace_back(v, v + 4);
        }
        return Graph(3, e);
    }

    inline auto set_of(const Graph & g, std::initializer_list<VertexId> vs) -> VertexSet { return VertexSet(g.order(), vs); }
}
