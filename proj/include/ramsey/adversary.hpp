#pragma once

#include "ramsey/game.hpp"
#include "ramsey/graph.hpp"

#include <json.hpp>

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ramsey
{
    /// -x log2 x - (1-x) log2 (1-x), with H(0) = H(1) = 0. Throws outside [0, 1].
    [[nodiscard]] auto binary_entropy(double x) -> double;

    /// (4/3)(eps + H(eps)); alpha must lie strictly above this.
    [[nodiscard]] auto alpha_floor(double epsilon) -> double;
    /// beta - (8/3)eps - (4/3)H(eps) + (4/3) eps log2(delta); alpha must lie strictly below this.
    [[nodiscard]] auto alpha_ceiling(double epsilon, double beta, double delta) -> double;

    struct ParamConfig
    {
        double epsilon = 0.0;
        double alpha = 0.0;
        double beta = 0.0;
        double delta = 0.0;
        unsigned s = 0;
    };

    [[nodiscard]] auto star_holds(const ParamConfig & p) -> bool;
    [[nodiscard]] auto dagger_holds(const ParamConfig & p) -> bool;
    [[nodiscard]] auto param_json(const ParamConfig & p) -> nlohmann::ordered_json;

    struct ParameterChoice
    {
        double epsilon = 0.0;
        double alpha = 0.0;
    };

    /// Scans eps downward from 1/4 and refines by bisection to the largest feasible eps; alpha is the
    /// midpoint of the feasible interval. nullopt if nothing is feasible down to 2^-20.
    [[nodiscard]] auto solve_parameters(double beta, double delta) -> std::optional<ParameterChoice>;

    /// floor(k/3), at least 1.
    [[nodiscard]] auto lemma23_threshold(unsigned k) -> unsigned;
    /// floor(k^2/9).
    [[nodiscard]] auto lemma23_memory(unsigned k) -> unsigned;
    /// ceil(eps k), at least 1.
    [[nodiscard]] auto lemma34_threshold(double epsilon, unsigned k) -> unsigned;
    /// floor(eps^2 k^2), at least 1.
    [[nodiscard]] auto lemma34_memory(double epsilon, unsigned k) -> unsigned;

    /// Answers 0 on unfixed indices; fixes the lowest-id vertex of C_p cap N(U) when an index reaches
    /// floor(k/3) bits, and resigns with (U, p) when there is none.
    /// Keeps a reference to g.
    [[nodiscard]] auto make_lemma23_adversary(const Graph & g) -> std::unique_ptr<AdversaryStrategy>;

    struct SStar
    {
        VertexSet set;
        unsigned t = 0;              // ceil(eps k)
        double threshold = 0.0;      // m^(1-alpha), m = |S|
        std::size_t m = 0;
        std::vector<Pattern> removed; // in removal order
        std::map<Pattern, std::size_t, decltype(&pattern_less)> counts{&pattern_less}; // |C_p cap S*| for |p| <= t
        std::string diagnostic;
    };

    [[nodiscard]] auto build_s_star(const Graph & g, const VertexSet & s_set, double epsilon, double alpha) -> SStar;

    /// First v of X, in id order, with |N(v) cap Y| >= delta |Y| for every Y.
    [[nodiscard]] auto choose_vertex(const Graph & g, const VertexSet & x, const std::vector<VertexSet> & ys, double delta) -> std::optional<VertexId>;

    /// The size conditions under which a vertex is guaranteed: |X| >= r m^(1-beta) and every |Y| >= m^(1-beta).
    [[nodiscard]] auto choose_vertex_guaranteed(const VertexSet & x, const std::vector<VertexSet> & ys, std::size_t m, double beta) -> bool;

    /// Ys for fixing a new vertex: C_q cap N(U') cap S* for every active q and every U' subset of U.
    [[nodiscard]] auto density_targets(const Graph & g, const SStar & s, const std::vector<VertexId> & fixed) -> std::vector<VertexSet>;

    /// Answers from C_p cap S*; fixes through choose_vertex at ceil(eps k) bits and resigns with
    /// diagnostics when no vertex qualifies. Keeps a reference to g.
    [[nodiscard]] auto make_lemma34_adversary(const Graph & g, SStar s_star, const ParamConfig & params) -> std::unique_ptr<AdversaryStrategy>;

    /// Conditions 1-3 for a clique-game state with the given fixed vertices; the first violation, if any.
    [[nodiscard]] auto lemma34_violation(const Graph & g, const SStar & s, double delta, const Memory & memory, const VarMap & m,
        const std::map<unsigned, VertexId> & fixed) -> std::optional<std::string>;
}
