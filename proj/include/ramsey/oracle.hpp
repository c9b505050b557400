#pragma once

#include "ramsey/graph.hpp"
#include "ramsey/rng.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace ramsey
{
    enum class HomogeneousKind
    {
        clique,
        independent
    };

    [[nodiscard]] auto homogeneous_kind_name(HomogeneousKind k) -> std::string;

    struct HomogeneousWitness
    {
        HomogeneousKind kind = HomogeneousKind::clique;
        VertexSet vertices;
    };

    /// Independent pairwise check of a witness against the graph.
    [[nodiscard]] auto verify_witness(const Graph & g, const HomogeneousWitness & w, unsigned s) -> bool;

    enum class SearchStatus
    {
        found,
        none,
        budget_exceeded
    };

    struct HomogeneousSearch
    {
        SearchStatus status = SearchStatus::none;
        std::optional<HomogeneousWitness> witness;
        std::uint64_t nodes = 0;
    };

    inline constexpr std::uint64_t default_node_budget = 100'000'000;

    /// Exhaustive branch-and-bound for a clique of size s in G, then in its complement.
    [[nodiscard]] auto find_homogeneous(const Graph & g, unsigned s, std::uint64_t node_budget = default_node_budget) -> HomogeneousSearch;

    /// Clique of size s in g only.
    [[nodiscard]] auto find_clique(const Graph & g, unsigned s, std::uint64_t node_budget = default_node_budget) -> HomogeneousSearch;

    /// true: no homogeneous s-set; false: one exists; nullopt: search budget exhausted.
    [[nodiscard]] auto is_c_ramsey(const Graph & g, unsigned s, std::uint64_t node_budget = default_node_budget) -> std::optional<bool>;

    enum class PropertyPVerdict
    {
        holds_verified,
        holds_sampled,
        fails,
        budget_exceeded
    };

    [[nodiscard]] auto property_p_verdict_name(PropertyPVerdict v) -> std::string;

    struct PropertyPReport
    {
        PropertyPVerdict verdict = PropertyPVerdict::holds_verified;
        unsigned bound = 0; // floor(k/3)
        std::uint64_t trials = 0;
        std::uint64_t work = 0;
        std::optional<VertexSet> counterexample_set;
        std::optional<Pattern> counterexample_pattern;
    };

    enum class PropertyPMode
    {
        exhaustive,
        sampled
    };

    inline constexpr std::uint64_t default_property_p_budget = 200'000'000;

    /// Every U with |U| <= floor(k/3) and every pattern with |p| <= floor(k/3) must satisfy
    /// C_p intersect N(U) nonempty.
    [[nodiscard]] auto check_property_p(const Graph & g, PropertyPMode mode, std::uint64_t trials = 0, std::uint64_t seed = 0,
        std::uint64_t work_budget = default_property_p_budget) -> PropertyPReport;

    /// Re-checks a reported counterexample.
    [[nodiscard]] auto is_property_p_counterexample(const Graph & g, const VertexSet & u, const Pattern & p) -> bool;

    [[nodiscard]] auto property_p_bound(unsigned k) -> unsigned;

    struct DensityFloorReport
    {
        double beta = 0.0;
        std::size_t sample_size = 0;  // |S|
        std::size_t subset_size = 0;  // ceil(|S|^(1-beta))
        double min_density = 0.0;     // the empirical delta
        double max_density = 0.0;
        std::uint64_t trials = 0;
    };

    /// Monte-Carlo min/max of d(A,B) over uniformly random A, B of S with |A| = |B| = ceil(|S|^(1-beta)).
    [[nodiscard]] auto density_floor(const Graph & g, const VertexSet & s_set, double beta, std::uint64_t trials, std::uint64_t seed) -> DensityFloorReport;

    [[nodiscard]] auto dense_subset_size(std::size_t m, double beta) -> std::size_t;

    struct DenseSubsetOptions
    {
        double beta = 0.2;
        double delta_target = 0.3;
        std::uint64_t trials = 200;  // density_floor trials per candidate
        unsigned restarts = 4;
        std::uint64_t seed = 1;
    };

    /// Heuristic search for S with |S| >= n^(3/4) whose sampled density floor reaches the target.
    [[nodiscard]] auto find_dense_subset(const Graph & g, const DenseSubsetOptions & options) -> std::optional<VertexSet>;
}
