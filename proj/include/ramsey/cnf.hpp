#pragma once

#include "ramsey/graph.hpp"

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ramsey
{
    using Var = std::uint32_t;

    class CnfError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    struct Literal
    {
        Var var = 0;
        bool positive = true;

        [[nodiscard]] static auto from_dimacs(long long value) -> Literal;
        [[nodiscard]] auto to_dimacs() const -> long long { return positive ? static_cast<long long>(var) : -static_cast<long long>(var); }
        [[nodiscard]] auto negated() const -> Literal { return {var, ! positive}; }

        auto operator<=>(const Literal &) const = default;
    };

    /// Set of literals, kept sorted by variable; no duplicates, no complementary pair.
    class Clause
    {
    public:
        Clause() = default;
        /// Sorts and removes duplicates. Throws CnfError on a complementary pair or a zero variable.
        explicit Clause(std::vector<Literal> literals);

        /// Same as the constructor but reports a tautology as nullopt instead of throwing.
        [[nodiscard]] static auto make(std::vector<Literal> literals) -> std::optional<Clause>;

        [[nodiscard]] auto width() const -> std::size_t { return _literals.size(); }
        [[nodiscard]] auto empty() const -> bool { return _literals.empty(); }
        [[nodiscard]] auto literals() const -> std::span<const Literal> { return _literals; }
        [[nodiscard]] auto begin() const { return _literals.begin(); }
        [[nodiscard]] auto end() const { return _literals.end(); }

        [[nodiscard]] auto contains(Literal lit) const -> bool;
        /// Polarity of `var` in this clause, if it occurs.
        [[nodiscard]] auto polarity(Var var) const -> std::optional<bool>;
        [[nodiscard]] auto to_string() const -> std::string;

        auto operator<=>(const Clause &) const = default;

    private:
        std::vector<Literal> _literals;
    };

    enum class ClauseFamily
    {
        injective,
        indep_set,
        clique,
        exactly_one,
        unary_injective,
        unary_edge,
        input
    };

    [[nodiscard]] auto family_name(ClauseFamily f) -> std::string;

    struct Cnf
    {
        Var num_vars = 0;
        std::vector<Clause> clauses;
        std::vector<ClauseFamily> families;

        void add(Clause clause, ClauseFamily family);
        [[nodiscard]] auto width() const -> std::size_t;
        [[nodiscard]] auto size() const -> std::size_t { return clauses.size(); }
    };

    enum class Encoding
    {
        binary,
        unary,
        clique
    };

    [[nodiscard]] auto encoding_name(Encoding e) -> std::string;
    [[nodiscard]] auto parse_encoding(std::string_view name) -> Encoding;

    /// Bijection between semantic variables and DIMACS numbers.
    ///
    /// binary/clique: x^i_b -> (i-1)k + b for i in [1..s], b in [1..k]; binary adds y -> sk + 1.
    /// unary: p^i_v -> (i-1)n + v + 1; y -> sn + 1.
    class VarMap
    {
    public:
        struct Slot
        {
            unsigned index = 0;   // i in [1..s]; 0 for y
            std::uint32_t position = 0; // bit b for binary/clique, vertex v for unary
        };

        VarMap() = default;
        VarMap(Encoding kind, unsigned k, unsigned s);

        [[nodiscard]] auto kind() const -> Encoding { return _kind; }
        [[nodiscard]] auto bits() const -> unsigned { return _k; }
        [[nodiscard]] auto indices() const -> unsigned { return _s; }
        [[nodiscard]] auto order() const -> std::size_t { return std::size_t{1} << _k; }
        [[nodiscard]] auto has_guard() const -> bool { return _kind != Encoding::clique; }
        [[nodiscard]] auto num_vars() const -> Var;

        [[nodiscard]] auto x(unsigned i, unsigned b) const -> Var;
        [[nodiscard]] auto p(unsigned i, VertexId v) const -> Var;
        [[nodiscard]] auto y() const -> Var;
        [[nodiscard]] auto is_guard(Var var) const -> bool { return has_guard() && var == y(); }
        /// Inverse mapping; index 0 denotes y.
        [[nodiscard]] auto slot(Var var) const -> Slot;

        /// s / k, the density constant of the homogeneous-set size.
        [[nodiscard]] auto c() const -> double { return static_cast<double>(_s) / _k; }

    private:
        Encoding _kind = Encoding::binary;
        unsigned _k = 0;
        unsigned _s = 0;
    };

    struct EncodedFormula
    {
        Cnf cnf;
        VarMap map;
    };

    /// Variable budget enforced by the encoders.
    inline constexpr Var max_encoded_vars = 1U << 22;

    [[nodiscard]] auto encode_binary(const Graph & g, unsigned s) -> EncodedFormula;
    [[nodiscard]] auto encode_unary(const Graph & g, unsigned s) -> EncodedFormula;
    [[nodiscard]] auto encode_clique(const Graph & g, unsigned s) -> EncodedFormula;
    [[nodiscard]] auto encode(const Graph & g, unsigned s, Encoding kind) -> EncodedFormula;

    /// Clause count the generators produce, in closed form. For the clique encoding this is the
    /// complete-graph-free upper bound; clique_clause_count gives the exact figure.
    [[nodiscard]] auto closed_form_clause_count(Encoding kind, std::uint64_t n, std::uint64_t s) -> std::uint64_t;
    /// C(s,2)(n + 2 * non_edges): injectivity plus one clause per ordered non-adjacent pair.
    [[nodiscard]] auto clique_clause_count(std::uint64_t n, std::uint64_t s, std::uint64_t non_edges) -> std::uint64_t;
    /// The total C(s,2)(1 + C(n,2)) usually quoted for the binary formula; kept for reporting.
    [[nodiscard]] auto quoted_binary_clause_count(std::uint64_t n, std::uint64_t s) -> std::uint64_t;

    /// Sets `lit` true: drops satisfied clauses and removes the complementary literal elsewhere.
    [[nodiscard]] auto restrict(const Cnf & c, Literal lit) -> Cnf;

    using Assignment = std::vector<bool>; // indexed by variable, slot 0 unused

    [[nodiscard]] auto satisfies(const Cnf & c, const Assignment & a) -> bool;
    [[nodiscard]] auto first_falsified(const Cnf & c, const Assignment & a) -> std::optional<std::size_t>;

    struct FormulaMetadata
    {
        unsigned k = 0;
        unsigned s = 0;
        Encoding encoding = Encoding::binary;
        Var vars = 0;
        std::size_t clauses = 0;
        std::size_t width = 0;
        std::string graph_hash;
    };

    inline constexpr const char * generator_version = "ramsey-workbench 1.0";

    [[nodiscard]] auto metadata_for(const EncodedFormula & f, const Graph & g) -> FormulaMetadata;

    /// DIMACS with "c" comment lines recording k, s, encoding, graph hash, generator version.
    void emit_dimacs(std::ostream & out, const Cnf & c, const FormulaMetadata & meta);
    /// Plain DIMACS without comment lines.
    void emit_dimacs(std::ostream & out, const Cnf & c);
    /// JSON sidecar describing an emitted formula.
    [[nodiscard]] auto metadata_json(const FormulaMetadata & meta) -> std::string;

    [[nodiscard]] auto parse_dimacs(std::istream & in) -> Cnf;

    struct Violation
    {
        enum class Kind
        {
            injectivity,
            not_clique,
            not_independent,
            unary_row_empty,
            unary_row_multiple
        };
        Kind kind;
        unsigned i = 0;
        unsigned j = 0;

        [[nodiscard]] auto describe() const -> std::string;
    };

    struct DecodedAssignment
    {
        std::vector<std::optional<VertexId>> vertices; // per index, 0-based
        bool y = true;
        std::vector<Violation> violations;

        [[nodiscard]] auto valid() const -> bool { return violations.empty(); }
    };

    /// Reads index -> vertex from a total assignment and diagnoses anything that is not a
    /// homogeneous set of the kind selected by y.
    [[nodiscard]] auto decode_assignment(const VarMap & m, const Assignment & a, const Graph & g) -> DecodedAssignment;

    /// Assignment placing index i on vertices[i-1]; y is ignored for the clique encoding.
    [[nodiscard]] auto encode_assignment(const VarMap & m, std::span<const VertexId> vertices, bool y) -> Assignment;
}
