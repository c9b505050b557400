#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <iterator>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ramsey
{
    using VertexId = std::uint32_t;

    /// Largest bit-width accepted for dense adjacency storage (n^2 bits).
    inline constexpr unsigned max_graph_bits = 14;

    class GraphError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    /// Bit of vertex v at position b in [1..k], position 1 being the most significant bit.
    [[nodiscard]] constexpr auto vertex_bit(VertexId v, unsigned k, unsigned b) -> bool
    {
        return ((v >> (k - b)) & 1U) != 0;
    }

    [[nodiscard]] auto vertex_bits(VertexId v, unsigned k) -> std::string;
    [[nodiscard]] auto vertex_from_bits(std::string_view bits) -> VertexId;

    /// Subset of [0, n) backed by a packed bitset.
    class VertexSet
    {
    public:
        class const_iterator
        {
        public:
            using iterator_category = std::forward_iterator_tag;
            using value_type = VertexId;
            using difference_type = std::ptrdiff_t;
            using pointer = const VertexId *;
            using reference = VertexId;

            const_iterator() = default;
            const_iterator(const VertexSet * set, std::size_t pos) : _set(set), _pos(pos) { }

            auto operator*() const -> VertexId { return static_cast<VertexId>(_pos); }
            auto operator++() -> const_iterator &
            {
                _pos = _set->next_from(_pos + 1);
                return *this;
            }
            auto operator++(int) -> const_iterator
            {
                auto old = *this;
                ++*this;
                return old;
            }
            auto operator==(const const_iterator & other) const -> bool { return _pos == other._pos; }

        private:
            const VertexSet * _set = nullptr;
            std::size_t _pos = 0;
        };

        VertexSet() = default;
        explicit VertexSet(std::size_t universe);
        VertexSet(std::size_t universe, std::initializer_list<VertexId> members);

        [[nodiscard]] static auto full(std::size_t universe) -> VertexSet;

        [[nodiscard]] auto universe() const -> std::size_t { return _universe; }
        [[nodiscard]] auto size() const -> std::size_t;
        [[nodiscard]] auto empty() const -> bool;
        [[nodiscard]] auto contains(VertexId v) const -> bool;

        void insert(VertexId v);
        void erase(VertexId v);

        [[nodiscard]] auto front() const -> VertexId;
        [[nodiscard]] auto begin() const -> const_iterator { return {this, next_from(0)}; }
        [[nodiscard]] auto end() const -> const_iterator { return {this, _universe}; }
        [[nodiscard]] auto to_vector() const -> std::vector<VertexId>;

        auto operator&=(const VertexSet & other) -> VertexSet &;
        auto operator|=(const VertexSet & other) -> VertexSet &;
        auto operator-=(const VertexSet & other) -> VertexSet &;

        friend auto operator&(VertexSet a, const VertexSet & b) -> VertexSet { return a &= b; }
        friend auto operator|(VertexSet a, const VertexSet & b) -> VertexSet { return a |= b; }
        friend auto operator-(VertexSet a, const VertexSet & b) -> VertexSet { return a -= b; }

        /// |*this & other| without materializing the intersection.
        [[nodiscard]] auto intersection_size(const VertexSet & other) const -> std::size_t;
        [[nodiscard]] auto intersects(const VertexSet & other) const -> bool;

        auto operator==(const VertexSet & other) const -> bool = default;

    private:
        [[nodiscard]] auto next_from(std::size_t pos) const -> std::size_t;
        void check_compatible(const VertexSet & other) const;

        std::size_t _universe = 0;
        std::vector<std::uint64_t> _words;
    };

    auto operator<<(std::ostream &, const VertexSet &) -> std::ostream &;

    /// A string over {0,1,*} of length k: a partial assignment to one index's vertex bits.
    class Pattern
    {
    public:
        Pattern() = default;
        explicit Pattern(unsigned k) : _k(k) { }

        [[nodiscard]] static auto parse(std::string_view text) -> Pattern;

        /// Pattern fully specifying vertex v.
        [[nodiscard]] static auto of_vertex(VertexId v, unsigned k) -> Pattern;

        [[nodiscard]] auto length() const -> unsigned { return _k; }
        [[nodiscard]] auto size() const -> unsigned;

        /// Entry at position b in [1..k]: '*', '0' or '1'.
        [[nodiscard]] auto at(unsigned b) const -> char;
        void set(unsigned b, bool value);
        void clear(unsigned b);

        [[nodiscard]] auto consistent_with(VertexId v) const -> bool { return (v & _care) == _value; }
        /// True when every set entry of this pattern is set identically in `other`.
        [[nodiscard]] auto extended_by(const Pattern & other) const -> bool;

        [[nodiscard]] auto care_mask() const -> std::uint32_t { return _care; }
        [[nodiscard]] auto value_mask() const -> std::uint32_t { return _value; }

        [[nodiscard]] auto to_string() const -> std::string;

        auto operator==(const Pattern &) const -> bool = default;

    private:
        unsigned _k = 0;
        std::uint32_t _care = 0;
        std::uint32_t _value = 0;
    };

    /// Canonical order: size ascending, then positionwise lexicographic with * < 0 < 1.
    [[nodiscard]] auto pattern_less(const Pattern & a, const Pattern & b) -> bool;

    /// All patterns of length k and size <= t, in canonical order.
    [[nodiscard]] auto enumerate_patterns(unsigned k, unsigned t) -> std::vector<Pattern>;

    /// Sum over i <= t of 2^i C(k, i).
    [[nodiscard]] auto pattern_count(unsigned k, unsigned t) -> std::uint64_t;

    class Graph
    {
    public:
        Graph() = default;
        Graph(unsigned k, std::span<const std::pair<VertexId, VertexId>> edges);

        [[nodiscard]] static auto empty(unsigned k) -> Graph;
        [[nodiscard]] static auto complete(unsigned k) -> Graph;
        /// Cycle 0-1-...-(n-1)-0.
        [[nodiscard]] static auto cycle(unsigned k) -> Graph;

        [[nodiscard]] auto bits() const -> unsigned { return _k; }
        [[nodiscard]] auto order() const -> std::size_t { return _adj.size(); }
        [[nodiscard]] auto edge_total() const -> std::size_t;

        [[nodiscard]] auto adjacent(VertexId u, VertexId v) const -> bool;
        [[nodiscard]] auto neighbors(VertexId v) const -> const VertexSet &;
        [[nodiscard]] auto all_vertices() const -> VertexSet { return VertexSet::full(order()); }

        [[nodiscard]] auto complement() const -> Graph;
        [[nodiscard]] auto edges() const -> std::vector<std::pair<VertexId, VertexId>>;

        auto operator==(const Graph &) const -> bool = default;

    private:
        void check_vertex(VertexId v) const;

        unsigned _k = 0;
        std::vector<VertexSet> _adj;
    };

    /// N(U): vertices adjacent to every member of U; N(empty) = V(G).
    [[nodiscard]] auto common_neighbors(const Graph & g, const VertexSet & u) -> VertexSet;

    /// C_p: vertices consistent with the pattern.
    [[nodiscard]] auto consistent_set(const Graph & g, const Pattern & p) -> VertexSet;

    /// Ordered pairs (u, w) in A x B with {u, w} an edge.
    [[nodiscard]] auto edge_count(const Graph & g, const VertexSet & a, const VertexSet & b) -> std::uint64_t;

    [[nodiscard]] auto density(const Graph & g, const VertexSet & a, const VertexSet & b) -> double;

    /// G(n, 1/2) on n = 2^k vertices.
    ///
    /// Uses std::mt19937_64 seeded with `seed`. Unordered pairs (u, v), u < v, are visited
    /// in lexicographic order; each consumes the next bit of the generator output stream,
    /// 64 bits per draw, least significant bit first. A set bit means an edge. The engine is
    /// fully specified by the standard, so the graph is identical on every platform.
    [[nodiscard]] auto random_graph(unsigned k, std::uint64_t seed) -> Graph;

    /// Text format: "k <k>" then one "u v" line per edge (u < v, ascending). Blank lines and
    /// lines starting with '#' are ignored when parsing.
    void write_graph(std::ostream & out, const Graph & g);
    [[nodiscard]] auto read_graph(std::istream & in) -> Graph;
    [[nodiscard]] auto serialize_graph(const Graph & g) -> std::string;
    [[nodiscard]] auto parse_graph(std::string_view text) -> Graph;

    /// FNV-1a 64 over the serialized text, as 16 hex digits.
    [[nodiscard]] auto graph_hash(const Graph & g) -> std::string;
}
