#include "ramsey/graph.hpp"
#include "ramsey/hash.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

namespace ramsey
{
    namespace
    {
        constexpr std::size_t word_bits = 64;

        auto words_for(std::size_t universe) -> std::size_t { return (universe + word_bits - 1) / word_bits; }

        void check_bits(unsigned k)
        {
            if (k < 1 || k > max_graph_bits)
                throw GraphError("bit-width k must be in [1, " + std::to_string(max_graph_bits) + "], got " + std::to_string(k));
        }
    }

    auto vertex_bits(VertexId v, unsigned k) -> std::string
    {
        std::string result(k, '0');
        for (unsigned b = 1; b <= k; ++b)
            if (vertex_bit(v, k, b))
                result[b - 1] = '1';
        return result;
    }

    auto vertex_from_bits(std::string_view bits) -> VertexId
    {
        if (bits.empty() || bits.size() > 31)
            throw GraphError("vertex bit-string must have length in [1, 31]");
        VertexId v = 0;
        for (char c : bits) {
            if (c != '0' && c != '1')
                throw GraphError("vertex bit-string may only contain 0 and 1");
            v = (v << 1) | static_cast<VertexId>(c == '1');
        }
        return v;
    }

    VertexSet::VertexSet(std::size_t universe) : _universe(universe), _words(words_for(universe), 0) { }

    VertexSet::VertexSet(std::size_t universe, std::initializer_list<VertexId> members) : VertexSet(universe)
    {
        for (auto v : members)
            insert(v);
    }

    auto VertexSet::full(std::size_t universe) -> VertexSet
    {
        VertexSet result(universe);
        std::fill(result._words.begin(), result._words.end(), ~std::uint64_t{0});
        if (auto tail = universe % word_bits; tail != 0)
            result._words.back() = (std::uint64_t{1} << tail) - 1;
        return result;
    }

    auto VertexSet::size() const -> std::size_t
    {
        std::size_t total = 0;
        for (auto w : _words)
            total += static_cast<std::size_t>(std::popcount(w));
        return total;
    }

    auto VertexSet::empty() const -> bool
    {
        return std::all_of(_words.begin(), _words.end(), [](auto w) { return w == 0; });
    }

    auto VertexSet::contains(VertexId v) const -> bool
    {
        return v < _universe && ((_words[v / word_bits] >> (v % word_bits)) & 1U) != 0;
    }

    void VertexSet::insert(VertexId v)
    {
        if (v >= _universe)
            throw GraphError("vertex " + std::to_string(v) + " outside universe of size " + std::to_string(_universe));
        _words[v / word_bits] |= std::uint64_t{1} << (v % word_bits);
    }

    void VertexSet::erase(VertexId v)
    {
        if (v < _universe)
            _words[v / word_bits] &= ~(std::uint64_t{1} << (v % word_bits));
    }

    auto VertexSet::front() const -> VertexId
    {
        auto pos = next_from(0);
        if (pos >= _universe)
            throw GraphError("front() of an empty vertex set");
        return static_cast<VertexId>(pos);
    }

    auto VertexSet::to_vector() const -> std::vector<VertexId>
    {
        return {begin(), end()};
    }

    void VertexSet::check_compatible(const VertexSet & other) const
    {
        if (other._universe != _universe)
            throw GraphError("vertex sets over different universes");
    }

    auto VertexSet::operator&=(const VertexSet & other) -> VertexSet &
    {
        check_compatible(other);
        for (std::size_t i = 0; i < _words.size(); ++i)
            _words[i] &= other._words[i];
        return *this;
    }

    auto VertexSet::operator|=(const VertexSet & other) -> VertexSet &
    {
        check_compatible(other);
        for (std::size_t i = 0; i < _words.size(); ++i)
            _words[i] |= other._words[i];
        return *this;
    }

    auto VertexSet::operator-=(const VertexSet & other) -> VertexSet &
    {
        check_compatible(other);
        for (std::size_t i = 0; i < _words.size(); ++i)
            _words[i] &= ~other._words[i];
        return *this;
    }

    auto VertexSet::intersection_size(const VertexSet & other) const -> std::size_t
    {
        check_compatible(other);
        std::size_t total = 0;
        for (std::size_t i = 0; i < _words.size(); ++i)
            total += static_cast<std::size_t>(std::popcount(_words[i] & other._words[i]));
        return total;
    }

    auto VertexSet::intersects(const VertexSet & other) const -> bool
    {
        check_compatible(other);
        for (std::size_t i = 0; i < _words.size(); ++i)
            if ((_words[i] & other._words[i]) != 0)
                return true;
        return false;
    }

    auto VertexSet::next_from(std::size_t pos) const -> std::size_t
    {
        if (pos >= _universe)
            return _universe;
        auto word = pos / word_bits;
        auto bits = _words[word] & (~std::uint64_t{0} << (pos % word_bits));
        while (true) {
            if (bits != 0)
                return std::min(_universe, word * word_bits + static_cast<std::size_t>(std::countr_zero(bits)));
            if (++word >= _words.size())
                return _universe;
            bits = _words[word];
        }
    }

    auto operator<<(std::ostream & out, const VertexSet & s) -> std::ostream &
    {
        out << '{';
        bool first = true;
        for (auto v : s) {
            if (! first)
                out << ',';
            out << v;
            first = false;
        }
        return out << '}';
    }

    auto Pattern::parse(std::string_view text) -> Pattern
    {
        if (text.size() > 31)
            throw GraphError("pattern longer than 31 positions");
        Pattern p(static_cast<unsigned>(text.size()));
        for (unsigned b = 1; b <= p._k; ++b) {
            switch (text[b - 1]) {
            case '*': break;
            case '0': p.set(b, false); break;
            case '1': p.set(b, true); break;
            default: throw GraphError("pattern entries must be '*', '0' or '1': " + std::string(text));
            }
        }
        return p;
    }

    auto Pattern::of_vertex(VertexId v, unsigned k) -> Pattern
    {
        Pattern p(k);
        for (unsigned b = 1; b <= k; ++b)
            p.set(b, vertex_bit(v, k, b));
        return p;
    }

    auto Pattern::size() const -> unsigned
    {
        return static_cast<unsigned>(std::popcount(_care));
    }

    auto Pattern::at(unsigned b) const -> char
    {
        if (b < 1 || b > _k)
            throw GraphError("pattern position out of range");
        auto mask = std::uint32_t{1} << (_k - b);
        if ((_care & mask) == 0)
            return '*';
        return (_value & mask) != 0 ? '1' : '0';
    }

    void Pattern::set(unsigned b, bool value)
    {
        if (b < 1 || b > _k)
            throw GraphError("pattern position out of range");
        auto mask = std::uint32_t{1} << (_k - b);
        _care |= mask;
        if (value)
            _value |= mask;
        else
            _value &= ~mask;
    }

    void Pattern::clear(unsigned b)
    {
        if (b < 1 || b > _k)
            throw GraphError("pattern position out of range");
        auto mask = std::uint32_t{1} << (_k - b);
        _care &= ~mask;
        _value &= ~mask;
    }

    auto Pattern::extended_by(const Pattern & other) const -> bool
    {
        return _k == other._k && (_care & other._care) == _care && (other._value & _care) == _value;
    }

    auto Pattern::to_string() const -> std::string
    {
        std::string result(_k, '*');
        for (unsigned b = 1; b <= _k; ++b)
            result[b - 1] = at(b);
        return result;
    }

    auto pattern_less(const Pattern & a, const Pattern & b) -> bool
    {
        if (a.size() != b.size())
            return a.size() < b.size();
        auto rank = [](char c) { return c == '*' ? 0 : (c == '0' ? 1 : 2); };
        auto len = std::min(a.length(), b.length());
        for (unsigned pos = 1; pos <= len; ++pos) {
            auto ra = rank(a.at(pos)), rb = rank(b.at(pos));
            if (ra != rb)
                return ra < rb;
        }
        return a.length() < b.length();
    }

    auto enumerate_patterns(unsigned k, unsigned t) -> std::vector<Pattern>
    {
        if (t > k)
            throw GraphError("pattern size bound exceeds k");
        if (k > 20)
            throw GraphError("pattern enumeration limited to k <= 20");
        std::vector<Pattern> result;
        result.reserve(static_cast<std::size_t>(pattern_count(k, t)));
        const std::uint32_t all = (std::uint32_t{1} << k) - 1;
        for (std::uint32_t care = 0; care <= all; ++care) {
            if (static_cast<unsigned>(std::popcount(care)) > t)
                continue;
            // iterate all submasks of care as the value mask
            std::uint32_t value = care;
            while (true) {
                Pattern p(k);
                for (unsigned b = 1; b <= k; ++b) {
                    auto mask = std::uint32_t{1} << (k - b);
                    if ((care & mask) != 0)
                        p.set(b, (value & mask) != 0);
                }
                result.push_back(p);
                if (value == 0)
                    break;
                value = (value - 1) & care;
            }
        }
        std::sort(result.begin(), result.end(), pattern_less);
        return result;
    }

    auto pattern_count(unsigned k, unsigned t) -> std::uint64_t
    {
        std::uint64_t total = 0, binom = 1;
        for (unsigned i = 0; i <= t && i <= k; ++i) {
            total += (std::uint64_t{1} << i) * binom;
            binom = binom * (k - i) / (i + 1);
        }
        return total;
    }

    Graph::Graph(unsigned k, std::span<const std::pair<VertexId, VertexId>> edges) : _k(k)
    {
        check_bits(k);
        std::size_t n = std::size_t{1} << k;
        _adj.assign(n, VertexSet(n));
        for (auto [u, v] : edges) {
            if (u >= n || v >= n)
                throw GraphError("edge {" + std::to_string(u) + "," + std::to_string(v) + "} outside vertex range");
            if (u == v)
                throw GraphError("self-loop at vertex " + std::to_string(u));
            _adj[u].insert(v);
            _adj[v].insert(u);
        }
    }

    auto Graph::empty(unsigned k) -> Graph
    {
        return Graph(k, {});
    }

    auto Graph::complete(unsigned k) -> Graph
    {
        return empty(k).complement();
    }

    auto Graph::cycle(unsigned k) -> Graph
    {
        check_bits(k);
        std::vector<std::pair<VertexId, VertexId>> edges;
        VertexId n = VertexId{1} << k;
        if (n == 2)
            edges.emplace_back(0, 1);
        else
            for (VertexId v = 0; v < n; ++v)
                edges.emplace_back(v, (v + 1) % n);
        return Graph(k, edges);
    }

    auto Graph::edge_total() const -> std::size_t
    {
        std::size_t total = 0;
        for (const auto & row : _adj)
            total += row.size();
        return total / 2;
    }

    void Graph::check_vertex(VertexId v) const
    {
        if (v >= _adj.size())
            throw GraphError("vertex " + std::to_string(v) + " out of range for n = " + std::to_string(_adj.size()));
    }

    auto Graph::adjacent(VertexId u, VertexId v) const -> bool
    {
        check_vertex(u);
        check_vertex(v);
        return _adj[u].contains(v);
    }

    auto Graph::neighbors(VertexId v) const -> const VertexSet &
    {
        check_vertex(v);
        return _adj[v];
    }

    auto Graph::complement() const -> Graph
    {
        Graph result = *this;
        auto all = all_vertices();
        for (VertexId v = 0; v < _adj.size(); ++v) {
            result._adj[v] = all - _adj[v];
            result._adj[v].erase(v);
        }
        return result;
    }

    auto Graph::edges() const -> std::vector<std::pair<VertexId, VertexId>>
    {
        std::vector<std::pair<VertexId, VertexId>> result;
        for (VertexId u = 0; u < _adj.size(); ++u)
            for (auto v : _adj[u])
                if (u < v)
                    result.emplace_back(u, v);
        return result;
    }

    auto common_neighbors(const Graph & g, const VertexSet & u) -> VertexSet
    {
        auto result = g.all_vertices();
        for (auto v : u)
            result &= g.neighbors(v);
        return result;
    }

    auto consistent_set(const Graph & g, const Pattern & p) -> VertexSet
    {
        if (p.length() != g.bits())
            throw GraphError("pattern length " + std::to_string(p.length()) + " does not match k = " + std::to_string(g.bits()));
        VertexSet result(g.order());
        for (VertexId v = 0; v < g.order(); ++v)
            if (p.consistent_with(v))
                result.insert(v);
        return result;
    }

    auto edge_count(const Graph & g, const VertexSet & a, const VertexSet & b) -> std::uint64_t
    {
        std::uint64_t total = 0;
        for (auto u : a)
            total += g.neighbors(u).intersection_size(b);
        return total;
    }

    auto density(const Graph & g, const VertexSet & a, const VertexSet & b) -> double
    {
        if (a.empty() || b.empty())
            throw GraphError("density of an empty vertex set is undefined");
        return static_cast<double>(edge_count(g, a, b)) / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
    }

    auto random_graph(unsigned k, std::uint64_t seed) -> Graph
    {
        check_bits(k);
        std::mt19937_64 engine(seed);
        std::vector<std::pair<VertexId, VertexId>> edges;
        VertexId n = VertexId{1} << k;
        std::uint64_t word = 0;
        unsigned remaining = 0;
        for (VertexId u = 0; u < n; ++u)
            for (VertexId v = u + 1; v < n; ++v) {
                if (remaining == 0) {
                    word = engine();
                    remaining = 64;
                }
                if ((word & 1U) != 0)
                    edges.emplace_back(u, v);
                word >>= 1;
                --remaining;
            }
        return Graph(k, edges);
    }

    void write_graph(std::ostream & out, const Graph & g)
    {
        out << "k " << g.bits() << '\n';
        for (auto [u, v] : g.edges())
            out << u << ' ' << v << '\n';
    }

    auto read_graph(std::istream & in) -> Graph
    {
        std::string line;
        std::optional<unsigned> k;
        std::vector<std::pair<VertexId, VertexId>> edges;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty() || line[0] == '#')
                continue;
            std::istringstream fields(line);
            if (! k) {
                std::string tag;
                unsigned value = 0;
                if (! (fields >> tag >> value) || tag != "k")
                    throw GraphError("line " + std::to_string(line_no) + ": expected header 'k <bits>'");
                k = value;
                continue;
            }
            long long u = -1, v = -1;
            if (! (fields >> u >> v) || u < 0 || v < 0)
                throw GraphError("line " + std::to_string(line_no) + ": expected edge 'u v'");
            std::string rest;
            if (fields >> rest)
                throw GraphError("line " + std::to_string(line_no) + ": trailing data after edge");
            edges.emplace_back(static_cast<VertexId>(u), static_cast<VertexId>(v));
        }
        if (! k)
            throw GraphError("missing 'k <bits>' header");
        return Graph(*k, edges);
    }

    auto serialize_graph(const Graph & g) -> std::string
    {
        std::ostringstream out;
        write_graph(out, g);
        return out.str();
    }

    auto parse_graph(std::string_view text) -> Graph
    {
        std::istringstream in{std::string(text)};
        return read_graph(in);
    }

    auto graph_hash(const Graph & g) -> std::string
    {
        return to_hex(fnv1a64(serialize_graph(g)));
    }

    auto to_hex(std::uint64_t value) -> std::string
    {
        static constexpr char digits[] = "0123456789abcdef";
        std::string result(16, '0');
        for (int i = 15; i >= 0; --i) {
            result[static_cast<std::size_t>(i)] = digits[value & 0xF];
            value >>= 4;
        }
        return result;
    }
}
