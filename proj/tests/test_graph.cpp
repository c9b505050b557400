#include "support.hpp"

#include "ramsey/hash.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>

using namespace ramsey;
using testing::graph_from;
using testing::set_of;

namespace
{
    auto c4() -> Graph { return graph_from(2, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}); }

    auto list(const VertexSet & s) -> std::vector<VertexId> { return s.to_vector(); }
}

TEST_CASE("vertex bits are most significant first and round-trip")
{
    CHECK(vertex_bits(2, 2) == "10");
    CHECK(vertex_bits(1, 3) == "001");
    for (unsigned k = 1; k <= 6; ++k)
        for (VertexId v = 0; v < (1U << k); ++v)
            CHECK(vertex_from_bits(vertex_bits(v, k)) == v);
    CHECK_THROWS_AS((void) vertex_from_bits("01x"), GraphError);
}

TEST_CASE("vertex set algebra")
{
    VertexSet a(100, {1, 5, 64, 99}), b(100, {5, 6, 99});
    CHECK(list(a & b) == std::vector<VertexId>{5, 99});
    CHECK(list(a | b) == std::vector<VertexId>{1, 5, 6, 64, 99});
    CHECK(list(a - b) == std::vector<VertexId>{1, 64});
    CHECK(a.size() == 4);
    CHECK(a.intersection_size(b) == 2);
    CHECK(a.front() == 1);
    std::size_t iterated = 0;
    for ([[maybe_unused]] auto v : a)
        ++iterated;
    CHECK(iterated == a.size());
    CHECK(VertexSet(100).empty());
    CHECK(VertexSet::full(70).size() == 70);
}

TEST_CASE("neighbors")
{
    auto g = c4();
    CHECK(list(g.neighbors(0)) == std::vector<VertexId>{1, 3});
    CHECK(Graph::empty(3).neighbors(5).empty());
    CHECK(list(Graph::complete(2).neighbors(2)) == std::vector<VertexId>{0, 1, 3});
    CHECK_THROWS_AS((void) g.neighbors(4), GraphError);
}

TEST_CASE("graph invariants: symmetric and irreflexive")
{
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto g = random_graph(5, seed);
        for (VertexId u = 0; u < g.order(); ++u) {
            CHECK_FALSE(g.neighbors(u).contains(u));
            for (VertexId v = 0; v < g.order(); ++v)
                CHECK(g.adjacent(u, v) == g.adjacent(v, u));
        }
    }
    CHECK_THROWS_AS(graph_from(2, {{1, 1}}), GraphError);
    CHECK_THROWS_AS(graph_from(2, {{0, 4}}), GraphError);
}

TEST_CASE("common neighbors")
{
    auto g = c4();
    CHECK(common_neighbors(g, VertexSet(4)) == g.all_vertices());
    CHECK(list(common_neighbors(g, set_of(g, {0, 2}))) == std::vector<VertexId>{1, 3});
    auto k4 = Graph::complete(2);
    CHECK(list(common_neighbors(k4, set_of(k4, {0, 1}))) == std::vector<VertexId>{2, 3});

    // N(U + v) = N(U) & N(v), and U never meets N(U)
    auto r = random_graph(5, 3);
    VertexSet u(r.order());
    for (VertexId v : {3U, 17U, 29U}) {
        auto before = common_neighbors(r, u);
        u.insert(v);
        CHECK(common_neighbors(r, u) == (before & r.neighbors(v)));
        CHECK_FALSE(common_neighbors(r, u).intersects(u));
    }
}

TEST_CASE("patterns and consistent sets")
{
    auto g = Graph::empty(3);
    CHECK(consistent_set(g, Pattern::parse("***")).size() == 8);
    CHECK(list(consistent_set(g, Pattern::parse("0*1"))) == std::vector<VertexId>{1, 3});
    CHECK(list(consistent_set(g, Pattern::parse("111"))) == std::vector<VertexId>{7});
    CHECK(Pattern(3).size() == 0);
    CHECK(Pattern::parse("1*0").size() == 2);
    CHECK(Pattern::parse("1*0").to_string() == "1*0");
    CHECK_THROWS_AS((void) Pattern::parse("1?0"), GraphError);

    // oracle: string matching against the vertex's bit string
    auto h = Graph::empty(5);
    for (const auto & p : enumerate_patterns(5, 5)) {
        auto text = p.to_string();
        auto cp = consistent_set(h, p);
        CHECK(cp.size() == (std::size_t{1} << (5 - p.size())));
        for (VertexId v = 0; v < 32; ++v) {
            auto bits = vertex_bits(v, 5);
            bool match = true;
            for (unsigned b = 0; b < 5; ++b)
                match = match && (text[b] == '*' || text[b] == bits[b]);
            CHECK(cp.contains(v) == match);
        }
    }
}

TEST_CASE("extending a pattern shrinks its consistent set")
{
    auto g = Graph::empty(4);
    auto all = enumerate_patterns(4, 4);
    for (const auto & p : all)
        for (const auto & q : all)
            if (p.extended_by(q)) {
                auto cp = consistent_set(g, p), cq = consistent_set(g, q);
                CHECK((cq - cp).empty());
            }
}

TEST_CASE("edge count and density")
{
    auto g = c4();
    CHECK(edge_count(g, set_of(g, {0}), set_of(g, {1, 3})) == 2);
    CHECK(edge_count(g, VertexSet(4), set_of(g, {1, 3})) == 0);
    auto k4 = Graph::complete(2);
    CHECK(edge_count(k4, set_of(k4, {0, 1}), set_of(k4, {2, 3})) == 4);
    CHECK(density(g, set_of(g, {0}), set_of(g, {1, 3})) == doctest::Approx(1.0));
    CHECK(density(Graph::empty(2), set_of(g, {0, 1}), set_of(g, {1, 2})) == 0.0);
    CHECK(density(k4, set_of(k4, {0, 1}), set_of(k4, {2, 3})) == doctest::Approx(1.0));
    CHECK_THROWS((void) density(g, VertexSet(4), set_of(g, {1})));

    // ordered-pair oracle and symmetry on overlapping sets
    auto r = random_graph(4, 11);
    auto a = set_of(r, {0, 1, 2, 5, 9}), b = set_of(r, {2, 3, 5, 15});
    std::uint64_t pairs = 0;
    for (auto u : a)
        for (auto w : b)
            pairs += r.adjacent(u, w);
    CHECK(edge_count(r, a, b) == pairs);
    CHECK(density(r, a, b) == doctest::Approx(density(r, b, a)));
}

TEST_CASE("random graph follows the documented bit stream")
{
    // the standard fixes mt19937_64's 10000th output for the default seed
    std::mt19937_64 probe;
    probe.discard(9999);
    CHECK(probe() == 9981545732273789042ULL);

    for (std::uint64_t seed : {0ULL, 1ULL, 42ULL}) {
        auto g = random_graph(4, seed);
        std::mt19937_64 engine(seed);
        std::uint64_t word = 0;
        unsigned left = 0;
        for (VertexId u = 0; u < 16; ++u)
            for (VertexId v = u + 1; v < 16; ++v) {
                if (left == 0) {
                    word = engine();
                    left = 64;
                }
                CHECK(g.adjacent(u, v) == ((word & 1U) != 0));
                word >>= 1;
                --left;
            }
    }
    CHECK(random_graph(3, 1) == random_graph(3, 1));
    CHECK(random_graph(1, 9).edge_total() <= 1);
}

TEST_CASE("random graph edge fraction concentrates")
{
    // 32640 pairs; 0.05 is about 18 standard deviations
    auto g = random_graph(8, 2024);
    auto fraction = static_cast<double>(g.edge_total()) / 32640.0;
    CHECK(std::abs(fraction - 0.5) < 0.05);
}

TEST_CASE("pattern enumeration")
{
    auto texts = [](unsigned k, unsigned t) {
        std::vector<std::string> out;
        for (const auto & p : enumerate_patterns(k, t))
            out.push_back(p.to_string());
        return out;
    };
    CHECK(texts(2, 0) == std::vector<std::string>{"**"});
    CHECK(texts(2, 1) == std::vector<std::string>{"**", "*0", "*1", "0*", "1*"});
    CHECK(texts(3, 3).size() == 27);

    // closed-form count and uniqueness
    for (unsigned k = 1; k <= 7; ++k)
        for (unsigned t = 0; t <= k; ++t) {
            auto ps = texts(k, t);
            std::uint64_t expect = 0;
            for (unsigned i = 0; i <= t; ++i) {
                std::uint64_t binom = 1;
                for (unsigned j = 0; j < i; ++j)
                    binom = binom * (k - j) / (j + 1);
                expect += binom << i;
            }
            CHECK(ps.size() == expect);
            CHECK(pattern_count(k, t) == expect);
            CHECK(std::set<std::string>(ps.begin(), ps.end()).size() == ps.size());
        }
}

TEST_CASE("pattern order: size first, then positionwise with * < 0 < 1")
{
    auto rank = [](char c) { return c == '*' ? 0 : c == '0' ? 1 : 2; };
    auto ps = enumerate_patterns(4, 3);
    for (std::size_t i = 1; i < ps.size(); ++i) {
        auto a = ps[i - 1], b = ps[i];
        CHECK(pattern_less(a, b));
        CHECK_FALSE(pattern_less(b, a));
        if (a.size() == b.size()) {
            auto ta = a.to_string(), tb = b.to_string();
            std::size_t j = 0;
            while (ta[j] == tb[j])
                ++j;
            CHECK(rank(ta[j]) < rank(tb[j]));
        }
        else
            CHECK(a.size() < b.size());
    }
}

TEST_CASE("graph text format round-trips")
{
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        auto g = random_graph(4, seed);
        CHECK(parse_graph(serialize_graph(g)) == g);
    }
    auto g = parse_graph("# comment\nk 2\n\n0 1\n2 3\n");
    CHECK(g.edge_total() == 2);
    CHECK(serialize_graph(g) == "k 2\n0 1\n2 3\n");
    CHECK_THROWS_AS((void) parse_graph("k 2\n0 9\n"), GraphError);
    CHECK_THROWS_AS((void) parse_graph("0 1\n"), GraphError);
    CHECK(graph_hash(g) == to_hex(fnv1a64(serialize_graph(g))));
    CHECK(graph_hash(g).size() == 16);
}

TEST_CASE("complement and named graphs")
{
    auto g = random_graph(4, 5);
    auto c = g.complement();
    CHECK(g.edge_total() + c.edge_total() == 120);
    CHECK(c.complement() == g);
    auto cyc = Graph::cycle(3);
    CHECK(cyc.edge_total() == 8);
    for (VertexId v = 0; v < 8; ++v)
        CHECK(cyc.neighbors(v).size() == 2);
    CHECK(Graph::cycle(1).edge_total() == 1);
}
