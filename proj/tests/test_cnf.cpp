#include "support.hpp"

#include <doctest.h>

#include <set>
#include <sstream>

using namespace ramsey;
using testing::brute_homogeneous;
using testing::brute_satisfiable;
using testing::graph_from;

namespace
{
    auto c4() -> Graph { return graph_from(2, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}); }

    auto lit(long long v) -> Literal { return Literal::from_dimacs(v); }

    auto evaluate(const Clause & c, const Assignment & a) -> bool
    {
        for (auto l : c)
            if (a[l.var] == l.positive)
                return true;
        return false;
    }
}

TEST_CASE("clauses are normalized sets")
{
    Clause c({lit(3), lit(-1), lit(3)});
    CHECK(c.width() == 2);
    CHECK(c.to_string() == "-1 3 0");
    CHECK(c.polarity(1) == false);
    CHECK_FALSE(c.polarity(2).has_value());
    CHECK_THROWS_AS(Clause({lit(1), lit(-1)}), CnfError);
    CHECK_FALSE(Clause::make({lit(2), lit(-2)}).has_value());
    CHECK_THROWS_AS((void) Literal::from_dimacs(0), CnfError);
    CHECK(Clause().empty());
}

TEST_CASE("variable maps are bijections")
{
    for (auto kind : {Encoding::binary, Encoding::unary, Encoding::clique})
        for (unsigned k = 1; k <= 4; ++k)
            for (unsigned s = 2; s <= 4; ++s) {
                VarMap m(kind, k, s);
                std::set<Var> seen;
                if (kind == Encoding::unary) {
                    for (unsigned i = 1; i <= s; ++i)
                        for (VertexId v = 0; v < m.order(); ++v) {
                            auto var = m.p(i, v);
                            CHECK(var == (i - 1) * m.order() + v + 1);
                            CHECK(m.slot(var).index == i);
                            CHECK(m.slot(var).position == v);
                            seen.insert(var);
                        }
                }
                else {
                    for (unsigned i = 1; i <= s; ++i)
                        for (unsigned b = 1; b <= k; ++b) {
                            auto var = m.x(i, b);
                            CHECK(var == (i - 1) * k + b);
                            CHECK(m.slot(var).index == i);
                            CHECK(m.slot(var).position == b);
                            seen.insert(var);
                        }
                }
                if (m.has_guard()) {
                    CHECK(m.slot(m.y()).index == 0);
                    seen.insert(m.y());
                }
                CHECK(seen.size() == m.num_vars());
                CHECK(*seen.begin() == 1);
                CHECK(*seen.rbegin() == m.num_vars());
            }
    CHECK(VarMap(Encoding::binary, 4, 4).y() == 17);
    CHECK(VarMap(Encoding::clique, 4, 4).num_vars() == 16);
    CHECK(VarMap(Encoding::binary, 4, 2).c() == doctest::Approx(0.5));
}

TEST_CASE("binary clause counts")
{
    auto g = random_graph(4, 7);
    auto f = encode_binary(g, 4);
    // generated: 6 index pairs x (16 injectivity + 240 ordered vertex pairs)
    CHECK(f.cnf.size() == 1536);
    CHECK(closed_form_clause_count(Encoding::binary, 16, 4) == 1536);
    CHECK(quoted_binary_clause_count(16, 4) == 726);
    CHECK(f.cnf.num_vars == 17);

    for (unsigned k = 1; k <= 4; ++k)
        for (unsigned s = 2; s <= 4; ++s) {
            auto h = random_graph(k, 100 + k * s);
            auto e = encode_binary(h, s);
            std::uint64_t n = h.order(), pairs = s * (s - 1) / 2;
            CHECK(e.cnf.size() == pairs * n * n);
            CHECK(e.cnf.size() == closed_form_clause_count(Encoding::binary, n, s));
            std::set<Clause> distinct(e.cnf.clauses.begin(), e.cnf.clauses.end());
            CHECK(distinct.size() == e.cnf.size());
            for (std::size_t c = 0; c < e.cnf.size(); ++c) {
                auto w = e.cnf.clauses[c].width();
                if (e.cnf.families[c] == ClauseFamily::injective)
                    CHECK(w == 2 * k);
                else
                    CHECK(w == 2 * k + 1);
            }
        }
}

TEST_CASE("binary formula is satisfied by a clique assignment on K_n")
{
    auto g = Graph::complete(3);
    auto f = encode_binary(g, 4);
    std::vector<VertexId> vs{6, 1, 3, 0};
    auto a = encode_assignment(f.map, vs, true);
    for (const auto & c : f.cnf.clauses)
        CHECK(evaluate(c, a));
    CHECK(satisfies(f.cnf, a));
    auto bad = encode_assignment(f.map, vs, false);
    CHECK(first_falsified(f.cnf, bad).has_value());
}

TEST_CASE("binary encoding is sound and complete on small graphs")
{
    for (unsigned k : {2U, 3U})
        for (std::uint64_t seed = 1; seed <= 12; ++seed) {
            auto g = random_graph(k, seed);
            for (unsigned s = 2; s <= 4; ++s) {
                auto f = encode_binary(g, s);
                auto model = brute_satisfiable(f.cnf);
                CHECK(model.has_value() == brute_homogeneous(g, s).has_value());
                if (model) {
                    auto d = decode_assignment(f.map, *model, g);
                    CHECK(d.valid());
                }
            }
        }
}

TEST_CASE("unary encoding")
{
    auto g = Graph::complete(2);
    auto f = encode_unary(g, 2);
    // 2 at-least-one, 12 at-most-one, 4 injectivity, 12 edge clauses (each distinct clause once)
    CHECK(f.cnf.size() == 30);
    CHECK(closed_form_clause_count(Encoding::unary, 4, 2) == 30);
    CHECK(f.cnf.num_vars == 9);
    std::set<Clause> distinct(f.cnf.clauses.begin(), f.cnf.clauses.end());
    CHECK(distinct.size() == 30);
    CHECK(brute_satisfiable(f.cnf).has_value());

    // empty graph: no 2-clique, but an independent pair exists
    auto e = encode_unary(Graph::empty(2), 2);
    auto y = Literal{e.map.y(), true};
    CHECK_FALSE(brute_satisfiable(restrict(e.cnf, y)).has_value());
    auto model = brute_satisfiable(e.cnf);
    REQUIRE(model.has_value());
    CHECK_FALSE((*model)[e.map.y()]);

    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        auto h = random_graph(2, seed);
        for (unsigned s = 2; s <= 3; ++s) {
            auto u = encode_unary(h, s);
            CHECK(u.cnf.size() == closed_form_clause_count(Encoding::unary, 4, s));
            auto m = brute_satisfiable(u.cnf);
            CHECK(m.has_value() == brute_homogeneous(h, s).has_value());
            if (m)
                CHECK(decode_assignment(u.map, *m, h).valid());
        }
    }
}

TEST_CASE("restriction identities")
{
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        auto g = random_graph(3, seed);
        auto f = encode_binary(g, 3);
        auto y = Literal{f.map.y(), true};
        auto on = restrict(f.cnf, y), off = restrict(f.cnf, y.negated());
        CHECK(on.clauses == encode_clique(g, 3).cnf.clauses);
        CHECK(off.clauses == encode_clique(g.complement(), 3).cnf.clauses);
        // idempotent once y is gone
        CHECK(restrict(on, y).clauses == on.clauses);
    }
    Cnf pure;
    pure.num_vars = 1;
    pure.add(Clause({lit(1)}), ClauseFamily::input);
    auto r = restrict(pure, lit(-1));
    REQUIRE(r.size() == 1);
    CHECK(r.clauses[0].empty());
}

TEST_CASE("clique encoding")
{
    auto f = encode_clique(c4(), 3);
    CHECK_FALSE(brute_satisfiable(f.cnf).has_value());
    CHECK(f.cnf.num_vars == 6);
    CHECK(f.cnf.width() == 4);

    auto k8 = encode_clique(Graph::complete(3), 3);
    CHECK(brute_satisfiable(k8.cnf).has_value());
    CHECK(k8.cnf.num_vars == 9);

    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto g = random_graph(3, seed);
        auto c = encode_clique(g, 3);
        CHECK(c.cnf.size() == clique_clause_count(8, 3, 28 - g.edge_total()));
        CHECK(c.cnf.size() <= closed_form_clause_count(Encoding::clique, 8, 3));
        CHECK(brute_satisfiable(c.cnf).has_value() == testing::brute_clique(g, 3));
    }
}

TEST_CASE("dimacs output")
{
    Cnf c;
    c.num_vars = 2;
    c.add(Clause({lit(-2), lit(1)}), ClauseFamily::input);
    std::ostringstream plain;
    emit_dimacs(plain, c);
    CHECK(plain.str() == "p cnf 2 1\n1 -2 0\n");

    auto g = random_graph(3, 9);
    auto f = encode_binary(g, 3);
    auto meta = metadata_for(f, g);
    std::ostringstream a, b;
    emit_dimacs(a, f.cnf, meta);
    emit_dimacs(b, encode_binary(random_graph(3, 9), 3).cnf, meta);
    CHECK(a.str() == b.str());
    CHECK(a.str().find("c graph-hash " + graph_hash(g)) != std::string::npos);

    std::istringstream in(a.str());
    auto back = parse_dimacs(in);
    CHECK(back.num_vars == f.cnf.num_vars);
    CHECK(back.clauses == f.cnf.clauses);
    CHECK(meta.clauses == f.cnf.size());
    CHECK(meta.vars == f.cnf.num_vars);

    std::istringstream broken("p cnf 2 1\n1 3 0\n");
    CHECK_THROWS_AS((void) parse_dimacs(broken), CnfError);
}

TEST_CASE("decoding assignments")
{
    auto g = Graph::complete(2);
    auto f = encode_binary(g, 2);
    Assignment a(f.map.num_vars() + 1, false);
    a[f.map.x(1, 1)] = true; // x^1 = (1,0)
    a[f.map.x(2, 2)] = true; // x^2 = (0,1)
    a[f.map.y()] = true;
    auto d = decode_assignment(f.map, a, g);
    CHECK(d.vertices[0] == VertexId{2});
    CHECK(d.vertices[1] == VertexId{1});
    CHECK(d.valid());

    a[f.map.x(2, 1)] = true;
    a[f.map.x(2, 2)] = false;
    auto clash = decode_assignment(f.map, a, g);
    REQUIRE_FALSE(clash.valid());
    CHECK(clash.violations[0].kind == Violation::Kind::injectivity);

    auto c = encode_clique(g, 2);
    auto model = brute_satisfiable(c.cnf);
    REQUIRE(model.has_value());
    auto cd = decode_assignment(c.map, *model, g);
    CHECK(cd.valid());
    CHECK(*cd.vertices[0] != *cd.vertices[1]);
    CHECK(g.adjacent(*cd.vertices[0], *cd.vertices[1]));

    auto u = encode_unary(g, 2);
    Assignment none(u.map.num_vars() + 1, false);
    auto ud = decode_assignment(u.map, none, g);
    REQUIRE_FALSE(ud.valid());
    CHECK(ud.violations[0].kind == Violation::Kind::unary_row_empty);
}

TEST_CASE("every homogeneous set encodes to a satisfying assignment")
{
    auto g = testing::wagner();
    auto f = encode_binary(g, 3);
    unsigned found = 0;
    for (VertexId a = 0; a < 8; ++a)
        for (VertexId b = a + 1; b < 8; ++b)
            for (VertexId c = b + 1; c < 8; ++c) {
                bool ab = g.adjacent(a, b), ac = g.adjacent(a, c), bc = g.adjacent(b, c);
                std::vector<VertexId> vs{c, a, b};
                if (! ab && ! ac && ! bc) {
                    ++found;
                    CHECK(satisfies(f.cnf, encode_assignment(f.map, vs, false)));
                    CHECK_FALSE(satisfies(f.cnf, encode_assignment(f.map, vs, true)));
                }
                else if (! (ab && ac && bc))
                    CHECK_FALSE(satisfies(f.cnf, encode_assignment(f.map, vs, false)));
            }
    CHECK(found > 0);
}

TEST_CASE("encoder argument checks")
{
    CHECK_THROWS_AS((void) encode_binary(Graph::complete(2), 1), CnfError);
    CHECK(parse_encoding("clique") == Encoding::clique);
    CHECK_THROWS_AS((void) parse_encoding("ternary"), CnfError);
}
