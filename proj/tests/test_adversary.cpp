#include "support.hpp"

#include "ramsey/adversary.hpp"
#include "ramsey/oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace ramsey;
using testing::set_of;

namespace
{
    auto isolated_zero(unsigned k) -> Graph
    {
        std::vector<std::pair<VertexId, VertexId>> edges;
        for (VertexId u = 1; u < (1U << k); ++u)
            for (VertexId v = u + 1; v < (1U << k); ++v)
                edges.emplace_back(u, v);
        return Graph(k, edges);
    }

    struct Playout
    {
        Transcript transcript;
        std::optional<std::string> violation;
    };

    auto play_checked(const Formula & f, ProverStrategy & p, AdversaryStrategy & a, unsigned mu, std::uint64_t cap) -> Playout
    {
        Playout out;
        out.transcript = play(f, p, a, mu, cap, [&](const GameState & s, const MoveRecord &) {
            if (! out.violation)
                out.violation = a.check_invariants(s);
        });
        return out;
    }

    auto provers(const VarMap & m, unsigned t, std::uint64_t seed) -> std::vector<std::unique_ptr<ProverStrategy>>
    {
        std::vector<std::unique_ptr<ProverStrategy>> out;
        out.push_back(make_random_prover(seed));
        out.push_back(make_greedy_prover());
        out.push_back(make_fixation_cycler(m, t, seed));
        return out;
    }
}

TEST_CASE("binary entropy")
{
    CHECK(binary_entropy(0.5) == doctest::Approx(1.0));
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    // -0.11 log2 0.11 - 0.89 log2 0.89 = 0.35029 + 0.14963
    CHECK(binary_entropy(0.11) == doctest::Approx(0.4999).epsilon(1e-3));
    CHECK(binary_entropy(0.3) == doctest::Approx(binary_entropy(0.7)));
    CHECK_THROWS((void) binary_entropy(-0.1));
    CHECK_THROWS((void) binary_entropy(1.5));
}

TEST_CASE("parameter inequalities")
{
    CHECK(alpha_floor(0.001) == doctest::Approx(0.01655).epsilon(1e-3));
    CHECK(alpha_ceiling(0.001, 0.2, 0.25) == doctest::Approx(0.1795).epsilon(1e-3));

    auto choice = solve_parameters(0.2, 0.25);
    REQUIRE(choice.has_value());
    // independent re-check of both strict inequalities
    auto h = [](double x) { return -x * std::log2(x) - (1 - x) * std::log2(1 - x); };
    double e = choice->epsilon, a = choice->alpha;
    CHECK(0.75 * a > e + h(e));
    CHECK(0.2 - a > (8.0 / 3.0) * e + (4.0 / 3.0) * h(e) - (4.0 / 3.0) * e * std::log2(0.25));
    CHECK(e <= 0.25);
    CHECK(e >= std::ldexp(1.0, -20));
    ParamConfig pc{e, a, 0.2, 0.25, 4};
    CHECK(star_holds(pc));
    CHECK(dagger_holds(pc));

    CHECK_FALSE(solve_parameters(1e-6, 0.5).has_value());

    for (double beta : {0.05, 0.1, 0.3, 0.6})
        for (double delta : {0.1, 0.3, 0.5, 0.9})
            if (auto c = solve_parameters(beta, delta)) {
                ParamConfig p{c->epsilon, c->alpha, beta, delta, 4};
                CHECK(star_holds(p));
                CHECK(dagger_holds(p));
            }

    ParamConfig bad{0.25, 0.1, 0.2, 0.25, 4};
    CHECK_FALSE(star_holds(bad));
}

TEST_CASE("thresholds and budgets")
{
    CHECK(lemma23_threshold(8) == 2);
    CHECK(lemma23_threshold(2) == 1);
    CHECK(lemma23_memory(8) == 7);
    CHECK(lemma23_memory(6) == 4);
    CHECK(lemma34_threshold(1.0 / 3.0, 6) == 2);
    CHECK(lemma34_threshold(0.25, 4) == 1);
    CHECK(lemma34_memory(1.0 / 3.0, 6) == 4);
    CHECK(lemma34_memory(0.01, 4) == 1);
}

TEST_CASE("property-P adversary on a complete graph survives")
{
    auto g = Graph::complete(6);
    CliqueFormula f(g, 8);
    auto mu = lemma23_memory(6);
    for (std::uint64_t seed = 1; seed <= 3; ++seed)
        for (auto & prover : provers(*f.var_map(), lemma23_threshold(6), seed)) {
            auto adversary = make_lemma23_adversary(g);
            auto run = play_checked(f, *prover, *adversary, mu, 10'000);
            CHECK(run.transcript.outcome == Outcome::adversary_survived);
            CHECK_FALSE(run.violation.has_value());
        }
}

TEST_CASE("property-P adversary never resigns when property P holds")
{
    int graphs = 0;
    for (std::uint64_t seed = 1; seed <= 40 && graphs < 10; ++seed) {
        auto g = random_graph(8, seed);
        if (check_property_p(g, PropertyPMode::exhaustive).verdict != PropertyPVerdict::holds_verified)
            continue;
        ++graphs;
        CliqueFormula f(g, 8);
        for (auto & prover : provers(*f.var_map(), lemma23_threshold(8), seed)) {
            auto adversary = make_lemma23_adversary(g);
            auto run = play_checked(f, *prover, *adversary, lemma23_memory(8), 3000);
            CHECK(run.transcript.outcome == Outcome::adversary_survived);
            CHECK_FALSE(run.violation.has_value());
        }
    }
    CHECK(graphs >= 5);
}

TEST_CASE("property-P adversary resigns with a property P counterexample")
{
    auto g = isolated_zero(3);
    CliqueFormula f(g, 3);
    const auto & m = *f.var_map();
    auto prover = make_scripted_prover({Move::query(m.x(1, 1)), Move::query(m.x(2, 1))});
    auto adversary = make_lemma23_adversary(g);
    auto t = play(f, *prover, *adversary, 2);
    REQUIRE(t.outcome == Outcome::adversary_resigned);
    REQUIRE(t.resignation.has_value());
    auto d = t.resignation->details;
    CHECK(d["U"] == nlohmann::json::array({0}));
    CHECK(d["p"] == "***");
    VertexSet u(g.order(), {0});
    CHECK(is_property_p_counterexample(g, u, Pattern::parse("***")));
    CHECK(d["within_property_p_bounds"] == true);
}

TEST_CASE("S* on the complete graph removes nothing")
{
    auto g = Graph::complete(4);
    auto s = build_s_star(g, g.all_vertices(), 0.25, 0.5);
    CHECK(s.t == 1);
    CHECK(s.m == 16);
    CHECK(s.threshold == doctest::Approx(4.0));
    CHECK(s.removed.empty());
    CHECK(s.set == g.all_vertices());
    CHECK(s.counts.size() == 9);
    for (const auto & [p, count] : s.counts)
        CHECK(count == (p.size() == 0 ? 16U : 8U));
}

TEST_CASE("S* postconditions on random sets")
{
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        auto g = random_graph(6, seed);
        Rng rng(seed);
        auto base = random_subset(g.all_vertices(), 20 + seed * 4, rng);
        auto s = build_s_star(g, base, 0.34, 0.5);
        CHECK(s.t == 3);
        CHECK((s.set - base).empty());
        std::set<std::string> seen;
        for (const auto & p : s.removed)
            CHECK(seen.insert(p.to_string()).second);
        CHECK(s.removed.size() <= pattern_count(6, s.t));
        for (const auto & p : enumerate_patterns(6, s.t)) {
            auto count = consistent_set(g, p).intersection_size(s.set);
            CHECK((count == 0 || static_cast<double>(count) > s.threshold));
            CHECK(s.counts.at(p) == count);
        }
        auto again = build_s_star(g, base, 0.34, 0.5);
        CHECK(again.set == s.set);
        CHECK(again.removed.size() == s.removed.size());
    }
}

TEST_CASE("choose_vertex")
{
    // v = 0 adjacent to u = 1 only; w = 2
    auto g = testing::graph_from(2, {{0, 1}, {2, 3}});
    auto x = set_of(g, {0});
    std::vector<VertexSet> ys{set_of(g, {1, 2})};
    CHECK_FALSE(choose_vertex(g, x, ys, 0.6).has_value());
    CHECK(choose_vertex(g, x, ys, 0.5) == VertexId{0});
    CHECK_FALSE(choose_vertex(g, VertexSet(4), ys, 0.1).has_value());

    auto k = Graph::complete(5);
    auto kx = set_of(k, {7, 9, 30});
    std::vector<VertexSet> kys{set_of(k, {7, 8, 9, 10}), set_of(k, {1, 2, 30})};
    CHECK(choose_vertex(k, kx, kys, 0.75) == VertexId{7});
    CHECK(choose_vertex(k, kx, kys, 2.0 / 3.0) == VertexId{7});

    auto r = random_graph(6, 3);
    Rng rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        auto rx = random_subset(r.all_vertices(), 10, rng);
        std::vector<VertexSet> rys{random_subset(r.all_vertices(), 12, rng), random_subset(r.all_vertices(), 20, rng)};
        auto v = choose_vertex(r, rx, rys, 0.4);
        for (auto cand : rx) {
            bool dense = true;
            for (const auto & y : rys)
                dense = dense && static_cast<double>(r.neighbors(cand).intersection_size(y)) >= 0.4 * static_cast<double>(y.size());
            if (dense) {
                CHECK(v == cand);
                break;
            }
        }
        if (! v)
            for (auto cand : rx)
                CHECK(std::any_of(rys.begin(), rys.end(), [&](const VertexSet & y) {
                    return static_cast<double>(r.neighbors(cand).intersection_size(y)) < 0.4 * static_cast<double>(y.size());
                }));
    }
    CHECK(choose_vertex_guaranteed(VertexSet::full(64), {VertexSet::full(64)}, 64, 0.2));
    CHECK_FALSE(choose_vertex_guaranteed(set_of(k, {1}), {VertexSet::full(32)}, 32, 0.2));
}

TEST_CASE("condition 3 decays by at most delta per fixed vertex")
{
    auto g = random_graph(6, 5);
    auto s = build_s_star(g, g.all_vertices(), 1.0 / 3.0, 0.5);
    const double delta = 0.3;
    std::vector<VertexId> fixed;
    auto u_set = VertexSet(g.order());
    for (int step = 0; step < 3; ++step) {
        auto ys = density_targets(g, s, fixed);
        auto x = common_neighbors(g, u_set) & s.set;
        auto v = choose_vertex(g, x, ys, delta);
        if (! v)
            break;
        // for every active q and U' within U: |C_q & S* & N(U' + v)| >= delta |C_q & S* & N(U')|
        for (const auto & [q, count] : s.counts) {
            if (count == 0)
                continue;
            for (std::uint32_t mask = 0; mask < (1U << fixed.size()); ++mask) {
                VertexSet sub(g.order());
                for (std::size_t j = 0; j < fixed.size(); ++j)
                    if ((mask >> j) & 1U)
                        sub.insert(fixed[j]);
                auto before = consistent_set(g, q) & s.set & common_neighbors(g, sub);
                sub.insert(*v);
                auto after = consistent_set(g, q) & s.set & common_neighbors(g, sub);
                CHECK(static_cast<double>(after.size()) >= delta * static_cast<double>(before.size()));
            }
        }
        fixed.push_back(*v);
        u_set.insert(*v);
    }
    CHECK(fixed.size() >= 1);
}

TEST_CASE("S-star adversary on a complete graph survives with invariants intact")
{
    auto g = Graph::complete(6);
    const double eps = 1.0 / 3.0;
    auto s = build_s_star(g, g.all_vertices(), eps, 0.5);
    ParamConfig params{eps, 0.5, 0.2, 0.9, 8};
    CliqueFormula f(g, 8);
    for (std::uint64_t seed = 1; seed <= 3; ++seed)
        for (auto & prover : provers(*f.var_map(), lemma34_threshold(eps, 6), seed)) {
            auto adversary = make_lemma34_adversary(g, s, params);
            auto run = play_checked(f, *prover, *adversary, lemma34_memory(eps, 6), 5000);
            CHECK(run.transcript.outcome == Outcome::adversary_survived);
            CHECK_FALSE(run.violation.has_value());
        }
}

TEST_CASE("S-star adversary resignations carry re-checkable diagnostics")
{
    // a sparse-ish graph and a demanding delta make resignation likely
    auto g = random_graph(6, 2);
    auto s = build_s_star(g, g.all_vertices(), 1.0 / 3.0, 0.5);
    ParamConfig params{1.0 / 3.0, 0.5, 0.2, 0.6, 8};
    CliqueFormula f(g, 8);
    int resigned = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto prover = make_fixation_cycler(*f.var_map(), 2, seed);
        auto adversary = make_lemma34_adversary(g, s, params);
        auto run = play_checked(f, *prover, *adversary, 4, 3000);
        CHECK_FALSE(run.violation.has_value());
        if (run.transcript.outcome != Outcome::adversary_resigned)
            continue;
        ++resigned;
        auto d = run.transcript.resignation->details;
        REQUIRE(d.contains("X_size"));
        std::vector<VertexId> u = d["U"].get<std::vector<VertexId>>();
        auto p = Pattern::parse(d["p"].get<std::string>());
        VertexSet uset(g.order());
        for (auto v : u)
            uset.insert(v);
        auto x = consistent_set(g, p) & common_neighbors(g, uset) & s.set;
        CHECK(x.size() == d["X_size"].get<std::size_t>());
        auto ys = density_targets(g, s, u);
        CHECK(ys.size() == d["Y_count"].get<std::size_t>());
        for (auto v : x)
            CHECK(std::any_of(ys.begin(), ys.end(), [&](const VertexSet & y) {
                return static_cast<double>(g.neighbors(v).intersection_size(y)) < 0.6 * static_cast<double>(y.size());
            }));
    }
    CHECK(resigned > 0);
}
