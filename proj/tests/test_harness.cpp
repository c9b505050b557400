#include "support.hpp"

#include "ramsey/harness.hpp"
#include "ramsey/oracle.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ramsey;
namespace fs = std::filesystem;

namespace
{
    auto spec_from(const std::string & text) -> ExperimentSpec
    {
        std::istringstream in(text);
        return parse_experiment_spec(in);
    }

    auto scratch(const std::string & name) -> fs::path
    {
        auto dir = fs::current_path() / "harness-scratch" / name;
        fs::remove_all(dir);
        fs::create_directories(dir);
        return dir;
    }

    auto lines_of(const fs::path & p) -> std::vector<std::string>
    {
        std::ifstream in(p);
        std::vector<std::string> out;
        std::string line;
        while (std::getline(in, line))
            out.push_back(line);
        return out;
    }
}

TEST_CASE("seed lists")
{
    CHECK(parse_seed_list("1..3, 7") == std::vector<std::uint64_t>{1, 2, 3, 7});
    CHECK(parse_seed_list("5") == std::vector<std::uint64_t>{5});
    CHECK_THROWS_AS((void) parse_seed_list("4..2"), SpecError);
    CHECK_THROWS_AS((void) parse_seed_list("x"), SpecError);
}

TEST_CASE("spec parsing")
{
    auto spec = spec_from("# sweep\nname = small\nk = 3\ns = 3\nseeds = 1..4\nencodings = clique, binary\n"
                          "provers = random\nadversaries = lemma23, zero\nmu = 2, lemma23\nmax_moves = 50\ntimeout = 2.5\n");
    CHECK(spec.name == "small");
    CHECK(spec.k == 3);
    CHECK(spec.seeds.size() == 4);
    CHECK(spec.encodings == std::vector<Encoding>{Encoding::clique, Encoding::binary});
    CHECK(spec.games.adversaries == std::vector<std::string>{"lemma23", "zero"});
    CHECK(spec.games.memories == std::vector<std::string>{"2", "lemma23"});
    CHECK(spec.games.max_moves == 50);
    CHECK(spec.timeout == doctest::Approx(2.5));
    CHECK(spec.solver == "internal");

    CHECK_THROWS_AS(spec_from("k = 3\nk = 4\nseeds = 1\n"), SpecError);
    CHECK_THROWS_AS(spec_from("seeds = 1\ncolour = blue\n"), SpecError);
    CHECK_THROWS_AS(spec_from("k = 3\n"), SpecError);
    CHECK_THROWS_AS(spec_from("seeds = 1\ngraph_file = g.graph\n"), SpecError);
    CHECK_THROWS_AS(spec_from("seeds = 1\nk = three\n"), SpecError);
    CHECK_THROWS_AS(spec_from("seeds = 1\nsolver = minisat\n"), SpecError);
    CHECK_THROWS_AS(spec_from("seeds = 1\nprovers = clairvoyant\n"), SpecError);
    CHECK_THROWS_AS(spec_from("seeds = 1\nencodings = ternary\n"), SpecError);
    CHECK_THROWS_AS(spec_from("seeds = 1\njust words\n"), SpecError);
}

TEST_CASE("spec hash covers the configuration but not output placement")
{
    auto a = spec_from("seeds = 1..3\nk = 3\noutput = here\nworkers = 1\n");
    auto b = spec_from("seeds = 1..3\nk = 3\noutput = there\nworkers = 4\n");
    auto c = spec_from("seeds = 1..3\nk = 4\n");
    CHECK(a.hash() == b.hash());
    CHECK(a.hash() != c.hash());
    CHECK(a.hash().size() == 16);
    CHECK(spec_from(a.canonical()).canonical() == a.canonical());
}

TEST_CASE("solver output parsing")
{
    auto sat = parse_solver_output("c comment\nc conflicts: 12\nc Decisions = 40\ns SATISFIABLE\nv 1 -2\nv 3 0\n", 3);
    CHECK(sat.status == SolverStatus::sat);
    CHECK(sat.conflicts == 12U);
    CHECK(sat.decisions == 40U);
    REQUIRE(sat.model.has_value());
    CHECK((*sat.model)[1]);
    CHECK_FALSE((*sat.model)[2]);
    CHECK((*sat.model)[3]);

    auto open = parse_solver_output("s SATISFIABLE\nv 1 -2\n", 2);
    CHECK(open.status == SolverStatus::unknown);
    CHECK_FALSE(open.error.empty());

    CHECK(parse_solver_output("s UNSATISFIABLE\n", 2).status == SolverStatus::unsat);
    CHECK(parse_solver_output("s UNKNOWN\n", 2).status == SolverStatus::unknown);
    CHECK(parse_solver_output("", 2).status == SolverStatus::unknown);
    CHECK(parse_solver_output("s SATISFIABLE\nv 9 0\n", 2).status == SolverStatus::unknown);
    CHECK_FALSE(parse_solver_output("s UNSATISFIABLE\n", 2).conflicts.has_value());
    CHECK(solver_status_name(SolverStatus::timeout) == "TIMEOUT");
}

TEST_CASE("internal solver output parses back")
{
    auto f = encode_binary(Graph::complete(2), 3);
    auto r = solve_cnf(f.cnf);
    std::ostringstream out;
    write_solver_output(out, r, f.cnf.num_vars);
    auto back = parse_solver_output(out.str(), f.cnf.num_vars);
    CHECK(back.status == SolverStatus::sat);
    REQUIRE(back.model.has_value());
    CHECK(satisfies(f.cnf, *back.model));
    CHECK(back.conflicts == r.conflicts);
}

TEST_CASE("external solver runs and times out")
{
    auto dir = scratch("solver");
    auto cnf = dir / "f.cnf";
    std::ofstream(cnf) << "p cnf 2 1\n1 -2 0\n";

    auto unsat = run_solver(cnf, "printf 'c conflicts: 3\\ns UNSATISFIABLE\\n'; test -f {}", std::chrono::seconds(5));
    CHECK(unsat.status == SolverStatus::unsat);
    CHECK(unsat.conflicts == 3U);
    CHECK(unsat.exit_code == 0);

    auto sat = run_solver(cnf, "test -f {} && printf 's SATISFIABLE\\nv 1 -2 0\\n'", std::chrono::seconds(5));
    REQUIRE(sat.status == SolverStatus::sat);
    CHECK((*sat.model)[1]);

    auto slow = run_solver(cnf, "sleep 10; cat {}", std::chrono::milliseconds(300));
    CHECK(slow.status == SolverStatus::timeout);
    CHECK(slow.wall_seconds < 5.0);

    CHECK_THROWS((void) run_solver(cnf, "cat", std::chrono::seconds(1)));
}

TEST_CASE("experiment run")
{
    auto dir = scratch("experiment");
    auto text = "name = t\nk = 3\ns = 3\nseeds = 1..4\nencodings = clique, binary\nprovers = random, cycler\n"
                "adversaries = lemma23, random\nmu = 2\nmax_moves = 200\ntimeout = 5\nproperty_p = exhaustive\ncsv = true\n";
    auto spec = spec_from(text + std::string("output = ") + (dir / "one").string() + "\n");
    std::vector<nlohmann::ordered_json> rows;
    auto count = run_experiment(spec, [&](const nlohmann::ordered_json & r) { rows.push_back(r); });
    REQUIRE(count == 8);
    REQUIRE(rows.size() == 8);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto & r = rows[i];
        CHECK(r["row"] == i);
        CHECK(r["spec_hash"] == spec.hash());
        CHECK_FALSE(r.contains("error"));
        auto g = random_graph(3, r["seed"].get<std::uint64_t>());
        CHECK(r["graph_hash"] == graph_hash(g));
        CHECK(r["oracle"]["ramsey"] == ! testing::brute_homogeneous(g, 3).has_value());
        CHECK(r["solver"]["agrees_with_oracle"] == true);
        if (r["solver"]["status"] == "SAT")
            CHECK(r["solver"]["witness_verified"] == true);
        CHECK(r["games"].size() == 4);
        for (const auto & game : r["games"]) {
            CHECK(game["invariant_violation"].is_null());
            CHECK(game["high_water"].get<unsigned>() <= 2);
        }
        CHECK(fs::exists(dir / "one" / r["formula"]["dimacs"].get<std::string>()));
    }
    CHECK(rows[0]["encoding"] == "clique");
    CHECK(rows[1]["encoding"] == "binary");
    CHECK(rows[1]["formula"]["clauses"] == closed_form_clause_count(Encoding::binary, 8, 3));

    auto jsonl = lines_of(dir / "one" / "results.jsonl");
    CHECK(jsonl.size() == 8);
    auto csv = lines_of(dir / "one" / "results.csv");
    REQUIRE(csv.size() == 9);
    CHECK(csv[0] == csv_header());

    // same spec with more workers: identical rows apart from timing
    auto parallel = spec_from(text + std::string("workers = 3\noutput = ") + (dir / "two").string() + "\n");
    std::vector<nlohmann::ordered_json> again;
    run_experiment(parallel, [&](const nlohmann::ordered_json & r) { again.push_back(r); });
    REQUIRE(again.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        CHECK(strip_timing(again[i]).dump() == strip_timing(rows[i]).dump());
}

TEST_CASE("experiment on a graph file")
{
    auto dir = scratch("graphfile");
    auto g = testing::wagner();
    std::ofstream(dir / "w.graph") << serialize_graph(g);
    auto spec = spec_from("s = 4\nk = 3\ngraph_file = " + (dir / "w.graph").string() + "\noutput = " + (dir / "out").string() +
        "\nencodings = binary\nprovers = random\nadversaries = zero\nmu = 3\nmax_moves = 100\n");
    std::vector<nlohmann::ordered_json> rows;
    run_experiment(spec, [&](const nlohmann::ordered_json & r) { rows.push_back(r); });
    REQUIRE(rows.size() == 1);
    CHECK(rows[0]["oracle"]["ramsey"] == true);
    CHECK(rows[0]["solver"]["status"] == "UNSAT");
    CHECK(rows[0]["seed"].is_null());
}
