#include "ramsey/adversary.hpp"
#include "ramsey/cnf.hpp"
#include "ramsey/game.hpp"
#include "ramsey/graph.hpp"
#include "ramsey/harness.hpp"
#include "ramsey/hash.hpp"
#include "ramsey/oracle.hpp"
#include "ramsey/resolution.hpp"
#include "ramsey/sat.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace ramsey;

namespace
{
    // operational failures exit 1; everything else thrown below is bad input
    struct OperationalError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    auto open_in(const std::string & path) -> std::ifstream
    {
        std::ifstream in(path);
        if (! in)
            throw OperationalError("cannot open " + path);
        return in;
    }

    auto open_out(const std::string & path) -> std::ofstream
    {
        std::ofstream out(path, std::ios::binary);
        if (! out)
            throw OperationalError("cannot write " + path);
        return out;
    }

    struct GraphSource
    {
        std::string file;
        unsigned k = 0;
        std::uint64_t seed = 0;
        std::string kind = "random";

        void add_options(CLI::App * app)
        {
            app->add_option("--graph", file, "graph file");
            app->add_option("--k", k, "bit width (graph has 2^k vertices)");
            app->add_option("--seed", seed, "random graph seed");
            app->add_option("--graph-kind", kind, "random, complete, empty or cycle")->check(CLI::IsMember({"random", "complete", "empty", "cycle"}));
        }

        auto load() const -> Graph
        {
            if (! file.empty()) {
                auto in = open_in(file);
                return read_graph(in);
            }
            if (k == 0)
                throw std::invalid_argument("give --graph or --k");
            if (kind == "complete")
                return Graph::complete(k);
            if (kind == "empty")
                return Graph::empty(k);
            if (kind == "cycle")
                return Graph::cycle(k);
            return random_graph(k, seed);
        }
    };

    auto self_solver_template() -> std::string
    {
        if (const char * env = std::getenv(solver_env); env && *env)
            return env;
        std::error_code ec;
        auto self = std::filesystem::read_symlink("/proc/self/exe", ec);
        if (ec)
            return {};
        return "'" + self.string() + "' solve {}";
    }

    auto load_cnf(const std::string & path) -> Cnf
    {
        auto in = open_in(path);
        return parse_dimacs(in);
    }

    void cmd_gen(const GraphSource & src, const std::string & out_path)
    {
        auto g = src.load();
        if (out_path.empty() || out_path == "-")
            write_graph(std::cout, g);
        else {
            auto out = open_out(out_path);
            write_graph(out, g);
        }
    }

    void cmd_encode(const GraphSource & src, unsigned s, const std::string & kind_name, const std::string & out_path, std::string meta_path)
    {
        auto g = src.load();
        auto f = encode(g, s, parse_encoding(kind_name));
        auto meta = metadata_for(f, g);
        if (out_path.empty() || out_path == "-")
            emit_dimacs(std::cout, f.cnf, meta);
        else {
            auto out = open_out(out_path);
            emit_dimacs(out, f.cnf, meta);
            if (meta_path.empty())
                meta_path = out_path + ".json";
        }
        if (! meta_path.empty()) {
            auto out = open_out(meta_path);
            out << metadata_json(meta) << '\n';
        }
    }

    auto cmd_check(const GraphSource & src, unsigned s, const std::string & property_mode, std::uint64_t trials, std::uint64_t budget, bool json_out) -> int
    {
        auto g = src.load();
        nlohmann::ordered_json report;
        report["graph_hash"] = graph_hash(g);
        report["k"] = g.bits();
        report["s"] = s;
        auto search = find_homogeneous(g, s, budget);
        report["nodes"] = search.nodes;
        std::string verdict;
        if (search.status == SearchStatus::found) {
            auto kind = homogeneous_kind_name(search.witness->kind);
            report["ramsey"] = false;
            report["witness_kind"] = kind;
            report["witness"] = search.witness->vertices.to_vector();
            std::ostringstream line;
            line << "not Ramsey, " << kind << " witness:";
            for (auto v : search.witness->vertices)
                line << ' ' << v;
            verdict = line.str();
        }
        else if (search.status == SearchStatus::none) {
            report["ramsey"] = true;
            verdict = "Ramsey: no clique or independent set of size " + std::to_string(s);
        }
        else {
            report["ramsey"] = nullptr;
            verdict = "unknown: search budget exhausted after " + std::to_string(search.nodes) + " nodes";
        }
        if (property_mode != "off") {
            auto mode = property_mode == "exhaustive" ? PropertyPMode::exhaustive : PropertyPMode::sampled;
            auto p = check_property_p(g, mode, trials, src.seed);
            nlohmann::ordered_json pj;
            pj["verdict"] = property_p_verdict_name(p.verdict);
            pj["bound"] = p.bound;
            pj["trials"] = p.trials;
            pj["work"] = p.work;
            if (p.counterexample_set) {
                pj["U"] = p.counterexample_set->to_vector();
                pj["p"] = p.counterexample_pattern->to_string();
            }
            report["property_p"] = pj;
            verdict += "\nproperty P: " + pj["verdict"].get<std::string>();
        }
        if (json_out)
            std::cout << report.dump() << '\n';
        else
            std::cout << verdict << '\n';
        return 0;
    }

    struct GameOptions
    {
        std::string cnf_file;
        unsigned s = 0;
        std::string encoding = "implicit";
        std::string prover = "random";
        std::string adversary = "random";
        std::string script;
        unsigned mu = 0;
        std::uint64_t max_moves = default_move_cap;
        std::uint64_t seed = 1;
        std::string transcript;
        double epsilon = 1.0 / 3.0;
        double alpha = 0.5;
        double beta = 0.2;
        double delta = 0.0;
        bool check = false;
    };

    auto cmd_game(const GraphSource & src, const GameOptions & o) -> int
    {
        std::unique_ptr<Formula> formula;
        std::optional<Graph> graph;
        if (! o.cnf_file.empty())
            formula = std::make_unique<CnfFormula>(load_cnf(o.cnf_file));
        else {
            graph = src.load();
            if (o.s < 2)
                throw std::invalid_argument("--s must be at least 2");
            if (o.encoding == "implicit")
                formula = std::make_unique<CliqueFormula>(*graph, o.s);
            else {
                auto f = encode(*graph, o.s, parse_encoding(o.encoding));
                formula = std::make_unique<CnfFormula>(std::move(f.cnf), f.map, *graph);
            }
        }
        const auto * map = formula->var_map();
        auto need_graph = [&](const std::string & what) {
            if (! graph || ! map || map->kind() == Encoding::unary)
                throw std::invalid_argument(what + " needs --graph with a binary, clique or implicit encoding");
        };

        std::unique_ptr<AdversaryStrategy> adversary;
        unsigned threshold = graph ? lemma23_threshold(graph->bits()) : 1;
        if (o.adversary == "random")
            adversary = make_random_adversary(split_seed(o.seed, 1));
        else if (o.adversary == "zero" || o.adversary == "one")
            adversary = make_constant_adversary(o.adversary == "one");
        else if (o.adversary == "lemma23") {
            need_graph("lemma23");
            adversary = make_lemma23_adversary(*graph);
        }
        else {
            need_graph("lemma34");
            ParamConfig params{o.epsilon, o.alpha, o.beta, o.delta, o.s};
            if (params.delta <= 0.0)
                params.delta = density_floor(*graph, graph->all_vertices(), o.beta, 200, o.seed).min_density;
            auto s_star = build_s_star(*graph, graph->all_vertices(), o.epsilon, o.alpha);
            if (! s_star.diagnostic.empty())
                std::cerr << s_star.diagnostic << '\n';
            threshold = s_star.t;
            adversary = make_lemma34_adversary(*graph, std::move(s_star), params);
        }

        std::unique_ptr<ProverStrategy> prover;
        if (o.prover == "random")
            prover = make_random_prover(o.seed);
        else if (o.prover == "greedy")
            prover = make_greedy_prover();
        else if (o.prover == "interactive")
            prover = make_interactive_prover(std::cin, o.transcript.empty() ? std::cerr : std::cout);
        else if (o.prover == "cycler") {
            need_graph("cycler");
            prover = make_fixation_cycler(*map, threshold, o.seed);
        }
        else {
            if (o.script.empty())
                throw std::invalid_argument("scripted prover needs --script");
            auto in = open_in(o.script);
            prover = make_scripted_prover(read_transcript_moves(in));
        }

        auto mu = o.mu;
        if (mu == 0) {
            if (! graph)
                throw std::invalid_argument("--mu is required for a CNF game");
            mu = std::max(1U, lemma23_memory(graph->bits()));
        }
        std::optional<std::string> violation;
        MoveObserver observer;
        if (o.check)
            observer = [&](const GameState & state, const MoveRecord &) {
                if (! violation)
                    violation = adversary->check_invariants(state);
            };
        auto t = play(*formula, *prover, *adversary, mu, o.max_moves, observer);
        if (o.transcript.empty())
            write_transcript(std::cout, t);
        else {
            auto out = open_out(o.transcript);
            write_transcript(out, t);
            std::cout << outcome_name(t.outcome) << " after " << t.moves.size() << " moves, memory high-water " << t.high_water << '\n';
        }
        if (violation)
            std::cerr << "invariant violated: " << *violation << '\n';
        return 0;
    }

    struct WidthOptions
    {
        std::string cnf_file;
        unsigned s = 0;
        std::string encoding = "clique";
        std::string mode = "oracle";
        std::size_t w_max = 32;
        std::size_t budget = default_closure_budget;
        std::string refutation_in;
        std::string refutation_out;
    };

    auto cmd_width(const GraphSource & src, const WidthOptions & o) -> int
    {
        Cnf cnf;
        if (! o.cnf_file.empty())
            cnf = load_cnf(o.cnf_file);
        else {
            if (o.s < 2)
                throw std::invalid_argument("--s must be at least 2");
            cnf = encode(src.load(), o.s, parse_encoding(o.encoding)).cnf;
        }
        nlohmann::ordered_json out;
        out["mode"] = o.mode;
        std::optional<Refutation> refutation;
        if (o.mode == "oracle") {
            auto r = width_oracle(cnf, o.w_max, o.budget);
            out["status"] = width_status_name(r.status);
            out["closure_size"] = r.closure_size;
            if (r.status == WidthStatus::refuted)
                out["W"] = r.width;
            else
                out["last_width_tried"] = r.width;
            refutation = r.refutation;
        }
        else if (o.mode == "treelike") {
            auto r = treelike_bruteforce(cnf);
            if (r.satisfying) {
                out["status"] = "satisfiable";
                std::vector<long long> lits;
                for (Var v = 1; v < r.satisfying->size(); ++v)
                    lits.push_back((*r.satisfying)[v] ? v : -static_cast<long long>(v));
                out["assignment"] = lits;
            }
            else
                out["status"] = "refuted";
            refutation = r.refutation;
        }
        else {
            if (o.refutation_in.empty())
                throw std::invalid_argument("check mode needs --refutation");
            auto in = open_in(o.refutation_in);
            refutation = parse_refutation(in);
        }
        int code = 0;
        if (refutation) {
            auto check = check_refutation(cnf, *refutation);
            if (check.ok()) {
                out["valid"] = true;
                out["report"] = width_report_json(*check.report);
                out["size_width"] = size_width_bound(*check.report).rendered;
            }
            else {
                out["valid"] = false;
                out["failure"] = {{"step", check.failure->step}, {"message", check.failure->message}};
                code = o.mode == "check" ? 2 : 1;
            }
            if (! o.refutation_out.empty()) {
                auto file = open_out(o.refutation_out);
                write_refutation(file, *refutation);
            }
        }
        std::cout << out.dump(2) << '\n';
        return code;
    }

    auto cmd_experiment(const std::string & spec_path, const std::string & output, unsigned workers) -> int
    {
        auto in = open_in(spec_path);
        auto spec = parse_experiment_spec(in);
        if (! output.empty())
            spec.output = output;
        if (workers > 0)
            spec.workers = workers;
        auto rows = run_experiment(spec, {}, self_solver_template());
        std::cout << rows << " rows written to " << (spec.output / "results.jsonl").string() << " (spec " << spec.hash() << ")\n";
        return 0;
    }

    auto cmd_solve(const std::string & path, double timeout, std::uint64_t conflicts) -> int
    {
        auto cnf = load_cnf(path);
        SatLimits limits;
        if (timeout > 0)
            limits.time_limit = std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(timeout));
        if (conflicts > 0)
            limits.max_conflicts = conflicts;
        auto r = solve_cnf(cnf, limits);
        write_solver_output(std::cout, r, cnf.num_vars);
        return 0;
    }
}

int main(int argc, char ** argv)
{
    CLI::App app{"Ramsey formula workbench: graphs, CNF encodings, resolution tools and width games"};
    app.require_subcommand(1);

    GraphSource src;
    std::string out_path, meta_path, kind_name = "binary", property_mode = "off", spec_path, experiment_out, solve_path;
    unsigned s = 0, workers = 0;
    std::uint64_t trials = 10'000, budget = default_node_budget, conflicts = 0;
    bool json_out = false;
    double solve_timeout = 0.0;
    GameOptions game;
    WidthOptions width;

    auto * gen = app.add_subcommand("gen", "write a graph file");
    src.add_options(gen);
    gen->add_option("-o,--output", out_path, "output file (default stdout)");

    auto * enc = app.add_subcommand("encode", "write the DIMACS formula for a graph");
    src.add_options(enc);
    enc->add_option("--s", s, "homogeneous set size")->required();
    enc->add_option("--kind", kind_name, "binary, unary or clique")->check(CLI::IsMember({"binary", "unary", "clique"}));
    enc->add_option("-o,--output", out_path, "DIMACS output (default stdout)");
    enc->add_option("--meta", meta_path, "JSON metadata output (default <output>.json)");

    auto * check = app.add_subcommand("check", "Ramsey verdict and property P report");
    src.add_options(check);
    check->add_option("--s", s, "homogeneous set size")->required();
    check->add_option("--property-p", property_mode, "off, exhaustive or sampled")->check(CLI::IsMember({"off", "exhaustive", "sampled"}));
    check->add_option("--trials", trials, "samples for sampled property P");
    check->add_option("--budget", budget, "branch-and-bound node budget");
    check->add_flag("--json", json_out, "print a JSON report");

    auto * gm = app.add_subcommand("game", "play the Prover-Adversary game");
    src.add_options(gm);
    gm->add_option("--cnf", game.cnf_file, "DIMACS formula (instead of --graph/--k)");
    gm->add_option("--s", game.s, "number of indices for graph formulas");
    gm->add_option("--encoding", game.encoding, "implicit (Clique(G) without clauses), binary or clique")
        ->check(CLI::IsMember({"implicit", "binary", "clique"}));
    gm->add_option("--prover", game.prover, "random, greedy, cycler, scripted or interactive")
        ->check(CLI::IsMember({"random", "greedy", "cycler", "scripted", "interactive"}));
    gm->add_option("--adversary", game.adversary, "random, zero, one, lemma23 or lemma34")
        ->check(CLI::IsMember({"random", "zero", "one", "lemma23", "lemma34"}));
    gm->add_option("--script", game.script, "transcript whose moves the scripted prover replays");
    gm->add_option("--mu", game.mu, "memory locations (default floor(k^2/9))");
    gm->add_option("--max-moves", game.max_moves, "move cap");
    gm->add_option("--game-seed", game.seed, "seed for randomized strategies");
    gm->add_option("--transcript", game.transcript, "transcript output (default stdout)");
    gm->add_option("--epsilon", game.epsilon, "lemma34 epsilon");
    gm->add_option("--alpha", game.alpha, "lemma34 alpha");
    gm->add_option("--beta", game.beta, "lemma34 beta");
    gm->add_option("--delta", game.delta, "lemma34 delta (default: measured)");
    gm->add_flag("--check", game.check, "check the adversary's invariants after every move");

    auto * wd = app.add_subcommand("width", "resolution width, treelike refutation or refutation check");
    src.add_options(wd);
    wd->add_option("--cnf", width.cnf_file, "DIMACS formula (instead of --graph/--k)");
    wd->add_option("--s", width.s, "number of indices for graph formulas");
    wd->add_option("--encoding", width.encoding, "binary, unary or clique")->check(CLI::IsMember({"binary", "unary", "clique"}));
    wd->add_option("--mode", width.mode, "oracle, treelike or check")->check(CLI::IsMember({"oracle", "treelike", "check"}));
    wd->add_option("--w-max", width.w_max, "largest width the oracle tries");
    wd->add_option("--budget", width.budget, "closure size budget");
    wd->add_option("--refutation", width.refutation_in, "refutation to check");
    wd->add_option("-o,--output", width.refutation_out, "write the refutation here");

    auto * ex = app.add_subcommand("experiment", "run an experiment spec");
    ex->add_option("spec", spec_path, "experiment spec file")->required();
    ex->add_option("--output", experiment_out, "override the spec's output directory");
    ex->add_option("--workers", workers, "override the spec's worker count");

    auto * sv = app.add_subcommand("solve", "solve a DIMACS file with the built-in CDCL solver");
    sv->add_option("cnf", solve_path, "DIMACS file")->required();
    sv->add_option("--timeout", solve_timeout, "seconds");
    sv->add_option("--conflicts", conflicts, "conflict limit");

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError & e) {
        auto code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*gen) {
            cmd_gen(src, out_path);
            return 0;
        }
        if (*enc) {
            cmd_encode(src, s, kind_name, out_path, meta_path);
            return 0;
        }
        if (*check)
            return cmd_check(src, s, property_mode, trials, budget, json_out);
        if (*gm)
            return cmd_game(src, game);
        if (*wd)
            return cmd_width(src, width);
        if (*ex)
            return cmd_experiment(spec_path, experiment_out, workers);
        if (*sv)
            return cmd_solve(solve_path, solve_timeout, conflicts);
    }
    catch (const OperationalError & e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    catch (const std::invalid_argument & e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return 2;
    }
    catch (const std::exception & e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
