#include "ramsey/harness.hpp"

#include "ramsey/adversary.hpp"
#include "ramsey/game.hpp"
#include "ramsey/hash.hpp"
#include "ramsey/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <regex>
#include <sstream>
#include <thread>

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

namespace ramsey
{
    namespace
    {
        auto trim(std::string_view s) -> std::string
        {
            auto b = s.find_first_not_of(" \t\r");
            if (b == std::string_view::npos)
                return {};
            auto e = s.find_last_not_of(" \t\r");
            return std::string(s.substr(b, e - b + 1));
        }

        auto split_list(std::string_view s) -> std::vector<std::string>
        {
            std::vector<std::string> out;
            std::string item;
            std::istringstream in{std::string(s)};
            while (std::getline(in, item, ','))
                if (auto t = trim(item); ! t.empty())
                    out.push_back(t);
            return out;
        }

        auto join(const std::vector<std::string> & items) -> std::string
        {
            std::string out;
            for (const auto & i : items)
                out += (out.empty() ? "" : ",") + i;
            return out;
        }

        auto to_u64(const std::string & key, const std::string & v) -> std::uint64_t
        {
            std::size_t used = 0;
            std::uint64_t value = 0;
            try {
                value = std::stoull(v, &used);
            }
            catch (const std::exception &) {
                used = 0;
            }
            if (used != v.size() || v.empty() || v[0] == '-')
                throw SpecError(key + ": expected a non-negative integer, got '" + v + "'");
            return value;
        }

        auto to_double(const std::string & key, const std::string & v) -> double
        {
            std::size_t used = 0;
            double value = 0.0;
            try {
                value = std::stod(v, &used);
            }
            catch (const std::exception &) {
                used = 0;
            }
            if (used != v.size() || v.empty() || ! std::isfinite(value))
                throw SpecError(key + ": expected a number, got '" + v + "'");
            return value;
        }

        auto to_bool(const std::string & key, const std::string & v) -> bool
        {
            if (v == "true" || v == "yes" || v == "1")
                return true;
            if (v == "false" || v == "no" || v == "0")
                return false;
            throw SpecError(key + ": expected true or false, got '" + v + "'");
        }

        auto fmt(double x) -> std::string
        {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", x);
            return buf;
        }
    }

    auto parse_seed_list(std::string_view text) -> std::vector<std::uint64_t>
    {
        std::vector<std::uint64_t> seeds;
        for (const auto & item : split_list(text)) {
            if (auto dots = item.find(".."); dots != std::string::npos) {
                auto lo = to_u64("seeds", trim(item.substr(0, dots))), hi = to_u64("seeds", trim(item.substr(dots + 2)));
                if (hi < lo || hi - lo > 1'000'000)
                    throw SpecError("seeds: bad range '" + item + "'");
                for (auto s = lo; s <= hi; ++s)
                    seeds.push_back(s);
            }
            else
                seeds.push_back(to_u64("seeds", item));
        }
        return seeds;
    }

    auto parse_experiment_spec(std::istream & in) -> ExperimentSpec
    {
        ExperimentSpec spec;
        std::string line;
        std::size_t lineno = 0;
        std::map<std::string, bool> seen;
        while (std::getline(in, line)) {
            ++lineno;
            if (auto hash = line.find('#'); hash != std::string::npos)
                line.erase(hash);
            if (trim(line).empty())
                continue;
            auto eq = line.find('=');
            if (eq == std::string::npos)
                throw SpecError("line " + std::to_string(lineno) + ": expected key = value");
            auto key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
            if (seen[key])
                throw SpecError("line " + std::to_string(lineno) + ": duplicate key " + key);
            seen[key] = true;

            if (key == "name")
                spec.name = value;
            else if (key == "k")
                spec.k = static_cast<unsigned>(to_u64(key, value));
            else if (key == "s")
                spec.s = static_cast<unsigned>(to_u64(key, value));
            else if (key == "seeds")
                spec.seeds = parse_seed_list(value);
            else if (key == "graph_file")
                spec.graph_file = value;
            else if (key == "encodings") {
                spec.encodings.clear();
                for (const auto & e : split_list(value))
                    try {
                        spec.encodings.push_back(parse_encoding(e));
                    }
                    catch (const CnfError & err) {
                        throw SpecError(std::string("encodings: ") + err.what());
                    }
            }
            else if (key == "provers")
                spec.games.provers = split_list(value);
            else if (key == "adversaries")
                spec.games.adversaries = split_list(value);
            else if (key == "mu")
                spec.games.memories = split_list(value);
            else if (key == "max_moves")
                spec.games.max_moves = to_u64(key, value);
            else if (key == "repeats")
                spec.games.repeats = static_cast<unsigned>(to_u64(key, value));
            else if (key == "solver")
                spec.solver = value;
            else if (key == "timeout")
                spec.timeout = to_double(key, value);
            else if (key == "property_p")
                spec.property_p = value;
            else if (key == "property_p_trials")
                spec.property_p_trials = to_u64(key, value);
            else if (key == "oracle_budget")
                spec.oracle_budget = to_u64(key, value);
            else if (key == "epsilon")
                spec.epsilon = to_double(key, value);
            else if (key == "alpha")
                spec.alpha = to_double(key, value);
            else if (key == "beta")
                spec.beta = to_double(key, value);
            else if (key == "delta")
                spec.delta = to_double(key, value);
            else if (key == "seed")
                spec.seed = to_u64(key, value);
            else if (key == "output")
                spec.output = value;
            else if (key == "csv")
                spec.csv = to_bool(key, value);
            else if (key == "workers")
                spec.workers = std::max<unsigned>(1, static_cast<unsigned>(to_u64(key, value)));
            else
                throw SpecError("line " + std::to_string(lineno) + ": unknown key " + key);
        }

        if (spec.seeds.empty() == ! spec.graph_file.has_value())
            throw SpecError("exactly one of seeds and graph_file is required");
        if (spec.k < 1 || spec.k > max_graph_bits)
            throw SpecError("k must be in [1, " + std::to_string(max_graph_bits) + "]");
        if (spec.s < 2)
            throw SpecError("s must be at least 2");
        if (spec.property_p != "off" && spec.property_p != "exhaustive" && spec.property_p != "sampled")
            throw SpecError("property_p must be off, exhaustive or sampled");
        if (spec.solver != "internal" && spec.solver.find("{}") == std::string::npos)
            throw SpecError("solver template needs a {} placeholder for the DIMACS path");
        if (! (spec.epsilon > 0.0 && spec.epsilon <= 1.0))
            throw SpecError("epsilon must be in (0, 1]");
        if (spec.timeout <= 0.0)
            throw SpecError("timeout must be positive");
        for (const auto & p : spec.games.provers)
            if (p != "random" && p != "greedy" && p != "cycler")
                throw SpecError("unknown prover " + p);
        for (const auto & a : spec.games.adversaries)
            if (a != "random" && a != "zero" && a != "lemma23" && a != "lemma34")
                throw SpecError("unknown adversary " + a);
        for (const auto & m : spec.games.memories)
            if (m != "lemma23" && m != "lemma34" && to_u64("mu", m) == 0)
                throw SpecError("mu must be positive");
        return spec;
    }

    auto ExperimentSpec::canonical() const -> std::string
    {
        std::ostringstream out;
        std::vector<std::string> enc, seed_text;
        for (auto e : encodings)
            enc.push_back(encoding_name(e));
        for (auto s : seeds)
            seed_text.push_back(std::to_string(s));
        out << "name=" << name << '\n'
            << "k=" << k << '\n'
            << "s=" << s << '\n'
            << (graph_file ? "graph_file=" + graph_file->string() : "seeds=" + join(seed_text)) << '\n'
            << "encodings=" << join(enc) << '\n'
            << "provers=" << join(games.provers) << '\n'
            << "adversaries=" << join(games.adversaries) << '\n'
            << "mu=" << join(games.memories) << '\n'
            << "max_moves=" << games.max_moves << '\n'
            << "repeats=" << games.repeats << '\n'
            << "solver=" << solver << '\n'
            << "timeout=" << fmt(timeout) << '\n'
            << "property_p=" << property_p << '\n'
            << "property_p_trials=" << property_p_trials << '\n'
            << "oracle_budget=" << oracle_budget << '\n'
            << "epsilon=" << fmt(epsilon) << '\n'
            << "beta=" << fmt(beta) << '\n';
        // unset optionals stay out so the text parses back to the same spec
        if (alpha)
            out << "alpha=" << fmt(*alpha) << '\n';
        if (delta)
            out << "delta=" << fmt(*delta) << '\n';
        out << "seed=" << seed << '\n'
            << "csv=" << (csv ? "true" : "false") << '\n';
        return out.str();
    }

    auto ExperimentSpec::hash() const -> std::string { return to_hex(fnv1a64(canonical())); }

    auto solver_status_name(SolverStatus s) -> std::string
    {
        switch (s) {
        case SolverStatus::sat: return "SAT";
        case SolverStatus::unsat: return "UNSAT";
        case SolverStatus::unknown: return "UNKNOWN";
        case SolverStatus::timeout: return "TIMEOUT";
        }
        return "UNKNOWN";
    }

    auto parse_solver_output(std::string_view text, Var num_vars) -> SolverStats
    {
        SolverStats stats;
        static const std::regex stat_line(R"(^c\s+(conflicts|decisions)\s*[:=]?\s*(\d+))", std::regex::icase);
        std::optional<SolverStatus> status;
        std::vector<long long> values;
        bool model_closed = false, malformed = false;
        std::istringstream in{std::string(text)};
        std::string line;
        while (std::getline(in, line)) {
            if (! line.empty() && line.back() == '\r')
                line.pop_back();
            std::smatch match;
            if (line.starts_with("s ")) {
                auto word = trim(line.substr(2));
                if (word == "SATISFIABLE")
                    status = SolverStatus::sat;
                else if (word == "UNSATISFIABLE")
                    status = SolverStatus::unsat;
                else
                    status = SolverStatus::unknown;
            }
            else if (line.starts_with("v ") || line == "v") {
                std::istringstream words(line.substr(1));
                long long lit = 0;
                while (words >> lit) {
                    if (lit == 0)
                        model_closed = true;
                    else
                        values.push_back(lit);
                }
                if (! words.eof())
                    malformed = true;
            }
            else if (std::regex_search(line, match, stat_line)) {
                auto value = std::stoull(match[2].str());
                auto name = match[1].str();
                std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
                (name == "conflicts" ? stats.conflicts : stats.decisions) = value;
            }
        }
        stats.status = status.value_or(SolverStatus::unknown);
        if (stats.status == SolverStatus::sat) {
            Assignment model(static_cast<std::size_t>(num_vars) + 1, false);
            for (auto lit : values) {
                auto var = static_cast<unsigned long long>(lit < 0 ? -lit : lit);
                if (var > num_vars)
                    malformed = true;
                else
                    model[var] = lit > 0;
            }
            if (malformed || ! model_closed) {
                stats.status = SolverStatus::unknown;
                stats.error = "satisfiable answer without a well-formed model";
            }
            else
                stats.model = std::move(model);
        }
        return stats;
    }

    void write_solver_output(std::ostream & out, const SatResult & r, Var num_vars)
    {
        out << "c conflicts: " << r.conflicts << '\n' << "c decisions: " << r.decisions << '\n' << "c propagations: " << r.propagations << '\n';
        switch (r.status) {
        case SatStatus::sat: out << "s SATISFIABLE\n"; break;
        case SatStatus::unsat: out << "s UNSATISFIABLE\n"; break;
        case SatStatus::unknown: out << "s UNKNOWN\n"; break;
        }
        if (r.status != SatStatus::sat)
            return;
        std::string line = "v";
        for (Var v = 1; v <= num_vars; ++v) {
            auto lit = r.model[v] ? std::to_string(v) : "-" + std::to_string(v);
            if (line.size() + lit.size() > 78) {
                out << line << '\n';
                line = "v";
            }
            line += ' ' + lit;
        }
        out << line << " 0\n";
    }

    namespace
    {
        auto shell_quote(const std::string & s) -> std::string
        {
            std::string out = "'";
            for (char c : s)
                out += c == '\'' ? std::string("'\\''") : std::string(1, c);
            return out + "'";
        }

        auto count_vars(const std::filesystem::path & dimacs) -> Var
        {
            std::ifstream in(dimacs);
            std::string line;
            while (std::getline(in, line))
                if (line.starts_with("p ")) {
                    std::istringstream words(line);
                    std::string p, fmt_name;
                    long long vars = 0;
                    words >> p >> fmt_name >> vars;
                    return vars > 0 ? static_cast<Var>(vars) : 0;
                }
            return 0;
        }
    }

    auto run_solver(const std::filesystem::path & dimacs, const std::string & command_template, std::chrono::duration<double> timeout) -> SolverStats
    {
        auto placeholder = command_template.find("{}");
        if (placeholder == std::string::npos)
            throw std::invalid_argument("solver template needs a {} placeholder");
        auto command = command_template;
        command.replace(placeholder, 2, shell_quote(dimacs.string()));

        SolverStats stats;
        auto start = std::chrono::steady_clock::now();
        int fds[2];
        if (pipe2(fds, O_CLOEXEC) != 0) {
            stats.error = "pipe failed";
            return stats;
        }
        pid_t pid = fork();
        if (pid < 0) {
            close(fds[0]);
            close(fds[1]);
            stats.error = "fork failed";
            return stats;
        }
        if (pid == 0) {
            setpgid(0, 0);
            dup2(fds[1], STDOUT_FILENO);
            int null_fd = open("/dev/null", O_RDWR);
            if (null_fd >= 0) {
                dup2(null_fd, STDIN_FILENO);
                dup2(null_fd, STDERR_FILENO);
            }
            execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char *>(nullptr));
            _exit(127);
        }
        setpgid(pid, pid);
        close(fds[1]);

        std::string output;
        bool timed_out = false;
        auto deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(timeout);
        char buf[65536];
        while (true) {
            auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now()).count();
            if (left <= 0) {
                timed_out = true;
                break;
            }
            pollfd pfd{fds[0], POLLIN, 0};
            int ready = poll(&pfd, 1, static_cast<int>(std::min<long long>(left, 1000)));
            if (ready < 0 && errno == EINTR)
                continue;
            if (ready <= 0)
                continue;
            auto got = read(fds[0], buf, sizeof buf);
            if (got < 0 && errno == EINTR)
                continue;
            if (got <= 0)
                break;
            output.append(buf, static_cast<std::size_t>(got));
        }
        close(fds[0]);
        if (timed_out)
            kill(-pid, SIGKILL);
        int wstatus = 0;
        while (waitpid(pid, &wstatus, 0) < 0 && errno == EINTR) { }
        stats.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (timed_out) {
            stats.status = SolverStatus::timeout;
            return stats;
        }
        auto parsed = parse_solver_output(output, count_vars(dimacs));
        parsed.wall_seconds = stats.wall_seconds;
        parsed.exit_code = WIFEXITED(wstatus) ? WEXITSTATUS(wstatus) : -1;
        return parsed;
    }

    auto strip_timing(nlohmann::ordered_json row) -> nlohmann::ordered_json
    {
        if (row.contains("solver"))
            row["solver"].erase("wall_seconds");
        return row;
    }

    auto csv_header() -> std::string
    {
        return "spec_hash,row,graph,graph_hash,encoding,k,s,vars,clauses,width,homogeneous,property_p,solver_status,conflicts,decisions,wall_seconds,"
               "games,prover_won,survived,resigned";
    }

    auto csv_line(const nlohmann::ordered_json & row) -> std::string
    {
        auto field = [](const nlohmann::ordered_json & j) -> std::string {
            if (j.is_null())
                return "";
            if (j.is_string())
                return j.get<std::string>();
            return j.dump();
        };
        auto at = [&](const nlohmann::ordered_json & j, const char * a, const char * b = nullptr) -> std::string {
            if (! j.contains(a))
                return "";
            if (! b)
                return field(j[a]);
            return j[a].contains(b) ? field(j[a][b]) : "";
        };
        std::size_t won = 0, survived = 0, resigned = 0, total = 0;
        if (row.contains("games"))
            for (const auto & g : row["games"]) {
                ++total;
                auto o = g.value("outcome", "");
                won += o == "prover-won";
                survived += o == "adversary-survived";
                resigned += o == "adversary-resigned";
            }
        std::ostringstream out;
        out << at(row, "spec_hash") << ',' << at(row, "row") << ',' << at(row, "graph") << ',' << at(row, "graph_hash") << ',' << at(row, "encoding") << ','
            << at(row, "k") << ',' << at(row, "s") << ',' << at(row, "formula", "vars") << ',' << at(row, "formula", "clauses") << ','
            << at(row, "formula", "width") << ',' << at(row, "oracle", "homogeneous") << ',' << at(row, "oracle", "property_p") << ','
            << at(row, "solver", "status") << ',' << at(row, "solver", "conflicts") << ',' << at(row, "solver", "decisions") << ','
            << at(row, "solver", "wall_seconds") << ',' << total << ',' << won << ',' << survived << ',' << resigned;
        return out.str();
    }

    namespace
    {
        struct GraphJob
        {
            std::string label;
            std::optional<std::uint64_t> seed;
            Graph graph;
        };

        auto search_status_name(SearchStatus s) -> std::string
        {
            switch (s) {
            case SearchStatus::found: return "found";
            case SearchStatus::none: return "none";
            case SearchStatus::budget_exceeded: return "budget-exceeded";
            }
            return "unknown";
        }

        auto search_json(const HomogeneousSearch & r) -> nlohmann::ordered_json
        {
            nlohmann::ordered_json j;
            j["status"] = search_status_name(r.status);
            j["nodes"] = r.nodes;
            if (r.witness) {
                j["kind"] = homogeneous_kind_name(r.witness->kind);
                j["witness"] = r.witness->vertices.to_vector();
            }
            return j;
        }

        class ExperimentRunner
        {
        public:
            ExperimentRunner(const ExperimentSpec & spec, std::string solver_template) :
                _spec(spec), _template(std::move(solver_template)), _hash(spec.hash())
            {
            }

            auto rows_for(std::size_t job_index, const GraphJob & job) -> std::vector<nlohmann::ordered_json>
            {
                const auto & g = job.graph;
                nlohmann::ordered_json oracle;
                auto homogeneous = find_homogeneous(g, _spec.s, _spec.oracle_budget);
                auto clique = find_clique(g, _spec.s, _spec.oracle_budget);
                oracle["homogeneous"] = search_status_name(homogeneous.status);
                oracle["homogeneous_search"] = search_json(homogeneous);
                oracle["clique_search"] = search_json(clique);
                if (homogeneous.status == SearchStatus::budget_exceeded)
                    oracle["ramsey"] = nullptr;
                else
                    oracle["ramsey"] = homogeneous.status == SearchStatus::none;
                oracle["property_p"] = property_p(g, job_index);

                auto games = play_games(g, job_index);

                std::vector<nlohmann::ordered_json> rows;
                for (std::size_t e = 0; e < _spec.encodings.size(); ++e) {
                    auto kind = _spec.encodings[e];
                    nlohmann::ordered_json row;
                    row["spec_hash"] = _hash;
                    row["row"] = job_index * _spec.encodings.size() + e;
                    row["graph"] = job.label;
                    row["seed"] = job.seed ? nlohmann::ordered_json(*job.seed) : nlohmann::ordered_json(nullptr);
                    row["graph_hash"] = graph_hash(g);
                    row["k"] = g.bits();
                    row["s"] = _spec.s;
                    row["encoding"] = encoding_name(kind);
                    try {
                        formula_and_solver(row, g, job.label, kind, kind == Encoding::clique ? clique : homogeneous);
                    }
                    catch (const std::exception & err) {
                        row["error"] = err.what();
                    }
                    row["oracle"] = oracle;
                    row["games"] = games;
                    rows.push_back(std::move(row));
                }
                return rows;
            }

        private:
            auto property_p(const Graph & g, std::size_t job_index) -> nlohmann::ordered_json
            {
                if (_spec.property_p == "off")
                    return "off";
                auto mode = _spec.property_p == "exhaustive" ? PropertyPMode::exhaustive : PropertyPMode::sampled;
                auto report = check_property_p(g, mode, _spec.property_p_trials, split_seed(_spec.seed, 3 * job_index));
                return property_p_verdict_name(report.verdict);
            }

            auto lemma34_params(const Graph & g, std::size_t job_index) -> ParamConfig
            {
                ParamConfig p;
                p.epsilon = _spec.epsilon;
                p.beta = _spec.beta;
                p.s = _spec.s;
                if (_spec.delta)
                    p.delta = *_spec.delta;
                else
                    p.delta = density_floor(g, g.all_vertices(), _spec.beta, 200, split_seed(_spec.seed, 3 * job_index + 1)).min_density;
                p.alpha = _spec.alpha.value_or(0.5);
                return p;
            }

            auto memory_for(const std::string & m, unsigned k) const -> unsigned
            {
                if (m == "lemma23")
                    return std::max(1U, lemma23_memory(k));
                if (m == "lemma34")
                    return lemma34_memory(_spec.epsilon, k);
                return static_cast<unsigned>(std::stoul(m));
            }

            auto play_games(const Graph & g, std::size_t job_index) -> nlohmann::ordered_json
            {
                auto games = nlohmann::ordered_json::array();
                if (_spec.games.provers.empty() || _spec.games.adversaries.empty() || _spec.games.memories.empty())
                    return games;
                CliqueFormula formula(g, _spec.s);
                const auto k = g.bits();
                std::optional<ParamConfig> params;
                std::optional<SStar> s_star;
                std::uint64_t game_index = 0;
                for (const auto & prover_name : _spec.games.provers)
                    for (const auto & adversary_name : _spec.games.adversaries)
                        for (const auto & memory_name : _spec.games.memories)
                            for (unsigned rep = 0; rep < _spec.games.repeats; ++rep, ++game_index) {
                                auto seed = split_seed(split_seed(_spec.seed, 3 * job_index + 2), game_index);
                                unsigned threshold = lemma23_threshold(k);
                                std::unique_ptr<AdversaryStrategy> adversary;
                                nlohmann::ordered_json extra;
                                if (adversary_name == "lemma34") {
                                    if (! params) {
                                        params = lemma34_params(g, job_index);
                                        s_star = build_s_star(g, g.all_vertices(), params->epsilon, params->alpha);
                                    }
                                    threshold = s_star->t;
                                    adversary = make_lemma34_adversary(g, *s_star, *params);
                                    extra["params"] = param_json(*params);
                                    extra["s_star_size"] = s_star->set.size();
                                }
                                else if (adversary_name == "lemma23")
                                    adversary = make_lemma23_adversary(g);
                                else if (adversary_name == "zero")
                                    adversary = make_constant_adversary(false);
                                else
                                    adversary = make_random_adversary(split_seed(seed, 1));

                                std::unique_ptr<ProverStrategy> prover;
                                if (prover_name == "greedy")
                                    prover = make_greedy_prover();
                                else if (prover_name == "cycler")
                                    prover = make_fixation_cycler(*formula.var_map(), threshold, seed);
                                else
                                    prover = make_random_prover(seed);

                                auto mu = memory_for(memory_name, k);
                                std::optional<std::string> violation;
                                auto observer = [&](const GameState & state, const MoveRecord &) {
                                    if (! violation)
                                        violation = adversary->check_invariants(state);
                                };
                                auto t = play(formula, *prover, *adversary, mu, _spec.games.max_moves, observer);
                                nlohmann::ordered_json j;
                                j["prover"] = t.prover;
                                j["adversary"] = t.adversary;
                                j["mu"] = mu;
                                j["seed"] = seed;
                                j["max_moves"] = t.max_moves;
                                j["outcome"] = outcome_name(t.outcome);
                                j["moves"] = t.moves.size();
                                j["high_water"] = t.high_water;
                                if (t.resignation) {
                                    j["resignation"] = t.resignation->condition;
                                    j["diagnostics"] = t.resignation->details;
                                }
                                if (! t.forfeit_reason.empty())
                                    j["forfeit"] = t.forfeit_reason;
                                j["invariant_violation"] = violation ? nlohmann::ordered_json(*violation) : nlohmann::ordered_json(nullptr);
                                for (auto & [key, value] : extra.items())
                                    j[key] = value;
                                games.push_back(std::move(j));
                            }
                return games;
            }

            void formula_and_solver(nlohmann::ordered_json & row, const Graph & g, const std::string & label, Encoding kind, const HomogeneousSearch & oracle)
            {
                auto f = encode(g, _spec.s, kind);
                auto meta = metadata_for(f, g);
                std::ostringstream text;
                emit_dimacs(text, f.cnf, meta);
                auto file = "g" + label + "-" + encoding_name(kind) + "-s" + std::to_string(_spec.s) + ".cnf";
                auto path = _spec.output / file;
                {
                    std::ofstream out(path, std::ios::binary);
                    out << text.str();
                    if (! out)
                        throw std::runtime_error("cannot write " + path.string());
                }
                nlohmann::ordered_json formula;
                formula["vars"] = f.cnf.num_vars;
                formula["clauses"] = f.cnf.size();
                formula["width"] = f.cnf.width();
                formula["dimacs"] = file;
                formula["dimacs_hash"] = to_hex(fnv1a64(text.str()));
                row["formula"] = formula;

                SolverStats stats;
                std::string solver_name;
                if (_template.empty()) {
                    solver_name = "internal";
                    auto start = std::chrono::steady_clock::now();
                    SatLimits limits;
                    limits.time_limit = std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(_spec.timeout));
                    auto r = solve_cnf(f.cnf, limits);
                    stats.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
                    stats.conflicts = r.conflicts;
                    stats.decisions = r.decisions;
                    stats.status = r.status == SatStatus::sat ? SolverStatus::sat : r.status == SatStatus::unsat ? SolverStatus::unsat : SolverStatus::timeout;
                    if (r.status == SatStatus::sat)
                        stats.model = r.model;
                }
                else {
                    solver_name = _template;
                    stats = run_solver(path, _template, std::chrono::duration<double>(_spec.timeout));
                }

                nlohmann::ordered_json solver;
                solver["name"] = solver_name;
                solver["status"] = solver_status_name(stats.status);
                solver["conflicts"] = stats.conflicts ? nlohmann::ordered_json(*stats.conflicts) : nlohmann::ordered_json(nullptr);
                solver["decisions"] = stats.decisions ? nlohmann::ordered_json(*stats.decisions) : nlohmann::ordered_json(nullptr);
                solver["wall_seconds"] = stats.wall_seconds;
                if (! stats.error.empty())
                    solver["error"] = stats.error;
                if (stats.status == SolverStatus::sat && stats.model) {
                    auto decoded = decode_assignment(f.map, *stats.model, g);
                    bool verified = decoded.valid() && satisfies(f.cnf, *stats.model);
                    std::vector<VertexId> vertices;
                    for (const auto & v : decoded.vertices)
                        if (v)
                            vertices.push_back(*v);
                    HomogeneousWitness w{decoded.y || kind == Encoding::clique ? HomogeneousKind::clique : HomogeneousKind::independent, VertexSet(g.order())};
                    for (auto v : vertices)
                        w.vertices.insert(v);
                    verified = verified && vertices.size() == _spec.s && verify_witness(g, w, _spec.s);
                    solver["witness_kind"] = homogeneous_kind_name(w.kind);
                    solver["witness"] = vertices;
                    solver["witness_verified"] = verified;
                }
                if ((stats.status == SolverStatus::sat || stats.status == SolverStatus::unsat) && oracle.status != SearchStatus::budget_exceeded)
                    solver["agrees_with_oracle"] = (stats.status == SolverStatus::sat) == (oracle.status == SearchStatus::found);
                else
                    solver["agrees_with_oracle"] = nullptr;
                row["solver"] = solver;
            }

            const ExperimentSpec & _spec;
            std::string _template;
            std::string _hash;
        };
    }

    auto run_experiment(const ExperimentSpec & spec, const RowSink & sink, const std::string & solver_default) -> std::size_t
    {
        std::filesystem::create_directories(spec.output);
        std::vector<GraphJob> jobs;
        if (spec.graph_file) {
            std::ifstream in(*spec.graph_file);
            if (! in)
                throw SpecError("cannot open graph file " + spec.graph_file->string());
            jobs.push_back({"file", std::nullopt, read_graph(in)});
        }
        else
            for (auto seed : spec.seeds)
                jobs.push_back({std::to_string(seed), seed, random_graph(spec.k, seed)});
        for (const auto & job : jobs) {
            std::ofstream out(spec.output / ("g" + job.label + ".graph"));
            write_graph(out, job.graph);
        }

        std::string solver_template;
        if (spec.solver != "internal")
            solver_template = spec.solver;
        else if (! solver_default.empty())
            solver_template = solver_default;

        ExperimentRunner runner(spec, solver_template);
        std::vector<std::optional<std::vector<nlohmann::ordered_json>>> done(jobs.size());
        std::mutex mutex;
        std::condition_variable ready;
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            while (true) {
                auto i = next.fetch_add(1);
                if (i >= jobs.size())
                    return;
                std::vector<nlohmann::ordered_json> rows;
                try {
                    rows = runner.rows_for(i, jobs[i]);
                }
                catch (const std::exception & err) {
                    nlohmann::ordered_json row;
                    row["spec_hash"] = spec.hash();
                    row["graph"] = jobs[i].label;
                    row["error"] = err.what();
                    rows.push_back(std::move(row));
                }
                std::lock_guard lock(mutex);
                done[i] = std::move(rows);
                ready.notify_all();
            }
        };
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < std::min<std::size_t>(spec.workers, jobs.size()); ++w)
            pool.emplace_back(worker);

        std::ofstream jsonl(spec.output / "results.jsonl");
        std::optional<std::ofstream> csv;
        if (spec.csv) {
            csv.emplace(spec.output / "results.csv");
            *csv << csv_header() << '\n';
        }
        std::size_t count = 0;
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            std::vector<nlohmann::ordered_json> rows;
            {
                std::unique_lock lock(mutex);
                ready.wait(lock, [&] { return done[i].has_value(); });
                rows = std::move(*done[i]);
            }
            for (const auto & row : rows) {
                jsonl << row.dump() << '\n';
                if (csv)
                    *csv << csv_line(row) << '\n';
                if (sink)
                    sink(row);
                ++count;
            }
            jsonl.flush();
        }
        for (auto & t : pool)
            t.join();
        return count;
    }
}
