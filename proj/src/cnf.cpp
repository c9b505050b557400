#include "ramsey/cnf.hpp"

#include <json.hpp>

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

namespace ramsey
{
    namespace
    {
        constexpr std::uint64_t max_encoded_clauses = 60'000'000;

        auto choose2(std::uint64_t x) -> std::uint64_t { return x * (x - (x > 0 ? 1 : 0)) / 2; }

        void check_encoding_args(const Graph & g, unsigned s, Var vars, std::uint64_t clauses)
        {
            if (s < 2)
                throw CnfError("index count s must be at least 2, got " + std::to_string(s));
            if (g.order() == 0)
                throw CnfError("graph has no vertices");
            if (vars > max_encoded_vars)
                throw CnfError("encoding needs " + std::to_string(vars) + " variables, budget is " + std::to_string(max_encoded_vars));
            if (clauses > max_encoded_clauses)
                throw CnfError("encoding needs " + std::to_string(clauses) + " clauses, budget is " + std::to_string(max_encoded_clauses));
        }

        /// Literals of "index i is not mapped to v": the disjunction over b of x^i_b != v_b.
        void append_differs(std::vector<Literal> & out, const VarMap & m, unsigned i, VertexId v)
        {
            for (unsigned b = 1; b <= m.bits(); ++b)
                out.push_back({m.x(i, b), ! vertex_bit(v, m.bits(), b)});
        }

        auto binary_pair_clause(const VarMap & m, unsigned i, VertexId u, unsigned j, VertexId v, std::optional<Literal> guard) -> Clause
        {
            std::vector<Literal> lits;
            lits.reserve(2 * m.bits() + 1);
            append_differs(lits, m, i, u);
            append_differs(lits, m, j, v);
            if (guard)
                lits.push_back(*guard);
            return Clause(std::move(lits));
        }

        /// Shared by the binary and clique encoders.
        void add_injectivity(Cnf & cnf, const VarMap & m)
        {
            for (unsigned i = 1; i <= m.indices(); ++i)
                for (unsigned j = i + 1; j <= m.indices(); ++j)
                    for (VertexId v = 0; v < m.order(); ++v)
                        cnf.add(binary_pair_clause(m, i, v, j, v, std::nullopt), ClauseFamily::injective);
        }

        void add_pair_family(Cnf & cnf, const VarMap & m, const Graph & g, bool edges, std::optional<Literal> guard, ClauseFamily family)
        {
            for (unsigned i = 1; i <= m.indices(); ++i)
                for (unsigned j = i + 1; j <= m.indices(); ++j)
                    for (VertexId u = 0; u < m.order(); ++u)
                        for (VertexId v = 0; v < m.order(); ++v)
                            if (u != v && g.adjacent(u, v) == edges)
                                cnf.add(binary_pair_clause(m, i, u, j, v, guard), family);
        }
    }

    auto Literal::from_dimacs(long long value) -> Literal
    {
        if (value == 0)
            throw CnfError("literal 0 is not a variable");
        if (value > static_cast<long long>(UINT32_MAX) || value < -static_cast<long long>(UINT32_MAX))
            throw CnfError("literal out of range");
        return value > 0 ? Literal{static_cast<Var>(value), true} : Literal{static_cast<Var>(-value), false};
    }

    Clause::Clause(std::vector<Literal> literals)
    {
        auto made = make(std::move(literals));
        if (! made)
            throw CnfError("clause contains a complementary pair");
        *this = std::move(*made);
    }

    auto Clause::make(std::vector<Literal> literals) -> std::optional<Clause>
    {
        std::sort(literals.begin(), literals.end());
        literals.erase(std::unique(literals.begin(), literals.end()), literals.end());
        for (std::size_t i = 0; i < literals.size(); ++i) {
            if (literals[i].var == 0)
                throw CnfError("variable numbers start at 1");
            if (i + 1 < literals.size() && literals[i].var == literals[i + 1].var)
                return std::nullopt;
        }
        Clause result;
        result._literals = std::move(literals);
        return result;
    }

    auto Clause::contains(Literal lit) const -> bool
    {
        return std::binary_search(_literals.begin(), _literals.end(), lit);
    }

    auto Clause::polarity(Var var) const -> std::optional<bool>
    {
        auto it = std::lower_bound(_literals.begin(), _literals.end(), Literal{var, false});
        if (it != _literals.end() && it->var == var)
            return it->positive;
        return std::nullopt;
    }

    auto Clause::to_string() const -> std::string
    {
        std::string result;
        for (auto lit : _literals) {
            result += std::to_string(lit.to_dimacs());
            result += ' ';
        }
        return result + "0";
    }

    auto family_name(ClauseFamily f) -> std::string
    {
        switch (f) {
        case ClauseFamily::injective: return "injective";
        case ClauseFamily::indep_set: return "indep-set";
        case ClauseFamily::clique: return "clique";
        case ClauseFamily::exactly_one: return "exactly-one";
        case ClauseFamily::unary_injective: return "unary-injective";
        case ClauseFamily::unary_edge: return "unary-edge";
        case ClauseFamily::input: return "input";
        }
        return "unknown";
    }

    void Cnf::add(Clause clause, ClauseFamily family)
    {
        for (auto lit : clause)
            if (lit.var > num_vars)
                throw CnfError("literal on variable " + std::to_string(lit.var) + " exceeds variable count " + std::to_string(num_vars));
        clauses.push_back(std::move(clause));
        families.push_back(family);
    }

    auto Cnf::width() const -> std::size_t
    {
        std::size_t w = 0;
        for (const auto & c : clauses)
            w = std::max(w, c.width());
        return w;
    }

    auto encoding_name(Encoding e) -> std::string
    {
        switch (e) {
        case Encoding::binary: return "binary";
        case Encoding::unary: return "unary";
        case Encoding::clique: return "clique";
        }
        return "unknown";
    }

    auto parse_encoding(std::string_view name) -> Encoding
    {
        if (name == "binary")
            return Encoding::binary;
        if (name == "unary")
            return Encoding::unary;
        if (name == "clique")
            return Encoding::clique;
        throw CnfError("unknown encoding '" + std::string(name) + "' (expected binary, unary or clique)");
    }

    VarMap::VarMap(Encoding kind, unsigned k, unsigned s) : _kind(kind), _k(k), _s(s)
    {
        if (k < 1 || k > max_graph_bits)
            throw CnfError("bit-width out of range");
    }

    auto VarMap::num_vars() const -> Var
    {
        switch (_kind) {
        case Encoding::binary: return static_cast<Var>(_s * _k + 1);
        case Encoding::clique: return static_cast<Var>(_s * _k);
        case Encoding::unary: return static_cast<Var>(_s * order() + 1);
        }
        return 0;
    }

    auto VarMap::x(unsigned i, unsigned b) const -> Var
    {
        if (_kind == Encoding::unary)
            throw CnfError("bit variables do not exist in the unary encoding");
        if (i < 1 || i > _s || b < 1 || b > _k)
            throw CnfError("x^i_b out of range");
        return static_cast<Var>((i - 1) * _k + b);
    }

    auto VarMap::p(unsigned i, VertexId v) const -> Var
    {
        if (_kind != Encoding::unary)
            throw CnfError("vertex variables exist only in the unary encoding");
        if (i < 1 || i > _s || v >= order())
            throw CnfError("p^i_v out of range");
        return static_cast<Var>((i - 1) * order() + v + 1);
    }

    auto VarMap::y() const -> Var
    {
        if (! has_guard())
            throw CnfError("the clique encoding has no y variable");
        return num_vars();
    }

    auto VarMap::slot(Var var) const -> Slot
    {
        if (var < 1 || var > num_vars())
            throw CnfError("variable " + std::to_string(var) + " outside map");
        if (is_guard(var))
            return {0, 0};
        if (_kind == Encoding::unary) {
            auto zero = static_cast<std::uint32_t>(var - 1);
            return {static_cast<unsigned>(zero / order()) + 1, static_cast<std::uint32_t>(zero % order())};
        }
        auto zero = var - 1;
        return {zero / _k + 1, zero % _k + 1};
    }

    auto encode_binary(const Graph & g, unsigned s) -> EncodedFormula
    {
        VarMap m(Encoding::binary, g.bits(), s);
        check_encoding_args(g, s, m.num_vars(), closed_form_clause_count(Encoding::binary, g.order(), s));
        Cnf cnf;
        cnf.num_vars = m.num_vars();
        const Literal y{m.y(), true};
        add_injectivity(cnf, m);
        add_pair_family(cnf, m, g, true, y, ClauseFamily::indep_set);
        add_pair_family(cnf, m, g, false, y.negated(), ClauseFamily::clique);
        return {std::move(cnf), m};
    }

    auto encode_clique(const Graph & g, unsigned s) -> EncodedFormula
    {
        VarMap m(Encoding::clique, g.bits(), s);
        check_encoding_args(g, s, m.num_vars(), closed_form_clause_count(Encoding::clique, g.order(), s));
        Cnf cnf;
        cnf.num_vars = m.num_vars();
        add_injectivity(cnf, m);
        add_pair_family(cnf, m, g, false, std::nullopt, ClauseFamily::clique);
        return {std::move(cnf), m};
    }

    auto encode_unary(const Graph & g, unsigned s) -> EncodedFormula
    {
        VarMap m(Encoding::unary, g.bits(), s);
        check_encoding_args(g, s, m.num_vars(), closed_form_clause_count(Encoding::unary, g.order(), s));
        Cnf cnf;
        cnf.num_vars = m.num_vars();
        const auto n = static_cast<VertexId>(g.order());
        const Literal y{m.y(), true};

        for (unsigned i = 1; i <= s; ++i) {
            std::vector<Literal> row;
            for (VertexId v = 0; v < n; ++v)
                row.push_back({m.p(i, v), true});
            cnf.add(Clause(std::move(row)), ClauseFamily::exactly_one);
            for (VertexId u = 0; u < n; ++u)
                for (VertexId v = u + 1; v < n; ++v)
                    cnf.add(Clause({{m.p(i, u), false}, {m.p(i, v), false}}), ClauseFamily::exactly_one);
        }
        for (unsigned i = 1; i <= s; ++i)
            for (unsigned j = i + 1; j <= s; ++j)
                for (VertexId v = 0; v < n; ++v)
                    cnf.add(Clause({{m.p(i, v), false}, {m.p(j, v), false}}), ClauseFamily::unary_injective);
        for (bool edges : {true, false})
            for (unsigned i = 1; i <= s; ++i)
                for (unsigned j = i + 1; j <= s; ++j)
                    for (VertexId u = 0; u < n; ++u)
                        for (VertexId v = 0; v < n; ++v)
                            if (u != v && g.adjacent(u, v) == edges)
                                cnf.add(Clause({edges ? y : y.negated(), {m.p(i, u), false}, {m.p(j, v), false}}), ClauseFamily::unary_edge);
        return {std::move(cnf), m};
    }

    auto encode(const Graph & g, unsigned s, Encoding kind) -> EncodedFormula
    {
        switch (kind) {
        case Encoding::binary: return encode_binary(g, s);
        case Encoding::unary: return encode_unary(g, s);
        case Encoding::clique: return encode_clique(g, s);
        }
        throw CnfError("unknown encoding");
    }

    auto closed_form_clause_count(Encoding kind, std::uint64_t n, std::uint64_t s) -> std::uint64_t
    {
        switch (kind) {
        case Encoding::binary: return choose2(s) * n * n;
        case Encoding::unary: return s + s * choose2(n) + choose2(s) * n + choose2(s) * n * (n - 1);
        case Encoding::clique:
            // upper bound: the exact count depends on the number of non-edges
            return choose2(s) * n * n;
        }
        return 0;
    }

    auto clique_clause_count(std::uint64_t n, std::uint64_t s, std::uint64_t non_edges) -> std::uint64_t
    {
        return choose2(s) * (n + 2 * non_edges);
    }

    auto quoted_binary_clause_count(std::uint64_t n, std::uint64_t s) -> std::uint64_t
    {
        return choose2(s) * (1 + choose2(n));
    }

    auto restrict(const Cnf & c, Literal lit) -> Cnf
    {
        Cnf result;
        result.num_vars = c.num_vars;
        for (std::size_t idx = 0; idx < c.clauses.size(); ++idx) {
            const auto & clause = c.clauses[idx];
            if (clause.contains(lit))
                continue;
            if (clause.contains(lit.negated())) {
                std::vector<Literal> kept;
                for (auto l : clause)
                    if (l.var != lit.var)
                        kept.push_back(l);
                result.add(Clause(std::move(kept)), c.families[idx]);
            }
            else
                result.add(clause, c.families[idx]);
        }
        return result;
    }

    auto first_falsified(const Cnf & c, const Assignment & a) -> std::optional<std::size_t>
    {
        if (a.size() < static_cast<std::size_t>(c.num_vars) + 1)
            throw CnfError("assignment shorter than variable count");
        for (std::size_t idx = 0; idx < c.clauses.size(); ++idx) {
            bool sat = std::any_of(c.clauses[idx].begin(), c.clauses[idx].end(), [&](Literal l) { return a[l.var] == l.positive; });
            if (! sat)
                return idx;
        }
        return std::nullopt;
    }

    auto satisfies(const Cnf & c, const Assignment & a) -> bool
    {
        return ! first_falsified(c, a).has_value();
    }

    auto metadata_for(const EncodedFormula & f, const Graph & g) -> FormulaMetadata
    {
        return {g.bits(), f.map.indices(), f.map.kind(), f.cnf.num_vars, f.cnf.size(), f.cnf.width(), graph_hash(g)};
    }

    void emit_dimacs(std::ostream & out, const Cnf & c, const FormulaMetadata & meta)
    {
        out << "c generator " << generator_version << '\n';
        out << "c encoding " << encoding_name(meta.encoding) << '\n';
        out << "c k " << meta.k << '\n';
        out << "c s " << meta.s << '\n';
        out << "c graph-hash " << meta.graph_hash << '\n';
        emit_dimacs(out, c);
    }

    void emit_dimacs(std::ostream & out, const Cnf & c)
    {
        out << "p cnf " << c.num_vars << ' ' << c.clauses.size() << '\n';
        std::string line;
        for (const auto & clause : c.clauses) {
            line.clear();
            for (auto lit : clause) {
                line += std::to_string(lit.to_dimacs());
                line += ' ';
            }
            line += "0\n";
            out << line;
        }
        if (! out)
            throw CnfError("write failure while emitting DIMACS");
    }

    auto metadata_json(const FormulaMetadata & meta) -> std::string
    {
        nlohmann::ordered_json j;
        j["generator"] = generator_version;
        j["encoding"] = encoding_name(meta.encoding);
        j["k"] = meta.k;
        j["s"] = meta.s;
        j["c"] = static_cast<double>(meta.s) / meta.k;
        j["vars"] = meta.vars;
        j["clauses"] = meta.clauses;
        j["width"] = meta.width;
        if (meta.encoding == Encoding::binary) {
            auto n = std::uint64_t{1} << meta.k;
            j["closed_form_clauses"] = closed_form_clause_count(Encoding::binary, n, meta.s);
            j["quoted_clauses"] = quoted_binary_clause_count(n, meta.s);
        }
        j["graph_hash"] = meta.graph_hash;
        return j.dump(2);
    }

    auto parse_dimacs(std::istream & in) -> Cnf
    {
        Cnf cnf;
        bool header = false;
        std::size_t declared_clauses = 0;
        std::vector<Literal> pending;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos || line[first] == 'c' || line[first] == '%')
                continue;
            std::istringstream fields(line);
            if (line[first] == 'p') {
                std::string p, kind;
                long long vars = -1, clauses = -1;
                if (header || ! (fields >> p >> kind >> vars >> clauses) || kind != "cnf" || vars < 0 || clauses < 0)
                    throw CnfError("line " + std::to_string(line_no) + ": malformed problem line");
                cnf.num_vars = static_cast<Var>(vars);
                declared_clauses = static_cast<std::size_t>(clauses);
                header = true;
                continue;
            }
            if (! header)
                throw CnfError("line " + std::to_string(line_no) + ": clause before 'p cnf' header");
            long long value;
            while (fields >> value) {
                if (value == 0) {
                    auto clause = Clause::make(std::move(pending));
                    pending.clear();
                    if (! clause)
                        throw CnfError("line " + std::to_string(line_no) + ": tautological clause");
                    cnf.add(std::move(*clause), ClauseFamily::input);
                }
                else
                    pending.push_back(Literal::from_dimacs(value));
            }
            if (! fields.eof())
                throw CnfError("line " + std::to_string(line_no) + ": non-numeric token");
        }
        if (! header)
            throw CnfError("missing 'p cnf' header");
        if (! pending.empty())
            throw CnfError("last clause not terminated by 0");
        if (cnf.clauses.size() != declared_clauses)
            throw CnfError("header declares " + std::to_string(declared_clauses) + " clauses, found " + std::to_string(cnf.clauses.size()));
        return cnf;
    }

    auto Violation::describe() const -> std::string
    {
        auto pair = " (indices " + std::to_string(i) + ", " + std::to_string(j) + ")";
        switch (kind) {
        case Kind::injectivity: return "injectivity violated" + pair;
        case Kind::not_clique: return "image is not a clique" + pair;
        case Kind::not_independent: return "image is not an independent set" + pair;
        case Kind::unary_row_empty: return "no vertex selected for index " + std::to_string(i);
        case Kind::unary_row_multiple: return "several vertices selected for index " + std::to_string(i);
        }
        return "unknown violation";
    }

    auto decode_assignment(const VarMap & m, const Assignment & a, const Graph & g) -> DecodedAssignment
    {
        if (a.size() < static_cast<std::size_t>(m.num_vars()) + 1)
            throw CnfError("assignment does not cover every variable");
        if (g.bits() != m.bits())
            throw CnfError("graph and variable map disagree on k");
        DecodedAssignment result;
        result.y = m.has_guard() ? a[m.y()] : true;
        for (unsigned i = 1; i <= m.indices(); ++i) {
            if (m.kind() == Encoding::unary) {
                std::optional<VertexId> chosen;
                unsigned count = 0;
                for (VertexId v = 0; v < m.order(); ++v)
                    if (a[m.p(i, v)]) {
                        ++count;
                        chosen = v;
                    }
                if (count == 0)
                    result.violations.push_back({Violation::Kind::unary_row_empty, i, i});
                else if (count > 1) {
                    result.violations.push_back({Violation::Kind::unary_row_multiple, i, i});
                    chosen.reset();
                }
                result.vertices.push_back(chosen);
            }
            else {
                VertexId v = 0;
                for (unsigned b = 1; b <= m.bits(); ++b)
                    v = (v << 1) | static_cast<VertexId>(a[m.x(i, b)]);
                result.vertices.emplace_back(v);
            }
        }
        for (unsigned i = 1; i <= m.indices(); ++i)
            for (unsigned j = i + 1; j <= m.indices(); ++j) {
                auto u = result.vertices[i - 1], v = result.vertices[j - 1];
                if (! u || ! v)
                    continue;
                if (*u == *v)
                    result.violations.push_back({Violation::Kind::injectivity, i, j});
                else if (result.y && ! g.adjacent(*u, *v))
                    result.violations.push_back({Violation::Kind::not_clique, i, j});
                else if (! result.y && g.adjacent(*u, *v))
                    result.violations.push_back({Violation::Kind::not_independent, i, j});
            }
        return result;
    }

    auto encode_assignment(const VarMap & m, std::span<const VertexId> vertices, bool y) -> Assignment
    {
        if (vertices.size() != m.indices())
            throw CnfError("need exactly one vertex per index");
        Assignment a(static_cast<std::size_t>(m.num_vars()) + 1, false);
        for (unsigned i = 1; i <= m.indices(); ++i) {
            auto v = vertices[i - 1];
            if (v >= m.order())
                throw CnfError("vertex out of range");
            if (m.kind() == Encoding::unary)
                a[m.p(i, v)] = true;
            else
                for (unsigned b = 1; b <= m.bits(); ++b)
                    a[m.x(i, b)] = vertex_bit(v, m.bits(), b);
        }
        if (m.has_guard())
            a[m.y()] = y;
        return a;
    }
}
