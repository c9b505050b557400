#pragma once

#include "ramsey/cnf.hpp"
#include "ramsey/game.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ramsey
{
    /// One line of a refutation. For a resolvent, `a` holds the pivot positively and `b` negatively.
    struct Step
    {
        enum class Kind
        {
            axiom,
            resolvent
        };
        Kind kind = Kind::axiom;
        std::size_t axiom = 0;
        std::size_t a = 0;
        std::size_t b = 0;
        Var pivot = 0;

        [[nodiscard]] static auto input(std::size_t idx) -> Step { return {Kind::axiom, idx, 0, 0, 0}; }
        [[nodiscard]] static auto resolve(std::size_t pos, std::size_t neg, Var pivot) -> Step { return {Kind::resolvent, 0, pos, neg, pivot}; }
        auto operator==(const Step &) const -> bool = default;
    };

    struct Refutation
    {
        std::vector<Step> steps;
    };

    struct WidthReport
    {
        std::size_t width = 0;         // W, widest clause over all steps
        std::size_t formula_width = 0; // k_phi
        Var vars = 0;                  // m
        std::size_t size = 0;          // L
        double exponent = 0.0;         // (W - k_phi)^2 / m, floored at W = k_phi
    };

    struct RefutationFailure
    {
        std::size_t step = 0; // 0-based
        std::string message;
    };

    struct RefutationCheck
    {
        std::optional<WidthReport> report;
        std::optional<RefutationFailure> failure;
        std::vector<Clause> derived; // clause of every step that checked out

        [[nodiscard]] auto ok() const -> bool { return report.has_value(); }
    };

    [[nodiscard]] auto check_refutation(const Cnf & c, const Refutation & r) -> RefutationCheck;

    [[nodiscard]] auto size_width_exponent(std::size_t width, std::size_t formula_width, Var vars) -> double;

    struct SizeWidthBound
    {
        WidthReport report;
        double exponent = 0.0;
        std::string rendered;
    };

    /// L >= 2^(Omega(exponent)); constant-free, a shape indicator rather than a certified bound.
    [[nodiscard]] auto size_width_bound(const WidthReport & w) -> SizeWidthBound;
    [[nodiscard]] auto width_report_json(const WidthReport & w) -> nlohmann::ordered_json;

    inline constexpr std::size_t default_closure_budget = 2'000'000;

    struct Saturation
    {
        std::size_t width = 0;
        std::vector<Clause> clauses;
        std::vector<Step> origin; // how each closure clause was first obtained; indices into `clauses`
        bool refuted = false;
        bool budget_exceeded = false;
        std::size_t rounds = 0;
    };

    /// Closure of the axioms of width <= w under resolvents of width <= w.
    [[nodiscard]] auto saturate(const Cnf & c, std::size_t w, std::size_t budget = default_closure_budget) -> Saturation;

    enum class WidthStatus
    {
        refuted,
        not_within_bound,
        budget_exceeded
    };

    [[nodiscard]] auto width_status_name(WidthStatus s) -> std::string;

    struct WidthOracleResult
    {
        WidthStatus status = WidthStatus::not_within_bound;
        std::size_t width = 0;            // W(phi) when refuted, else the last width tried
        std::optional<Refutation> refutation; // width-W refutation extracted from the closure
        std::size_t closure_size = 0;
    };

    inline constexpr Var width_oracle_var_guard = 64;

    /// Tries w = 0, 1, ... w_max and stops at the first closure containing the empty clause.
    [[nodiscard]] auto width_oracle(const Cnf & c, std::size_t w_max, std::size_t budget = default_closure_budget) -> WidthOracleResult;

    inline constexpr Var treelike_var_guard = 22;

    struct TreelikeResult
    {
        std::optional<Refutation> refutation;
        std::optional<Assignment> satisfying; // set when some leaf falsifies no clause
    };

    /// Decision tree over variables 1..m in order, translated to a treelike refutation.
    [[nodiscard]] auto treelike_bruteforce(const Cnf & c, Var guard = treelike_var_guard) -> TreelikeResult;

    void write_refutation(std::ostream & out, const Refutation & r);
    [[nodiscard]] auto parse_refutation(std::istream & in) -> Refutation;

    /// Walks the refutation from the empty clause towards an axiom, keeping in memory the
    /// assignment that falsifies the current clause. Throws CnfError if r does not check.
    [[nodiscard]] auto prover_from_refutation(const Cnf & c, const Refutation & r) -> std::unique_ptr<ProverStrategy>;
}
