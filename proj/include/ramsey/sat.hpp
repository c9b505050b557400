#pragma once

#include "ramsey/cnf.hpp"

#include <chrono>
#include <cstdint>
#include <optional>

namespace ramsey
{
    enum class SatStatus
    {
        sat,
        unsat,
        unknown
    };

    [[nodiscard]] auto sat_status_name(SatStatus s) -> std::string;

    struct SatResult
    {
        SatStatus status = SatStatus::unknown;
        Assignment model; // valid when status == sat
        std::uint64_t conflicts = 0;
        std::uint64_t decisions = 0;
        std::uint64_t propagations = 0;
    };

    struct SatLimits
    {
        std::optional<std::uint64_t> max_conflicts;
        std::optional<std::chrono::steady_clock::duration> time_limit;
    };

    /// Conflict-driven clause learning with two watched literals, first-UIP learning,
    /// activity-based branching and Luby restarts. Intended as a reference oracle for
    /// small and medium instances.
    [[nodiscard]] auto solve_cnf(const Cnf & cnf, const SatLimits & limits = {}) -> SatResult;
}
