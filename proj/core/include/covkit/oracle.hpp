#pragma once

#include "covkit/error.hpp"
#include "covkit/gfmat.hpp"
#include "covkit/instances.hpp"
#include "covkit/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace covkit {

struct MaxLinSolution {
    FieldVector x;
    std::size_t min_unsat;
};

/// Minimizes ||A x - b||_0 over all q^n assignments, x enumerated lexicographically with
/// coordinate 0 most significant; the first minimizer wins. Throws BudgetError(BudgetExceeded)
/// when q^n > budget.
[[nodiscard]] MaxLinSolution solve_maxlin_exact(const MaxLinInstance& inst, std::uint64_t budget = kDefaultBudget);

/// ||A x - b||_0
[[nodiscard]] std::size_t unsatisfied(const FieldMatrix& a, const FieldVector& b, const FieldVector& x);

struct MldSolution {
    FieldVector x;
    std::size_t weight;
};

/// First solution of H x = u in canonical sparse order (weight, support, coefficients) with weight
/// at most w_max, hence a canonical minimum-weight solution; nullopt if there is none. Throws
/// BudgetError(BudgetExceeded) when the candidate count exceeds the budget.
[[nodiscard]] std::optional<MldSolution> solve_mld_min_weight(const FieldMatrix& h, const FieldVector& u,
                                                              std::size_t w_max,
                                                              std::uint64_t budget = kDefaultBudget);

struct NcpSolution {
    FieldVector z;
    std::size_t min_dist;
};

/// Minimizes ||A z - t||_0 over all q^cols(A) vectors z, lexicographic tie-break. Throws
/// BudgetError(BudgetExceeded) when q^cols(A) > budget.
[[nodiscard]] NcpSolution solve_ncp_exact(const FieldMatrix& a, const FieldVector& t,
                                          std::uint64_t budget = kDefaultBudget);

enum class Verdict { Yes, No, Neither };

[[nodiscard]] std::string_view to_string(Verdict v) noexcept;

struct GapThresholds {
    /// YES iff optimum <= yes.
    Rational yes;
    /// NO iff optimum > no.
    Rational no;
};

[[nodiscard]] GapThresholds gap_thresholds(const Instance& inst);

struct GapVerdict {
    Verdict verdict;
    /// Exact optimum, or nullopt when no solution exists within the NO threshold.
    std::optional<std::size_t> optimum;
    GapThresholds thresholds;
};

/// Classifies an optimum against the instance thresholds; nullopt counts as above every threshold.
[[nodiscard]] GapVerdict classify_gap(const Instance& inst, std::optional<std::size_t> optimum);

/// Runs the matching oracle (MLD searches stop at floor of the NO threshold) and classifies.
[[nodiscard]] GapVerdict solve_and_classify(const Instance& inst, std::uint64_t budget = kDefaultBudget);

}  // namespace covkit
