#pragma once

#include "covkit/covers.hpp"
#include "covkit/error.hpp"
#include "covkit/gfmat.hpp"
#include "covkit/instances.hpp"
#include "covkit/partitions.hpp"
#include "covkit/rational.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace covkit {

/// Dual syndrome instance: H = parity_check(A), u = H b, ell = floor((1-c) m), gamma = (1-s)/(1-c).
/// Throws BadParams when c = 1 (gamma undefined).
[[nodiscard]] MldInstance maxlin_to_mld(const MaxLinInstance& inst);

/// Sum over i = 1..r of (q-1)^i C(m, i), saturating.
[[nodiscard]] std::uint64_t naive_label_count(std::size_t m, std::uint32_t q, std::size_t r);

/// Sum over T in the cover of (q-1)^|T|, saturating.
[[nodiscard]] std::uint64_t cover_label_count(const CoverFamily& cover, std::uint32_t q);

/// Emits the grouped instance with column j equal to M * labels[j].
[[nodiscard]] KMldInstance group_by_labels(const FieldMatrix& m, const FieldVector& u, std::int64_t k,
                                           const Rational& gamma, std::vector<ColumnLabel> labels);

struct NaiveGroupingOptions {
    /// When set, the regime k/eps < ell < m/gamma is enforced and gamma - eps is reported.
    std::optional<Rational> epsilon;
    std::uint64_t budget = kDefaultBudget;
};

struct NaiveGrouping {
    KMldInstance instance;
    /// ceil(ell / k)
    std::size_t r;
    std::uint64_t label_count;
    /// gamma * ell / (r * k); the instance's threshold.
    Rational gamma_prime;
    /// gamma - eps when eps was supplied.
    std::optional<Rational> gamma_minus_epsilon;
};

/// Labels are all nonzero vectors of weight at most r = ceil(ell/k), in canonical order.
/// Throws TooLarge when the label count exceeds the budget, BadParams outside the parameter regime.
[[nodiscard]] NaiveGrouping mld_group_naive(const MldInstance& inst, std::size_t k, const NaiveGroupingOptions& options = {});

struct CoverGrouping {
    KMldInstance instance;
    std::uint64_t label_count;
    /// gamma * ell / (k * size_bound), which is gamma / (1+eps) when ell = alpha*m.
    Rational gamma_prime;
};

/// Labels are all vectors whose support is a member of the cover, the zero vector once from the
/// empty set, ordered by member then coefficient counter. Requires cover.m = cols(H),
/// cover.k = k and ell <= alpha*m. Throws TooLarge when the label count exceeds the budget.
[[nodiscard]] CoverGrouping mld_group_cover(const MldInstance& inst, const CoverFamily& cover, std::size_t k,
                                            std::uint64_t budget = kDefaultBudget);

/// Position of each label in a grouped instance.
class LabelIndex {
public:
    explicit LabelIndex(std::span<const ColumnLabel> labels);
    [[nodiscard]] std::optional<std::size_t> find(const ColumnLabel& label) const;
    [[nodiscard]] std::size_t size() const noexcept { return sorted_.size(); }

private:
    std::vector<std::pair<ColumnLabel, std::size_t>> sorted_;
};

/// Lifts x (weight at most alpha*m) to y over the labels of a cover-grouped instance: x is split
/// along an exact cover of its support and y gets +1 on each projected label. Throws NotBalanced
/// or FamilyInvalid from find_exact_cover, PreconditionViolation if a projection is not a label.
[[nodiscard]] FieldVector split_solution(const FieldVector& x, const CoverFamily& cover,
                                         const BalancedPartitionFamily& family, const KMldInstance& inst);
[[nodiscard]] FieldVector split_solution(const FieldVector& x, const CoverFamily& cover,
                                         const BalancedPartitionFamily& family, const KMldInstance& inst,
                                         const LabelIndex& index);

/// Lifts x to a naive-grouped instance by cutting its support into consecutive runs of r.
/// Throws PreconditionViolation when x needs more than k runs.
[[nodiscard]] FieldVector split_solution_naive(const FieldVector& x, const NaiveGrouping& grouping);

/// x = sum over j of y[j] * labels[j].
[[nodiscard]] FieldVector expand_solution(const FieldVector& y, const KMldInstance& inst);

/// NCP instance with generator G = nullspace_basis(H) and target -x0 for a particular solution x0
/// of H x = u. Throws Infeasible if u is outside the column space of H.
[[nodiscard]] NcpInstance kmld_to_ncp(const FieldMatrix& h, const FieldVector& u, std::int64_t k,
                                      const Rational& gamma);
[[nodiscard]] NcpInstance kmld_to_ncp(const KMldInstance& inst);

enum class FamilySource { Random, Deterministic, Explicit };

[[nodiscard]] std::string_view to_string(FamilySource source) noexcept;

struct PipelineOptions {
    std::size_t k = 0;
    Rational epsilon{0};
    FamilySource source = FamilySource::Random;
    /// Required for the random source; also seeds sampled P2 checks.
    std::optional<std::uint64_t> seed;
    /// Used by the explicit source.
    std::optional<BalancedPartitionFamily> family;
    /// Bound on cover sets, labels, and exhaustive verification work.
    std::uint64_t budget = kDefaultBudget;
    /// Subsets drawn when P2 is too large to check exhaustively.
    std::uint64_t p2_trials = 1000;
    /// Adds per-stage wall-clock milliseconds to the report (not reproducible).
    bool timings = false;
};

struct PipelineResult {
    MldInstance mld;
    BalancedPartitionFamily family;
    CoverFamily cover;
    KMldInstance instance;
    nlohmann::json report;
};

/// maxlin_to_mld, then a balanced partition family with alpha = ell/m, its cover family, and cover
/// grouping. The report carries exact thresholds, stage sizes, and verification status. Throws
/// FamilyInvalid when an explicit family fails its bucket bound; other errors come from the stages.
[[nodiscard]] PipelineResult pipeline_maxlin_to_kmld(const MaxLinInstance& inst, const PipelineOptions& options);

}  // namespace covkit
