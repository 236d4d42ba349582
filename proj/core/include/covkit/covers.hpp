#pragma once

#include "covkit/error.hpp"
#include "covkit/partitions.hpp"
#include "covkit/rational.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace covkit {

/// Sorted, duplicate-free subset of [0, m).
using IndexSet = std::vector<std::size_t>;

/// Canonical order of member sets: by size, then lexicographically.
[[nodiscard]] bool canonical_less(const IndexSet& a, const IndexSet& b) noexcept;

/// Collection of subsets of [0, m), each of size at most size_bound = (1+eps) alpha m / k.
/// Member sets are distinct and kept in canonical order.
struct CoverFamily {
    std::size_t m = 0;
    std::size_t k = 0;
    std::vector<IndexSet> sets;
    Rational size_bound{0};
    Rational alpha{0};
    Rational epsilon{0};
    /// Free-text description of the partition family the sets came from.
    std::string provenance;

    [[nodiscard]] bool contains(std::span<const std::size_t> set) const;
    /// Position of `set` in `sets`, or nullopt.
    [[nodiscard]] std::optional<std::size_t> index_of(std::span<const std::size_t> set) const;
    /// Sets are canonical, distinct, and inside [0, m). Throws Error(BadParams).
    void validate() const;

    friend bool operator==(const CoverFamily&, const CoverFamily&) = default;
};

[[nodiscard]] nlohmann::json to_json(const CoverFamily& cover);
[[nodiscard]] CoverFamily cover_family_from_json(const nlohmann::json& doc);

/// (1+eps) alpha m / k.
[[nodiscard]] Rational cover_size_bound(std::size_t m, std::size_t k, const Rational& alpha, const Rational& epsilon);

/// Union over (f, j) of all subsets of bucket f^{-1}(j) with at most size_bound elements, the
/// empty set included. Throws FamilyInvalid if the family fails its bucket bound, TooLarge if the
/// enumeration would exceed `budget` sets.
[[nodiscard]] CoverFamily cover_from_partition_family(const BalancedPartitionFamily& family, const Rational& alpha,
                                                      const Rational& epsilon, std::uint64_t budget = kDefaultBudget);

/// The bound |F| * k * 2^ceil(slack * m / k) + 1 on the emitted family size, saturating.
[[nodiscard]] std::uint64_t cover_family_size_limit(const BalancedPartitionFamily& family);

struct C1Result {
    bool ok;
    std::optional<std::size_t> violation;
};

[[nodiscard]] C1Result check_c1(const CoverFamily& cover);

/// Exactly k pairwise disjoint members of `cover` whose union is `target`. The target is padded to
/// alpha*m elements with the smallest unused indices and split along the first balancing function.
/// Throws PreconditionViolation if |target| > alpha*m, NotBalanced if no function balances the
/// padded set, FamilyInvalid if a part is not a member of the cover.
[[nodiscard]] std::vector<IndexSet> find_exact_cover(const CoverFamily& cover, const BalancedPartitionFamily& family,
                                                     std::span<const std::size_t> target, const Rational& alpha,
                                                     const Rational& epsilon);
[[nodiscard]] std::vector<IndexSet> find_exact_cover(const CoverFamily& cover, const BalancedPartitionFamily& family,
                                                     std::span<const std::size_t> target);

/// k parts, pairwise disjoint, union equal to target, every part a member.
[[nodiscard]] bool is_exact_cover(const CoverFamily& cover, std::span<const IndexSet> parts,
                                  std::span<const std::size_t> target);

struct C2Result {
    bool ok;
    /// First failing subset, enumerated by size then lexicographically.
    std::optional<IndexSet> counterexample;
    std::uint64_t subsets_checked;
};

/// Runs find_exact_cover on every subset of size at most alpha*m. Throws BudgetError(BudgetExceeded)
/// when there are more than `budget` such subsets.
[[nodiscard]] C2Result check_c2_exhaustive(const CoverFamily& cover, const BalancedPartitionFamily& family,
                                           const Rational& alpha, const Rational& epsilon,
                                           std::uint64_t budget = kDefaultBudget);

/// Fewest members any cover of a `target_size`-set can use: ceil(target_size / largest member).
[[nodiscard]] std::size_t cover_count_lower_bound(const CoverFamily& cover, std::size_t target_size);

}  // namespace covkit
