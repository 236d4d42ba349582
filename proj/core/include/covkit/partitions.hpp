#pragma once

#include "covkit/error.hpp"
#include "covkit/rational.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace covkit {

/// Assignment of each element of [0, m) to one of k buckets.
using Partition = std::vector<std::uint32_t>;

/// A collection of partitions of [0, m) into k buckets, each bucket at most bucket_slack * m / k.
struct BalancedPartitionFamily {
    std::size_t m = 0;
    std::size_t k = 0;
    std::vector<Partition> functions;
    Rational bucket_slack{1};
    /// Construction parameters, when known.
    std::optional<Rational> alpha;
    std::optional<Rational> epsilon;
    /// True when the construction's balancing guarantee is proven for these parameters.
    bool guarantee_regime = false;

    /// Every function total on [0, m) with values in [0, k). Throws Error(BadParams).
    void validate() const;
    [[nodiscard]] std::vector<std::size_t> bucket_sizes(std::size_t f) const;

    friend bool operator==(const BalancedPartitionFamily&, const BalancedPartitionFamily&) = default;
};

[[nodiscard]] nlohmann::json to_json(const BalancedPartitionFamily& family);
[[nodiscard]] BalancedPartitionFamily partition_family_from_json(const nlohmann::json& doc);

struct HypercubePoint {
    std::vector<std::uint32_t> coords;

    friend bool operator==(const HypercubePoint&, const HypercubePoint&) = default;
    friend auto operator<=>(const HypercubePoint&, const HypercubePoint&) = default;
};

/// Point of [k]^d at lexicographic rank `index` (coordinate 0 most significant).
[[nodiscard]] HypercubePoint hypercube_point(std::uint64_t index, std::size_t k, std::size_t d);

inline constexpr std::uint64_t kDefaultUniverseBudget = 1u << 24;

/// The d coordinate projections of [k]^d, points in lexicographic order. Throws TooLarge when
/// k^d exceeds `budget`.
[[nodiscard]] BalancedPartitionFamily hypercube_family(std::size_t k, std::size_t d,
                                                       std::uint64_t budget = kDefaultUniverseBudget);

/// Points whose coordinate sum mod k is `residue` (the slice U_residue), lexicographic order.
[[nodiscard]] std::vector<HypercubePoint> diagonal_slice(std::size_t k, std::size_t d, std::uint32_t residue);

struct DiagonalUniverse {
    std::size_t k;
    std::size_t d;
    /// Number of slices used: ceil(m / k^(d-1)).
    std::size_t slices;
    /// points[i] is the hypercube point standing for element i.
    std::vector<HypercubePoint> points;
};

/// The lexicographically smallest m points of U_0 ∪ ... ∪ U_{c-1}, c = ceil(m / k^(d-1)).
/// Throws BadParams if m > k^d.
[[nodiscard]] DiagonalUniverse diagonal_universe(std::size_t m, std::size_t k, std::size_t d,
                                                 std::uint64_t budget = kDefaultUniverseBudget);

/// Smallest d with k^d >= m.
[[nodiscard]] std::size_t ceil_log(std::size_t m, std::size_t k);

/// Coordinate projections restricted to diagonal_universe(m, k, ceil_log(m, k)); bucket_slack 2.
[[nodiscard]] BalancedPartitionFamily deterministic_family(std::size_t m, std::size_t k, const Rational& eta,
                                                           const Rational& epsilon);

/// True iff m >= k^(4k^2 / (epsilon^2 eta)), computed exactly.
[[nodiscard]] bool derandomized_guarantee_holds(std::size_t m, std::size_t k, const Rational& eta,
                                                const Rational& epsilon);

/// ceil(12k / (epsilon^2 alpha)).
[[nodiscard]] std::uint64_t random_family_sample_count(std::size_t k, const Rational& alpha, const Rational& epsilon);

struct RandomFamilyResult {
    BalancedPartitionFamily family;
    std::uint64_t samples_drawn;
    /// Sample indices kept by the bucket filter, ascending.
    std::vector<std::uint64_t> retained;
};

/// Samples ceil(12k/(eps^2 alpha)) uniform functions and keeps those with every bucket at most
/// (1+eps) m / k. Throws EmptyFamily if none survive.
[[nodiscard]] RandomFamilyResult random_family(std::size_t m, std::size_t k, const Rational& alpha,
                                               const Rational& epsilon, std::uint64_t seed);

struct P1Violation {
    std::size_t function;
    std::size_t bucket;
    std::size_t size;
};

struct P1Result {
    bool ok;
    std::optional<P1Violation> violation;
};

[[nodiscard]] P1Result check_p1(const BalancedPartitionFamily& family);

/// True iff every bucket of S under f has at most (1+eps)|S|/k elements.
[[nodiscard]] bool balances(const Partition& f, std::size_t k, std::span<const std::size_t> subset,
                            const Rational& epsilon);

/// Smallest index whose function balances `subset`, or nullopt.
[[nodiscard]] std::optional<std::size_t> find_balancing_partition(const BalancedPartitionFamily& family,
                                                                  std::span<const std::size_t> subset,
                                                                  const Rational& epsilon);

struct P2Result {
    bool ok;
    /// First unbalanced subset in lexicographic order.
    std::optional<std::vector<std::size_t>> counterexample;
    std::uint64_t subsets_checked;
};

/// alpha*m as an integer; throws BadParams if it is not integral.
[[nodiscard]] std::size_t integral_subset_size(std::size_t m, const Rational& alpha);

/// Enumerates all subsets of size alpha*m. Throws BudgetError(BudgetExceeded) when C(m, alpha*m) > budget.
[[nodiscard]] P2Result check_p2_exhaustive(const BalancedPartitionFamily& family, const Rational& alpha,
                                           const Rational& epsilon, std::uint64_t budget = kDefaultBudget);

/// Number of uniformly sampled alpha*m-subsets that no member balances.
[[nodiscard]] std::uint64_t check_p2_sampled(const BalancedPartitionFamily& family, const Rational& alpha,
                                             const Rational& epsilon, std::uint64_t trials, std::uint64_t seed);

}  // namespace covkit
