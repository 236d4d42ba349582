#pragma once

#include "covkit/gfmat.hpp"

#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

namespace covkit {

inline constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

/// C(n, r), saturating at kSaturated.
[[nodiscard]] std::uint64_t binomial(std::uint64_t n, std::uint64_t r) noexcept;
[[nodiscard]] std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) noexcept;
[[nodiscard]] std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) noexcept;
[[nodiscard]] std::uint64_t sat_pow(std::uint64_t base, std::uint64_t exp) noexcept;

/// Number of vectors in F_q^n with weight in [min_weight, max_weight], saturating.
[[nodiscard]] std::uint64_t count_sparse_vectors(std::size_t n, std::uint32_t q, std::size_t min_weight,
                                                 std::size_t max_weight) noexcept;

/// Visits every r-subset of [0, n) in lexicographic order. `visit(std::span<const std::size_t>)`
/// returns false to stop early; the function returns false iff it was stopped.
template <typename Visit>
bool for_each_combination(std::size_t n, std::size_t r, Visit&& visit) {
    if (r > n) return true;
    std::vector<std::size_t> idx(r);
    for (std::size_t i = 0; i < r; ++i) idx[i] = i;
    while (true) {
        if (!visit(std::span<const std::size_t>(idx))) return false;
        // advance to the next combination
        std::size_t i = r;
        while (i > 0 && idx[i - 1] == n - r + (i - 1)) --i;
        if (i == 0) return true;
        ++idx[i - 1];
        for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
    }
}

/// Visits every assignment of nonzero coefficients to `support`, counting in base (q-1) with the
/// last position fastest. `visit(std::span<const SparseEntry>)` returns false to stop.
template <typename Visit>
bool for_each_coefficient_assignment(std::span<const std::size_t> support, std::uint32_t q, Visit&& visit) {
    std::vector<SparseEntry> entries(support.size());
    for (std::size_t i = 0; i < support.size(); ++i) entries[i] = {support[i], 1};
    while (true) {
        if (!visit(std::span<const SparseEntry>(entries))) return false;
        std::size_t i = entries.size();
        while (i > 0 && entries[i - 1].coef == q - 1) {
            entries[i - 1].coef = 1;
            --i;
        }
        if (i == 0) return true;
        ++entries[i - 1].coef;
    }
}

/// Canonical enumeration of sparse vectors in F_q^n: by weight, then support in lexicographic
/// order, then coefficients as above. Weight 0 yields the empty entry list.
template <typename Visit>
bool for_each_sparse_vector(std::size_t n, std::uint32_t q, std::size_t min_weight, std::size_t max_weight,
                            Visit&& visit) {
    for (std::size_t w = min_weight; w <= max_weight && w <= n; ++w) {
        const bool finished = for_each_combination(n, w, [&](std::span<const std::size_t> support) {
            return for_each_coefficient_assignment(support, q, visit);
        });
        if (!finished) return false;
    }
    return true;
}

/// mt19937_64 with a portable bounded draw, so seeded streams do not depend on the standard
/// library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, bound); bound must be positive.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t v = engine_();
        while (v >= limit) v = engine_();
        return v % bound;
    }

    /// Uniform r-subset of [0, n), sorted ascending (partial Fisher-Yates).
    std::vector<std::size_t> subset(std::size_t n, std::size_t r);

private:
    std::mt19937_64 engine_;
};

}  // namespace covkit
