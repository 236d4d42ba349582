#include "covkit/combinatorics.hpp"

#include <algorithm>
#include <numeric>

namespace covkit {

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) noexcept { return a > kSaturated - b ? kSaturated : a + b; }

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) noexcept {
    if (a == 0 || b == 0) return 0;
    return a > kSaturated / b ? kSaturated : a * b;
}

std::uint64_t sat_pow(std::uint64_t base, std::uint64_t exp) noexcept {
    std::uint64_t out = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
        out = sat_mul(out, base);
        if (out == kSaturated) break;
    }
    return out;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t r) noexcept {
    if (r > n) return 0;
    r = std::min(r, n - r);
    // c * (n - r + i) / i stays integral at every step; divide first by the gcd to delay overflow
    std::uint64_t c = 1;
    for (std::uint64_t i = 1; i <= r; ++i) {
        std::uint64_t num = n - r + i;
        std::uint64_t den = i;
        const std::uint64_t g1 = std::gcd(num, den);
        num /= g1;
        den /= g1;
        const std::uint64_t g2 = std::gcd(c, den);
        c /= g2;
        den /= g2;
        c = sat_mul(c, num);
        if (c == kSaturated) return kSaturated;
        c /= den;
    }
    return c;
}

std::uint64_t count_sparse_vectors(std::size_t n, std::uint32_t q, std::size_t min_weight,
                                   std::size_t max_weight) noexcept {
    std::uint64_t total = 0;
    for (std::size_t w = min_weight; w <= max_weight && w <= n; ++w) {
        total = sat_add(total, sat_mul(binomial(n, w), sat_pow(q - 1, w)));
    }
    return total;
}

std::vector<std::size_t> Rng::subset(std::size_t n, std::size_t r) {
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < r && i < n; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(below(n - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(std::min(r, n));
    std::sort(pool.begin(), pool.end());
    return pool;
}

}  // namespace covkit
