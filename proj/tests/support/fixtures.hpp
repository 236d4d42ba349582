#pragma once

#include "covkit/partitions.hpp"

#include <cstdint>
#include <vector>

namespace fixtures {

inline covkit::BalancedPartitionFamily make_family(std::size_t m, std::size_t k, std::vector<covkit::Partition> fs,
                                                   covkit::Rational slack = covkit::Rational(1)) {
    covkit::BalancedPartitionFamily f;
    f.m = m;
    f.k = k;
    f.functions = std::move(fs);
    f.bucket_slack = slack;
    return f;
}

/// The three perfect matchings of [0, 4) as 2-bucket partitions.
inline covkit::BalancedPartitionFamily three_splits() {
    return make_family(4, 2, {covkit::Partition{0, 0, 1, 1}, covkit::Partition{0, 1, 0, 1}, covkit::Partition{0, 1, 1, 0}});
}

/// Every balanced 2-colouring of [0, 8) with element 0 in bucket 0. Balances every 4-subset exactly.
inline covkit::BalancedPartitionFamily certified_m8() {
    std::vector<covkit::Partition> fs;
    for (std::uint32_t mask = 0; mask < 256; ++mask) {
        if (__builtin_popcount(mask) != 4 || (mask & 1U) == 0) continue;
        covkit::Partition p(8);
        for (std::size_t e = 0; e < 8; ++e) p[e] = mask >> e & 1U;
        fs.push_back(p);
    }
    return make_family(8, 2, fs);
}

}  // namespace fixtures
