#include "covkit/covers.hpp"

#include "covkit/combinatorics.hpp"
#include "json_detail.hpp"

#include <algorithm>
#include <limits>

namespace covkit {

namespace {

using detail::json;

Rational as_rat(std::size_t v) { return Rational(static_cast<std::int64_t>(v)); }

struct CanonicalLess {
    bool operator()(std::span<const std::size_t> a, std::span<const std::size_t> b) const noexcept {
        if (a.size() != b.size()) return a.size() < b.size();
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    }
};

IndexSet normalized_target(std::span<const std::size_t> target, std::size_t m) {
    IndexSet t(target.begin(), target.end());
    std::sort(t.begin(), t.end());
    if (std::adjacent_find(t.begin(), t.end()) != t.end()) {
        throw Error(ErrorKind::PreconditionViolation, "target has repeated elements");
    }
    if (!t.empty() && t.back() >= m) throw Error(ErrorKind::PreconditionViolation, "target element outside [0, m)");
    return t;
}

}  // namespace

bool canonical_less(const IndexSet& a, const IndexSet& b) noexcept { return CanonicalLess{}(a, b); }

std::optional<std::size_t> CoverFamily::index_of(std::span<const std::size_t> set) const {
    const auto it = std::lower_bound(sets.begin(), sets.end(), set,
                                     [](const IndexSet& a, std::span<const std::size_t> b) { return CanonicalLess{}(a, b); });
    if (it == sets.end() || !std::equal(it->begin(), it->end(), set.begin(), set.end())) return std::nullopt;
    return static_cast<std::size_t>(it - sets.begin());
}

bool CoverFamily::contains(std::span<const std::size_t> set) const { return index_of(set).has_value(); }

void CoverFamily::validate() const {
    for (std::size_t i = 0; i < sets.size(); ++i) {
        const IndexSet& s = sets[i];
        for (std::size_t j = 0; j < s.size(); ++j) {
            if (s[j] >= m || (j > 0 && s[j - 1] >= s[j])) {
                throw Error(ErrorKind::BadParams, "cover set " + std::to_string(i) + " is not a sorted subset of [0, m)");
            }
        }
        if (i > 0 && !canonical_less(sets[i - 1], s)) {
            throw Error(ErrorKind::BadParams, "cover sets out of canonical order at " + std::to_string(i));
        }
    }
}

nlohmann::json to_json(const CoverFamily& cover) {
    json doc = json::object();
    doc["m"] = cover.m;
    doc["k"] = cover.k;
    doc["alpha"] = detail::rational_json(cover.alpha);
    doc["epsilon"] = detail::rational_json(cover.epsilon);
    doc["size_bound"] = detail::rational_json(cover.size_bound);
    doc["sets"] = cover.sets;
    if (!cover.provenance.empty()) doc["provenance"] = cover.provenance;
    return doc;
}

CoverFamily cover_family_from_json(const nlohmann::json& doc) {
    detail::check_keys(doc, "", {"m", "k", "alpha", "epsilon", "size_bound", "sets", "provenance"},
                       {"m", "k", "alpha", "epsilon", "size_bound", "sets"});
    CoverFamily cover;
    cover.m = detail::as_uint(doc["m"], "/m");
    cover.k = detail::as_uint(doc["k"], "/k");
    if (cover.k == 0) throw SchemaError("/k", "k must be positive");
    cover.alpha = detail::as_rational(doc["alpha"], "/alpha");
    cover.epsilon = detail::as_rational(doc["epsilon"], "/epsilon");
    cover.size_bound = detail::as_rational(doc["size_bound"], "/size_bound");
    if (doc.contains("provenance")) {
        if (!doc["provenance"].is_string()) throw SchemaError("/provenance", "expected a string");
        cover.provenance = doc["provenance"].get<std::string>();
    }
    const json& sets = detail::as_array(doc["sets"], "/sets");
    for (std::size_t i = 0; i < sets.size(); ++i) {
        const std::string path = "/sets/" + std::to_string(i);
        const auto raw = detail::as_int_array(sets[i], path);
        IndexSet s;
        for (const std::int64_t v : raw) {
            if (v < 0 || static_cast<std::uint64_t>(v) >= cover.m) throw SchemaError(path, "element outside [0, m)");
            s.push_back(static_cast<std::size_t>(v));
        }
        cover.sets.push_back(std::move(s));
    }
    if (cover.size_bound != cover_size_bound(cover.m, cover.k, cover.alpha, cover.epsilon)) {
        throw SchemaError("/size_bound", "must equal (1+epsilon)*alpha*m/k");
    }
    try {
        cover.validate();
    } catch (const Error& e) {
        throw SchemaError("/sets", e.what());
    }
    return cover;
}

Rational cover_size_bound(std::size_t m, std::size_t k, const Rational& alpha, const Rational& epsilon) {
    return (Rational(1) + epsilon) * alpha * as_rat(m) / as_rat(k);
}

std::uint64_t cover_family_size_limit(const BalancedPartitionFamily& family) {
    const auto exponent = static_cast<std::uint64_t>(ceil(family.bucket_slack * as_rat(family.m) / as_rat(family.k)));
    return sat_add(sat_mul(sat_mul(family.functions.size(), family.k), sat_pow(2, exponent)), 1);
}

CoverFamily cover_from_partition_family(const BalancedPartitionFamily& family, const Rational& alpha,
                                        const Rational& epsilon, std::uint64_t budget) {
    family.validate();
    if (alpha < Rational(0) || epsilon < Rational(0)) {
        throw Error(ErrorKind::BadParams, "cover construction: alpha and epsilon must be non-negative");
    }
    const P1Result p1 = check_p1(family);
    if (!p1.ok) {
        throw Error(ErrorKind::FamilyInvalid, "partition family violates its bucket bound at function " +
                                                  std::to_string(p1.violation->function) + ", bucket " +
                                                  std::to_string(p1.violation->bucket));
    }

    CoverFamily cover;
    cover.m = family.m;
    cover.k = family.k;
    cover.alpha = alpha;
    cover.epsilon = epsilon;
    cover.size_bound = cover_size_bound(family.m, family.k, alpha, epsilon);
    const auto max_size = static_cast<std::size_t>(std::max<std::int64_t>(0, floor(cover.size_bound)));

    std::vector<IndexSet> buckets;
    std::uint64_t emitted = 0;
    for (std::size_t f = 0; f < family.functions.size(); ++f) {
        std::vector<IndexSet> by_bucket(family.k);
        for (std::size_t e = 0; e < family.m; ++e) by_bucket[family.functions[f][e]].push_back(e);
        for (auto& b : by_bucket) {
            for (std::size_t i = 0; i <= std::min(max_size, b.size()); ++i) emitted = sat_add(emitted, binomial(b.size(), i));
            buckets.push_back(std::move(b));
        }
    }
    if (emitted > budget) throw BudgetError(ErrorKind::TooLarge, emitted, budget, "cover family enumeration");

    cover.sets.reserve(static_cast<std::size_t>(emitted));
    for (const IndexSet& bucket : buckets) {
        for (std::size_t i = 0; i <= std::min(max_size, bucket.size()); ++i) {
            for_each_combination(bucket.size(), i, [&](std::span<const std::size_t> pick) {
                IndexSet s(pick.size());
                for (std::size_t t = 0; t < pick.size(); ++t) s[t] = bucket[pick[t]];
                cover.sets.push_back(std::move(s));
                return true;
            });
        }
    }
    std::sort(cover.sets.begin(), cover.sets.end(), canonical_less);
    cover.sets.erase(std::unique(cover.sets.begin(), cover.sets.end()), cover.sets.end());
    return cover;
}

C1Result check_c1(const CoverFamily& cover) {
    for (std::size_t i = 0; i < cover.sets.size(); ++i) {
        if (as_rat(cover.sets[i].size()) > cover.size_bound) return {false, i};
    }
    return {true, std::nullopt};
}

std::vector<IndexSet> find_exact_cover(const CoverFamily& cover, const BalancedPartitionFamily& family,
                                       std::span<const std::size_t> target, const Rational& alpha,
                                       const Rational& epsilon) {
    if (family.m != cover.m || family.k != cover.k) {
        throw Error(ErrorKind::BadParams, "find_exact_cover: cover and partition family disagree on m or k");
    }
    const IndexSet t = normalized_target(target, cover.m);
    const std::size_t padded_size = integral_subset_size(cover.m, alpha);
    if (t.size() > padded_size) {
        throw Error(ErrorKind::PreconditionViolation, "find_exact_cover: target has " + std::to_string(t.size()) +
                                                          " elements, more than alpha*m = " + std::to_string(padded_size));
    }

    IndexSet padded = t;
    for (std::size_t e = 0, pos = 0; padded.size() < padded_size; ++e) {
        while (pos < t.size() && t[pos] < e) ++pos;
        if (pos < t.size() && t[pos] == e) continue;
        padded.push_back(e);
    }
    std::sort(padded.begin(), padded.end());

    const auto f = find_balancing_partition(family, padded, epsilon);
    if (!f) throw Error(ErrorKind::NotBalanced, "find_exact_cover: no function balances the padded target");

    std::vector<IndexSet> parts(cover.k);
    for (const std::size_t e : t) parts[family.functions[*f][e]].push_back(e);
    for (std::size_t j = 0; j < parts.size(); ++j) {
        if (!cover.contains(parts[j])) {
            throw Error(ErrorKind::FamilyInvalid, "find_exact_cover: part " + std::to_string(j) + " (size " +
                                                      std::to_string(parts[j].size()) + ") is not a cover member");
        }
    }
    return parts;
}

std::vector<IndexSet> find_exact_cover(const CoverFamily& cover, const BalancedPartitionFamily& family,
                                       std::span<const std::size_t> target) {
    return find_exact_cover(cover, family, target, cover.alpha, cover.epsilon);
}

bool is_exact_cover(const CoverFamily& cover, std::span<const IndexSet> parts, std::span<const std::size_t> target) {
    if (parts.size() != cover.k) return false;
    IndexSet all;
    for (const IndexSet& p : parts) {
        if (!cover.contains(p)) return false;
        all.insert(all.end(), p.begin(), p.end());
    }
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end()) return false;
    IndexSet t(target.begin(), target.end());
    std::sort(t.begin(), t.end());
    return all == t;
}

C2Result check_c2_exhaustive(const CoverFamily& cover, const BalancedPartitionFamily& family, const Rational& alpha,
                             const Rational& epsilon, std::uint64_t budget) {
    const std::size_t r = integral_subset_size(cover.m, alpha);
    std::uint64_t total = 0;
    for (std::size_t i = 0; i <= r; ++i) total = sat_add(total, binomial(cover.m, i));
    if (total > budget) throw BudgetError(ErrorKind::BudgetExceeded, total, budget, "check_c2_exhaustive");

    C2Result result{true, std::nullopt, 0};
    for (std::size_t size = 0; size <= r && result.ok; ++size) {
        for_each_combination(cover.m, size, [&](std::span<const std::size_t> subset) {
            ++result.subsets_checked;
            bool good = false;
            try {
                const auto parts = find_exact_cover(cover, family, subset, alpha, epsilon);
                good = is_exact_cover(cover, parts, subset);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::NotBalanced && e.kind() != ErrorKind::FamilyInvalid) throw;
            }
            if (good) return true;
            result.ok = false;
            result.counterexample = IndexSet(subset.begin(), subset.end());
            return false;
        });
    }
    return result;
}

std::size_t cover_count_lower_bound(const CoverFamily& cover, std::size_t target_size) {
    if (target_size == 0) return 0;
    std::size_t largest = 0;
    for (const IndexSet& s : cover.sets) largest = std::max(largest, s.size());
    if (largest == 0) return std::numeric_limits<std::size_t>::max();
    return (target_size + largest - 1) / largest;
}

}  // namespace covkit
