#include "covkit/partitions.hpp"

#include "covkit/combinatorics.hpp"
#include "json_detail.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <string>

namespace covkit {

namespace {

using detail::json;

void require(bool cond, const std::string& what) {
    if (!cond) throw Error(ErrorKind::BadParams, what);
}

Rational as_rat(std::size_t v) { return Rational(static_cast<std::int64_t>(v)); }

}  // namespace

void BalancedPartitionFamily::validate() const {
    require(k >= 1, "partition family: k must be positive");
    for (std::size_t f = 0; f < functions.size(); ++f) {
        require(functions[f].size() == m, "partition family: function " + std::to_string(f) + " is not total on [0, m)");
        for (const std::uint32_t b : functions[f]) {
            require(b < k, "partition family: function " + std::to_string(f) + " maps outside [0, k)");
        }
    }
    require(bucket_slack > Rational(0), "partition family: bucket_slack must be positive");
}

std::vector<std::size_t> BalancedPartitionFamily::bucket_sizes(std::size_t f) const {
    std::vector<std::size_t> sizes(k, 0);
    for (const std::uint32_t b : functions.at(f)) ++sizes[b];
    return sizes;
}

nlohmann::json to_json(const BalancedPartitionFamily& family) {
    json doc = json::object();
    doc["m"] = family.m;
    doc["k"] = family.k;
    doc["bucket_slack"] = detail::rational_json(family.bucket_slack);
    doc["functions"] = family.functions;
    doc["guarantee_regime"] = family.guarantee_regime;
    if (family.alpha) doc["alpha"] = detail::rational_json(*family.alpha);
    if (family.epsilon) doc["epsilon"] = detail::rational_json(*family.epsilon);
    return doc;
}

BalancedPartitionFamily partition_family_from_json(const nlohmann::json& doc) {
    detail::check_keys(doc, "", {"m", "k", "bucket_slack", "functions", "guarantee_regime", "alpha", "epsilon"},
                       {"m", "k", "bucket_slack", "functions", "guarantee_regime"});
    BalancedPartitionFamily family;
    family.m = detail::as_uint(doc["m"], "/m");
    family.k = detail::as_uint(doc["k"], "/k");
    if (family.k == 0) throw SchemaError("/k", "k must be positive");
    family.bucket_slack = detail::as_rational(doc["bucket_slack"], "/bucket_slack");
    family.guarantee_regime = detail::as_bool(doc["guarantee_regime"], "/guarantee_regime");
    if (doc.contains("alpha")) family.alpha = detail::as_rational(doc["alpha"], "/alpha");
    if (doc.contains("epsilon")) family.epsilon = detail::as_rational(doc["epsilon"], "/epsilon");
    const json& fns = detail::as_array(doc["functions"], "/functions");
    for (std::size_t f = 0; f < fns.size(); ++f) {
        const std::string path = "/functions/" + std::to_string(f);
        const auto raw = detail::as_int_array(fns[f], path);
        if (raw.size() != family.m) throw SchemaError(path, "function must assign every element of [0, m)");
        Partition p(raw.size());
        for (std::size_t e = 0; e < raw.size(); ++e) {
            if (raw[e] < 0 || static_cast<std::uint64_t>(raw[e]) >= family.k) {
                throw SchemaError(path + "/" + std::to_string(e), "bucket outside [0, k)");
            }
            p[e] = static_cast<std::uint32_t>(raw[e]);
        }
        family.functions.push_back(std::move(p));
    }
    if (family.bucket_slack <= Rational(0)) throw SchemaError("/bucket_slack", "must be positive");
    return family;
}

HypercubePoint hypercube_point(std::uint64_t index, std::size_t k, std::size_t d) {
    HypercubePoint p{std::vector<std::uint32_t>(d, 0)};
    for (std::size_t i = d; i > 0; --i) {
        p.coords[i - 1] = static_cast<std::uint32_t>(index % k);
        index /= k;
    }
    return p;
}

namespace {

std::uint64_t cube_size(std::size_t k, std::size_t d, std::uint64_t budget) {
    require(k >= 2, "hypercube: k must be at least 2");
    require(d >= 1, "hypercube: d must be at least 1");
    const std::uint64_t size = sat_pow(k, d);
    if (size > budget) throw BudgetError(ErrorKind::TooLarge, size, budget, "hypercube [k]^d too large");
    return size;
}

}  // namespace

BalancedPartitionFamily hypercube_family(std::size_t k, std::size_t d, std::uint64_t budget) {
    const std::uint64_t size = cube_size(k, d, budget);
    BalancedPartitionFamily family;
    family.m = static_cast<std::size_t>(size);
    family.k = k;
    family.bucket_slack = Rational(1);
    family.functions.assign(d, Partition(family.m));
    for (std::uint64_t idx = 0; idx < size; ++idx) {
        const HypercubePoint p = hypercube_point(idx, k, d);
        for (std::size_t i = 0; i < d; ++i) family.functions[i][idx] = p.coords[i];
    }
    return family;
}

std::vector<HypercubePoint> diagonal_slice(std::size_t k, std::size_t d, std::uint32_t residue) {
    const std::uint64_t size = cube_size(k, d, kDefaultUniverseBudget);
    std::vector<HypercubePoint> out;
    for (std::uint64_t idx = 0; idx < size; ++idx) {
        HypercubePoint p = hypercube_point(idx, k, d);
        std::uint64_t sum = 0;
        for (const std::uint32_t c : p.coords) sum += c;
        if (sum % k == residue) out.push_back(std::move(p));
    }
    return out;
}

DiagonalUniverse diagonal_universe(std::size_t m, std::size_t k, std::size_t d, std::uint64_t budget) {
    require(m >= 1, "diagonal_universe: m must be positive");
    require(k >= 2 && d >= 1, "diagonal_universe: need k >= 2 and d >= 1");
    const std::uint64_t full = sat_pow(k, d);
    require(m <= full, "diagonal_universe: m = " + std::to_string(m) + " exceeds k^d = " + std::to_string(full));
    cube_size(k, d, budget);
    const std::uint64_t slice = full / k;
    const std::size_t slices = static_cast<std::size_t>((m + slice - 1) / slice);

    DiagonalUniverse u{k, d, slices, {}};
    u.points.reserve(m);
    for (std::uint64_t idx = 0; idx < full && u.points.size() < m; ++idx) {
        HypercubePoint p = hypercube_point(idx, k, d);
        std::uint64_t sum = 0;
        for (const std::uint32_t c : p.coords) sum += c;
        if (sum % k < slices) u.points.push_back(std::move(p));
    }
    return u;
}

std::size_t ceil_log(std::size_t m, std::size_t k) {
    require(k >= 2, "ceil_log: base must be at least 2");
    std::size_t d = 0;
    std::uint64_t power = 1;
    while (power < m) {
        power = sat_mul(power, k);
        ++d;
    }
    return d;
}

bool derandomized_guarantee_holds(std::size_t m, std::size_t k, const Rational& eta, const Rational& epsilon) {
    using boost::multiprecision::cpp_int;
    require(eta > Rational(0) && epsilon > Rational(0), "guarantee check: eta and epsilon must be positive");
    const Rational exponent = Rational(4 * static_cast<std::int64_t>(k * k)) / (epsilon * epsilon * eta);
    const auto p = exponent.numerator();
    const auto r = exponent.denominator();
    std::size_t t = 0;
    std::uint64_t power = k;
    while (power <= m) {
        ++t;
        power = sat_mul(power, k);
    }
    // k^t <= m < k^(t+1)
    if (p >= static_cast<std::int64_t>(t + 1) * r) return false;
    if (p <= static_cast<std::int64_t>(t) * r) return true;
    return boost::multiprecision::pow(cpp_int(m), static_cast<unsigned>(r)) >=
           boost::multiprecision::pow(cpp_int(k), static_cast<unsigned>(p));
}

BalancedPartitionFamily deterministic_family(std::size_t m, std::size_t k, const Rational& eta,
                                             const Rational& epsilon) {
    require(k >= 2, "deterministic_family: k must be at least 2");
    require(m >= k, "deterministic_family: need m >= k");
    require(eta > Rational(0) && epsilon > Rational(0), "deterministic_family: eta and epsilon must be positive");
    const std::size_t d = ceil_log(m, k);
    const DiagonalUniverse u = diagonal_universe(m, k, d);

    BalancedPartitionFamily family;
    family.m = m;
    family.k = k;
    family.bucket_slack = Rational(2);
    family.alpha = eta;
    family.epsilon = epsilon;
    family.guarantee_regime = derandomized_guarantee_holds(m, k, eta, epsilon);
    family.functions.assign(d, Partition(m));
    for (std::size_t e = 0; e < m; ++e) {
        for (std::size_t i = 0; i < d; ++i) family.functions[i][e] = u.points[e].coords[i];
    }
    return family;
}

std::uint64_t random_family_sample_count(std::size_t k, const Rational& alpha, const Rational& epsilon) {
    require(alpha > Rational(0) && epsilon > Rational(0), "sample count: alpha and epsilon must be positive");
    return static_cast<std::uint64_t>(ceil(Rational(12 * static_cast<std::int64_t>(k)) / (epsilon * epsilon * alpha)));
}

RandomFamilyResult random_family(std::size_t m, std::size_t k, const Rational& alpha, const Rational& epsilon,
                                 std::uint64_t seed) {
    require(m >= 1, "random_family: m must be positive");
    require(k >= 2, "random_family: k must be at least 2");
    require(Rational(0) < alpha && alpha < Rational(1), "random_family: alpha must lie in (0, 1)");
    require(Rational(0) < epsilon && epsilon < Rational(1), "random_family: epsilon must lie in (0, 1)");
    const std::uint64_t t = random_family_sample_count(k, alpha, epsilon);
    constexpr std::uint64_t kDrawLimit = std::uint64_t{1} << 28;
    if (sat_mul(t, m) > kDrawLimit) {
        throw BudgetError(ErrorKind::TooLarge, sat_mul(t, m), kDrawLimit, "random_family: too many draws");
    }
    const Rational cap = (Rational(1) + epsilon) * as_rat(m);

    Rng rng(seed);
    RandomFamilyResult out;
    out.samples_drawn = t;
    out.family.m = m;
    out.family.k = k;
    out.family.bucket_slack = Rational(1) + epsilon;
    out.family.alpha = alpha;
    out.family.epsilon = epsilon;
    std::vector<std::size_t> sizes(k);
    for (std::uint64_t i = 0; i < t; ++i) {
        Partition f(m);
        std::fill(sizes.begin(), sizes.end(), 0);
        for (auto& b : f) {
            b = static_cast<std::uint32_t>(rng.below(k));
            ++sizes[b];
        }
        const bool keep = std::all_of(sizes.begin(), sizes.end(),
                                      [&](std::size_t s) { return as_rat(s * k) <= cap; });
        if (keep) {
            out.family.functions.push_back(std::move(f));
            out.retained.push_back(i);
        }
    }
    if (out.family.functions.empty()) {
        throw Error(ErrorKind::EmptyFamily, "random_family: all " + std::to_string(t) + " samples failed the bucket filter");
    }
    return out;
}

P1Result check_p1(const BalancedPartitionFamily& family) {
    const Rational cap = family.bucket_slack * as_rat(family.m);
    for (std::size_t f = 0; f < family.functions.size(); ++f) {
        const auto sizes = family.bucket_sizes(f);
        for (std::size_t j = 0; j < family.k; ++j) {
            if (as_rat(sizes[j] * family.k) > cap) return {false, P1Violation{f, j, sizes[j]}};
        }
    }
    return {true, std::nullopt};
}

bool balances(const Partition& f, std::size_t k, std::span<const std::size_t> subset, const Rational& epsilon) {
    std::vector<std::size_t> counts(k, 0);
    for (const std::size_t e : subset) ++counts[f[e]];
    const Rational cap = (Rational(1) + epsilon) * as_rat(subset.size());
    return std::all_of(counts.begin(), counts.end(), [&](std::size_t c) { return as_rat(c * k) <= cap; });
}

std::optional<std::size_t> find_balancing_partition(const BalancedPartitionFamily& family,
                                                    std::span<const std::size_t> subset, const Rational& epsilon) {
    for (const std::size_t e : subset) {
        if (e >= family.m) throw Error(ErrorKind::PreconditionViolation, "subset element outside [0, m)");
    }
    for (std::size_t i = 0; i < family.functions.size(); ++i) {
        if (balances(family.functions[i], family.k, subset, epsilon)) return i;
    }
    return std::nullopt;
}

std::size_t integral_subset_size(std::size_t m, const Rational& alpha) {
    const Rational size = alpha * as_rat(m);
    if (size.denominator() != 1 || size < Rational(0) || size > as_rat(m)) {
        throw Error(ErrorKind::BadParams, "alpha*m = " + format_rational(size) + " is not an integer in [0, m]");
    }
    return static_cast<std::size_t>(size.numerator());
}

P2Result check_p2_exhaustive(const BalancedPartitionFamily& family, const Rational& alpha, const Rational& epsilon,
                             std::uint64_t budget) {
    const std::size_t r = integral_subset_size(family.m, alpha);
    const std::uint64_t total = binomial(family.m, r);
    if (total > budget) throw BudgetError(ErrorKind::BudgetExceeded, total, budget, "check_p2_exhaustive");

    P2Result result{true, std::nullopt, 0};
    for_each_combination(family.m, r, [&](std::span<const std::size_t> subset) {
        ++result.subsets_checked;
        if (find_balancing_partition(family, subset, epsilon)) return true;
        result.ok = false;
        result.counterexample = std::vector<std::size_t>(subset.begin(), subset.end());
        return false;
    });
    return result;
}

std::uint64_t check_p2_sampled(const BalancedPartitionFamily& family, const Rational& alpha, const Rational& epsilon,
                               std::uint64_t trials, std::uint64_t seed) {
    const std::size_t r = integral_subset_size(family.m, alpha);
    Rng rng(seed);
    std::uint64_t failures = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const auto subset = rng.subset(family.m, r);
        if (!find_balancing_partition(family, subset, epsilon)) ++failures;
    }
    return failures;
}

}  // namespace covkit
