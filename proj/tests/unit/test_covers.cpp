#include "brute.hpp"
#include "fixtures.hpp"
#include "covkit/covers.hpp"
#include "covkit/error.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

using namespace covkit;
using fixtures::certified_m8;
using fixtures::make_family;
using fixtures::three_splits;

TEST(CoverConstruction, SingleSplitAllSubsetsOfBuckets) {
    const auto f = make_family(4, 2, {Partition{0, 0, 1, 1}});
    const CoverFamily s = cover_from_partition_family(f, Rational(1), Rational(0));
    EXPECT_EQ(s.size_bound, Rational(2));
    EXPECT_EQ(s.sets, (std::vector<IndexSet>{{}, {0}, {1}, {2}, {3}, {0, 1}, {2, 3}}));
    EXPECT_TRUE(check_c1(s).ok);
}

TEST(CoverConstruction, HypercubeSingletonsAndBucketPairs) {
    const auto f = hypercube_family(2, 2);
    const CoverFamily s = cover_from_partition_family(f, Rational(1, 2), Rational(1));
    EXPECT_EQ(s.size_bound, Rational(2));
    // Buckets {00,01}, {10,11}, {00,10}, {01,11} over elements 0..3.
    EXPECT_EQ(s.sets, (std::vector<IndexSet>{{}, {0}, {1}, {2}, {3}, {0, 1}, {0, 2}, {1, 3}, {2, 3}}));
}

TEST(CoverConstruction, SizeWithinLimitAndMembersCanonical) {
    for (std::size_t m = 4; m <= 14; m += 2) {
        const auto f = deterministic_family(m, 2, Rational(1, 2), Rational(1, 2));
        const auto alphas = {Rational(1, 2), Rational(1, 4)};
        for (const Rational& alpha : alphas) {
            const CoverFamily s = cover_from_partition_family(f, alpha, Rational(1, 2));
            EXPECT_LE(s.sets.size(), cover_family_size_limit(f));
            EXPECT_TRUE(check_c1(s).ok);
            EXPECT_NO_THROW(s.validate());
            EXPECT_TRUE(s.contains(IndexSet{}));
            for (std::size_t i = 0; i < s.sets.size(); ++i) EXPECT_EQ(s.index_of(s.sets[i]), i);
        }
    }
}

TEST(CoverConstruction, RejectsFamilyFailingBucketBound) {
    const auto bad = make_family(4, 2, {Partition{0, 0, 0, 1}});
    try {
        (void)cover_from_partition_family(bad, Rational(1, 2), Rational(0));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::FamilyInvalid);
    }
}

TEST(CoverConstruction, TooLarge) {
    const auto f = hypercube_family(2, 4);
    try {
        (void)cover_from_partition_family(f, Rational(1, 2), Rational(1), 10);
        FAIL();
    } catch (const BudgetError& e) {
        EXPECT_EQ(e.kind(), ErrorKind::TooLarge);
    }
}

TEST(CheckC1, Examples) {
    CoverFamily s;
    s.m = 3;
    s.k = 2;
    s.size_bound = Rational(2);
    s.sets = {{0}, {0, 1, 2}};
    const C1Result r = check_c1(s);
    EXPECT_FALSE(r.ok);
    EXPECT_EQ(r.violation, 1U);
    s.sets.clear();
    EXPECT_TRUE(check_c1(s).ok);
}

TEST(FindExactCover, EmptyTargetGivesKEmptyParts) {
    const auto f = three_splits();
    const CoverFamily s = cover_from_partition_family(f, Rational(1, 2), Rational(0));
    const auto parts = find_exact_cover(s, f, std::vector<std::size_t>{});
    EXPECT_EQ(parts, (std::vector<IndexSet>{{}, {}}));
}

TEST(FindExactCover, SplitsAlongTheBalancingFunction) {
    const auto f = three_splits();
    const CoverFamily s = cover_from_partition_family(f, Rational(1, 2), Rational(0));
    const std::vector<std::size_t> target{0, 2};
    const auto parts = find_exact_cover(s, f, target);
    EXPECT_EQ(parts, (std::vector<IndexSet>{{0}, {2}}));
    EXPECT_TRUE(is_exact_cover(s, parts, target));
}

TEST(FindExactCover, TargetTooLarge) {
    const auto f = three_splits();
    const CoverFamily s = cover_from_partition_family(f, Rational(1, 2), Rational(0));
    try {
        (void)find_exact_cover(s, f, std::vector<std::size_t>{0, 1, 2});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::PreconditionViolation);
    }
}

TEST(FindExactCover, NotBalanced) {
    const auto f = make_family(4, 2, {Partition{0, 0, 1, 1}});
    const CoverFamily s = cover_from_partition_family(f, Rational(1, 2), Rational(0));
    try {
        (void)find_exact_cover(s, f, std::vector<std::size_t>{0, 1});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotBalanced);
    }
}

TEST(FindExactCover, PaddingUsesSmallestUnusedIndices) {
    // Target {3} pads to {0, 3}; only the third split balances that pair.
    const auto f = make_family(4, 2, {Partition{0, 1, 1, 0}, Partition{0, 0, 1, 1}});
    const CoverFamily s = cover_from_partition_family(f, Rational(1, 2), Rational(0));
    const auto parts = find_exact_cover(s, f, std::vector<std::size_t>{3});
    EXPECT_EQ(parts, (std::vector<IndexSet>{{}, {3}}));
}

TEST(CheckC2, CertifiedEightElementFixture) {
    const auto f = certified_m8();
    ASSERT_TRUE(check_p1(f).ok);
    ASSERT_TRUE(check_p2_exhaustive(f, Rational(1, 2), Rational(0)).ok);
    const CoverFamily s = cover_from_partition_family(f, Rational(1, 2), Rational(0));
    const C2Result r = check_c2_exhaustive(s, f, Rational(1, 2), Rational(0));
    EXPECT_TRUE(r.ok);
    EXPECT_EQ(r.subsets_checked, 163U);
}

TEST(CheckC2, SingletonsCannotCoverThreeElementsWithTwoParts) {
    const auto f = make_family(6, 2, {Partition{0, 0, 0, 1, 1, 1}});
    CoverFamily s;
    s.m = 6;
    s.k = 2;
    s.alpha = Rational(1, 2);
    s.epsilon = Rational(0);
    s.size_bound = Rational(3, 2);
    s.sets = {{}, {0}, {1}, {2}, {3}, {4}, {5}};
    const C2Result r = check_c2_exhaustive(s, f, Rational(1, 2), Rational(1, 2));
    EXPECT_FALSE(r.ok);
    ASSERT_TRUE(r.counterexample.has_value());
    EXPECT_LE(r.counterexample->size(), 3U);
}

TEST(CheckC2, AlphaZeroOnlyEmptySet) {
    const auto f = three_splits();
    const CoverFamily s = cover_from_partition_family(f, Rational(0), Rational(0));
    const C2Result r = check_c2_exhaustive(s, f, Rational(0), Rational(0));
    EXPECT_TRUE(r.ok);
    EXPECT_EQ(r.subsets_checked, 1U);
}

TEST(CheckC2, Budget) {
    const auto f = certified_m8();
    const CoverFamily s = cover_from_partition_family(f, Rational(1, 2), Rational(0));
    try {
        (void)check_c2_exhaustive(s, f, Rational(1, 2), Rational(0), 100);
        FAIL();
    } catch (const BudgetError& e) {
        EXPECT_EQ(e.kind(), ErrorKind::BudgetExceeded);
        EXPECT_EQ(e.required(), 163U);
    }
}

TEST(CoverImplication, P1AndP2ImplyC1AndC2OnFixtures) {
    struct Fixture {
        BalancedPartitionFamily family;
        Rational alpha;
        Rational eps;
    };
    std::vector<Fixture> fixtures{
        {certified_m8(), Rational(1, 2), Rational(0)},
        {three_splits(), Rational(1, 2), Rational(0)},
        {random_family(10, 2, Rational(1, 5), Rational(1, 2), 1).family, Rational(1, 5), Rational(1, 2)},
        {random_family(12, 3, Rational(1, 2), Rational(1, 2), 2).family, Rational(1, 2), Rational(1, 2)},
        {deterministic_family(9, 3, Rational(1, 3), Rational(1)), Rational(1, 3), Rational(1)},
    };
    int certified = 0;
    for (const auto& fx : fixtures) {
        if (!check_p1(fx.family).ok || !check_p2_exhaustive(fx.family, fx.alpha, fx.eps).ok) continue;
        ++certified;
        const CoverFamily s = cover_from_partition_family(fx.family, fx.alpha, fx.eps);
        EXPECT_TRUE(check_c1(s).ok);
        EXPECT_TRUE(check_c2_exhaustive(s, fx.family, fx.alpha, fx.eps).ok);
    }
    EXPECT_GE(certified, 3);
}

TEST(CoverLowerBound, CoveringNeedsManyMembers) {
    const auto f = certified_m8();
    const CoverFamily s = cover_from_partition_family(f, Rational(1, 2), Rational(0));
    EXPECT_EQ(cover_count_lower_bound(s, 0), 0U);
    EXPECT_EQ(cover_count_lower_bound(s, 4), 2U);
    EXPECT_EQ(cover_count_lower_bound(s, 8), 4U);
    // Greedy check: the largest members are exactly size_bound, so 8 elements need 4 members.
    std::size_t largest = 0;
    for (const auto& t : s.sets) largest = std::max(largest, t.size());
    EXPECT_EQ(Rational(static_cast<std::int64_t>(largest)), s.size_bound);
}

TEST(CoverJson, RoundTripAndValidation) {
    const auto f = three_splits();
    CoverFamily s = cover_from_partition_family(f, Rational(1, 2), Rational(0));
    s.provenance = "three splits";
    const auto doc = to_json(s);
    EXPECT_EQ(cover_family_from_json(doc), s);
    auto bad = doc;
    bad["sets"][1] = nlohmann::json::array({7});
    EXPECT_THROW((void)cover_family_from_json(bad), SchemaError);
    bad = doc;
    bad["size_bound"] = nlohmann::json::array({5, 1});
    EXPECT_THROW((void)cover_family_from_json(bad), SchemaError);
    bad = doc;
    std::swap(bad["sets"][1], bad["sets"][2]);
    EXPECT_THROW((void)cover_family_from_json(bad), SchemaError);
    bad = doc;
    bad["mystery"] = 0;
    EXPECT_THROW((void)cover_family_from_json(bad), SchemaError);
}
