#include "brute.hpp"
#include "covkit/error.hpp"
#include "covkit/instances.hpp"
#include "covkit/oracle.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <random>

using namespace covkit;
using nlohmann::json;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "covkit_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

void expect_schema_error(const json& doc, const std::string& path_prefix) {
    try {
        (void)instance_from_json(doc);
        ADD_FAILURE() << "accepted " << doc.dump();
    } catch (const SchemaError& e) {
        EXPECT_EQ(e.path().rfind(path_prefix, 0), 0U) << e.path() << " vs " << path_prefix;
    }
}

MaxLinInstance small_maxlin() {
    const PrimeField f(2);
    return MaxLinInstance{FieldMatrix::from_rows(f, {{1, 0}, {1, 1}}), FieldVector(f, {1, 0}), Rational(3, 4),
                          Rational(1, 2)};
}

KMldInstance small_kmld() {
    const PrimeField f(3);
    const FieldMatrix m = FieldMatrix::from_rows(f, {{1, 2}, {0, 1}});
    std::vector<ColumnLabel> labels{{{{0, 1}}}, {{{1, 2}}}, {{{0, 1}, {1, 1}}}};
    FieldMatrix mk(f, 2, 3);
    for (std::size_t j = 0; j < labels.size(); ++j) {
        const FieldVector col = mat_sparse_mul(m, labels[j].entries);
        for (std::size_t i = 0; i < 2; ++i) mk.set(i, j, col[i]);
    }
    return KMldInstance{mk, FieldVector(f, {1, 1}), 2, Rational(3, 2), labels, 2};
}

}  // namespace

TEST(Instances, MaxLinRoundTripThroughFile) {
    const auto path = temp_file("maxlin.json");
    const MaxLinInstance inst = small_maxlin();
    save_instance(inst, path);
    const Instance loaded = load_instance(path);
    ASSERT_TRUE(std::holds_alternative<MaxLinInstance>(loaded));
    EXPECT_EQ(std::get<MaxLinInstance>(loaded), inst);
}

TEST(Instances, FileLayoutMatchesPublishedFields) {
    const json doc = to_json(Instance{small_maxlin()});
    EXPECT_EQ(doc["kind"], "maxlin");
    EXPECT_EQ(doc["q"], 2);
    EXPECT_EQ(doc["rows"], 2);
    EXPECT_EQ(doc["cols"], 2);
    EXPECT_EQ(doc["entries"], json::array({1, 0, 1, 1}));
    EXPECT_EQ(doc["target"], json::array({1, 0}));
    EXPECT_EQ(doc["thresholds"]["c"], json::array({3, 4}));
    EXPECT_EQ(doc["thresholds"]["s"], json::array({1, 2}));
}

TEST(Instances, RejectsCompositeModulus) {
    json doc = to_json(Instance{small_maxlin()});
    doc["q"] = 4;
    expect_schema_error(doc, "/q");
}

TEST(Instances, RejectsUnknownAndMissingFields) {
    json doc = to_json(Instance{small_maxlin()});
    doc["extra"] = 1;
    expect_schema_error(doc, "/extra");
    doc = to_json(Instance{small_maxlin()});
    doc.erase("target");
    expect_schema_error(doc, "/target");
    doc = to_json(Instance{small_maxlin()});
    doc["ell"] = 1;
    expect_schema_error(doc, "/ell");
    doc = to_json(Instance{small_maxlin()});
    doc["thresholds"]["gamma"] = json::array({2, 1});
    expect_schema_error(doc, "/thresholds/gamma");
}

TEST(Instances, RejectsBadEntriesAndShapes) {
    json doc = to_json(Instance{small_maxlin()});
    doc["entries"][2] = 2;
    expect_schema_error(doc, "/entries/2");
    doc = to_json(Instance{small_maxlin()});
    doc["entries"].push_back(1);
    expect_schema_error(doc, "/entries");
    doc = to_json(Instance{small_maxlin()});
    doc["target"] = json::array({1});
    expect_schema_error(doc, "/");
    doc = to_json(Instance{small_maxlin()});
    doc["thresholds"]["c"] = json::array({1, 0});
    expect_schema_error(doc, "/thresholds/c");
    doc = to_json(Instance{small_maxlin()});
    doc["thresholds"]["s"] = json::array({4, 5});
    expect_schema_error(doc, "/");
    doc = to_json(Instance{small_maxlin()});
    doc["kind"] = "cvp";
    expect_schema_error(doc, "/kind");
}

TEST(Instances, MalformedJsonFileIsSchemaError) {
    const auto path = temp_file("broken.json");
    std::ofstream(path) << "{\"kind\": ";
    EXPECT_THROW((void)load_instance(path), SchemaError);
}

TEST(Instances, MissingFileIsIoError) {
    try {
        (void)load_instance(temp_file("does_not_exist.json"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::IoError);
    }
}

TEST(Instances, KMldRoundTripAndLabelConsistency) {
    const KMldInstance inst = small_kmld();
    EXPECT_NO_THROW(inst.validate());
    const Instance back = instance_from_json(to_json(Instance{inst}));
    EXPECT_EQ(std::get<KMldInstance>(back), inst);
    const FieldMatrix m = inst.recover_source();
    EXPECT_EQ(mat_mul(m, inst.label_matrix()), inst.mk);
}

TEST(Instances, KMldColumnMismatchIsSchemaError) {
    json doc = to_json(Instance{small_kmld()});
    // Labels e0, e1 and e0 + e1 force column 2 = column 0 + column 1.
    doc["entries"][2] = (doc["entries"][2].get<int>() + 1) % 3;
    expect_schema_error(doc, "/");
}

TEST(Instances, KMldDuplicateOrMalformedLabelsRejected) {
    json doc = to_json(Instance{small_kmld()});
    doc["labels"][1] = doc["labels"][0];
    expect_schema_error(doc, "/");
    doc = to_json(Instance{small_kmld()});
    doc["labels"][2] = json::array({json::array({1, 1}), json::array({0, 1})});
    expect_schema_error(doc, "/");
    doc = to_json(Instance{small_kmld()});
    doc["labels"][0] = json::array({json::array({0, 0})});
    expect_schema_error(doc, "/labels/0/0/1");
    doc = to_json(Instance{small_kmld()});
    doc["labels"][0] = json::array({json::array({5, 1})});
    expect_schema_error(doc, "/");
}

TEST(Instances, ValidateAgainstSource) {
    const KMldInstance inst = small_kmld();
    const PrimeField f(3);
    EXPECT_NO_THROW(inst.validate_against(FieldMatrix::from_rows(f, {{1, 2}, {0, 1}})));
    EXPECT_THROW(inst.validate_against(FieldMatrix::from_rows(f, {{1, 2}, {0, 2}})), Error);
}

TEST(Instances, RandomRoundTripsForEveryKind) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 100; ++t) {
        const std::uint32_t q = t % 2 == 0 ? 2 : 3;
        const std::size_t r = rng() % 5 + 1;
        const std::size_t c = rng() % 5 + 1;
        const FieldMatrix a = brute::random_matrix(rng, q, r, c);
        const FieldVector b = brute::random_vector(rng, q, r);
        const Instance maxlin = MaxLinInstance{a, b, Rational(2, 3), Rational(1, 3)};
        const Instance mld = MldInstance{a, b, static_cast<std::int64_t>(rng() % (c + 1)), Rational(5, 2)};
        const Instance ncp = NcpInstance{a, b, 1 + static_cast<std::int64_t>(rng() % 3), Rational(7, 3)};
        for (const Instance& inst : {maxlin, mld, ncp}) {
            const json doc = to_json(inst);
            EXPECT_EQ(instance_from_json(doc), inst);
            EXPECT_EQ(dump_canonical(to_json(instance_from_json(doc))), dump_canonical(doc));
        }
    }
}

TEST(Instances, ThresholdValidation) {
    const PrimeField f(2);
    const FieldMatrix a(f, 1, 1);
    const FieldVector b(f, 1);
    EXPECT_THROW((MaxLinInstance{a, b, Rational(1, 2), Rational(1, 2)}.validate()), Error);
    EXPECT_THROW((MaxLinInstance{a, b, Rational(3, 2), Rational(1, 2)}.validate()), Error);
    EXPECT_NO_THROW((MaxLinInstance{a, b, Rational(1), Rational(1, 2)}.validate()));
    EXPECT_THROW((MldInstance{a, b, 0, Rational(1)}.validate()), Error);
    EXPECT_THROW((MldInstance{a, b, 2, Rational(2)}.validate()), Error);
    EXPECT_THROW((NcpInstance{a, b, 0, Rational(2)}.validate()), Error);
}

TEST(PlantedMaxLin, FullyConsistentWhenCIsOne) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const PlantedMaxLin p = gen_planted_maxlin(3, 10, 2, Rational(1), seed);
        EXPECT_EQ(unsatisfied(p.instance.a, p.instance.b, p.planted_x), 0U);
        EXPECT_EQ(p.satisfied_rows.size(), 10U);
    }
}

TEST(PlantedMaxLin, ExactSatisfiedCount) {
    const PlantedMaxLin p = gen_planted_maxlin(3, 10, 2, Rational(9, 10), 7);
    EXPECT_EQ(unsatisfied(p.instance.a, p.instance.b, p.planted_x), 1U);
    EXPECT_EQ(p.instance.s, Rational(9, 20));
    std::mt19937_64 rng(1);
    for (int t = 0; t < 30; ++t) {
        const std::size_t m = rng() % 12 + 1;
        const PlantedMaxLin r = gen_planted_maxlin(rng() % 4 + 1, m, 3, Rational(2, 3), rng());
        const auto need = static_cast<std::size_t>(ceil(Rational(2, 3) * static_cast<std::int64_t>(m)));
        EXPECT_EQ(unsatisfied(r.instance.a, r.instance.b, r.planted_x), m - need);
    }
}

TEST(PlantedMaxLin, OracleOptimumAtMostPlantedViolations) {
    const PlantedMaxLin p = gen_planted_maxlin(2, 4, 3, Rational(3, 4), 1);
    EXPECT_LE(brute::min_unsat(p.instance.a, brute::entries(p.instance.b)), 1U);
}

TEST(PlantedMaxLin, SameSeedIsByteIdentical) {
    const PlantedMaxLin a = gen_planted_maxlin(10, 20, 2, Rational(9, 10), 7);
    const PlantedMaxLin b = gen_planted_maxlin(10, 20, 2, Rational(9, 10), 7);
    EXPECT_EQ(dump_canonical(to_json(Instance{a.instance})), dump_canonical(to_json(Instance{b.instance})));
    const PlantedMaxLin c = gen_planted_maxlin(10, 20, 2, Rational(9, 10), 8);
    EXPECT_NE(dump_canonical(to_json(Instance{a.instance})), dump_canonical(to_json(Instance{c.instance})));
}

TEST(PlantedMaxLin, RejectsBadParameters) {
    EXPECT_THROW((void)gen_planted_maxlin(3, 0, 2, Rational(1, 2), 0), Error);
    EXPECT_THROW((void)gen_planted_maxlin(3, 5, 2, Rational(0), 0), Error);
    EXPECT_THROW((void)gen_planted_maxlin(3, 5, 4, Rational(1, 2), 0), Error);
    EXPECT_THROW((void)gen_planted_maxlin(3, 5, 2, Rational(1, 2), 0, Rational(3, 4)), Error);
}

TEST(RandomMld, FeasibleByConstruction) {
    for (const auto& [n, d, q, seed] : std::vector<std::tuple<int, int, int, int>>{{4, 2, 2, 0}, {4, 4, 3, 1}, {6, 3, 2, 2}}) {
        const RandomMld r = gen_random_mld(n, d, q, seed);
        EXPECT_EQ(mat_vec_mul(r.h, r.x), r.u);
        const auto w = brute::min_syndrome_weight(r.h, brute::entries(r.u));
        ASSERT_TRUE(w.has_value());
        EXPECT_LE(*w, static_cast<std::size_t>(n));
    }
    EXPECT_THROW((void)gen_random_mld(3, 4, 2, 0), Error);
}
