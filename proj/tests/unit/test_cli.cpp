#include "cli.hpp"
#include "covkit/instances.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code;
    std::string out;
    std::string err;

    [[nodiscard]] json report() const { return json::parse(out); }
};

RunResult invoke(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = covkit::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("covkit_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
        unsetenv("COVKIT_BUDGET");
    }
    void TearDown() override {
        fs::remove_all(dir_);
        unsetenv("COVKIT_BUDGET");
    }
    [[nodiscard]] std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, HelpAndUsageErrors) {
    const RunResult help = invoke({"--help"});
    EXPECT_EQ(help.code, covkit::cli::kExitOk);
    EXPECT_NE(help.out.find("gen-maxlin"), std::string::npos);
    const RunResult none = invoke({});
    EXPECT_EQ(none.code, covkit::cli::kExitInvalid);
    const RunResult unknown = invoke({"frobnicate"});
    EXPECT_EQ(unknown.code, covkit::cli::kExitInvalid);
    const RunResult missing = invoke({"gen-maxlin", "--n", "4"});
    EXPECT_EQ(missing.code, covkit::cli::kExitInvalid);
    EXPECT_NE(missing.err.find("usage error"), std::string::npos);
}

TEST_F(Cli, GenMaxLinWritesLoadableInstance) {
    const RunResult r =
        invoke({"gen-maxlin", "--n", "4", "--m", "8", "--q", "3", "--c", "3/4", "--seed", "7", "-o", path("a.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    const json rep = r.report();
    EXPECT_EQ(rep.at("command"), "gen-maxlin");
    EXPECT_EQ(rep.at("satisfied"), 6);
    const auto inst = covkit::load_instance(path("a.json"));
    ASSERT_TRUE(std::holds_alternative<covkit::MaxLinInstance>(inst));
    EXPECT_EQ(std::get<covkit::MaxLinInstance>(inst).a.rows(), 8U);
}

TEST_F(Cli, BadRationalIsInvalid) {
    const RunResult r = invoke({"gen-maxlin", "--n", "4", "--m", "8", "--q", "3", "--c", "3/0", "--seed", "7"});
    EXPECT_EQ(r.code, covkit::cli::kExitInvalid);
    const RunResult q = invoke({"gen-maxlin", "--n", "4", "--m", "8", "--q", "4", "--c", "3/4", "--seed", "7"});
    EXPECT_EQ(q.code, covkit::cli::kExitInvalid);
}

TEST_F(Cli, FamilyCoverAndVerifyChain) {
    ASSERT_EQ(invoke({"build-family", "deterministic", "--m", "8", "--k", "2", "--eta", "1/2", "--epsilon", "1/2", "-o",
                      path("f.json")})
                  .code,
              0);
    const RunResult p1 = invoke({"verify", "p1", "--family", path("f.json")});
    EXPECT_EQ(p1.code, 0);
    EXPECT_TRUE(p1.report().at("ok").get<bool>());
    ASSERT_EQ(invoke({"build-cover", "--family", path("f.json"), "--alpha", "1/2", "--epsilon", "1/2", "-o",
                      path("c.json")})
                  .code,
              0);
    EXPECT_EQ(invoke({"verify", "c1", "--cover", path("c.json")}).code, 0);
    const RunResult p2 = invoke({"verify", "p2", "--family", path("f.json"), "--alpha", "1/2", "--epsilon", "1/2"});
    const RunResult c2 = invoke(
        {"verify", "c2", "--family", path("f.json"), "--cover", path("c.json"), "--alpha", "1/2", "--epsilon", "1/2"});
    ASSERT_TRUE(p2.code == 0 || p2.code == covkit::cli::kExitCheckFailed);
    EXPECT_EQ(p2.report().at("ok").get<bool>(), p2.code == 0);
    EXPECT_EQ(c2.report().at("ok").get<bool>(), c2.code == 0);
    EXPECT_EQ(c2.report().at("command"), "verify c2");
}

TEST_F(Cli, FailedCheckExitsOne) {
    ASSERT_EQ(invoke({"build-family", "deterministic", "--m", "4", "--k", "2", "--eta", "1/2", "--epsilon", "1/2", "-o",
                      path("f.json")})
                  .code,
              0);
    json fam = covkit::read_json_file(path("f.json"));
    fam["functions"][0] = json::array({0, 0, 0, 1});
    fam["bucket_slack"] = json::array({1, 1});
    covkit::write_json_file(path("bad.json"), fam);
    const RunResult r = invoke({"verify", "p1", "--family", path("bad.json")});
    EXPECT_EQ(r.code, covkit::cli::kExitCheckFailed) << r.err;
    EXPECT_FALSE(r.report().at("ok").get<bool>());
}

TEST_F(Cli, PipelineReportAndDeterminism) {
    ASSERT_EQ(invoke({"gen-maxlin", "--n", "10", "--m", "20", "--q", "2", "--c", "9/10", "--s", "1/2", "--seed", "11",
                      "-o", path("inst.json")})
                  .code,
              0);
    const std::vector<std::string> cmd{"reduce", "pipeline", "--in",   path("inst.json"), "--k",  "3",
                                       "--epsilon", "1/4", "--family", "random",     "--seed", "11",
                                       "-o",     path("out.json")};
    const RunResult a = invoke(cmd);
    ASSERT_EQ(a.code, 0) << a.err;
    const std::string first = slurp(path("out.json"));
    const RunResult b = invoke(cmd);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(first, slurp(path("out.json")));
    const json rep = a.report();
    EXPECT_EQ(rep.at("thresholds").at("gamma_prime"), json::array({4, 1}));
    EXPECT_TRUE(rep.at("stages").contains("cover"));
    EXPECT_FALSE(rep.contains("timings_ms"));
}

TEST_F(Cli, ReduceSolveAndClassify) {
    ASSERT_EQ(invoke({"gen-maxlin", "--n", "3", "--m", "6", "--q", "2", "--c", "2/3", "--seed", "1", "-o",
                      path("ml.json")})
                  .code,
              0);
    ASSERT_EQ(invoke({"reduce", "maxlin-to-mld", "--in", path("ml.json"), "-o", path("mld.json")}).code, 0);
    const RunResult sm = invoke({"solve", "maxlin", "--in", path("ml.json")});
    const RunResult sd = invoke({"solve", "mld", "--in", path("mld.json")});
    ASSERT_EQ(sm.code, 0) << sm.err;
    ASSERT_EQ(sd.code, 0) << sd.err;
    EXPECT_EQ(sm.report().at("optimum"), sd.report().at("optimum"));
    const RunResult cl = invoke({"classify", "--in", path("mld.json")});
    ASSERT_EQ(cl.code, 0) << cl.err;
    EXPECT_EQ(cl.report().at("verdict"), "YES");
    ASSERT_EQ(invoke({"reduce", "group-naive", "--in", path("mld.json"), "--k", "2", "-o", path("k.json")}).code, 0);
    ASSERT_EQ(invoke({"reduce", "kmld-to-ncp", "--in", path("k.json"), "-o", path("ncp.json")}).code, 0);
    const RunResult sk = invoke({"solve", "kmld", "--in", path("k.json")});
    const RunResult sn = invoke({"solve", "ncp", "--in", path("ncp.json")});
    ASSERT_EQ(sk.code, 0) << sk.err;
    ASSERT_EQ(sn.code, 0) << sn.err;
    EXPECT_EQ(sk.report().at("optimum"), sn.report().at("optimum"));
}

TEST_F(Cli, BudgetFromEnvironment) {
    ASSERT_EQ(invoke({"gen-maxlin", "--n", "12", "--m", "14", "--q", "3", "--c", "1/2", "--seed", "2", "-o",
                      path("big.json")})
                  .code,
              0);
    setenv("COVKIT_BUDGET", "100", 1);
    const RunResult r = invoke({"solve", "maxlin", "--in", path("big.json")});
    EXPECT_EQ(r.code, covkit::cli::kExitBudget);
    EXPECT_NE(r.err.find("100"), std::string::npos);
    setenv("COVKIT_BUDGET", "zero", 1);
    EXPECT_EQ(invoke({"solve", "maxlin", "--in", path("big.json")}).code, covkit::cli::kExitInvalid);
    unsetenv("COVKIT_BUDGET");
    EXPECT_EQ(invoke({"solve", "maxlin", "--in", path("big.json"), "--budget", "50"}).code, covkit::cli::kExitBudget);
}

TEST_F(Cli, MissingInputFile) {
    const RunResult r = invoke({"solve", "maxlin", "--in", path("nope.json")});
    EXPECT_EQ(r.code, covkit::cli::kExitInvalid);
}
