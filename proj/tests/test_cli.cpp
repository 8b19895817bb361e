#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "cli.hpp"

using phylotope::cli::run_cli;
using phylotope::json;

namespace {

struct Result {
    int code;
    std::string out, err;
};

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        cache_ = std::filesystem::temp_directory_path() /
                 ("phylotope-cli-test-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "-" +
                  ::testing::UnitTest::GetInstance()->current_test_info()->name());
        std::filesystem::remove_all(cache_);
    }
    void TearDown() override { std::filesystem::remove_all(cache_); }

    Result run(std::vector<std::string> args) {
        args.push_back("--cache-dir");
        args.push_back(cache_.string());
        std::ostringstream out, err;
        int code = run_cli(args, out, err);
        return {code, out.str(), err.str()};
    }

    std::filesystem::path cache_;
};

} // namespace

TEST_F(CliTest, CountSemigroupAndPolyhedral) {
    auto a = run({"count", "--tree", "((1,2),3);", "--root", "3", "--group", "Z2xZ2", "-n", "2"});
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, "136\n");
    auto b = run({"count", "--tree", "((1,2),3);", "--group", "Z2xZ2", "-n", "2", "--method", "polyhedral"});
    EXPECT_EQ(b.out, "136\n");
}

TEST_F(CliTest, TfpAndCompareOnBundledPlans) {
    auto t = run({"tfp", "--plan", "caterpillar6.json", "--group", "Z2xZ2", "-n", "2"});
    EXPECT_EQ(t.code, 0);
    EXPECT_EQ(t.out, "396928\n");
    auto c = run({"compare", "--plan-a", "caterpillar6.json", "--plan-b", "snowflake6.json", "--group",
                  "Z2xZ2", "-n", "3", "--json", "--no-timings"});
    ASSERT_EQ(c.code, 0) << c.err;
    auto j = json::parse(c.out);
    EXPECT_EQ(j["schema"], 1);
    EXPECT_EQ(j["results"]["count_a"], "69324800");
    EXPECT_EQ(j["results"]["count_b"], "69248000");
    EXPECT_EQ(j["results"]["verdict"], "DIFFERENT");
    EXPECT_FALSE(j.contains("timings"));
}

TEST_F(CliTest, CacheColdAndWarmAgree) {
    std::vector<std::string> args{"tfp", "--plan", "snowflake6", "--group", "Z2xZ2", "-n", "2", "--json",
                                  "--no-timings"};
    auto cold = json::parse(run(args).out);
    auto warm = json::parse(run(args).out);
    EXPECT_EQ(cold["results"], warm["results"]);
    EXPECT_EQ(cold["cache"]["hits"], 0);
    EXPECT_EQ(warm["cache"]["misses"], 0);
    EXPECT_GT(warm["cache"]["hits"].get<int>(), 0);
    // a corrupted entry is recomputed, not trusted
    for (const auto& f : std::filesystem::directory_iterator(cache_))
        std::ofstream(f.path()) << "{\"meta\":{\"tree\":\"x\",\"group\":\"Z2\",\"n\":2,\"sockets\":[]},\"cells\":[]}";
    auto repaired = json::parse(run(args).out);
    EXPECT_EQ(repaired["results"], cold["results"]);
    auto nocache = run({"--no-cache", "tfp", "--plan", "snowflake6", "-n", "2"});
    EXPECT_EQ(nocache.out, "396928\n");
}

TEST_F(CliTest, OutputIsDeterministic) {
    std::vector<std::string> args{"reproduce-paper", "--no-timings"};
    auto a = run(args), b = run(args);
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out.find("69324800"), std::string::npos);
    auto t1 = run({"--threads", "1", "count", "--tree", "((1,2),(3,4));", "-n", "3", "--json", "--no-timings"});
    auto t3 = run({"--threads", "3", "count", "--tree", "((1,2),(3,4));", "-n", "3", "--json", "--no-timings"});
    EXPECT_EQ(json::parse(t1.out)["results"], json::parse(t3.out)["results"]);
}

TEST_F(CliTest, ExitCodes) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"count", "--tree", "((1,2),3);"}).code, 2);
    EXPECT_EQ(run({"count", "--tree", "((1,2),3", "-n", "1"}).code, 2);
    EXPECT_EQ(run({"count", "--tree", "((1,2),3);", "-n", "1", "--group", "Q8"}).code, 2);
    EXPECT_EQ(run({"count", "--tree", "((1,2),3);", "-n", "1", "--method", "guess"}).code, 2);
    EXPECT_EQ(run({"tfp", "--plan", "nope.json", "-n", "1"}).code, 2);
    EXPECT_EQ(run({"--multiset-cap", "10", "count", "--tree", "((1,2),3);", "-n", "3"}).code, 3);
    EXPECT_EQ(run({"--node-cap", "5", "count", "--tree", "((1,2),3);", "-n", "2", "--method", "polyhedral"}).code, 3);
    EXPECT_EQ(run({"count", "--tree", "((1,1),3);", "-n", "1"}).code, 4);
    EXPECT_EQ(run({"--require-trivalent", "count", "--tree", "(1,2,3,4);", "-n", "1"}).code, 4);
    EXPECT_EQ(run({"fiber-table", "--tree", "((1,2),3);", "-n", "1", "--sockets", "e{2,3}"}).code, 4);
}

TEST_F(CliTest, VerticesLatticeFiberTable) {
    auto v = run({"vertices", "--tree", "((1,2),3);", "--group", "Z2xZ2"});
    EXPECT_EQ(v.code, 0);
    EXPECT_EQ(std::count(v.out.begin(), v.out.end(), '\n'), 17);
    auto vj = json::parse(run({"vertices", "--tree", "((1,2),3);", "--format", "json"}).out);
    EXPECT_EQ(vj["vertices"].size(), 16u);
    auto l = json::parse(run({"lattice", "--tree", "((1,2),3);", "--json", "--no-timings"}).out);
    EXPECT_EQ(l["results"]["rank"], 10);
    EXPECT_EQ(l["results"]["affine_dimension"], 9);
    auto out = cache_ / "table.json";
    std::filesystem::create_directories(cache_);
    auto f = run({"fiber-table", "--tree", "((1,2),(3,4));", "--group", "Z2", "-n", "2", "--sockets", "e{1,2}",
                  "--out", out.string()});
    EXPECT_EQ(f.code, 0);
    auto table = phylotope::fiber_table_from_json(phylotope::parse_json_text(phylotope::read_text_file(out), "t"));
    EXPECT_EQ(table.total(), 34);
}

TEST_F(CliTest, EhrhartAndNormality) {
    auto e = run({"ehrhart", "--tree", "((1,2),3);", "--group", "Z2", "--no-timings"});
    EXPECT_EQ(e.code, 0);
    EXPECT_NE(e.out.find("1/6*n^3 + n^2 + 11/6*n + 1"), std::string::npos);
    auto n = run({"normality-check", "--tree", "((1,2),(3,4));", "--group", "Z2", "--max-n", "2"});
    EXPECT_EQ(n.code, 0);
    EXPECT_NE(n.out.find("CONSISTENT"), std::string::npos);
}

TEST_F(CliTest, TfpExposeKeepsOpenSocketGrading) {
    auto plan = cache_ / "open.json";
    std::filesystem::create_directories(cache_);
    std::ofstream(plan) << R"({"components":[
        {"name":"a","newick":"((Se,3),Sx);","root":"Sx"},
        {"name":"b","newick":"((1,2),Se);","root":"Se"}]})";
    auto r = run({"tfp", "--plan", plan.string(), "--group", "Z2", "-n", "2", "--expose", "x"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto table = phylotope::fiber_table_from_json(json::parse(r.out));
    EXPECT_EQ(table.meta.sockets, std::vector<std::string>{"x"});
    EXPECT_EQ(table.total(), 34);
}
