#include <gtest/gtest.h>

#include <json.hpp>

#include <array>
#include <cstdio>
#include <fstream>

#include "testkit.hpp"

namespace {

struct Run {
    int status;
    std::string out;
};

Run run(const std::string& args) {
    std::string cmd = std::string(XKWS_CLI) + " " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    std::string out;
    std::array<char, 4096> buf{};
    while (auto n = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
    int rc = pclose(p);
    return {WEXITSTATUS(rc), out};
}

std::string fx(const char* name) { return xkws::testkit::fixture(name).string(); }

std::string tmp(const char* name) {
    return (std::filesystem::temp_directory_path() / (std::string("xkws_cli_") + name)).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

TEST(Cli, IndexPrintsCountsAndIsDeterministic) {
    auto a = run("index " + fx("fig1b.xml") + " " + tmp("a.tsix"));
    ASSERT_EQ(a.status, 0) << a.out;
    EXPECT_NE(a.out.find("nodes 107"), std::string::npos);
    EXPECT_NE(a.out.find("schema_nodes 18"), std::string::npos);
    ASSERT_EQ(run("index " + fx("fig1b.xml") + " " + tmp("b.tsix")).status, 0);
    EXPECT_EQ(slurp(tmp("a.tsix")), slurp(tmp("b.tsix")));
}

TEST(Cli, IndexErrors) {
    std::ofstream(tmp("empty.xml")).close();
    EXPECT_NE(run("index " + tmp("empty.xml") + " " + tmp("e.tsix")).status, 0);
    EXPECT_NE(run("index /nonexistent.xml " + tmp("e.tsix")).status, 0);
}

TEST(Cli, QueryScGroups) {
    ASSERT_EQ(run("index " + fx("fig1b.xml") + " " + tmp("q.tsix")).status, 0);
    auto r = run("query " + tmp("q.tsix") + " \"XML Levy\" --method=sc --json");
    ASSERT_EQ(r.status, 0) << r.out;
    auto j = nlohmann::json::parse(r.out);
    ASSERT_EQ(j["groups"].size(), 2u);
    EXPECT_EQ(j["groups"][0]["results"][0]["id"], 6);
    EXPECT_EQ(j["groups"][1]["results"][0]["id"], 101);
}

TEST(Cli, QuerySlcaIncludesSpuriousConf) {
    auto r = run("query " + fx("fig1a.xml") + " XML Levy --method slca --json");
    ASSERT_EQ(r.status, 0) << r.out;
    auto j = nlohmann::json::parse(r.out);
    std::vector<int> ids;
    for (const auto& x : j["groups"][0]["results"]) ids.push_back(x["id"]);
    EXPECT_EQ(ids, (std::vector<int>{6, 51}));
}

TEST(Cli, QueryEdgeCases) {
    auto none = run("query " + fx("fig1a.xml") + " zzzz --json");
    EXPECT_EQ(none.status, 0);
    EXPECT_TRUE(nlohmann::json::parse(none.out)["groups"].empty());
    EXPECT_NE(run("query /nonexistent.tsix XML").status, 0);
    EXPECT_NE(run("query " + fx("fig1a.xml") + " \" \"").status, 0);
    EXPECT_NE(run("query " + fx("fig1a.xml") + " XML --method bogus").status, 0);
}

TEST(Cli, EvalWritesReports) {
    std::string suite = std::string(XKWS_DATA_DIR) + "/suites/fig1a.json";
    auto r = run("eval " + fx("fig1a.xml") + " " + suite + " --csv " + tmp("r.csv") + " --json " + tmp("r.json"));
    ASSERT_EQ(r.status, 0) << r.out;
    EXPECT_EQ(slurp(tmp("r.csv")).rfind("query,method,strategy,precision,recall,ms\n", 0), 0u);
    EXPECT_FALSE(nlohmann::json::parse(slurp(tmp("r.json"))).empty());
    EXPECT_NE(run("eval " + fx("fig1a.xml") + " " + suite + " --only nope").status, 0);
}

TEST(Cli, ServeNeedsBundle) {
    auto r = run("serve");
    EXPECT_NE(r.status, 0);
}

TEST(Cli, Synth) {
    auto r = run("synth " + tmp("s.xml") + " --nodes 500 --seed 2");
    ASSERT_EQ(r.status, 0) << r.out;
    EXPECT_EQ(run("index " + tmp("s.xml") + " " + tmp("s.tsix")).status, 0);
}

}  // namespace
