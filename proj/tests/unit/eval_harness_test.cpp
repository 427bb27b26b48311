#include <gtest/gtest.h>

#include "testkit.hpp"
#include "xkws/error.hpp"
#include "xkws/eval_harness.hpp"

using namespace xkws;

namespace {

TEST(Metrics, EquationOne) {
    std::vector<InodeId> a{1, 2, 3, 4}, r{1, 2};
    auto m = precision_recall(a, r);
    EXPECT_DOUBLE_EQ(m.precision, 0.5);
    EXPECT_DOUBLE_EQ(m.recall, 1.0);
    m = precision_recall(r, r);
    EXPECT_DOUBLE_EQ(m.precision, 1.0);
    EXPECT_DOUBLE_EQ(m.recall, 1.0);
    EXPECT_FALSE(m.degenerate);
}

TEST(Metrics, DegenerateCases) {
    std::vector<InodeId> none, some{3};
    auto both = precision_recall(none, none);
    EXPECT_TRUE(both.degenerate);
    EXPECT_DOUBLE_EQ(both.precision, 1.0);
    EXPECT_DOUBLE_EQ(both.recall, 1.0);
    auto missed = precision_recall(none, some);
    EXPECT_TRUE(missed.degenerate);
    EXPECT_DOUBLE_EQ(missed.precision, 1.0);
    EXPECT_DOUBLE_EQ(missed.recall, 0.0);
}

TEST(Metrics, Fig12BeforeFeedbackHasZeroRecall) {
    std::vector<InodeId> a{6}, r{20};
    EXPECT_DOUBLE_EQ(precision_recall(a, r).recall, 0.0);
}

TEST(XPath, Subset) {
    auto t = parse_file(testkit::fixture("fig1b.xml"));
    EXPECT_EQ(evaluate_xpath(t, R"(/bib/conf/paper[contains(., "XML")][contains(., "Levy")])"),
              std::vector<InodeId>{6});
    EXPECT_EQ(evaluate_xpath(t, R"(/bib/conf/paper["XML"]["Levy"] | /bib/journal/article["xml"]["levy"])"),
              (std::vector<InodeId>{6, 101}));
    EXPECT_EQ(evaluate_xpath(t, "/bib/conf"), (std::vector<InodeId>{1, 51}));
    EXPECT_EQ(evaluate_xpath(t, "/bib/*").size(), 3u);
    EXPECT_EQ(evaluate_xpath(t, R"(//ln["lu"])"), std::vector<InodeId>{68});
    EXPECT_EQ(evaluate_xpath(t, R"(//author["levy"])").size(), 3u);
    EXPECT_TRUE(evaluate_xpath(t, "/nope").empty());
    EXPECT_THROW(evaluate_xpath(t, "bib"), ParseError);
    EXPECT_THROW(evaluate_xpath(t, "/bib[starts-with(., 'x')]"), ParseError);
    EXPECT_THROW(evaluate_xpath(t, "/bib[\"x]"), ParseError);
}

TEST(Suite, ParseAndRun) {
    auto specs = parse_suite(R"([
        {"id": "q1", "keywords": "XML Levy", "reference_xpath": "/bib/conf/paper[\"xml\"][\"levy\"]"},
        {"id": "q2", "keywords": ["nothing", "here"], "relevant": []}
    ])");
    ASSERT_EQ(specs.size(), 2u);
    EXPECT_EQ(specs[0].keywords, (std::vector<std::string>{"XML", "Levy"}));
    auto b = testkit::fixture_bundle("fig1a.xml");
    auto report = run_suite(b, specs);
    const auto* sc = report.find("q1", Method::SchemaConsistent, ReturnStrategy::Subtree);
    const auto* slca = report.find("q1", Method::Slca, ReturnStrategy::Subtree);
    ASSERT_TRUE(sc && slca);
    EXPECT_DOUBLE_EQ(sc->metrics.precision, 1.0);
    EXPECT_DOUBLE_EQ(sc->metrics.recall, 1.0);
    EXPECT_LT(slca->metrics.precision, 1.0);
    EXPECT_DOUBLE_EQ(slca->metrics.recall, 1.0);
    const auto* empty = report.find("q2", Method::SchemaConsistent, ReturnStrategy::Subtree);
    ASSERT_TRUE(empty);
    EXPECT_EQ(empty->metrics.retrieved_count, 0u);
    EXPECT_TRUE(empty->metrics.degenerate);
}

TEST(Suite, DeterministicWithoutTiming) {
    auto specs = load_suite(std::filesystem::path(XKWS_DATA_DIR) / "suites" / "fig1b.json");
    auto b = testkit::fixture_bundle("fig1b.xml");
    SuiteOptions opts;
    opts.strategies = {ReturnStrategy::Subtree, ReturnStrategy::Path, ReturnStrategy::SubtreeEntity,
                       ReturnStrategy::PathEntity};
    auto a = run_suite(b, specs, opts);
    auto c = run_suite(b, specs, opts);
    EXPECT_EQ(a.to_csv(false), c.to_csv(false));
    EXPECT_EQ(a.to_json(false), c.to_json(false));
    EXPECT_EQ(a.to_csv().substr(0, 41), "query,method,strategy,precision,recall,ms");
}

TEST(Suite, Errors) {
    EXPECT_THROW(parse_suite("{"), ParseError);
    EXPECT_THROW(parse_suite("{}"), ContractError);
    EXPECT_THROW(parse_suite(R"([{"id":"a","keywords":"x"},{"id":"a","keywords":"y"}])"), ContractError);
    auto b = testkit::fixture_bundle("fig1a.xml");
    SuiteOptions opts;
    opts.only = {"missing"};
    EXPECT_THROW(run_suite(b, parse_suite(R"([{"id":"a","keywords":"x"}])"), opts), NotFound);
    EXPECT_THROW(load_suite("/nonexistent/suite.json"), NotFound);
}

TEST(Suite, FeedbackRounds) {
    auto b = testkit::fixture_bundle("fig12.xml");
    QuerySpec q{"chair", {"XML", "Levy"}, {20}, "", 1};
    EXPECT_EQ(retrieve(b, q, Method::SchemaConsistent), (std::vector<InodeId>{3, 20}));
    q.feedback_rounds = 0;
    EXPECT_EQ(retrieve(b, q, Method::SchemaConsistent), std::vector<InodeId>{6});
    EXPECT_EQ(retrieve(b, q, Method::Slca), (std::vector<InodeId>{6, 20, 37}));
}

}  // namespace
