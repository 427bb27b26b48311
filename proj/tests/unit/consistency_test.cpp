#include <gtest/gtest.h>

#include "testkit.hpp"
#include "xkws/consistency.hpp"
#include "xkws/error.hpp"

using namespace xkws;

namespace {

using Groups = std::map<LabelPath, std::vector<InodeId>>;

const std::vector<std::string> kXmlLevy{"XML", "Levy"};

ResultStructure rs(const char* lp) { return make_structure(LabelPath::parse(lp), {"levy", "xml"}); }

TEST(Structures, ContainmentAndEquivalence) {
    EXPECT_TRUE(structurally_contains(rs("bib.conf"), rs("bib.conf.paper")));
    EXPECT_FALSE(structurally_contains(rs("bib.conf"), rs("bib.conf")));
    EXPECT_FALSE(structurally_contains(rs("bib.journal"), rs("bib.conf.paper")));
    EXPECT_TRUE(structurally_equivalent(rs("bib.conf"), rs("bib.conf")));
    EXPECT_FALSE(structurally_equivalent(rs("bib.conf.paper"), rs("bib.conf")));
    auto other = make_structure(LabelPath::parse("bib.conf"), {"xml"});
    EXPECT_THROW(structurally_contains(rs("bib.conf"), other), ContractError);
    EXPECT_THROW(structurally_equivalent(rs("bib.conf"), other), ContractError);
}

TEST(Structures, Fig1aRootsShareStructure) {
    auto t = parse_file(testkit::fixture("fig1a.xml"));
    auto s1 = make_structure(t.label_path(1), {"xml", "levy"});
    auto s51 = make_structure(t.label_path(51), {"xml", "levy"});
    auto s6 = make_structure(t.label_path(6), {"xml", "levy"});
    EXPECT_TRUE(structurally_equivalent(s1, s51));
    EXPECT_TRUE(structurally_contains(s51, s6));
}

TEST(Structures, SmallestResultStructures) {
    std::vector<ResultStructure> two{rs("bib.conf.paper"), rs("bib.conf")};
    EXPECT_EQ(smallest_result_structures(two), std::vector<ResultStructure>{rs("bib.conf.paper")});
    std::vector<ResultStructure> one{rs("bib")};
    EXPECT_EQ(smallest_result_structures(one), one);
    std::vector<ResultStructure> apart{rs("bib.journal.article"), rs("bib.conf.paper"), rs("bib.conf.paper")};
    EXPECT_EQ(smallest_result_structures(apart),
              (std::vector<ResultStructure>{rs("bib.conf.paper"), rs("bib.journal.article")}));
}

TEST(Naive, WorkedExamples) {
    auto a = parse_file(testkit::fixture("fig1a.xml"));
    EXPECT_EQ(resolve_naive(a, kXmlLevy).all_results(), std::vector<InodeId>{6});
    auto b = parse_file(testkit::fixture("fig1b.xml"));
    auto r = resolve_naive(b, kXmlLevy);
    EXPECT_EQ(r.all_results(), (std::vector<InodeId>{6, 101}));
    EXPECT_EQ(r.groups.size(), 2u);
    auto root_only = parse_document("<a><b>x</b><c>y</c></a>");
    EXPECT_EQ(resolve_naive(root_only, std::vector<std::string>{"x", "y"}).all_results(),
              std::vector<InodeId>{0});
    EXPECT_THROW(resolve_naive(a, std::vector<std::string>{}), ContractError);
    EXPECT_THROW(resolve_naive(a, std::vector<std::string>{"  "}), ContractError);
}

TEST(KthAncestor, Fig1b) {
    auto b = testkit::fixture_bundle("fig1b.xml");
    EXPECT_EQ(kth_ancestor(b.dataguide, 10, 2), 6u);
    EXPECT_EQ(kth_ancestor(b.dataguide, 10, 1), 8u);
    EXPECT_EQ(kth_ancestor(b.dataguide, 10, 4), 0u);
    EXPECT_EQ(kth_ancestor(b.dataguide, 10, 0), 10u);
    EXPECT_THROW(kth_ancestor(b.dataguide, 10, 5), OutOfRange);
}

TEST(SchemaLevel, Fig1a) {
    auto b = testkit::fixture_bundle("fig1a.xml");
    auto r = resolve_schema_level(b, kXmlLevy);
    ASSERT_EQ(r.groups.size(), 1u);
    EXPECT_EQ(r.groups[0].results, std::vector<InodeId>{6});
    EXPECT_EQ(r.groups[0].snode, std::optional<SnodeId>(6));
}

TEST(SchemaLevel, Fig1b) {
    auto b = testkit::fixture_bundle("fig1b.xml");
    auto r = resolve_schema_level(b, kXmlLevy);
    EXPECT_EQ(r.by_structure(), (Groups{{LabelPath::parse("bib.conf.paper"), {6}},
                                        {LabelPath::parse("bib.journal.article"), {101}}}));
    EXPECT_EQ(r.groups[1].xpath, R"(/bib/journal/article[contains(., "xml")][contains(., "levy")])");
}

TEST(SchemaLevel, FalseDismissalGeneralizesTwice) {
    auto b = testkit::fixture_bundle("fig1a.xml");
    EXPECT_EQ(schema_slca(b, std::vector<std::string>{"Levy", "Lu"}), std::vector<SnodeId>{10});
    auto r = resolve_schema_level(b, std::vector<std::string>{"Levy", "Lu"});
    ASSERT_EQ(r.groups.size(), 1u);
    EXPECT_EQ(r.groups[0].snode, std::optional<SnodeId>(kth_ancestor(b.dataguide, 10, 2)));
    EXPECT_EQ(r.groups[0].results, std::vector<InodeId>{61});
}

TEST(SchemaLevel, PhantomRemovedInEitherOrder) {
    auto b = testkit::fixture_bundle("fig10.xml");
    std::vector<std::string> q{"XML", "IR"};
    EXPECT_EQ(schema_slca(b, q), (std::vector<SnodeId>{2, 3}));
    for (auto order : {ProcessingOrder::Ascending, ProcessingOrder::Descending}) {
        ResolveOptions opts;
        opts.order = order;
        auto r = resolve_schema_level(b, q, opts);
        ASSERT_EQ(r.groups.size(), 1u);
        EXPECT_EQ(r.groups[0].results, std::vector<InodeId>{4});
    }
}

TEST(SchemaLevel, Fig11SpuriousConfsDropped) {
    auto b = testkit::fixture_bundle("fig11.xml");
    std::vector<std::string> q{"XML", "Levy", "Lu"};
    std::vector<InodeId> slcas;
    for (const auto& p : instance_slca(b.tree, q)) slcas.push_back(p.back());
    EXPECT_EQ(slcas, (std::vector<InodeId>{2, 10, 17}));
    EXPECT_EQ(resolve_schema_level(b, q).all_results(), std::vector<InodeId>{2});
    EXPECT_EQ(resolve_naive(b.tree, q).all_results(), std::vector<InodeId>{2});
}

TEST(SchemaLevel, UnknownKeywordGivesEmpty) {
    auto b = testkit::fixture_bundle("fig1a.xml");
    EXPECT_TRUE(resolve_schema_level(b, std::vector<std::string>{"xml", "zzz"}).groups.empty());
}

TEST(Feedback, Fig12ConfYear) {
    auto b = testkit::fixture_bundle("fig12.xml");
    auto st = resolve_schema_level_state(b, kXmlLevy);
    ASSERT_EQ(st.results.groups.size(), 1u);
    EXPECT_EQ(st.results.all_results(), std::vector<InodeId>{6});
    SnodeId paper = *st.results.groups[0].snode;
    auto out = apply_feedback(b, st, paper);
    EXPECT_TRUE(out.generalized);
    ASSERT_EQ(out.results.groups.size(), 1u);
    EXPECT_EQ(out.results.groups[0].structure.incoming_label_path.str(), "bib.conf.conf_year");
    EXPECT_EQ(out.results.all_results(), (std::vector<InodeId>{3, 20}));
    EXPECT_EQ(st.results.all_results(), (std::vector<InodeId>{3, 20}));
}

TEST(Feedback, RepeatsUpToRoot) {
    auto b = testkit::fixture_bundle("fig12.xml");
    auto st = resolve_schema_level_state(b, kXmlLevy);
    int clicks = 0;
    while (true) {
        SnodeId g = *st.results.groups.at(0).snode;
        auto before = st.results.all_results();
        auto out = apply_feedback(b, st, g);
        if (!out.generalized) {
            EXPECT_EQ(g, b.dataguide.root());
            EXPECT_EQ(out.results.all_results(), before);
            break;
        }
        ++clicks;
        ASSERT_LT(clicks, 10);
    }
    EXPECT_EQ(clicks, 3);
    EXPECT_EQ(st.results.all_results(), std::vector<InodeId>{0});
}

TEST(Feedback, UnknownGroup) {
    auto b = testkit::fixture_bundle("fig12.xml");
    auto st = resolve_schema_level_state(b, kXmlLevy);
    EXPECT_THROW(apply_feedback(b, st, 999), NotFound);
    EXPECT_THROW(apply_feedback(b, st, 1), NotFound);
}

TEST(Feedback, RecursiveEmployees) {
    auto b = testkit::fixture_bundle("fig14.xml");
    std::vector<std::string> q{"John", "employee"};
    auto st = resolve_schema_level_state(b, q);
    EXPECT_EQ(st.results.all_results(), std::vector<InodeId>{3});
    auto out = apply_feedback(b, st, *st.results.groups[0].snode);
    EXPECT_TRUE(out.generalized);
    EXPECT_EQ(out.results.all_results(), std::vector<InodeId>{1});
}

TEST(Feedback, LiftedGroupIsFlaggedWhenItContainsAnother) {
    auto b = testkit::fixture_bundle("fig1b.xml");
    auto st = resolve_schema_level_state(b, kXmlLevy);
    auto out = apply_feedback(b, st, 12);  // bib.journal.article -> bib.journal
    ASSERT_TRUE(out.generalized);
    out = apply_feedback(b, st, 11);  // bib.journal -> bib, which holds the paper group
    ASSERT_TRUE(out.generalized);
    const auto* root = out.results.find_group(0);
    ASSERT_NE(root, nullptr);
    EXPECT_TRUE(root->contains_other_group);
    const auto* paper = out.results.find_group(6);
    ASSERT_NE(paper, nullptr);
    EXPECT_FALSE(paper->contains_other_group);
}

TEST(SchemaVsNaive, RandomDocuments) {
    std::mt19937_64 rng(99);
    testkit::RandomDocOptions o;
    o.max_nodes = 60;
    for (int i = 0; i < 150; ++i) {
        auto b = build_bundle(parse_document(testkit::random_xml(rng, o)));
        auto kws = testkit::random_keywords(rng, 3, o);
        auto naive = resolve_naive(b.tree, kws).by_structure();
        EXPECT_EQ(resolve_schema_level(b, kws).by_structure(), naive);
        ResolveOptions desc;
        desc.order = ProcessingOrder::Descending;
        EXPECT_EQ(resolve_schema_level(b, kws, desc).by_structure(), naive);
        EXPECT_EQ(naive, testkit::oracle_consistent(b.tree, kws));
    }
}

TEST(SchemaSlcaProperties, SmallestStructuresUnderSchemaSlcas) {
    std::mt19937_64 rng(42);
    for (int i = 0; i < 150; ++i) {
        auto b = build_bundle(parse_document(testkit::random_xml(rng)));
        auto kws = testkit::random_keywords(rng, 3);
        auto ss = schema_slca(b, kws);
        for (const auto& [srs, ids] : resolve_naive(b.tree, kws).by_structure()) {
            bool under_some = false;
            for (SnodeId s : ss) {
                const auto& lp = b.dataguide.lookup_label_path(s);
                if (!srs.is_prefix_of(lp)) continue;
                under_some = true;
                auto k = static_cast<std::uint32_t>(lp.size() - srs.size());
                EXPECT_EQ(b.dataguide.lookup_label_path(kth_ancestor(b.dataguide, s, k)), srs);
            }
            EXPECT_TRUE(under_some);
        }
    }
}

}  // namespace
