#include <gtest/gtest.h>

#include "testkit.hpp"
#include "xkws/error.hpp"
#include "xkws/xml_store.hpp"

using namespace xkws;

namespace {

TEST(XmlStore, MinimalDocument) {
    auto t = parse_document("<a/>");
    ASSERT_EQ(t.size(), 1u);
    EXPECT_EQ(t.root(), 0u);
    EXPECT_EQ(t.node(0).label, "a");
    EXPECT_FALSE(t.node(0).parent);
}

TEST(XmlStore, Fig1bKeyNodes) {
    auto t = parse_file(testkit::fixture("fig1b.xml"));
    EXPECT_EQ(t.node(0).label, "bib");
    EXPECT_EQ(t.node(6).label, "paper");
    EXPECT_EQ(t.node(101).label, "article");
    EXPECT_EQ(t.node(51).label, "conf");
}

TEST(XmlStore, NodePathAndLabelPath) {
    auto t = parse_file(testkit::fixture("fig1b.xml"));
    EXPECT_EQ(t.node_path(15).str(), "0.1.11.13.15");
    EXPECT_EQ(t.label_path(15).str(), "bib.conf.paper.author.ln");
    EXPECT_EQ(t.label_path(101).str(), "bib.journal.article");
    EXPECT_EQ(t.node_path(0).ids, std::vector<InodeId>{0});
    EXPECT_EQ(t.label_path(0).str(), "bib");
    for (InodeId id = 0; id < t.size(); ++id) {
        auto np = t.node_path(id);
        EXPECT_EQ(np.ids.back(), id);
        EXPECT_EQ(np.ids.size(), t.label_path(id).size());
        EXPECT_TRUE(std::is_sorted(np.ids.begin(), np.ids.end()));
    }
}

TEST(XmlStore, UnknownIdThrows) {
    auto t = parse_document("<a><b/></a>");
    EXPECT_THROW(t.node_path(7), NotFound);
    EXPECT_THROW(t.label_path(7), NotFound);
    EXPECT_THROW(t.subtree_ids(7), NotFound);
}

TEST(XmlStore, SubtreeIds) {
    auto t = parse_file(testkit::fixture("fig1b.xml"));
    EXPECT_EQ(t.subtree_ids(6), (std::vector<InodeId>{6, 7, 8, 9, 10}));
    EXPECT_EQ(t.subtree_ids(10), std::vector<InodeId>{10});
    EXPECT_EQ(t.subtree_ids(0).size(), t.size());
}

TEST(XmlStore, PreorderLaw) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        auto t = parse_document(testkit::random_xml(rng));
        for (InodeId n = 0; n < t.size(); ++n) {
            auto path = t.node_path(n).ids;
            for (std::size_t a = 0; a < path.size(); ++a) {
                auto sub = t.subtree_ids(path[a]);
                for (std::size_t k = a; k < path.size(); ++k)
                    EXPECT_TRUE(std::binary_search(sub.begin(), sub.end(), path[k]));
            }
        }
    }
}

TEST(XmlStore, AttributesAreChildrenBeforeElements) {
    auto t = parse_document(R"(<paper key="p1" year="2001"><title>XML</title></paper>)");
    ASSERT_EQ(t.size(), 4u);
    EXPECT_EQ(t.node(1).label, "@key");
    EXPECT_EQ(t.node(1).kind, NodeKind::Attribute);
    EXPECT_EQ(t.node(2).label, "@year");
    EXPECT_EQ(t.node(3).label, "title");
    auto occ = t.occurrences("p1");
    ASSERT_EQ(occ.size(), 1u);
    EXPECT_EQ(occ[0], 1u);
    EXPECT_EQ(t.occurrences("key").size(), 1u);
}

TEST(XmlStore, KeywordsAttachToParentAndLabels) {
    auto t = parse_document("<bib><title>Querying XML, data!</title></bib>");
    EXPECT_EQ(std::vector<InodeId>(t.occurrences("xml").begin(), t.occurrences("xml").end()),
              std::vector<InodeId>{1});
    EXPECT_EQ(t.occurrences("data").size(), 1u);
    EXPECT_EQ(t.occurrences("title").size(), 1u);
    EXPECT_EQ(t.occurrences("bib")[0], 0u);
    EXPECT_TRUE(t.occurrences("XML").empty());
}

TEST(XmlStore, TokenizerConfig) {
    TokenizerConfig cs{true, false};
    auto t = parse_document("<bib><title>XML data</title></bib>", cs);
    EXPECT_EQ(t.occurrences("XML").size(), 1u);
    EXPECT_TRUE(t.occurrences("xml").empty());
    EXPECT_TRUE(t.occurrences("title").empty());
    EXPECT_EQ(tokenize("a-b c_d, e", {}), (std::vector<std::string>{"a", "b", "c_d", "e"}));
    EXPECT_EQ(split_query("XML  Levy xml", {}), (std::vector<std::string>{"xml", "levy"}));
}

TEST(XmlStore, MixedContentKeepsFragments) {
    auto t = parse_document("<p>one <b>two</b> three</p>");
    EXPECT_EQ(t.node(0).texts.size(), 2u);
    EXPECT_EQ(t.to_xml(), "<p>one <b>two</b> three</p>");
}

TEST(XmlStore, ParseErrors) {
    EXPECT_THROW(parse_document(""), ParseError);
    EXPECT_THROW(parse_document("   \n"), ParseError);
    try {
        parse_document("<a><b></a>");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_GT(e.offset(), 0u);
    }
}

TEST(XmlStore, RoundTripKeepsIds) {
    for (const char* f : {"fig1a.xml", "fig1b.xml", "fig10.xml", "fig11.xml", "fig12.xml", "fig14.xml"}) {
        auto t = parse_file(testkit::fixture(f));
        auto again = parse_document(t.to_xml());
        ASSERT_EQ(t.size(), again.size()) << f;
        for (InodeId i = 0; i < t.size(); ++i) {
            EXPECT_EQ(t.label_path(i), again.label_path(i));
            EXPECT_EQ(t.node(i).texts, again.node(i).texts);
        }
    }
    auto a = parse_document(R"(<r k="a&amp;b"><x>1 &lt; 2</x></r>)");
    auto b = parse_document(a.to_xml());
    EXPECT_EQ(a.node(1).texts, b.node(1).texts);
    EXPECT_EQ(a.node(2).texts, b.node(2).texts);
}

TEST(XmlStore, RejectsNonPreorderNodes) {
    std::vector<InstanceNode> nodes(2);
    nodes[0].id = 0;
    nodes[1].id = 1;
    EXPECT_THROW(InstanceTree(nodes, {}), ContractError);
}

TEST(LabelPathTest, PrefixRelations) {
    auto a = LabelPath::parse("bib.conf");
    auto b = LabelPath::parse("bib.conf.paper");
    EXPECT_TRUE(a.is_proper_prefix_of(b));
    EXPECT_FALSE(a.is_proper_prefix_of(a));
    EXPECT_TRUE(a.is_prefix_of(a));
    EXPECT_FALSE(LabelPath::parse("bib.journal").is_prefix_of(b));
    EXPECT_EQ(b.str(), "bib.conf.paper");
}

}  // namespace
