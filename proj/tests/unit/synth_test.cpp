#include <gtest/gtest.h>

#include "xkws/consistency.hpp"
#include "xkws/synth.hpp"

using namespace xkws;

namespace {

TEST(Synth, DblpLikeShape) {
    auto c = generate_dblp_like(1);
    auto t = parse_document(c.xml);
    EXPECT_EQ(t.size(), c.node_count);
    EXPECT_GE(c.node_count, 5000u);
    EXPECT_LT(c.node_count, 7000u);
    EXPECT_EQ(c.specs.size(), 20u);
    EXPECT_EQ(t.node(0).label, "dblp");
    for (const auto& q : c.specs) {
        auto relevant = evaluate_xpath(t, q.reference_xpath);
        EXPECT_FALSE(relevant.empty()) << q.id;
        for (const auto& k : q.keywords) EXPECT_FALSE(t.occurrences(k).empty());
    }
}

TEST(Synth, Deterministic) {
    EXPECT_EQ(generate_dblp_like(7).xml, generate_dblp_like(7).xml);
    EXPECT_NE(generate_dblp_like(7).xml, generate_dblp_like(8).xml);
    EXPECT_EQ(generate_scaled(3, 2000).xml, generate_scaled(3, 2000).xml);
}

TEST(Synth, ScaledSize) {
    for (std::size_t n : {1000u, 10000u}) {
        auto c = generate_scaled(5, n);
        EXPECT_GE(c.node_count, n);
        EXPECT_LT(c.node_count, n + 200);
        EXPECT_EQ(parse_document(c.xml).size(), c.node_count);
    }
}

}  // namespace
