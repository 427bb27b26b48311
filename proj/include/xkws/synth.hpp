#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "xkws/eval_harness.hpp"

namespace xkws {

/// Generated bibliography plus query specs whose ground truth is a reference XPath.
struct SynthCorpus {
    std::string xml;
    std::size_t node_count = 0;
    std::vector<QuerySpec> specs;
};

/// Bibliography of roughly 5,000 nodes (dblp/conf/paper and dblp/journal/article) with
/// `query_count` planted two-term queries. Most queries also get a spurious conf where
/// the two terms only meet at conf level.
SynthCorpus generate_dblp_like(std::uint64_t seed, int query_count = 20);

/// Unplanted bibliography with about `target_nodes` element and attribute nodes.
SynthCorpus generate_scaled(std::uint64_t seed, std::size_t target_nodes);

}  // namespace xkws
