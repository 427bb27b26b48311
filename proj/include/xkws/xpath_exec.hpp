#pragma once

#include <optional>
#include <string>
#include <vector>

#include "xkws/dataguide.hpp"
#include "xkws/inverted_index.hpp"

namespace xkws {

/// Branching twig rooted at one schema node: child-axis path plus keyword predicates.
struct XPathQuery {
    std::string query_string;
    /// Length of the branching node's label path (root has depth 1).
    std::uint32_t branching_depth = 0;
    SnodeId label_path_id = 0;
    std::vector<std::string> keywords;
    SnodeId source_snode = 0;

    bool operator==(const XPathQuery&) const = default;
};

/// One query per schema node. A keyword equal to the node's own label gets no predicate.
std::vector<XPathQuery> translate(const std::vector<SnodeId>& snodes,
                                  const std::vector<std::string>& keywords, const DataGuidePlus& g);

/// Posting in `list` whose node path passes through `k` at depth `d` (1-based), if any.
const InstancePosting* find_matching_posting(const InstanceIndex::List& list, InodeId k,
                                             std::uint32_t d);

/// Evaluates all queries in one scan of the shortest keyword list. Result i holds the
/// sorted, distinct ids for queries[i]. All queries must share one keyword set.
std::vector<std::vector<InodeId>> evaluate_queries(const std::vector<XPathQuery>& queries,
                                                   const InstanceIndex& idx);

}  // namespace xkws
