#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xkws/bundle.hpp"
#include "xkws/consistency.hpp"

namespace xkws {

enum class ReturnStrategy { Subtree, Path, SubtreeEntity, PathEntity };

std::string_view to_string(ReturnStrategy s);
/// Accepts "subtree", "path", "subtree-entity", "path-entity" (also "s-e", "p-e").
std::optional<ReturnStrategy> parse_strategy(std::string_view name);

struct KeywordPath {
    std::string keyword;
    /// From the anchor down to the node holding the keyword.
    std::vector<InodeId> ids;
};

struct RenderedResult {
    InodeId result = 0;
    InodeId anchor = 0;
    ReturnStrategy strategy = ReturnStrategy::Subtree;
    /// Subtree strategies only.
    std::string xml;
    /// Path strategies only.
    std::vector<KeywordPath> paths;
    /// Every node in the payload, ascending.
    std::vector<InodeId> node_ids;
    std::size_t node_count = 0;

    /// Human-readable payload: the XML fragment or one "label(id)/..." line per path.
    std::string text(const InstanceTree& tree) const;
};

/// Schema nodes with at least two instances under one parent instance.
std::set<SnodeId> infer_entities(const DataGuidePlus& g, const InstanceTree& tree);

/// Nearest ancestor-or-self whose schema node is an entity; the node itself when none is.
InodeId lowest_entity_ancestor(const InstanceTree& tree, const DataGuidePlus& g, InodeId id,
                               const std::set<SnodeId>& entities);

/// Renders one result node. Keywords are taken as already normalized.
RenderedResult render_node(const IndexBundle& b, InodeId id, ReturnStrategy strategy,
                           std::span<const std::string> keywords,
                           const std::set<SnodeId>& entities);

/// Renders result ids in order; results lifted onto the same anchor are merged.
std::vector<RenderedResult> render(const IndexBundle& b, std::span<const InodeId> ids,
                                   ReturnStrategy strategy, std::span<const std::string> keywords,
                                   const std::set<SnodeId>& entities);

std::vector<RenderedResult> render(const IndexBundle& b, const QueryResultSet& qrs,
                                   ReturnStrategy strategy, const std::set<SnodeId>& entities);

}  // namespace xkws
