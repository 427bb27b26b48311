#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xkws/xml_store.hpp"

namespace xkws {

struct SchemaNode {
    SnodeId id = 0;
    std::string label;
    NodeKind kind = NodeKind::Element;
    std::optional<SnodeId> parent;
    std::vector<SnodeId> children;
    /// Keywords of instance nodes with this label path, sorted and unique.
    std::vector<std::string> keywords;

    std::uint32_t depth = 0;
    SnodeId last_descendant = 0;
};

/// DataGuide augmented with keywords: one schema node per distinct label path,
/// numbered in preorder. The snode id doubles as the label path id of the LabelPath table.
class DataGuidePlus {
public:
    DataGuidePlus() = default;
    /// `instance_map[inode]` is the snode holding that instance node's label path.
    DataGuidePlus(std::vector<SchemaNode> nodes, std::vector<SnodeId> instance_map);

    std::size_t size() const noexcept { return nodes_.size(); }
    SnodeId root() const noexcept { return 0; }
    bool contains(SnodeId id) const noexcept { return id < nodes_.size(); }
    const SchemaNode& node(SnodeId id) const;
    std::span<const SchemaNode> nodes() const noexcept { return nodes_; }

    const LabelPath& lookup_label_path(SnodeId id) const;
    SnodeId lookup_label_path_id(const LabelPath& lp) const;
    std::optional<SnodeId> find_label_path_id(const LabelPath& lp) const;

    std::optional<SnodeId> parent(SnodeId id) const { return node(id).parent; }
    std::uint32_t depth(SnodeId id) const { return node(id).depth; }
    std::vector<SnodeId> numeric_label_path(SnodeId id) const;
    bool is_ancestor_or_self(SnodeId ancestor, SnodeId n) const;

    /// Keyword -> ascending snode ids that directly contain it.
    const std::map<std::string, std::vector<SnodeId>>& keyword_to_snodes() const noexcept {
        return keyword_to_snodes_;
    }

    SnodeId snode_of(InodeId inode) const;
    std::span<const SnodeId> instance_map() const noexcept { return instance_map_; }

private:
    std::vector<SchemaNode> nodes_;
    std::vector<SnodeId> instance_map_;
    std::vector<LabelPath> label_paths_;
    std::map<LabelPath, SnodeId> label_path_ids_;
    std::map<std::string, std::vector<SnodeId>> keyword_to_snodes_;
};

DataGuidePlus build_dataguide(const InstanceTree& tree);

}  // namespace xkws
