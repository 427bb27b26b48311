#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace xkws {

using InodeId = std::uint32_t;
using SnodeId = std::uint32_t;

enum class NodeKind : std::uint8_t { Element = 0, Attribute = 1, Value = 2 };

/// Controls how value text and query strings are turned into keywords.
struct TokenizerConfig {
    bool case_sensitive = false;
    /// Register every element/attribute label as a keyword of its own node.
    bool index_labels = true;

    bool operator==(const TokenizerConfig&) const = default;
};

/// Splits value text into keywords: maximal runs of alphanumerics or '_'.
std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& cfg);

std::string normalize_keyword(std::string_view word, const TokenizerConfig& cfg);

/// Whitespace-separated query string to a deduplicated keyword list (input order kept).
std::vector<std::string> split_query(std::string_view query, const TokenizerConfig& cfg);

/// Root-to-node sequence of preorder ids.
struct NodePath {
    std::vector<InodeId> ids;

    std::string str() const;
    bool operator==(const NodePath&) const = default;
};

/// Root-to-node sequence of labels, printed as "bib.conf.paper".
struct LabelPath {
    std::vector<std::string> labels;

    static LabelPath parse(std::string_view dotted);
    std::string str() const;
    std::size_t size() const noexcept { return labels.size(); }
    const std::string& last() const { return labels.back(); }
    bool is_prefix_of(const LabelPath& other) const;
    bool is_proper_prefix_of(const LabelPath& other) const {
        return labels.size() < other.labels.size() && is_prefix_of(other);
    }

    auto operator<=>(const LabelPath&) const = default;
};

/// One position in an element's mixed content: either a child node or a text fragment.
struct ContentItem {
    bool is_text = false;
    std::uint32_t ref = 0;  // child id, or index into InstanceNode::texts

    bool operator==(const ContentItem&) const = default;
};

/// Element or attribute node. Value nodes are not materialized with ids of their own;
/// their text lives in `texts` of the owning node.
struct InstanceNode {
    InodeId id = 0;
    std::string label;
    NodeKind kind = NodeKind::Element;
    std::optional<InodeId> parent;
    std::vector<InodeId> children;
    std::vector<std::string> texts;
    std::vector<ContentItem> content;

    // Derived on tree construction.
    std::uint32_t depth = 0;
    InodeId last_descendant = 0;
};

/// Preorder-numbered labeled tree. Immutable once built.
class InstanceTree {
public:
    InstanceTree() = default;

    /// Takes raw nodes (ids, labels, parents, children, texts, content) and derives
    /// depth, subtree ranges and keyword occurrences. Throws ContractError when the
    /// nodes are not a dense preorder numbering.
    InstanceTree(std::vector<InstanceNode> nodes, TokenizerConfig cfg);

    std::size_t size() const noexcept { return nodes_.size(); }
    bool empty() const noexcept { return nodes_.empty(); }
    InodeId root() const noexcept { return 0; }
    bool contains(InodeId id) const noexcept { return id < nodes_.size(); }
    const InstanceNode& node(InodeId id) const;
    std::span<const InstanceNode> nodes() const noexcept { return nodes_; }
    const TokenizerConfig& config() const noexcept { return cfg_; }

    NodePath node_path(InodeId id) const;
    LabelPath label_path(InodeId id) const;
    std::vector<InodeId> subtree_ids(InodeId id) const;
    bool is_ancestor_or_self(InodeId ancestor, InodeId node) const;

    /// Keyword -> ascending ids of the nodes directly containing it.
    const std::map<std::string, std::vector<InodeId>>& keyword_occurrences() const noexcept {
        return occurrences_;
    }
    std::span<const InodeId> occurrences(const std::string& keyword) const;

    /// Keywords directly contained by one node (its value tokens and its label).
    std::vector<std::string> keywords_of(InodeId id) const;

    /// Serializes the subtree at `id` back to XML text.
    std::string to_xml(InodeId id) const;
    std::string to_xml() const { return empty() ? std::string{} : to_xml(root()); }

private:
    std::vector<InstanceNode> nodes_;
    TokenizerConfig cfg_;
    std::map<std::string, std::vector<InodeId>> occurrences_;
};

InstanceTree parse_document(std::string_view xml_text, const TokenizerConfig& cfg = {});
InstanceTree parse_file(const std::filesystem::path& path, const TokenizerConfig& cfg = {});

}  // namespace xkws
