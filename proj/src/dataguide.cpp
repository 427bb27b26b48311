#include "xkws/dataguide.hpp"

#include <algorithm>
#include <set>

#include "xkws/error.hpp"

namespace xkws {

DataGuidePlus::DataGuidePlus(std::vector<SchemaNode> nodes, std::vector<SnodeId> instance_map)
    : nodes_(std::move(nodes)), instance_map_(std::move(instance_map)) {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        auto& n = nodes_[i];
        if (n.id != i) throw ContractError("schema node ids must be dense preorder numbers");
        if (i == 0) {
            if (n.parent) throw ContractError("schema root must not have a parent");
            n.depth = 0;
        } else {
            if (!n.parent || *n.parent >= i) throw ContractError("schema node precedes its parent");
            n.depth = nodes_[*n.parent].depth + 1;
        }
        n.last_descendant = n.id;
    }
    for (std::size_t i = nodes_.size(); i-- > 1;) {
        auto& p = nodes_[*nodes_[i].parent];
        p.last_descendant = std::max(p.last_descendant, nodes_[i].last_descendant);
    }
    for (SnodeId s : instance_map_)
        if (s >= nodes_.size()) throw ContractError("instance map points past the schema");

    label_paths_.resize(nodes_.size());
    for (const auto& n : nodes_) {
        LabelPath lp = n.parent ? label_paths_[*n.parent] : LabelPath{};
        lp.labels.push_back(n.label);
        auto [it, fresh] = label_path_ids_.emplace(lp, n.id);
        if (!fresh) throw ContractError("duplicate label path " + lp.str());
        label_paths_[n.id] = std::move(lp);
        for (const auto& k : n.keywords) keyword_to_snodes_[k].push_back(n.id);
    }
}

const SchemaNode& DataGuidePlus::node(SnodeId id) const {
    if (!contains(id)) throw NotFound("no schema node " + std::to_string(id));
    return nodes_[id];
}

const LabelPath& DataGuidePlus::lookup_label_path(SnodeId id) const {
    if (!contains(id)) throw NotFound("no label path with id " + std::to_string(id));
    return label_paths_[id];
}

std::optional<SnodeId> DataGuidePlus::find_label_path_id(const LabelPath& lp) const {
    auto it = label_path_ids_.find(lp);
    if (it == label_path_ids_.end()) return std::nullopt;
    return it->second;
}

SnodeId DataGuidePlus::lookup_label_path_id(const LabelPath& lp) const {
    if (auto id = find_label_path_id(lp)) return *id;
    throw NotFound("unknown label path " + lp.str());
}

std::vector<SnodeId> DataGuidePlus::numeric_label_path(SnodeId id) const {
    std::vector<SnodeId> p(node(id).depth + 1);
    for (std::optional<SnodeId> cur = id; cur; cur = nodes_[*cur].parent)
        p[nodes_[*cur].depth] = *cur;
    return p;
}

bool DataGuidePlus::is_ancestor_or_self(SnodeId ancestor, SnodeId n) const {
    return ancestor <= n && n <= node(ancestor).last_descendant;
}

SnodeId DataGuidePlus::snode_of(InodeId inode) const {
    if (inode >= instance_map_.size()) throw NotFound("no instance node " + std::to_string(inode));
    return instance_map_[inode];
}

DataGuidePlus build_dataguide(const InstanceTree& tree) {
    if (tree.empty()) throw ContractError("cannot summarize an empty tree");

    // Pass 1: label trie over the instance tree in document order.
    struct TrieNode {
        std::string label;
        NodeKind kind;
        std::vector<std::size_t> children;
        std::set<std::string> keywords;
    };
    std::vector<TrieNode> trie;
    std::vector<std::size_t> trie_of(tree.size());
    for (const auto& n : tree.nodes()) {
        std::size_t t;
        if (!n.parent) {
            trie.push_back({n.label, n.kind, {}, {}});
            t = 0;
        } else {
            std::size_t pt = trie_of[*n.parent];
            auto& kids = trie[pt].children;
            auto it = std::find_if(kids.begin(), kids.end(),
                                   [&](std::size_t c) { return trie[c].label == n.label; });
            if (it != kids.end()) {
                t = *it;
            } else {
                t = trie.size();
                trie.push_back({n.label, n.kind, {}, {}});
                trie[pt].children.push_back(t);
            }
        }
        trie_of[n.id] = t;
        for (auto& k : tree.keywords_of(n.id)) trie[t].keywords.insert(std::move(k));
    }

    // Pass 2: preorder numbering of the summary itself.
    std::vector<SchemaNode> nodes;
    nodes.reserve(trie.size());
    std::vector<SnodeId> snode_of_trie(trie.size());
    std::vector<std::pair<std::size_t, std::optional<SnodeId>>> stack{{0, std::nullopt}};
    while (!stack.empty()) {
        auto [t, parent] = stack.back();
        stack.pop_back();
        SchemaNode s;
        s.id = static_cast<SnodeId>(nodes.size());
        s.label = trie[t].label;
        s.kind = trie[t].kind;
        s.parent = parent;
        s.keywords.assign(trie[t].keywords.begin(), trie[t].keywords.end());
        if (parent) nodes[*parent].children.push_back(s.id);
        snode_of_trie[t] = s.id;
        nodes.push_back(std::move(s));
        const auto& kids = trie[t].children;
        for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back({*it, snode_of_trie[t]});
    }

    std::vector<SnodeId> instance_map(tree.size());
    for (std::size_t i = 0; i < tree.size(); ++i) instance_map[i] = snode_of_trie[trie_of[i]];
    return DataGuidePlus(std::move(nodes), std::move(instance_map));
}

}  // namespace xkws
