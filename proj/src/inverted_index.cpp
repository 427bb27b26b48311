#include "xkws/inverted_index.hpp"

namespace xkws {

SchemaIndex build_schema_index(const DataGuidePlus& g) {
    std::map<std::string, std::vector<SchemaPosting>> raw;
    for (const auto& s : g.nodes()) {
        auto nlp = g.numeric_label_path(s.id);
        for (const auto& k : s.keywords) raw[k].push_back({s.id, nlp});
    }
    std::map<std::string, SchemaIndex::List> lists;
    for (auto& [term, postings] : raw)
        lists.emplace(term, SchemaIndex::List(term, std::move(postings)));
    return SchemaIndex(std::move(lists));
}

InstanceIndex build_instance_index(const InstanceTree& tree, const DataGuidePlus& g) {
    std::map<std::string, std::vector<InstancePosting>> raw;
    // Node paths and numeric label paths are produced incrementally along preorder.
    std::vector<std::vector<InodeId>> node_paths(tree.size());
    for (const auto& n : tree.nodes()) {
        if (n.parent) node_paths[n.id] = node_paths[*n.parent];
        node_paths[n.id].push_back(n.id);
    }
    std::vector<std::vector<SnodeId>> nlps(g.size());
    for (const auto& s : g.nodes()) nlps[s.id] = g.numeric_label_path(s.id);

    for (const auto& [term, ids] : tree.keyword_occurrences()) {
        auto& out = raw[term];
        out.reserve(ids.size());
        for (InodeId id : ids) out.push_back({id, node_paths[id], nlps[g.snode_of(id)]});
    }
    std::map<std::string, InstanceIndex::List> lists;
    for (auto& [term, postings] : raw)
        lists.emplace(term, InstanceIndex::List(term, std::move(postings)));
    return InstanceIndex(std::move(lists));
}

}  // namespace xkws
