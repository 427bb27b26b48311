#include "xkws/output_gen.hpp"

#include <algorithm>
#include <map>

#include "xkws/error.hpp"

namespace xkws {

std::string_view to_string(ReturnStrategy s) {
    switch (s) {
        case ReturnStrategy::Subtree: return "subtree";
        case ReturnStrategy::Path: return "path";
        case ReturnStrategy::SubtreeEntity: return "subtree-entity";
        case ReturnStrategy::PathEntity: return "path-entity";
    }
    return "subtree";
}

std::optional<ReturnStrategy> parse_strategy(std::string_view name) {
    if (name == "subtree" || name == "s") return ReturnStrategy::Subtree;
    if (name == "path" || name == "p") return ReturnStrategy::Path;
    if (name == "subtree-entity" || name == "s-e") return ReturnStrategy::SubtreeEntity;
    if (name == "path-entity" || name == "p-e") return ReturnStrategy::PathEntity;
    return std::nullopt;
}

std::string RenderedResult::text(const InstanceTree& tree) const {
    if (!paths.empty() || strategy == ReturnStrategy::Path || strategy == ReturnStrategy::PathEntity) {
        std::string out;
        for (const auto& kp : paths) {
            for (std::size_t i = 0; i < kp.ids.size(); ++i) {
                if (i) out += '/';
                out += tree.node(kp.ids[i]).label + "(" + std::to_string(kp.ids[i]) + ")";
            }
            out += " : " + kp.keyword + "\n";
        }
        return out;
    }
    return xml;
}

std::set<SnodeId> infer_entities(const DataGuidePlus& g, const InstanceTree& tree) {
    std::set<SnodeId> out;
    for (const auto& n : tree.nodes()) {
        std::map<SnodeId, int> counts;
        for (InodeId c : n.children)
            if (++counts[g.snode_of(c)] == 2) out.insert(g.snode_of(c));
    }
    return out;
}

InodeId lowest_entity_ancestor(const InstanceTree& tree, const DataGuidePlus& g, InodeId id,
                               const std::set<SnodeId>& entities) {
    for (std::optional<InodeId> cur = tree.node(id).id; cur; cur = tree.node(*cur).parent)
        if (entities.count(g.snode_of(*cur))) return *cur;
    return id;
}

namespace {

std::vector<KeywordPath> keyword_paths(const InstanceTree& tree, InodeId anchor,
                                       std::span<const std::string> keywords) {
    std::vector<KeywordPath> out;
    auto depth = tree.node(anchor).depth;
    auto last = tree.node(anchor).last_descendant;
    for (const auto& w : keywords) {
        auto occ = tree.occurrences(w);
        auto lo = std::lower_bound(occ.begin(), occ.end(), anchor);
        for (auto it = lo; it != occ.end() && *it <= last; ++it) {
            auto full = tree.node_path(*it).ids;
            out.push_back({w, std::vector<InodeId>(full.begin() + depth, full.end())});
        }
    }
    return out;
}

}  // namespace

RenderedResult render_node(const IndexBundle& b, InodeId id, ReturnStrategy strategy,
                           std::span<const std::string> keywords,
                           const std::set<SnodeId>& entities) {
    const auto& tree = b.tree;
    RenderedResult r;
    r.result = tree.node(id).id;
    r.strategy = strategy;
    bool lift = strategy == ReturnStrategy::SubtreeEntity || strategy == ReturnStrategy::PathEntity;
    r.anchor = lift ? lowest_entity_ancestor(tree, b.dataguide, id, entities) : id;
    if (strategy == ReturnStrategy::Subtree || strategy == ReturnStrategy::SubtreeEntity) {
        r.xml = tree.to_xml(r.anchor);
        r.node_ids = tree.subtree_ids(r.anchor);
    } else {
        r.paths = keyword_paths(tree, r.anchor, keywords);
        std::set<InodeId> ids{r.anchor};
        for (const auto& kp : r.paths) ids.insert(kp.ids.begin(), kp.ids.end());
        r.node_ids.assign(ids.begin(), ids.end());
    }
    r.node_count = r.node_ids.size();
    return r;
}

std::vector<RenderedResult> render(const IndexBundle& b, std::span<const InodeId> ids,
                                   ReturnStrategy strategy, std::span<const std::string> keywords,
                                   const std::set<SnodeId>& entities) {
    std::vector<RenderedResult> out;
    std::set<InodeId> anchors;
    for (InodeId id : ids) {
        auto r = render_node(b, id, strategy, keywords, entities);
        if (anchors.insert(r.anchor).second) out.push_back(std::move(r));
    }
    return out;
}

std::vector<RenderedResult> render(const IndexBundle& b, const QueryResultSet& qrs,
                                   ReturnStrategy strategy, const std::set<SnodeId>& entities) {
    std::vector<RenderedResult> out;
    std::set<InodeId> anchors;
    for (const auto& g : qrs.groups)
        for (auto& r : render(b, g.results, strategy, qrs.keywords, entities))
            if (anchors.insert(r.anchor).second) out.push_back(std::move(r));
    return out;
}

}  // namespace xkws
