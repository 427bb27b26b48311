#include "xkws/consistency.hpp"

#include <algorithm>

#include "xkws/error.hpp"
#include "xkws/slca.hpp"
#include "xkws/xpath_exec.hpp"

namespace xkws {

ResultStructure make_structure(LabelPath lp, std::vector<std::string> keywords) {
    if (lp.labels.empty()) throw ContractError("result structure needs a non-empty label path");
    std::sort(keywords.begin(), keywords.end());
    keywords.erase(std::unique(keywords.begin(), keywords.end()), keywords.end());
    return {std::move(lp), std::move(keywords)};
}

namespace {

void require_same_keywords(const ResultStructure& a, const ResultStructure& b) {
    if (a.keywords != b.keywords)
        throw ContractError("result structures are over different keyword sets");
}

}  // namespace

bool structurally_contains(const ResultStructure& a, const ResultStructure& b) {
    require_same_keywords(a, b);
    return a.incoming_label_path.is_proper_prefix_of(b.incoming_label_path);
}

bool structurally_equivalent(const ResultStructure& a, const ResultStructure& b) {
    require_same_keywords(a, b);
    return a.incoming_label_path == b.incoming_label_path;
}

std::vector<ResultStructure> smallest_result_structures(std::span<const ResultStructure> qrs) {
    std::vector<ResultStructure> out;
    for (const auto& a : qrs) {
        bool contained = std::any_of(qrs.begin(), qrs.end(), [&](const ResultStructure& b) {
            return structurally_contains(a, b);
        });
        if (contained) continue;
        bool seen = std::any_of(out.begin(), out.end(), [&](const ResultStructure& b) {
            return structurally_equivalent(a, b);
        });
        if (!seen) out.push_back(a);
    }
    std::sort(out.begin(), out.end(), [](const ResultStructure& a, const ResultStructure& b) {
        return a.incoming_label_path < b.incoming_label_path;
    });
    return out;
}

std::vector<InodeId> QueryResultSet::all_results() const {
    std::vector<InodeId> out;
    for (const auto& g : groups) out.insert(out.end(), g.results.begin(), g.results.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::map<LabelPath, std::vector<InodeId>> QueryResultSet::by_structure() const {
    std::map<LabelPath, std::vector<InodeId>> out;
    for (const auto& g : groups) {
        auto& ids = out[g.structure.incoming_label_path];
        ids.insert(ids.end(), g.results.begin(), g.results.end());
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    }
    return out;
}

const ResultGroup* QueryResultSet::find_group(SnodeId snode) const {
    for (const auto& g : groups)
        if (g.snode == snode) return &g;
    return nullptr;
}

std::vector<std::string> canonical_keywords(std::span<const std::string> keywords,
                                            const TokenizerConfig& cfg) {
    std::vector<std::string> out;
    for (const auto& k : keywords) {
        auto b = k.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) continue;
        auto n = normalize_keyword(std::string_view(k).substr(b, k.find_last_not_of(" \t\r\n") - b + 1), cfg);
        if (!n.empty() && std::find(out.begin(), out.end(), n) == out.end()) out.push_back(std::move(n));
    }
    if (out.empty()) throw ContractError("query has no keywords");
    return out;
}

std::vector<std::vector<InodeId>> instance_slca(const InstanceTree& tree,
                                                std::span<const std::string> keywords) {
    auto kws = canonical_keywords(keywords, tree.config());
    std::vector<std::vector<Path>> lists;
    for (const auto& k : kws) {
        std::vector<Path> paths;
        for (InodeId id : tree.occurrences(k)) paths.push_back(tree.node_path(id).ids);
        lists.push_back(std::move(paths));
    }
    return get_slca(lists);
}

QueryResultSet resolve_naive(const InstanceTree& tree, std::span<const std::string> keywords) {
    QueryResultSet out;
    out.keywords = canonical_keywords(keywords, tree.config());
    auto slcas = instance_slca(tree, out.keywords);

    std::vector<ResultStructure> structures;
    structures.reserve(slcas.size());
    for (const auto& p : slcas) structures.push_back(make_structure(tree.label_path(p.back()), out.keywords));
    auto srs = smallest_result_structures(structures);

    for (const auto& s : srs) {
        ResultGroup g;
        g.structure = s;
        for (std::size_t i = 0; i < slcas.size(); ++i)
            if (structurally_equivalent(structures[i], s)) g.results.push_back(slcas[i].back());
        out.groups.push_back(std::move(g));
    }
    return out;
}

SnodeId kth_ancestor(const DataGuidePlus& g, SnodeId id, std::uint32_t k) {
    auto depth = g.depth(id);
    if (k > depth)
        throw OutOfRange("k=" + std::to_string(k) + " exceeds depth " + std::to_string(depth));
    return g.numeric_label_path(id)[depth - k];
}

std::vector<SnodeId> schema_slca(const IndexBundle& b, std::span<const std::string> keywords) {
    auto kws = canonical_keywords(keywords, b.tree.config());
    std::vector<const SchemaIndex::List*> lists;
    for (const auto& k : kws) lists.push_back(&b.schema_index.list(k));
    std::vector<SnodeId> out;
    for (const auto& p : get_slca<SchemaIndex::List>(lists)) out.push_back(p.back());
    return out;
}

namespace {

struct Position {
    bool marked = false;
    bool from_feedback = false;
    std::vector<InodeId> results;
};

void evaluate_batch(const IndexBundle& b, const std::vector<std::string>& kws,
                    const std::vector<SnodeId>& batch, std::map<SnodeId, Position>& live) {
    if (batch.empty()) return;
    auto queries = translate(batch, kws, b.dataguide);
    auto results = evaluate_queries(queries, b.instance_index);
    for (std::size_t i = 0; i < batch.size(); ++i) live[batch[i]].results = std::move(results[i]);
}

bool is_proper_prefix_of_live(const DataGuidePlus& g, SnodeId p,
                              const std::map<SnodeId, Position>& live) {
    // Descendants of p carry ids in (p, last_descendant(p)].
    auto it = live.upper_bound(p);
    return it != live.end() && it->first <= g.node(p).last_descendant;
}

}  // namespace

GeneralizationState resolve_schema_level_state(const IndexBundle& b,
                                               std::span<const std::string> keywords,
                                               const ResolveOptions& opts) {
    const auto& g = b.dataguide;
    GeneralizationState st;
    st.keywords = canonical_keywords(keywords, b.tree.config());
    st.feedback = opts.feedback;

    std::vector<SnodeId> pending = schema_slca(b, st.keywords);
    if (opts.order == ProcessingOrder::Descending) std::reverse(pending.begin(), pending.end());

    std::map<SnodeId, Position> live;
    for (SnodeId s : pending) live[s];
    evaluate_batch(b, st.keywords, pending, live);

    while (!pending.empty()) {
        std::vector<SnodeId> next;
        for (SnodeId s : pending) {
            auto it = live.find(s);
            if (it == live.end() || it->second.marked) continue;
            bool rejected = st.feedback.count(s) != 0;
            if (!it->second.results.empty() && !rejected) {
                it->second.marked = true;
                continue;
            }
            bool from_feedback = it->second.from_feedback || (rejected && !it->second.results.empty());
            live.erase(it);
            auto parent = g.parent(s);
            if (!parent) continue;
            if (live.count(*parent)) continue;
            if (!from_feedback && is_proper_prefix_of_live(g, *parent, live)) continue;
            live[*parent].from_feedback = from_feedback;
            next.push_back(*parent);
        }
        evaluate_batch(b, st.keywords, next, live);
        pending = std::move(next);
    }

    st.results.keywords = st.keywords;
    std::vector<SnodeId> marked;
    for (const auto& [s, pos] : live)
        if (pos.marked) marked.push_back(s);
    auto queries = translate(marked, st.keywords, g);
    for (std::size_t i = 0; i < marked.size(); ++i) {
        SnodeId s = marked[i];
        st.marked.insert(s);
        ResultGroup grp;
        grp.structure = make_structure(g.lookup_label_path(s), st.keywords);
        grp.snode = s;
        grp.xpath = queries[i].query_string;
        grp.results = live[s].results;
        grp.contains_other_group = is_proper_prefix_of_live(g, s, live);
        st.results.groups.push_back(std::move(grp));
    }
    return st;
}

QueryResultSet resolve_schema_level(const IndexBundle& b, std::span<const std::string> keywords,
                                    const ResolveOptions& opts) {
    return resolve_schema_level_state(b, keywords, opts).results;
}

FeedbackOutcome apply_feedback(const IndexBundle& b, GeneralizationState& state, SnodeId group) {
    if (!state.marked.count(group)) throw NotFound("no result group " + std::to_string(group));
    if (!b.dataguide.parent(group)) return {state.results, false};
    ResolveOptions opts;
    opts.feedback = state.feedback;
    opts.feedback.insert(group);
    state = resolve_schema_level_state(b, state.keywords, opts);
    return {state.results, true};
}

}  // namespace xkws
