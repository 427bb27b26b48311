#include "xkws/xpath_exec.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

#include "xkws/error.hpp"

namespace xkws {

namespace {

bool same_word(const std::string& a, const std::string& b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](unsigned char x, unsigned char y) {
        return std::tolower(x) == std::tolower(y);
    });
}

std::string quote(const std::string& w) {
    std::string out = "\"";
    for (char c : w) {
        if (c == '"') out += "&quot;";
        else out += c;
    }
    return out + "\"";
}

}  // namespace

std::vector<XPathQuery> translate(const std::vector<SnodeId>& snodes,
                                  const std::vector<std::string>& keywords, const DataGuidePlus& g) {
    std::vector<XPathQuery> out;
    out.reserve(snodes.size());
    for (SnodeId s : snodes) {
        const LabelPath& lp = g.lookup_label_path(s);
        XPathQuery q;
        for (const auto& l : lp.labels) q.query_string += "/" + l;
        for (const auto& w : keywords) {
            if (same_word(w, lp.last())) continue;
            q.query_string += "[contains(., " + quote(w) + ")]";
        }
        q.branching_depth = static_cast<std::uint32_t>(lp.size());
        q.label_path_id = s;
        q.keywords = keywords;
        q.source_snode = s;
        out.push_back(std::move(q));
    }
    return out;
}

const InstancePosting* find_matching_posting(const InstanceIndex::List& list, InodeId k,
                                             std::uint32_t d) {
    if (d == 0) return nullptr;
    const InstancePosting* p = list.seek_ge(k);
    if (p && p->node_path.size() >= d && p->node_path[d - 1] == k) return p;
    return nullptr;
}

std::vector<std::vector<InodeId>> evaluate_queries(const std::vector<XPathQuery>& queries,
                                                   const InstanceIndex& idx) {
    std::vector<std::vector<InodeId>> results(queries.size());
    if (queries.empty()) return results;
    const auto& keywords = queries.front().keywords;
    if (keywords.empty()) throw ContractError("queries carry no keywords");
    for (const auto& q : queries)
        if (q.keywords != keywords) throw ContractError("queries do not share one keyword set");

    std::vector<const InstanceIndex::List*> lists;
    for (const auto& w : keywords) {
        const auto& l = idx.list(w);
        if (l.empty()) return results;
        lists.push_back(&l);
    }
    auto outer = std::min_element(lists.begin(), lists.end(),
                                  [](auto* a, auto* b) { return a->size() < b->size(); });
    const auto& l1 = **outer;

    std::unordered_map<SnodeId, std::vector<std::size_t>> by_branch;
    for (std::size_t i = 0; i < queries.size(); ++i) by_branch[queries[i].label_path_id].push_back(i);

    for (const auto& o : l1.postings()) {
        for (std::size_t depth = 0; depth < o.numeric_label_path.size(); ++depth) {
            auto it = by_branch.find(o.numeric_label_path[depth]);
            if (it == by_branch.end()) continue;
            for (std::size_t qi : it->second) {
                const auto& q = queries[qi];
                if (q.branching_depth != depth + 1) continue;
                InodeId k = o.node_path[depth];
                if (!results[qi].empty() && results[qi].back() == k) continue;
                bool ok = true;
                for (const auto* l : lists) {
                    if (l == *outer) continue;
                    if (!find_matching_posting(*l, k, q.branching_depth)) {
                        ok = false;
                        break;
                    }
                }
                if (ok) results[qi].push_back(k);
            }
        }
    }
    for (auto& r : results) {
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
    }
    return results;
}

}  // namespace xkws
