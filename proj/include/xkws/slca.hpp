#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "xkws/error.hpp"
#include "xkws/inverted_index.hpp"

namespace xkws {

/// Root-to-node id sequence; numeric label path at schema level, node path at instance level.
using Path = std::vector<std::uint32_t>;

/// True when `a` is a prefix of `b` (ancestor-or-self).
inline bool is_prefix(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
    return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

inline bool is_proper_prefix(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
    return a.size() < b.size() && is_prefix(a, b);
}

inline std::size_t common_prefix_length(std::span<const std::uint32_t> a,
                                        std::span<const std::uint32_t> b) {
    auto n = std::min(a.size(), b.size());
    std::size_t i = 0;
    while (i < n && a[i] == b[i]) ++i;
    return i;
}

/// Longest common prefix of all paths.
inline Path lca(std::span<const Path> paths) {
    if (paths.empty()) throw ContractError("lca of an empty path set");
    std::size_t len = paths[0].size();
    for (const auto& p : paths.subspan(1)) len = std::min(len, common_prefix_length(paths[0], p));
    return Path(paths[0].begin(), paths[0].begin() + static_cast<std::ptrdiff_t>(len));
}

/// A sorted list of bare paths, keyed by last id. Same shape as PostingList for get_slca.
class PathList {
public:
    struct Item {
        Path p;
        std::uint32_t key() const noexcept { return p.back(); }
        std::span<const std::uint32_t> path() const noexcept { return p; }
    };

    PathList() = default;
    explicit PathList(std::vector<Path> paths) {
        for (auto& p : paths) {
            if (p.empty()) throw ContractError("empty path in path list");
            items_.push_back({std::move(p)});
        }
        std::sort(items_.begin(), items_.end(),
                  [](const Item& a, const Item& b) { return a.key() < b.key(); });
        items_.erase(std::unique(items_.begin(), items_.end(),
                                 [](const Item& a, const Item& b) { return a.key() == b.key(); }),
                     items_.end());
    }

    std::size_t size() const noexcept { return items_.size(); }
    bool empty() const noexcept { return items_.empty(); }
    const Item& operator[](std::size_t i) const { return items_[i]; }
    std::size_t lower_bound(std::uint32_t k) const {
        return static_cast<std::size_t>(
            std::partition_point(items_.begin(), items_.end(),
                                 [k](const Item& it) { return it.key() < k; }) -
            items_.begin());
    }

private:
    std::vector<Item> items_;
};

namespace detail {

/// Drops every path that is a proper prefix of another. Input: sorted by last id, unique.
inline std::vector<Path> keep_smallest(std::vector<Path> sorted) {
    std::vector<Path> out;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i + 1 < sorted.size() && is_proper_prefix(sorted[i], sorted[i + 1])) continue;
        out.push_back(std::move(sorted[i]));
    }
    return out;
}

inline void sort_unique_by_last(std::vector<Path>& v) {
    std::sort(v.begin(), v.end(), [](const Path& a, const Path& b) { return a.back() < b.back(); });
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace detail

/// SLCAs of m sorted lists (Indexed Lookup Eager style). The shortest list drives the
/// scan; every other list is probed by binary search for the neighbours of each node.
/// Results are sorted ascending by last id.
template <class List>
std::vector<Path> get_slca(std::span<const List* const> lists) {
    if (lists.empty()) throw ContractError("get_slca needs at least one list");
    for (const List* l : lists)
        if (l->empty()) return {};
    auto shortest = std::min_element(lists.begin(), lists.end(),
                                     [](const List* a, const List* b) { return a->size() < b->size(); });
    const List& l1 = **shortest;

    std::vector<Path> candidates;
    candidates.reserve(l1.size());
    for (std::size_t a = 0; a < l1.size(); ++a) {
        auto v = l1[a].path();
        std::size_t depth = v.size();
        for (const List* l : lists) {
            if (l == *shortest) continue;
            auto key = l1[a].key();
            auto i = l->lower_bound(key);
            std::size_t best = 0;
            if (i < l->size()) best = common_prefix_length(v, (*l)[i].path());
            if (i > 0) best = std::max(best, common_prefix_length(v, (*l)[i - 1].path()));
            depth = std::min(depth, best);
            if (depth == 0) break;
        }
        if (depth > 0) candidates.emplace_back(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(depth));
    }
    detail::sort_unique_by_last(candidates);
    return detail::keep_smallest(std::move(candidates));
}

template <class List>
std::vector<Path> get_slca(const std::vector<const List*>& lists) {
    return get_slca<List>(std::span<const List* const>(lists));
}

inline std::vector<Path> get_slca(const std::vector<std::vector<Path>>& lists) {
    std::vector<PathList> owned;
    owned.reserve(lists.size());
    for (const auto& l : lists) owned.emplace_back(l);
    std::vector<const PathList*> ptrs;
    for (const auto& l : owned) ptrs.push_back(&l);
    return get_slca<PathList>(ptrs);
}

inline constexpr std::size_t kBruteForceLimit = 1'000'000;

/// SLCAs by enumerating the full cross product of one path per list. Refuses inputs
/// whose cross product exceeds `limit`.
inline std::vector<Path> brute_force_slca(const std::vector<std::vector<Path>>& lists,
                                          std::size_t limit = kBruteForceLimit) {
    if (lists.empty()) throw ContractError("brute_force_slca needs at least one list");
    std::size_t product = 1;
    for (const auto& l : lists) {
        if (l.empty()) return {};
        if (product > limit / l.size()) throw ContractError("cross product exceeds the size guard");
        product *= l.size();
    }
    std::vector<Path> lcas;
    std::vector<std::size_t> pick(lists.size(), 0);
    std::vector<Path> combo(lists.size());
    while (true) {
        for (std::size_t i = 0; i < lists.size(); ++i) combo[i] = lists[i][pick[i]];
        lcas.push_back(lca(combo));
        std::size_t i = 0;
        while (i < lists.size() && ++pick[i] == lists[i].size()) pick[i++] = 0;
        if (i == lists.size()) break;
    }
    std::sort(lcas.begin(), lcas.end());
    lcas.erase(std::unique(lcas.begin(), lcas.end()), lcas.end());
    std::vector<Path> out;
    for (const auto& c : lcas) {
        bool has_descendant = std::any_of(lcas.begin(), lcas.end(),
                                          [&](const Path& o) { return is_proper_prefix(c, o); });
        if (!has_descendant) out.push_back(c);
    }
    std::sort(out.begin(), out.end(), [](const Path& a, const Path& b) { return a.back() < b.back(); });
    return out;
}

/// Paths of every posting in an index list.
template <class Posting>
std::vector<Path> paths_of(const PostingList<Posting>& list) {
    std::vector<Path> out;
    out.reserve(list.size());
    for (const auto& p : list.postings()) out.emplace_back(p.path().begin(), p.path().end());
    return out;
}

}  // namespace xkws
