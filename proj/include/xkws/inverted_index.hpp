#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xkws/dataguide.hpp"
#include "xkws/xml_store.hpp"

namespace xkws {

/// ⟨snode_id, numeric_label_path⟩
struct SchemaPosting {
    SnodeId snode_id = 0;
    std::vector<SnodeId> numeric_label_path;

    std::uint32_t key() const noexcept { return snode_id; }
    std::span<const std::uint32_t> path() const noexcept { return numeric_label_path; }
    bool operator==(const SchemaPosting&) const = default;
};

/// ⟨inode_id, node_path, numeric_label_path⟩
struct InstancePosting {
    InodeId inode_id = 0;
    std::vector<InodeId> node_path;
    std::vector<SnodeId> numeric_label_path;

    std::uint32_t key() const noexcept { return inode_id; }
    std::span<const std::uint32_t> path() const noexcept { return node_path; }
    bool operator==(const InstancePosting&) const = default;
};

/// Postings sorted by key, with a sorted key directory (the subindex) for
/// smallest-key->=k seeks.
template <class Posting>
class PostingList {
public:
    PostingList() = default;
    PostingList(std::string term, std::vector<Posting> postings)
        : term_(std::move(term)), postings_(std::move(postings)) {
        std::sort(postings_.begin(), postings_.end(),
                  [](const Posting& a, const Posting& b) { return a.key() < b.key(); });
        postings_.erase(std::unique(postings_.begin(), postings_.end(),
                                    [](const Posting& a, const Posting& b) {
                                        return a.key() == b.key();
                                    }),
                        postings_.end());
        keys_.reserve(postings_.size());
        for (const auto& p : postings_) keys_.push_back(p.key());
    }

    const std::string& term() const noexcept { return term_; }
    std::span<const Posting> postings() const noexcept { return postings_; }
    std::span<const std::uint32_t> keys() const noexcept { return keys_; }
    std::size_t size() const noexcept { return postings_.size(); }
    bool empty() const noexcept { return postings_.empty(); }
    const Posting& operator[](std::size_t i) const { return postings_[i]; }

    /// Index of the first posting whose key is >= k, or size() when none.
    std::size_t lower_bound(std::uint32_t k) const noexcept {
        return static_cast<std::size_t>(std::lower_bound(keys_.begin(), keys_.end(), k) -
                                        keys_.begin());
    }

    const Posting* seek_ge(std::uint32_t k) const noexcept {
        auto i = lower_bound(k);
        return i < postings_.size() ? &postings_[i] : nullptr;
    }

    bool operator==(const PostingList& o) const {
        return term_ == o.term_ && postings_ == o.postings_;
    }

private:
    std::string term_;
    std::vector<Posting> postings_;
    std::vector<std::uint32_t> keys_;
};

template <class Posting>
std::optional<Posting> seek_ge(const PostingList<Posting>& list, std::uint32_t k) {
    if (const Posting* p = list.seek_ge(k)) return *p;
    return std::nullopt;
}

template <class Posting>
class InvertedIndex {
public:
    using List = PostingList<Posting>;

    InvertedIndex() = default;
    explicit InvertedIndex(std::map<std::string, List> lists) : lists_(std::move(lists)) {}

    /// Posting list for a keyword; an absent keyword yields an empty list.
    const List& list(const std::string& term) const {
        auto it = lists_.find(term);
        return it == lists_.end() ? empty_ : it->second;
    }
    bool has(const std::string& term) const { return lists_.count(term) != 0; }
    const std::map<std::string, List>& lists() const noexcept { return lists_; }
    std::size_t term_count() const noexcept { return lists_.size(); }

    bool operator==(const InvertedIndex& o) const { return lists_ == o.lists_; }

private:
    std::map<std::string, List> lists_;
    List empty_;
};

using SchemaIndex = InvertedIndex<SchemaPosting>;
using InstanceIndex = InvertedIndex<InstancePosting>;

SchemaIndex build_schema_index(const DataGuidePlus& g);
InstanceIndex build_instance_index(const InstanceTree& tree, const DataGuidePlus& g);

}  // namespace xkws
