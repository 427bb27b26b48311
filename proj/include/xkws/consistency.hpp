#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "xkws/bundle.hpp"
#include "xkws/xml_store.hpp"

namespace xkws {

/// Incoming label path of a query result root plus the query keywords hanging off it.
/// The result node is always the last label.
struct ResultStructure {
    LabelPath incoming_label_path;
    /// Sorted, unique.
    std::vector<std::string> keywords;

    bool operator==(const ResultStructure&) const = default;
};

ResultStructure make_structure(LabelPath lp, std::vector<std::string> keywords);

/// a ≺ b: a's incoming label path is a proper prefix of b's.
bool structurally_contains(const ResultStructure& a, const ResultStructure& b);
bool structurally_equivalent(const ResultStructure& a, const ResultStructure& b);

/// Structures not properly contained in any other, one per equivalence class,
/// ordered by label path.
std::vector<ResultStructure> smallest_result_structures(std::span<const ResultStructure> qrs);

struct ResultGroup {
    ResultStructure structure;
    /// Marked schema node; unset for groups built by the instance-level resolver.
    std::optional<SnodeId> snode;
    std::string xpath;
    std::vector<InodeId> results;
    /// Set when feedback lifted this group above another live group.
    bool contains_other_group = false;
};

struct QueryResultSet {
    std::vector<std::string> keywords;
    std::vector<ResultGroup> groups;

    std::vector<InodeId> all_results() const;
    /// Label path -> result ids; the comparison form used across resolvers.
    std::map<LabelPath, std::vector<InodeId>> by_structure() const;
    const ResultGroup* find_group(SnodeId snode) const;
};

/// Normalizes and deduplicates query keywords, keeping input order. Throws ContractError when empty.
std::vector<std::string> canonical_keywords(std::span<const std::string> keywords,
                                            const TokenizerConfig& cfg);

/// Instance-level SLCAs, each as a node path.
std::vector<std::vector<InodeId>> instance_slca(const InstanceTree& tree,
                                                std::span<const std::string> keywords);

/// Instance SLCAs, filtered down to those whose structure is a smallest result structure.
QueryResultSet resolve_naive(const InstanceTree& tree, std::span<const std::string> keywords);

/// Ancestor of `id` that sits k levels higher. Throws OutOfRange when k > depth(id).
SnodeId kth_ancestor(const DataGuidePlus& g, SnodeId id, std::uint32_t k);

/// Schema-level SLCAs as snode ids, ascending.
std::vector<SnodeId> schema_slca(const IndexBundle& b, std::span<const std::string> keywords);

enum class ProcessingOrder { Ascending, Descending };

struct ResolveOptions {
    /// Schema nodes the user rejected; a position here generalizes even with results.
    std::set<SnodeId> feedback;
    ProcessingOrder order = ProcessingOrder::Ascending;
};

struct GeneralizationState {
    std::vector<std::string> keywords;
    std::set<SnodeId> unmarked;
    std::set<SnodeId> marked;
    std::set<SnodeId> feedback;
    QueryResultSet results;
};

/// Resolution over the DataGuide+: schema SLCAs, joint twig evaluation, then
/// generalization of empty or rejected positions toward the root.
GeneralizationState resolve_schema_level_state(const IndexBundle& b,
                                               std::span<const std::string> keywords,
                                               const ResolveOptions& opts = {});

QueryResultSet resolve_schema_level(const IndexBundle& b, std::span<const std::string> keywords,
                                    const ResolveOptions& opts = {});

struct FeedbackOutcome {
    QueryResultSet results;
    /// False when the group was already at the root; results are then unchanged.
    bool generalized = false;
};

/// Rejects one marked group and re-resolves. Throws NotFound for an unknown group.
FeedbackOutcome apply_feedback(const IndexBundle& b, GeneralizationState& state, SnodeId group);

}  // namespace xkws
