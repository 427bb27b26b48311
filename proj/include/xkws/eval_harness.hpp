#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xkws/bundle.hpp"
#include "xkws/output_gen.hpp"

namespace xkws {

struct QuerySpec {
    std::string id;
    std::vector<std::string> keywords;
    /// Ground-truth result roots. Filled from `reference_xpath` when empty and one is given.
    std::vector<InodeId> relevant;
    std::string reference_xpath;
    /// Generalization clicks applied to every group before measuring (SC only).
    int feedback_rounds = 0;
};

struct Metrics {
    double precision = 0.0;
    double recall = 0.0;
    std::size_t retrieved_count = 0;
    std::size_t relevant_count = 0;
    std::size_t hit_count = 0;
    double elapsed_ms = 0.0;
    /// Retrieved set was empty; precision is reported by convention.
    bool degenerate = false;
};

/// precision = |R ∩ A| / |A|, recall = |R ∩ A| / |R| over node-id sets.
Metrics precision_recall(std::span<const InodeId> retrieved, std::span<const InodeId> relevant);

/// Child/descendant steps, `*`, `[contains(., "w")]` or `["w"]` predicates, and `|` unions.
/// Keyword containment is token matching over the node's subtree.
std::vector<InodeId> evaluate_xpath(const InstanceTree& tree, std::string_view expr);

std::vector<QuerySpec> load_suite(const std::filesystem::path& path);
std::vector<QuerySpec> parse_suite(std::string_view json_text);

enum class Method { SchemaConsistent, Slca };
std::string_view to_string(Method m);
std::optional<Method> parse_method(std::string_view name);

/// Result roots one method returns for a spec.
std::vector<InodeId> retrieve(const IndexBundle& b, const QuerySpec& spec, Method m);

struct ReportRow {
    std::string query;
    Method method = Method::SchemaConsistent;
    ReturnStrategy strategy = ReturnStrategy::Subtree;
    Metrics metrics;
};

struct SuiteOptions {
    std::vector<Method> methods{Method::SchemaConsistent, Method::Slca};
    std::vector<ReturnStrategy> strategies{ReturnStrategy::Subtree};
    int repetitions = 1;
    /// When non-empty, only these query ids run; an unknown id is an error.
    std::vector<std::string> only;
};

struct Report {
    std::vector<ReportRow> rows;

    const ReportRow* find(std::string_view query, Method m, ReturnStrategy s) const;
    std::string to_csv(bool with_timing = true) const;
    std::string to_json(bool with_timing = true) const;
};

Report run_suite(const IndexBundle& b, std::vector<QuerySpec> specs, const SuiteOptions& opts = {});

}  // namespace xkws
