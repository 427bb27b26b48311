#include "xkws/eval_harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "xkws/consistency.hpp"
#include "xkws/error.hpp"

namespace xkws {

Metrics precision_recall(std::span<const InodeId> retrieved, std::span<const InodeId> relevant) {
    std::set<InodeId> a(retrieved.begin(), retrieved.end());
    std::set<InodeId> r(relevant.begin(), relevant.end());
    Metrics m;
    m.retrieved_count = a.size();
    m.relevant_count = r.size();
    for (InodeId id : a) m.hit_count += r.count(id);
    if (a.empty()) {
        m.degenerate = true;
        m.precision = 1.0;
        m.recall = r.empty() ? 1.0 : 0.0;
        return m;
    }
    m.precision = static_cast<double>(m.hit_count) / static_cast<double>(a.size());
    m.recall = r.empty() ? 1.0 : static_cast<double>(m.hit_count) / static_cast<double>(r.size());
    return m;
}

namespace {

struct Step {
    bool descendant = false;
    std::string name;  // "*" matches any element
    std::vector<std::string> contains;
};

class XPathParser {
public:
    explicit XPathParser(std::string_view s) : s_(s) {}

    std::vector<std::vector<Step>> parse() {
        std::vector<std::vector<Step>> paths;
        while (true) {
            paths.push_back(path());
            skip_ws();
            if (at_end()) break;
            expect('|');
        }
        return paths;
    }

private:
    std::vector<Step> path() {
        std::vector<Step> steps;
        skip_ws();
        if (peek() != '/') fail("location path must start with '/'");
        while (peek() == '/') {
            Step st;
            ++i_;
            if (peek() == '/') {
                st.descendant = true;
                ++i_;
            }
            st.name = name();
            skip_ws();
            while (peek() == '[') {
                ++i_;
                skip_ws();
                if (peek() == '"' || peek() == '\'') {
                    st.contains.push_back(literal());
                } else {
                    auto fn = name();
                    if (fn != "contains") fail("unsupported predicate " + fn);
                    skip_ws();
                    expect('(');
                    skip_ws();
                    expect('.');
                    skip_ws();
                    expect(',');
                    skip_ws();
                    st.contains.push_back(literal());
                    skip_ws();
                    expect(')');
                }
                skip_ws();
                expect(']');
                skip_ws();
            }
            steps.push_back(std::move(st));
        }
        return steps;
    }

    std::string name() {
        if (peek() == '*') {
            ++i_;
            return "*";
        }
        auto start = i_;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_' ||
                             s_[i_] == '-' || s_[i_] == '.' || s_[i_] == '@' || s_[i_] == ':'))
            ++i_;
        if (start == i_) fail("expected a name");
        return std::string(s_.substr(start, i_ - start));
    }

    std::string literal() {
        char q = peek();
        if (q != '"' && q != '\'') fail("expected a string literal");
        auto end = s_.find(q, i_ + 1);
        if (end == std::string_view::npos) fail("unterminated string literal");
        std::string out(s_.substr(i_ + 1, end - i_ - 1));
        i_ = end + 1;
        return out;
    }

    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool at_end() const { return i_ >= s_.size(); }
    char peek() const { return at_end() ? '\0' : s_[i_]; }
    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++i_;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("xpath: " + msg, i_);
    }

    std::string_view s_;
    std::size_t i_ = 0;
};

bool subtree_contains(const InstanceTree& tree, InodeId id, const std::string& raw) {
    auto words = tokenize(raw, tree.config());
    if (words.empty()) return false;
    auto last = tree.node(id).last_descendant;
    for (const auto& w : words) {
        auto occ = tree.occurrences(w);
        auto it = std::lower_bound(occ.begin(), occ.end(), id);
        if (it == occ.end() || *it > last) return false;
    }
    return true;
}

}  // namespace

std::vector<InodeId> evaluate_xpath(const InstanceTree& tree, std::string_view expr) {
    auto paths = XPathParser(expr).parse();
    std::set<InodeId> out;
    if (tree.empty()) return {};
    for (const auto& steps : paths) {
        // The document node is represented by nullopt.
        std::vector<std::optional<InodeId>> ctx{std::nullopt};
        for (const auto& st : steps) {
            std::set<InodeId> next;
            auto consider = [&](InodeId c) {
                const auto& n = tree.node(c);
                if (st.name != "*" && n.label != st.name) return;
                if (st.name == "*" && n.kind != NodeKind::Element) return;
                for (const auto& w : st.contains)
                    if (!subtree_contains(tree, c, w)) return;
                next.insert(c);
            };
            for (const auto& c : ctx) {
                if (!c) {
                    if (st.descendant)
                        for (const auto& n : tree.nodes()) consider(n.id);
                    else
                        consider(tree.root());
                    continue;
                }
                if (st.descendant) {
                    for (InodeId d = *c + 1; d <= tree.node(*c).last_descendant; ++d) consider(d);
                } else {
                    for (InodeId ch : tree.node(*c).children) consider(ch);
                }
            }
            ctx.assign(next.begin(), next.end());
        }
        for (const auto& c : ctx)
            if (c) out.insert(*c);
    }
    return {out.begin(), out.end()};
}

std::vector<QuerySpec> parse_suite(std::string_view json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("suite: ") + e.what(), e.byte);
    }
    if (!j.is_array()) throw ContractError("suite must be a JSON array of query specs");
    std::vector<QuerySpec> out;
    std::set<std::string> ids;
    for (const auto& e : j) {
        QuerySpec q;
        q.id = e.at("id").get<std::string>();
        if (!ids.insert(q.id).second) throw ContractError("duplicate query id " + q.id);
        const auto& kw = e.at("keywords");
        if (kw.is_string()) {
            std::istringstream in(kw.get<std::string>());
            for (std::string w; in >> w;) q.keywords.push_back(w);
        } else {
            q.keywords = kw.get<std::vector<std::string>>();
        }
        if (e.contains("relevant")) q.relevant = e["relevant"].get<std::vector<InodeId>>();
        if (e.contains("reference_xpath")) q.reference_xpath = e["reference_xpath"].get<std::string>();
        if (e.contains("feedback_rounds")) q.feedback_rounds = e["feedback_rounds"].get<int>();
        out.push_back(std::move(q));
    }
    return out;
}

std::vector<QuerySpec> load_suite(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw NotFound("cannot open suite " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_suite(ss.str());
}

std::string_view to_string(Method m) { return m == Method::Slca ? "slca" : "sc"; }

std::optional<Method> parse_method(std::string_view name) {
    if (name == "sc") return Method::SchemaConsistent;
    if (name == "slca") return Method::Slca;
    return std::nullopt;
}

std::vector<InodeId> retrieve(const IndexBundle& b, const QuerySpec& spec, Method m) {
    if (m == Method::Slca) {
        std::vector<InodeId> out;
        for (const auto& p : instance_slca(b.tree, spec.keywords)) out.push_back(p.back());
        return out;
    }
    auto state = resolve_schema_level_state(b, spec.keywords);
    for (int round = 0; round < spec.feedback_rounds; ++round) {
        std::vector<SnodeId> groups(state.marked.begin(), state.marked.end());
        for (SnodeId g : groups)
            if (state.marked.count(g)) apply_feedback(b, state, g);
    }
    return state.results.all_results();
}

namespace {

std::vector<InodeId> expand(const IndexBundle& b, std::span<const InodeId> roots, ReturnStrategy s,
                            std::span<const std::string> keywords, const std::set<SnodeId>& entities) {
    std::set<InodeId> nodes;
    for (const auto& r : render(b, roots, s, keywords, entities))
        nodes.insert(r.node_ids.begin(), r.node_ids.end());
    return {nodes.begin(), nodes.end()};
}

}  // namespace

Report run_suite(const IndexBundle& b, std::vector<QuerySpec> specs, const SuiteOptions& opts) {
    if (!opts.only.empty()) {
        std::vector<QuerySpec> picked;
        for (const auto& id : opts.only) {
            auto it = std::find_if(specs.begin(), specs.end(), [&](const QuerySpec& q) { return q.id == id; });
            if (it == specs.end()) throw NotFound("unknown query id " + id);
            picked.push_back(*it);
        }
        specs = std::move(picked);
    }
    auto entities = infer_entities(b.dataguide, b.tree);
    Report report;
    for (auto& spec : specs) {
        if (spec.relevant.empty() && !spec.reference_xpath.empty())
            spec.relevant = evaluate_xpath(b.tree, spec.reference_xpath);
        auto keywords = canonical_keywords(spec.keywords, b.tree.config());
        for (Method m : opts.methods) {
            std::vector<InodeId> retrieved;
            double total_ms = 0.0;
            int reps = std::max(1, opts.repetitions);
            for (int i = 0; i < reps; ++i) {
                auto t0 = std::chrono::steady_clock::now();
                retrieved = retrieve(b, spec, m);
                auto t1 = std::chrono::steady_clock::now();
                total_ms += std::chrono::duration<double, std::milli>(t1 - t0).count();
            }
            for (ReturnStrategy s : opts.strategies) {
                auto a = expand(b, retrieved, s, keywords, entities);
                auto r = expand(b, spec.relevant, s, keywords, entities);
                ReportRow row{spec.id, m, s, precision_recall(a, r)};
                row.metrics.elapsed_ms = total_ms / reps;
                report.rows.push_back(std::move(row));
            }
        }
    }
    return report;
}

const ReportRow* Report::find(std::string_view query, Method m, ReturnStrategy s) const {
    for (const auto& r : rows)
        if (r.query == query && r.method == m && r.strategy == s) return &r;
    return nullptr;
}

std::string Report::to_csv(bool with_timing) const {
    std::ostringstream out;
    out << "query,method,strategy,precision,recall,ms\n";
    out << std::fixed;
    for (const auto& r : rows) {
        out << r.query << ',' << to_string(r.method) << ',' << to_string(r.strategy) << ','
            << std::setprecision(6) << r.metrics.precision << ',' << r.metrics.recall << ',';
        if (with_timing) out << std::setprecision(3) << r.metrics.elapsed_ms;
        out << '\n';
    }
    return out.str();
}

std::string Report::to_json(bool with_timing) const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json row{{"query", r.query},
                           {"method", to_string(r.method)},
                           {"strategy", to_string(r.strategy)},
                           {"precision", r.metrics.precision},
                           {"recall", r.metrics.recall},
                           {"retrieved_nodes", r.metrics.retrieved_count},
                           {"relevant_nodes", r.metrics.relevant_count},
                           {"degenerate", r.metrics.degenerate}};
        if (with_timing) row["ms"] = r.metrics.elapsed_ms;
        arr.push_back(std::move(row));
    }
    return arr.dump(2);
}

}  // namespace xkws
