// xkws: index XML, run keyword queries, evaluate suites, serve the JSON API.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "xkws/bundle.hpp"
#include "xkws/consistency.hpp"
#include "xkws/error.hpp"
#include "xkws/eval_harness.hpp"
#include "xkws/output_gen.hpp"
#include "xkws/service.hpp"
#include "xkws/synth.hpp"

using namespace xkws;
using nlohmann::json;

namespace {

IndexBundle open_bundle(const std::string& path, const TokenizerConfig& cfg = {}) {
    std::filesystem::path p(path);
    if (p.extension() == ".xml") return build_bundle(parse_file(p, cfg));
    return load_bundle(p);
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

int cmd_index(const std::string& input, const std::string& output, const TokenizerConfig& cfg) {
    auto b = build_bundle(parse_file(input, cfg));
    save_bundle(b, output);
    std::cout << "nodes " << b.tree.size() << "\n"
              << "schema_nodes " << b.dataguide.size() << "\n"
              << "keywords " << b.instance_index.term_count() << "\n";
    return 0;
}

int cmd_query(const std::string& bundle_path, const std::vector<std::string>& words,
              const std::string& method_name, const std::string& strategy_name, bool as_json) {
    auto method = parse_method(method_name);
    if (!method) throw ContractError("unknown method " + method_name);
    auto strategy = parse_strategy(strategy_name);
    if (!strategy) throw ContractError("unknown strategy " + strategy_name);
    std::vector<std::string> raw;
    for (const auto& w : words) {
        auto split = split_query(w, TokenizerConfig{true, true});
        raw.insert(raw.end(), split.begin(), split.end());
    }
    auto b = open_bundle(bundle_path);
    auto keywords = canonical_keywords(raw, b.tree.config());
    auto entities = infer_entities(b.dataguide, b.tree);

    QueryResultSet qrs;
    qrs.keywords = keywords;
    if (*method == Method::Slca) {
        ResultGroup g;
        for (const auto& p : instance_slca(b.tree, keywords)) g.results.push_back(p.back());
        qrs.groups.push_back(std::move(g));
    } else {
        qrs = resolve_schema_level(b, keywords);
    }

    if (as_json) {
        json groups = json::array();
        for (const auto& g : qrs.groups) {
            json results = json::array();
            for (auto& r : render(b, g.results, *strategy, keywords, entities))
                results.push_back({{"id", r.result}, {"anchor", r.anchor}, {"node_count", r.node_count},
                                   {"label_path", b.tree.label_path(r.result).str()},
                                   {"rendered", r.text(b.tree)}});
            json jg{{"results", std::move(results)}};
            if (g.snode) {
                jg["group_id"] = *g.snode;
                jg["structure"] = {{"label_path", g.structure.incoming_label_path.str()}, {"xpath", g.xpath}};
            }
            groups.push_back(std::move(jg));
        }
        std::cout << json{{"method", to_string(*method)}, {"keywords", keywords}, {"groups", groups}}.dump(2)
                  << "\n";
        return 0;
    }
    for (const auto& g : qrs.groups) {
        if (g.snode)
            std::cout << "group " << *g.snode << "  " << g.structure.incoming_label_path.str() << "  "
                      << g.xpath << "\n";
        for (auto& r : render(b, g.results, *strategy, keywords, entities)) {
            std::cout << "  " << b.tree.node(r.result).label << "(" << r.result << ")";
            if (r.anchor != r.result) std::cout << " -> " << b.tree.node(r.anchor).label << "(" << r.anchor << ")";
            std::cout << "\n";
            std::istringstream lines(r.text(b.tree));
            for (std::string line; std::getline(lines, line);) std::cout << "    " << line << "\n";
        }
    }
    return 0;
}

int cmd_eval(const std::string& bundle_path, const std::string& suite_path,
             const std::vector<std::string>& strategy_names, const std::vector<std::string>& only,
             int repetitions, const std::string& csv_path, const std::string& json_path, bool timing) {
    SuiteOptions opts;
    opts.repetitions = repetitions;
    opts.only = only;
    opts.strategies.clear();
    for (const auto& n : strategy_names) {
        auto s = parse_strategy(n);
        if (!s) throw ContractError("unknown strategy " + n);
        opts.strategies.push_back(*s);
    }
    auto b = open_bundle(bundle_path);
    auto report = run_suite(b, load_suite(suite_path), opts);
    if (!csv_path.empty()) write_file(csv_path, report.to_csv(timing));
    if (!json_path.empty()) write_file(json_path, report.to_json(timing));
    if (csv_path.empty() && json_path.empty()) std::cout << report.to_csv(timing);
    return 0;
}

int cmd_serve(const std::string& bundle_path, const std::string& host, int port) {
    auto bundle = std::make_shared<const IndexBundle>(open_bundle(bundle_path));
    Service service(bundle);
    HttpServer server(service);
    std::cerr << "serving " << bundle_path << " on " << host << ":" << port << "\n";
    return server.run(host, port) ? 0 : 1;
}

int cmd_synth(const std::string& output, std::uint64_t seed, std::size_t nodes,
              const std::string& suite_path) {
    auto c = nodes ? generate_scaled(seed, nodes) : generate_dblp_like(seed);
    write_file(output, c.xml);
    if (!suite_path.empty()) {
        json arr = json::array();
        for (const auto& q : c.specs)
            arr.push_back({{"id", q.id}, {"keywords", q.keywords}, {"reference_xpath", q.reference_xpath}});
        write_file(suite_path, arr.dump(2) + "\n");
    }
    std::cout << "nodes " << c.node_count << "\n";
    return 0;
}

std::string env_or(const char* name, const std::string& fallback) {
    const char* v = std::getenv(name);
    return v && *v ? v : fallback;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Schema-consistent XML keyword search"};
    app.require_subcommand(1);

    TokenizerConfig cfg;
    std::string input, output;
    auto* index = app.add_subcommand("index", "Parse XML and write a .tsix bundle");
    index->add_option("input", input, "XML document")->required();
    index->add_option("output", output, "Bundle path")->required();
    index->add_flag("--case-sensitive", cfg.case_sensitive, "Keep keyword case");
    bool no_labels = false;
    index->add_flag("--no-label-keywords", no_labels, "Do not index element and attribute names");

    std::string bundle_path, method = "sc", strategy = "subtree";
    std::vector<std::string> words;
    bool as_json = false;
    auto* query = app.add_subcommand("query", "Run a keyword query");
    query->add_option("bundle", bundle_path, "Bundle (.tsix) or XML document")->required();
    query->add_option("keywords", words, "Query keywords")->required();
    query->add_option("--method", method, "sc or slca")->check(CLI::IsMember({"sc", "slca"}));
    query->add_option("--strategy", strategy, "subtree, path, subtree-entity, path-entity");
    query->add_flag("--json", as_json, "Machine-readable output");

    std::string suite_path, csv_path, json_path;
    std::vector<std::string> strategies{"subtree"}, only;
    int repetitions = 1;
    bool no_timing = false;
    auto* eval = app.add_subcommand("eval", "Precision/recall of sc vs slca over a query suite");
    eval->add_option("bundle", bundle_path, "Bundle (.tsix) or XML document")->required();
    eval->add_option("suite", suite_path, "Suite JSON")->required();
    eval->add_option("--strategy", strategies, "Return strategies")->capture_default_str();
    eval->add_option("--only", only, "Query ids to run");
    eval->add_option("--repetitions", repetitions, "Timed runs per query")->check(CLI::PositiveNumber);
    eval->add_option("--csv", csv_path, "Write CSV report");
    eval->add_option("--json", json_path, "Write JSON report");
    eval->add_flag("--no-timing", no_timing, "Leave the ms column empty");

    std::string host = "127.0.0.1";
    int port = 0;
    auto* serve = app.add_subcommand("serve", "Serve the JSON API");
    serve->add_option("bundle", bundle_path, "Bundle (.tsix) or XML document; default $XKWS_BUNDLE");
    serve->add_option("--port", port, "Port; default $XKWS_PORT or 8080");
    serve->add_option("--host", host, "Listen address");

    std::uint64_t seed = 1;
    std::size_t nodes = 0;
    auto* synth = app.add_subcommand("synth", "Write a synthetic bibliography");
    synth->add_option("output", output, "XML path")->required();
    synth->add_option("--seed", seed, "Generator seed");
    synth->add_option("--nodes", nodes, "Target size; omitted means the planted 20-query corpus");
    synth->add_option("--suite", suite_path, "Write the planted query suite");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*index) {
            cfg.index_labels = !no_labels;
            return cmd_index(input, output, cfg);
        }
        if (*query) return cmd_query(bundle_path, words, method, strategy, as_json);
        if (*eval) return cmd_eval(bundle_path, suite_path, strategies, only, repetitions, csv_path, json_path, !no_timing);
        if (*serve) {
            if (bundle_path.empty()) bundle_path = env_or("XKWS_BUNDLE", "");
            if (bundle_path.empty()) throw ContractError("no bundle given and XKWS_BUNDLE is unset");
            if (port == 0) port = std::stoi(env_or("XKWS_PORT", "8080"));
            return cmd_serve(bundle_path, host, port);
        }
        if (*synth) return cmd_synth(output, seed, nodes, suite_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
