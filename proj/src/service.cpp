#include "xkws/service.hpp"

#include <httplib.h>
#include <json.hpp>

#include <limits>
#include <random>
#include <sstream>

#include "xkws/error.hpp"

namespace xkws {

using nlohmann::json;

namespace {

Response error(int status, const std::string& msg) {
    return {status, json{{"error", msg}}.dump(), "application/json"};
}

Response ok(const json& j) { return {200, j.dump(), "application/json"}; }

std::map<std::string, std::string> parse_query_string(std::string_view qs) {
    std::map<std::string, std::string> out;
    while (!qs.empty()) {
        auto amp = qs.find('&');
        auto part = qs.substr(0, amp);
        auto eq = part.find('=');
        auto key = httplib::detail::decode_url(std::string(part.substr(0, eq)), true);
        auto val = eq == std::string_view::npos
                       ? std::string{}
                       : httplib::detail::decode_url(std::string(part.substr(eq + 1)), true);
        out[key] = val;
        if (amp == std::string_view::npos) break;
        qs.remove_prefix(amp + 1);
    }
    return out;
}

std::vector<std::string> keywords_from(const json& j) {
    std::vector<std::string> out;
    if (j.is_string()) {
        std::istringstream in(j.get<std::string>());
        for (std::string w; in >> w;) out.push_back(w);
    } else if (j.is_array()) {
        for (const auto& e : j) {
            if (!e.is_string()) throw ContractError("keywords must be strings");
            out.push_back(e.get<std::string>());
        }
    } else {
        throw ContractError("keywords must be a string or an array of strings");
    }
    return out;
}

ReturnStrategy strategy_from(const json& body, ReturnStrategy fallback) {
    if (!body.contains("strategy")) return fallback;
    if (!body["strategy"].is_string()) throw ContractError("strategy must be a string");
    auto s = parse_strategy(body["strategy"].get<std::string>());
    if (!s) throw ContractError("unknown strategy");
    return *s;
}

json parse_body(std::string_view body) {
    auto j = json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw ContractError("request body must be a JSON object");
    return j;
}

}  // namespace

Service::Service(std::shared_ptr<const IndexBundle> bundle, ServiceOptions opts)
    : bundle_(std::move(bundle)), opts_(std::move(opts)) {
    if (!bundle_) throw ContractError("service needs a bundle");
    if (opts_.max_sessions == 0) throw ContractError("max_sessions must be positive");
    entities_ = infer_entities(bundle_->dataguide, bundle_->tree);
    salt_ = std::random_device{}();
    salt_ = (salt_ << 32) ^ std::random_device{}();
}

Clock::time_point Service::now() const { return opts_.now ? opts_.now() : Clock::now(); }

std::size_t Service::session_count() const {
    std::lock_guard lock(mu_);
    return sessions_.size();
}

std::shared_ptr<Session> Service::create_session(GeneralizationState state, ReturnStrategy strategy) {
    auto s = std::make_shared<Session>();
    s->state = std::move(state);
    s->strategy = strategy;
    s->created = s->last_used = now();
    std::lock_guard lock(mu_);
    std::mt19937_64 mix(salt_ ^ ++counter_);
    std::ostringstream id;
    id << std::hex << mix() << mix();
    s->id = id.str();
    lru_.push_front(s);
    sessions_[s->id] = lru_.begin();
    while (sessions_.size() > opts_.max_sessions) {
        sessions_.erase(lru_.back()->id);
        lru_.pop_back();
    }
    return s;
}

std::shared_ptr<Session> Service::find_session(const std::string& id) {
    std::lock_guard lock(mu_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) return nullptr;
    auto s = *it->second;
    auto t = now();
    if (t - s->last_used > opts_.idle_timeout) {
        lru_.erase(it->second);
        sessions_.erase(it);
        return nullptr;
    }
    s->last_used = t;
    lru_.splice(lru_.begin(), lru_, it->second);
    return s;
}

std::string Service::groups_json(const Session& s) const {
    const auto& b = *bundle_;
    json groups = json::array();
    for (const auto& g : s.state.results.groups) {
        json results = json::array();
        for (InodeId id : g.results) {
            auto r = render_node(b, id, s.strategy, s.state.keywords, entities_);
            results.push_back({{"id", id}, {"anchor", r.anchor}, {"node_count", r.node_count},
                               {"rendered", r.text(b.tree)}});
        }
        bool at_root = g.snode && !b.dataguide.parent(*g.snode);
        groups.push_back({{"group_id", g.snode.value_or(0)},
                          {"structure",
                           {{"label_path", g.structure.incoming_label_path.str()}, {"xpath", g.xpath}}},
                          {"results", std::move(results)},
                          {"generalize_enabled", !at_root},
                          {"contains_other_group", g.contains_other_group}});
    }
    json out{{"session_id", s.id},
             {"keywords", s.state.keywords},
             {"strategy", to_string(s.strategy)},
             {"groups", std::move(groups)}};
    return out.dump();
}

Response Service::query(std::string_view body) {
    json j = parse_body(body);
    if (!j.contains("keywords")) throw ContractError("missing keywords");
    auto kws = keywords_from(j["keywords"]);
    auto strategy = strategy_from(j, opts_.default_strategy);
    auto state = resolve_schema_level_state(*bundle_, kws);
    auto s = create_session(std::move(state), strategy);
    std::lock_guard lock(s->mu);
    return {200, groups_json(*s), "application/json"};
}

Response Service::feedback(std::string_view body) {
    json j = parse_body(body);
    if (!j.contains("session_id") || !j["session_id"].is_string())
        throw ContractError("missing session_id");
    if (!j.contains("group_id") || !j["group_id"].is_number_unsigned())
        throw ContractError("missing or invalid group_id");
    auto s = find_session(j["session_id"].get<std::string>());
    if (!s) return error(410, "session expired or unknown");
    std::lock_guard lock(s->mu);
    s->strategy = strategy_from(j, s->strategy);
    auto outcome = apply_feedback(*bundle_, s->state, j["group_id"].get<SnodeId>());
    auto out = json::parse(groups_json(*s));
    out["generalized"] = outcome.generalized;
    return ok(out);
}

Response Service::node(std::string_view id_text, const std::map<std::string, std::string>& params) {
    InodeId id = 0;
    try {
        std::size_t used = 0;
        auto v = std::stoul(std::string(id_text), &used);
        if (used != id_text.size() || v > std::numeric_limits<InodeId>::max()) throw std::invalid_argument("");
        id = static_cast<InodeId>(v);
    } catch (const std::exception&) {
        return error(400, "node id must be a non-negative integer");
    }
    if (!bundle_->tree.contains(id)) return error(404, "no node " + std::to_string(id));

    ReturnStrategy strategy = opts_.default_strategy;
    if (auto it = params.find("strategy"); it != params.end()) {
        auto s = parse_strategy(it->second);
        if (!s) return error(400, "unknown strategy");
        strategy = *s;
    }
    std::vector<std::string> keywords;
    if (auto it = params.find("session_id"); it != params.end()) {
        auto s = find_session(it->second);
        if (!s) return error(410, "session expired or unknown");
        std::lock_guard lock(s->mu);
        keywords = s->state.keywords;
    } else if (auto kt = params.find("keywords"); kt != params.end() && !kt->second.empty()) {
        std::istringstream in(kt->second);
        std::vector<std::string> raw;
        for (std::string w; in >> w;) raw.push_back(w);
        keywords = canonical_keywords(raw, bundle_->tree.config());
    }
    auto r = render_node(*bundle_, id, strategy, keywords, entities_);
    json paths = json::array();
    for (const auto& kp : r.paths) paths.push_back({{"keyword", kp.keyword}, {"ids", kp.ids}});
    return ok({{"id", r.result},
               {"anchor", r.anchor},
               {"strategy", to_string(r.strategy)},
               {"node_count", r.node_count},
               {"node_ids", r.node_ids},
               {"paths", std::move(paths)},
               {"rendered", r.text(bundle_->tree)}});
}

Response Service::schema() const {
    const auto& g = bundle_->dataguide;
    json nodes = json::array();
    for (const auto& s : g.nodes()) {
        json n{{"id", s.id},
               {"label", s.label},
               {"label_path", g.lookup_label_path(s.id).str()},
               {"depth", s.depth},
               {"children", s.children},
               {"keyword_count", s.keywords.size()},
               {"entity", entities_.count(s.id) != 0}};
        n["parent"] = s.parent ? json(*s.parent) : json(nullptr);
        nodes.push_back(std::move(n));
    }
    return ok({{"root", g.root()}, {"nodes", std::move(nodes)}});
}

Response Service::handle(std::string_view method, std::string_view target, std::string_view body) {
    auto q = target.find('?');
    std::string_view path = target.substr(0, q);
    auto params = q == std::string_view::npos ? std::map<std::string, std::string>{}
                                              : parse_query_string(target.substr(q + 1));
    try {
        if (path == "/query") {
            if (method != "POST") return error(405, "use POST");
            return query(body);
        }
        if (path == "/feedback") {
            if (method != "POST") return error(405, "use POST");
            return feedback(body);
        }
        if (path == "/schema") {
            if (method != "GET") return error(405, "use GET");
            return schema();
        }
        constexpr std::string_view node_prefix = "/node/";
        if (path.starts_with(node_prefix)) {
            if (method != "GET") return error(405, "use GET");
            return node(path.substr(node_prefix.size()), params);
        }
        return error(404, "no route " + std::string(path));
    } catch (const NotFound& e) {
        return error(404, e.what());
    } catch (const ContractError& e) {
        return error(400, e.what());
    } catch (const json::exception& e) {
        return error(400, e.what());
    }
}

HttpServer::HttpServer(Service& service) : service_(service), server_(std::make_unique<httplib::Server>()) {
    install_routes();
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::install_routes() {
    auto forward = [this](const httplib::Request& req, httplib::Response& res) {
        std::string target = req.path;
        if (!req.params.empty()) {
            target += '?';
            bool first = true;
            for (const auto& [k, v] : req.params) {
                if (!first) target += '&';
                first = false;
                target += httplib::detail::encode_query_param(k) + "=" +
                          httplib::detail::encode_query_param(v);
            }
        }
        auto r = service_.handle(req.method, target, req.body);
        res.status = r.status;
        res.set_header("Access-Control-Allow-Origin", "*");
        res.set_content(r.body, r.content_type);
    };
    server_->Get(".*", forward);
    server_->Post(".*", forward);
    server_->Options(".*", [](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Origin", "*");
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
        res.status = 204;
    });
}

int HttpServer::start(const std::string& host, int port) {
    int bound = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
    if (bound < 0) throw Error("cannot bind " + host + ":" + std::to_string(port));
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    return bound;
}

bool HttpServer::run(const std::string& host, int port) { return server_->listen(host, port); }

void HttpServer::stop() {
    if (server_) server_->stop();
    if (thread_.joinable()) thread_.join();
}

}  // namespace xkws
