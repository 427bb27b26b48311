#pragma once

#include <chrono>
#include <functional>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <string_view>
#include <thread>

#include "xkws/bundle.hpp"
#include "xkws/consistency.hpp"
#include "xkws/output_gen.hpp"

namespace httplib {
class Server;
}

namespace xkws {

using Clock = std::chrono::steady_clock;

struct ServiceOptions {
    std::size_t max_sessions = 256;
    std::chrono::seconds idle_timeout{15 * 60};
    ReturnStrategy default_strategy = ReturnStrategy::Subtree;
    /// Injected for tests; defaults to Clock::now.
    std::function<Clock::time_point()> now;
};

struct Session {
    std::string id;
    GeneralizationState state;
    ReturnStrategy strategy = ReturnStrategy::Subtree;
    Clock::time_point created;
    Clock::time_point last_used;
    std::mutex mu;
};

struct Response {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

/// JSON API over one immutable bundle. `handle` is the whole router; the HTTP server
/// only forwards to it.
class Service {
public:
    explicit Service(std::shared_ptr<const IndexBundle> bundle, ServiceOptions opts = {});

    Response handle(std::string_view method, std::string_view target, std::string_view body);

    std::size_t session_count() const;
    const IndexBundle& bundle() const noexcept { return *bundle_; }

private:
    Response query(std::string_view body);
    Response feedback(std::string_view body);
    Response node(std::string_view id, const std::map<std::string, std::string>& params);
    Response schema() const;

    std::shared_ptr<Session> create_session(GeneralizationState state, ReturnStrategy strategy);
    /// Null when the session is unknown or idle past the timeout (it is dropped then).
    std::shared_ptr<Session> find_session(const std::string& id);
    std::string groups_json(const Session& s) const;
    Clock::time_point now() const;

    std::shared_ptr<const IndexBundle> bundle_;
    ServiceOptions opts_;
    std::set<SnodeId> entities_;

    mutable std::mutex mu_;
    std::list<std::shared_ptr<Session>> lru_;  // most recent first
    std::map<std::string, std::list<std::shared_ptr<Session>>::iterator> sessions_;
    std::uint64_t counter_ = 0;
    std::uint64_t salt_;
};

/// httplib transport around a Service.
class HttpServer {
public:
    explicit HttpServer(Service& service);
    ~HttpServer();

    /// Binds and serves on a background thread; port 0 picks a free port. Returns the port.
    int start(const std::string& host, int port);
    /// Binds and serves on the calling thread until stop().
    bool run(const std::string& host, int port);
    void stop();

private:
    void install_routes();

    Service& service_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
};

}  // namespace xkws
