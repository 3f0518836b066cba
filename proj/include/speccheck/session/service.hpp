#pragma once

#include "speccheck/session/session.hpp"

#include <atomic>
#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace httplib {
class Server;
}

namespace speccheck::session {

struct ServiceOptions {
    Settings defaults;
    std::chrono::seconds idle_ttl = std::chrono::hours(24);
    // Wait for a busy session instead of answering 409.
    bool queue_when_busy = false;
    unsigned accuracy_threads = 0;
};

// Response of one API call: HTTP status plus JSON body.
struct Reply {
    int status = 200;
    Json body;
};

// Sessions and accuracy jobs behind the /v1 API. Transport-independent so
// it can be driven directly in tests.
class Service {
public:
    explicit Service(ServiceOptions options = {});
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    // `path` is the request path below the host, e.g. `/v1/sessions/ab12/step`.
    Reply handle(const std::string& method, const std::string& path, const std::string& body);

    void install(httplib::Server& server);

    // Drops sessions idle for longer than the TTL, measured at `now`.
    std::size_t expire(std::chrono::steady_clock::time_point now = std::chrono::steady_clock::now());
    [[nodiscard]] std::size_t session_count();

private:
    struct Entry {
        std::mutex lock;
        Session session;
        std::chrono::steady_clock::time_point last_used;
        explicit Entry(Session s) : session(std::move(s)), last_used(std::chrono::steady_clock::now()) {}
    };
    struct Job {
        std::string session_id;
        std::atomic<std::uint64_t> progress{0};
        // Unfiltered behavior count; progress stops at the filtered count.
        std::uint64_t total = 0;
        std::mutex lock;
        std::string status = "running";
        Json result;
    };

    ServiceOptions options_;
    std::mutex registry_;
    std::map<std::string, std::shared_ptr<Entry>> sessions_;
    std::map<std::string, std::shared_ptr<Job>> jobs_;
    std::vector<std::thread> workers_;

    std::string fresh_id();
    Reply create(const Json& body);
    Reply on_session(std::shared_ptr<Entry> entry, const std::string& method, const std::string& action,
                     const Json& body);
    Reply start_job(Entry& entry, const accuracy::DomainSpec& domain, bool fail_fast);
    Reply job_status(const std::string& id);
};

// Blocks serving the API on host:port until the process ends.
int serve(const std::string& host, int port, ServiceOptions options);

} // namespace speccheck::session
