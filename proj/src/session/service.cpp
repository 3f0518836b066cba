#include "speccheck/session/service.hpp"

#include <httplib.h>

#include <random>
#include <regex>

namespace speccheck::session {

namespace {

Reply error_reply(int status, std::string_view code, const std::string& message, const Json& diagnostics = Json::array())
{
    return {status, Json{{"error", {{"code", code}, {"message", message}, {"diagnostics", diagnostics}}}}};
}

int status_for(ErrorCode c)
{
    switch (c) {
    case ErrorCode::InvalidSource:
    case ErrorCode::VersionMismatch:
    case ErrorCode::Corrupt: return 422;
    case ErrorCode::PendingQuery:
    case ErrorCode::NoPendingQuery:
    case ErrorCode::PendingChoice:
    case ErrorCode::NoPendingChoice:
    case ErrorCode::BadChoice: return 409;
    case ErrorCode::BadRequest: return 400;
    case ErrorCode::Io: return 500;
    }
    return 500;
}

Reply error_reply(const SessionError& e)
{
    return error_reply(status_for(e.code()), to_string(e.code()), e.what(), to_json(e.diagnostics()));
}

accuracy::DomainSpec domain_from(const Json& body)
{
    if (body.contains("domain") && body["domain"].is_object())
        return accuracy::parse_domain(body["domain"].dump(), body.value("baseDir", std::string()));
    if (body.contains("domain") && body["domain"].is_string())
        return accuracy::load_domain(body["domain"].get<std::string>());
    if (body.contains("domainPath"))
        return accuracy::load_domain(body["domainPath"].get<std::string>());
    throw SessionError(ErrorCode::BadRequest, "accuracy needs \"domain\" (object or path)");
}

} // namespace

Service::Service(ServiceOptions options) : options_(std::move(options)) {}

Service::~Service()
{
    for (auto& t : workers_)
        if (t.joinable())
            t.join();
}

std::string Service::fresh_id()
{
    static thread_local std::mt19937_64 rng{std::random_device{}()};
    char buf[33];
    std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(rng()),
                  static_cast<unsigned long long>(rng()));
    return buf;
}

std::size_t Service::expire(std::chrono::steady_clock::time_point now)
{
    std::lock_guard g(registry_);
    std::size_t dropped = 0;
    for (auto it = sessions_.begin(); it != sessions_.end();) {
        std::unique_lock l(it->second->lock, std::try_to_lock);
        if (l.owns_lock() && now - it->second->last_used > options_.idle_ttl) {
            l.unlock();
            it = sessions_.erase(it);
            ++dropped;
        } else {
            ++it;
        }
    }
    return dropped;
}

std::size_t Service::session_count()
{
    std::lock_guard g(registry_);
    return sessions_.size();
}

Reply Service::create(const Json& body)
{
    Settings settings = options_.defaults;
    if (body.contains("settings")) {
        Json merged = to_json(settings);
        for (const auto& [k, v] : body["settings"].items())
            merged[k] = v;
        settings = settings_from_json(merged);
    }
    std::optional<Session> s;
    if (body.contains("snapshot")) {
        s.emplace(Session::from_snapshot(body["snapshot"]));
    } else {
        if (!body.contains("source") || !body["source"].is_string())
            throw SessionError(ErrorCode::BadRequest, "body needs \"source\"");
        s.emplace(fresh_id(), body["source"].get<std::string>(), settings);
    }
    const std::string id = s->id();
    Json state = s->state();
    {
        std::lock_guard g(registry_);
        if (sessions_.contains(id))
            return error_reply(409, "duplicate-id", "a session with id " + id + " already exists");
        sessions_.emplace(id, std::make_shared<Entry>(std::move(*s)));
    }
    return {201, Json{{"id", id}, {"state", state}}};
}

Reply Service::start_job(Entry& entry, const accuracy::DomainSpec& domain, bool fail_fast)
{
    auto job = std::make_shared<Job>();
    job->session_id = entry.session.id();
    auto program = std::make_shared<lang::AnnotatedProgram>(entry.session.program());
    const Settings settings = entry.session.settings();
    auto reference = accuracy::load_reference(domain, *program, settings.budget);
    auto bound = std::make_shared<accuracy::BoundDomain>(domain, *program, program->entry_function());
    if (reference) {
        job->total = bound->predicted_count();
    } else {
        job->total = program->entry_function().behaviors.size();
    }
    const std::string id = fresh_id();
    {
        std::lock_guard g(registry_);
        jobs_[id] = job;
        workers_.emplace_back([job, program, settings, bound, ref = std::shared_ptr(std::move(reference)), fail_fast,
                               threads = options_.accuracy_threads] {
            Json result;
            std::string status = "done";
            try {
                const auto& f = program->entry_function();
                accuracy::ManualSpec spec(*program, f, settings.budget);
                accuracy::AccuracyOptions opts;
                opts.fail_fast = fail_fast;
                opts.threads = threads;
                opts.progress = &job->progress;
                auto report = ref ? accuracy::check_accuracy(spec, *bound, *ref, opts)
                                  : accuracy::check_accuracy(spec, accuracy::labeled_from_behaviors(f), opts);
                result = to_json(report);
            } catch (const std::exception& e) {
                status = "failed";
                result = Json{{"message", e.what()}};
            }
            std::lock_guard l(job->lock);
            job->status = status;
            job->result = std::move(result);
        });
    }
    return {202, Json{{"jobId", id}, {"upperBound", job->total}}};
}

Reply Service::job_status(const std::string& id)
{
    std::shared_ptr<Job> job;
    {
        std::lock_guard g(registry_);
        auto it = jobs_.find(id);
        if (it == jobs_.end())
            return error_reply(404, "not-found", "no job " + id);
        job = it->second;
    }
    std::lock_guard l(job->lock);
    Json j{{"jobId", id}, {"sessionId", job->session_id}, {"status", job->status},
           {"progress", job->progress.load()}, {"upperBound", job->total}};
    if (job->status == "done")
        j["report"] = job->result;
    else if (job->status == "failed")
        j["error"] = job->result;
    return {200, j};
}

Reply Service::on_session(std::shared_ptr<Entry> entry, const std::string& method, const std::string& action,
                          const Json& body)
{
    std::unique_lock l(entry->lock, std::defer_lock);
    if (options_.queue_when_busy)
        l.lock();
    else if (!l.try_lock())
        return error_reply(409, "busy", "session is serving another request");
    entry->last_used = std::chrono::steady_clock::now();
    Session& s = entry->session;

    if (method == "GET" && action.empty())
        return {200, s.state()};
    if (method == "GET" && action == "log")
        return {200, Json{{"id", s.id()}, {"log", s.log()}}};
    if (method == "GET" && action == "snapshot")
        return {200, s.snapshot()};
    if (method != "POST")
        return error_reply(405, "method-not-allowed", method + " not supported here");

    if (action == "step")
        return {200, to_json(s.step())};
    if (action == "oracle") {
        if (!body.contains("answer") || !body["answer"].is_boolean())
            throw SessionError(ErrorCode::BadRequest, "body needs a boolean \"answer\"");
        return {200, to_json(s.answer(body["answer"].get<bool>()))};
    }
    if (action == "choose") {
        if (!body.contains("index") || !body["index"].is_number_integer())
            throw SessionError(ErrorCode::BadRequest, "body needs an integer \"index\" (1-based)");
        auto chosen = s.choose(body["index"].get<std::size_t>());
        return {200, Json{{"chosen", to_json(chosen)}}};
    }
    if (action == "restart") {
        s.restart();
        return {200, s.state()};
    }
    if (action == "edit") {
        if (!body.contains("kind") || !body.contains("text") || !body["text"].is_string())
            throw SessionError(ErrorCode::BadRequest, "body needs \"kind\" and \"text\"");
        auto kind = parse_edit_kind(body["kind"].get<std::string>());
        if (!kind)
            throw SessionError(ErrorCode::BadRequest, "unknown edit kind");
        auto r = s.edit(*kind, body["text"].get<std::string>());
        return {r.ok ? 200 : 422, Json{{"ok", r.ok}, {"diagnostics", to_json(r.diagnostics)}}};
    }
    if (action == "accuracy") {
        const bool fail_fast = body.value("failFast", false);
        auto domain = domain_from(body);
        if (body.value("async", false))
            return start_job(*entry, domain, fail_fast);
        accuracy::AccuracyOptions opts;
        opts.fail_fast = fail_fast;
        opts.threads = options_.accuracy_threads;
        return {200, Json{{"report", to_json(s.accuracy(domain, opts))}}};
    }
    return error_reply(404, "not-found", "unknown action '" + action + "'");
}

Reply Service::handle(const std::string& method, const std::string& path, const std::string& body_text)
{
    static const std::regex session_route(R"(^/v1/sessions/([0-9A-Za-z_-]+)(?:/([a-z]+))?/?$)");
    static const std::regex job_route(R"(^/v1/jobs/([0-9A-Za-z_-]+)/?$)");
    expire();
    try {
        Json body = Json::object();
        if (!body_text.empty()) {
            try {
                body = Json::parse(body_text);
            } catch (const nlohmann::json::parse_error& e) {
                return error_reply(400, "bad-json", e.what());
            }
            if (!body.is_object())
                return error_reply(400, "bad-json", "body must be a JSON object");
        }
        std::smatch m;
        if (path == "/v1/sessions" || path == "/v1/sessions/") {
            if (method == "POST")
                return create(body);
            if (method == "GET") {
                std::lock_guard g(registry_);
                Json ids = Json::array();
                for (const auto& [id, e] : sessions_)
                    ids.push_back(id);
                return {200, Json{{"sessions", ids}}};
            }
            return error_reply(405, "method-not-allowed", method + " not supported here");
        }
        if (std::regex_match(path, m, job_route) && method == "GET")
            return job_status(m[1]);
        if (std::regex_match(path, m, session_route)) {
            const std::string id = m[1];
            const std::string action = m[2];
            if (method == "DELETE" && action.empty()) {
                std::lock_guard g(registry_);
                if (sessions_.erase(id) == 0)
                    return error_reply(404, "not-found", "no session " + id);
                return {200, Json{{"deleted", id}}};
            }
            std::shared_ptr<Entry> entry;
            {
                std::lock_guard g(registry_);
                auto it = sessions_.find(id);
                if (it == sessions_.end())
                    return error_reply(404, "not-found", "no session " + id);
                entry = it->second;
            }
            return on_session(std::move(entry), method, action, body);
        }
        return error_reply(404, "not-found", "no route " + method + " " + path);
    } catch (const SessionError& e) {
        return error_reply(e);
    } catch (const accuracy::DomainTooLarge& e) {
        return error_reply(413, "domain-too-large", e.what());
    } catch (const accuracy::DomainError& e) {
        return error_reply(400, "bad-domain", e.what());
    } catch (const accuracy::InconsistentLabels& e) {
        return error_reply(422, "inconsistent-labels", e.what());
    } catch (const nlohmann::json::exception& e) {
        return error_reply(400, "bad-request", e.what());
    }
}

void Service::install(httplib::Server& server)
{
    auto dispatch = [this](const httplib::Request& req, httplib::Response& res) {
        Reply r = handle(req.method, req.path, req.body);
        res.status = r.status;
        res.set_content(r.body.dump(), "application/json");
    };
    server.Get(R"(/v1/.*)", dispatch);
    server.Post(R"(/v1/.*)", dispatch);
    server.Delete(R"(/v1/.*)", dispatch);
}

int serve(const std::string& host, int port, ServiceOptions options)
{
    Service service(std::move(options));
    httplib::Server server;
    service.install(server);
    if (!server.listen(host, port))
        return 1;
    return 0;
}

} // namespace speccheck::session
