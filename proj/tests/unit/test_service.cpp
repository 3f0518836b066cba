#include "doctest.h"

#include "corpus.hpp"

#include "speccheck/session/repl.hpp"
#include "speccheck/session/service.hpp"

#include <httplib.h>

#include <sstream>
#include <thread>

using namespace speccheck;
using namespace speccheck::session;

namespace {

std::string create(Service& svc, const std::string& file)
{
    auto r = svc.handle("POST", "/v1/sessions", Json{{"source", testing::read_corpus(file)}}.dump());
    REQUIRE(r.status == 201);
    return r.body["id"].get<std::string>();
}

Reply post(Service& svc, const std::string& id, const std::string& action, const Json& body = Json::object())
{
    return svc.handle("POST", "/v1/sessions/" + id + "/" + action, body.dump());
}

// Replays a command script against the API.
void drive_api(Service& svc, const std::string& id, const std::string& script)
{
    std::istringstream in(script);
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream words(line);
        std::string cmd;
        words >> cmd;
        if (cmd.empty() || cmd[0] == '#')
            continue;
        if (cmd == "step") {
            int n = 1;
            if (!(words >> n))
                n = 1;
            for (int k = 0; k < n; ++k)
                REQUIRE(post(svc, id, "step").status == 200);
        } else if (cmd == "finish") {
            while (true) {
                auto r = post(svc, id, "step");
                REQUIRE(r.status == 200);
                if (r.body["type"] != "verdict" || r.body["action"]["op"] == "or")
                    break;
            }
        } else if (cmd == "answer") {
            std::string a;
            words >> a;
            REQUIRE(post(svc, id, "oracle", Json{{"answer", a == "yes"}}).status == 200);
        } else if (cmd == "choose") {
            int n = 0;
            words >> n;
            REQUIRE(post(svc, id, "choose", Json{{"index", n}}).status == 200);
        } else if (cmd == "restart") {
            REQUIRE(post(svc, id, "restart").status == 200);
        } else if (cmd == "edit") {
            std::string kind;
            words >> kind;
            std::string text;
            std::getline(words, text);
            text.erase(0, text.find_first_not_of(' '));
            if (text.rfind("<<", 0) == 0) {
                const std::string marker = text.substr(2);
                text.clear();
                std::string next;
                while (std::getline(in, next) && next != marker)
                    text += next + "\n";
            }
            REQUIRE(post(svc, id, "edit", Json{{"kind", kind}, {"text", text}}).status == 200);
        } else {
            FAIL("unhandled command " << cmd);
        }
    }
}

Json cli_log(const std::string& file, const std::string& script)
{
    std::ostringstream sink;
    Repl repl(Session("p", testing::read_corpus(file)), sink, true);
    std::istringstream in(script);
    CHECK(repl.run(in) == 0);
    return repl.session().log();
}

} // namespace

TEST_CASE("API and CLI produce the same log")
{
    for (auto [file, trace] : {std::pair{"linear_search.sc", "linear_search.trace"},
                               std::pair{"linear_search_annotated.sc", "linear_search_episodes.trace"}}) {
        Service svc;
        const std::string id = create(svc, file);
        const std::string script = testing::read_corpus(trace);
        drive_api(svc, id, script);
        auto log = svc.handle("GET", "/v1/sessions/" + id + "/log", "");
        REQUIRE(log.status == 200);
        CHECK(log.body["log"] == cli_log(file, script));
    }
}

TEST_CASE("session routes")
{
    Service svc;
    const std::string id = create(svc, "search_sorted.sc");

    auto st = svc.handle("GET", "/v1/sessions/" + id, "");
    CHECK(st.status == 200);
    CHECK(st.body["cursor"] == 0);
    CHECK(st.body["phase"] == "pre");
    CHECK(st.body["behaviors"].size() == 1);
    CHECK(st.body["panes"]["pre"].get<std::string>().rfind("@pre srch", 0) == 0);

    CHECK(post(svc, id, "step").body["action"]["summary"] == "Weaken(P)");
    auto q = post(svc, id, "step");
    CHECK(q.body["type"] == "query");
    CHECK(q.body["output"]["rv"] == 4);
    CHECK(post(svc, id, "step").status == 409);
    CHECK(post(svc, id, "oracle", Json{{"answer", "no"}}).status == 400);
    auto v = post(svc, id, "oracle", Json{{"answer", false}});
    CHECK(v.status == 200);
    CHECK(v.body["pTruth"] == "false");
    CHECK(v.body["qTruth"] == "true");
    CHECK(v.body["g"] == false);
    CHECK(v.body["action"]["op"] == "or");
    CHECK(v.body["action"]["operands"][0]["kind"] == "Strengthen");
    CHECK(v.body["action"]["operands"][0]["target"] == "P");
    CHECK(v.body["action"]["operands"][1]["kind"] == "ReviseImpl");
    CHECK(post(svc, id, "oracle", Json{{"answer", false}}).status == 409);
    CHECK(post(svc, id, "choose", Json{{"index", 5}}).status == 409);
    CHECK(post(svc, id, "choose", Json{{"index", 2}}).body["chosen"]["kind"] == "ReviseImpl");
    CHECK(post(svc, id, "step").body["type"] == "done");

    auto bad_edit = post(svc, id, "edit", Json{{"kind", "pre"}, {"text", "l <="}});
    CHECK(bad_edit.status == 422);
    CHECK(bad_edit.body["ok"] == false);
    CHECK(bad_edit.body["diagnostics"][0]["severity"] == "error");
    CHECK(post(svc, id, "edit", Json{{"kind", "nope"}, {"text", "x"}}).status == 400);

    CHECK(post(svc, id, "restart").body["cursor"] == 0);

    auto snap = svc.handle("GET", "/v1/sessions/" + id + "/snapshot", "");
    CHECK(snap.body["version"] == 1);
    CHECK(svc.handle("DELETE", "/v1/sessions/" + id, "").status == 200);
    CHECK(svc.handle("GET", "/v1/sessions/" + id, "").status == 404);
    auto restored = svc.handle("POST", "/v1/sessions", Json{{"snapshot", snap.body}}.dump());
    CHECK(restored.status == 201);
    CHECK(restored.body["id"] == id);
    CHECK(restored.body["state"]["logLength"] == snap.body["log"].size());
}

TEST_CASE("request errors")
{
    Service svc;
    CHECK(svc.handle("POST", "/v1/sessions", "{").status == 400);
    CHECK(svc.handle("POST", "/v1/sessions", "{}").status == 400);
    auto bad = svc.handle("POST", "/v1/sessions", Json{{"source", "int f( {"}}.dump());
    CHECK(bad.status == 422);
    CHECK(bad.body["error"]["code"] == "invalid-source");
    CHECK_FALSE(bad.body["error"]["diagnostics"].empty());
    CHECK(svc.session_count() == 0);
    CHECK(svc.handle("GET", "/v1/sessions/nope", "").status == 404);
    CHECK(svc.handle("GET", "/v1/elsewhere", "").status == 404);
    CHECK(svc.handle("GET", "/v1/jobs/nope", "").status == 404);

    const std::string id = create(svc, "linear_search_final.sc");
    CHECK(post(svc, id, "accuracy", Json::object()).status == 400);
    auto big = post(svc, id, "accuracy",
                    Json{{"domain", {{"vars", {{"a", {{"lenRange", {0, 9}}, {"elemRange", {0, 9}}}},
                                               {"l", {{"range", {0, 9}}}},
                                               {"r", {{"range", {0, 9}}}},
                                               {"e", {{"range", {0, 9}}}},
                                               {"rv", {{"range", {0, 9}}}}}}}}});
    CHECK(big.status == 413);
}

TEST_CASE("accuracy over the API, inline and as a job")
{
    Service svc;
    const std::string id = create(svc, "linear_search_pre_pair4.sc");
    const Json req{{"domainPath", testing::corpus_path("linear_search.domain.json")}};
    auto inline_r = post(svc, id, "accuracy", req);
    REQUIRE(inline_r.status == 200);
    CHECK(inline_r.body["report"]["verdict"] == "under-constrained");

    Json async_req = req;
    async_req["async"] = true;
    auto started = post(svc, id, "accuracy", async_req);
    REQUIRE(started.status == 202);
    const std::string job = started.body["jobId"];
    Json status;
    for (int k = 0; k < 2000; ++k) {
        status = svc.handle("GET", "/v1/jobs/" + job, "").body;
        if (status["status"] != "running")
            break;
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    REQUIRE(status["status"] == "done");
    CHECK(status["progress"] == status["report"]["checked"]);
    CHECK(status["progress"].get<std::uint64_t>() <= status["upperBound"].get<std::uint64_t>());
    CHECK(status["report"] == inline_r.body["report"]);
}

TEST_CASE("a busy session answers 409")
{
    Service svc;
    const std::string id = create(svc, "linear_search_final.sc");
    // A slow accuracy run holds the session.
    const Json slow{{"domain",
                     {{"vars",
                       {{"a", {{"lenRange", {1, 6}}, {"elemRange", {0, 2}}}},
                        {"l", {{"range", {0, 5}}}},
                        {"r", {{"range", {0, 5}}}},
                        {"e", {{"range", {0, 2}}}},
                        {"rv", {{"range", {-1, 5}}}}}},
                      {"filter", "0 <= l <= r < a.size"},
                      {"reference", {{"file", testing::corpus_path("rightmost_ref.sc")}, {"function", "rightmost"}}}}}};
    std::atomic<bool> finished{false};
    std::thread runner([&] {
        Reply r;
        do
            r = post(svc, id, "accuracy", slow);
        while (r.status == 409);
        CHECK(r.status == 200);
        finished = true;
    });
    bool saw_busy = false;
    while (!finished && !saw_busy) {
        std::this_thread::sleep_for(std::chrono::milliseconds(1));
        saw_busy = svc.handle("GET", "/v1/sessions/" + id, "").status == 409;
    }
    runner.join();
    CHECK(saw_busy);
    CHECK(svc.handle("GET", "/v1/sessions/" + id, "").status == 200);
}

TEST_CASE("idle sessions expire")
{
    ServiceOptions opts;
    opts.idle_ttl = std::chrono::hours(24);
    Service svc(opts);
    (void)create(svc, "linear_search.sc");
    (void)create(svc, "linear_search.sc");
    CHECK(svc.expire(std::chrono::steady_clock::now() + std::chrono::hours(1)) == 0);
    CHECK(svc.session_count() == 2);
    CHECK(svc.expire(std::chrono::steady_clock::now() + std::chrono::hours(25)) == 2);
    CHECK(svc.session_count() == 0);
}

TEST_CASE("the API over a socket")
{
    Service svc;
    httplib::Server server;
    svc.install(server);
    const int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread t([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    httplib::Client client("127.0.0.1", port);
    auto created = client.Post("/v1/sessions", Json{{"source", testing::read_corpus("linear_search.sc")}}.dump(),
                               "application/json");
    REQUIRE(created);
    CHECK(created->status == 201);
    const std::string id = Json::parse(created->body)["id"];
    auto step = client.Post("/v1/sessions/" + id + "/step", "", "application/json");
    REQUIRE(step);
    CHECK(Json::parse(step->body)["action"]["summary"] == "Weaken(P)");
    auto state = client.Get("/v1/sessions/" + id);
    REQUIRE(state);
    CHECK(Json::parse(state->body)["phase"] == "post");

    server.stop();
    t.join();
}
