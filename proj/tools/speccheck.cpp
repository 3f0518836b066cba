// speccheck: interactive refinement, batch accuracy checks, and the HTTP API.
#include "speccheck/session/repl.hpp"
#include "speccheck/session/service.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <unistd.h>

using namespace speccheck;
using namespace speccheck::session;

int main(int argc, char** argv)
{
    CLI::App app{"Specification refinement checker"};
    app.require_subcommand(1);

    Settings settings;
    bool json = false;
    app.add_option("--step-budget", settings.budget.max_steps, "Maximum interpreter steps per evaluation")
        ->capture_default_str();
    app.add_option("--depth-budget", settings.budget.max_depth, "Maximum call depth per evaluation")
        ->capture_default_str();
    app.add_flag("--json", json, "Machine-readable output");
    app.add_option("--entry", settings.entry, "Function under check (default: first annotated function)");
    app.add_flag("--spec-only", settings.spec_only, "Check behaviors against P and Q without running the body");

    auto* run = app.add_subcommand("run", "Interactive refinement session");
    std::string run_file, script_file, session_file;
    run->add_option("file", run_file, "Annotated program (.sc)");
    run->add_option("--script", script_file, "Read commands from a file instead of standard input");
    run->add_option("--load", session_file, "Resume a saved session instead of starting from a file");

    auto* check = app.add_subcommand("check", "Batch check of behaviors plus accuracy over a domain");
    std::string check_file, domain_file;
    bool fail_fast = false;
    unsigned threads = 0;
    check->add_option("file", check_file, "Annotated program (.sc)")->required();
    check->add_option("--domain", domain_file, "Domain description (JSON)")->required();
    check->add_flag("--fail-fast", fail_fast, "Stop at the first witness");
    check->add_option("--threads", threads, "Accuracy workers (0 = all cores)");

    auto* srv = app.add_subcommand("serve", "JSON-over-HTTP API under /v1");
    int port = 8080;
    std::string host = "127.0.0.1";
    long ttl_hours = 24;
    bool queue = false;
    srv->add_option("--port", port, "Port to listen on")->capture_default_str();
    srv->add_option("--host", host, "Address to bind")->capture_default_str();
    srv->add_option("--session-ttl-hours", ttl_hours, "Idle session expiry")->capture_default_str();
    srv->add_flag("--queue", queue, "Wait for busy sessions instead of answering 409");

    for (auto* sub : {run, check, srv})
        sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    if (*run) {
        std::optional<Session> session;
        try {
            if (!session_file.empty()) {
                session.emplace(Session::load(session_file));
            } else {
                if (run_file.empty()) {
                    std::cerr << "error: run needs a file or --load\n";
                    return BatchParseError;
                }
                std::ifstream in(run_file);
                if (!in) {
                    std::cerr << "error: cannot read " << run_file << "\n";
                    return BatchParseError;
                }
                std::ostringstream text;
                text << in.rdbuf();
                session.emplace("cli", text.str(), settings);
            }
        } catch (const SessionError& e) {
            std::cerr << "error: " << e.what() << "\n";
            for (const auto& d : e.diagnostics())
                std::cerr << "    " << d.to_string() << "\n";
            return BatchParseError;
        }
        if (!json)
            for (const auto& w : session->warnings())
                std::cerr << w.to_string() << "\n";
        Repl repl(std::move(*session), std::cout, json);
        if (!script_file.empty()) {
            std::ifstream script(script_file);
            if (!script) {
                std::cerr << "error: cannot read " << script_file << "\n";
                return BatchParseError;
            }
            return repl.run(script) == 0 ? 0 : 1;
        }
        const bool interactive = isatty(STDIN_FILENO) && !json;
        return repl.run(std::cin, interactive) == 0 ? 0 : 1;
    }

    if (*check) {
        BatchOptions opts;
        opts.settings = settings;
        opts.fail_fast = fail_fast;
        opts.json = json;
        opts.threads = threads;
        return run_batch(check_file, domain_file, opts, std::cout, std::cerr);
    }

    ServiceOptions opts;
    opts.defaults = settings;
    opts.idle_ttl = std::chrono::hours(ttl_hours);
    opts.queue_when_busy = queue;
    std::cerr << "listening on http://" << host << ":" << port << "/v1\n";
    return serve(host, port, opts);
}
