#pragma once

#include "speccheck/session/session.hpp"

#include <istream>
#include <optional>
#include <ostream>
#include <string>

namespace speccheck::session {

// Line-oriented driver for a Session. Commands:
//   step [n] | finish | answer yes|no | choose n | restart
//   edit pre|post|body|behaviors|source <text>   (or `<<END` ... `END`)
//   accuracy <domain.json> [--fail-fast] | save <path> | load <path>
//   show | log | help | quit
// Lines starting with `#` are comments.
class Repl {
public:
    Repl(Session session, std::ostream& out, bool json) : session_(std::move(session)), out_(out), json_(json) {}

    // Reads commands until end of input or `quit`. Returns the number of
    // commands that failed.
    int run(std::istream& in, bool prompt = false);
    // Executes one command; `in` supplies heredoc lines. Returns false on
    // failure.
    bool execute(const std::string& line, std::istream& in);

    [[nodiscard]] const Session& session() const noexcept { return session_; }
    [[nodiscard]] bool quit_requested() const noexcept { return quit_; }

private:
    Session session_;
    std::ostream& out_;
    bool json_;
    bool quit_ = false;

    void emit(const std::string& command, const Json& payload);
    void emit_step(const correction::StepResult& r);
    void emit_error(const std::string& command, const SessionError& e);
};

[[nodiscard]] std::string render_text(const correction::StepResult& r);
[[nodiscard]] std::string render_text(const accuracy::AccuracyReport& r);

enum BatchExit : int {
    BatchOk = 0,
    BatchParseError = 2,
    BatchWitnesses = 3,
    BatchCapExceeded = 4,
};

struct BatchOptions {
    Settings settings;
    bool fail_fast = false;
    bool json = false;
    unsigned threads = 0;
};

// Non-interactive check: every behavior verdict plus an accuracy run over
// the domain. Oracle questions are answered by the domain's reference
// function when it has one.
int run_batch(const std::filesystem::path& source, const std::filesystem::path& domain, const BatchOptions& options,
              std::ostream& out, std::ostream& err);

} // namespace speccheck::session
