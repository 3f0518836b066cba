#pragma once

#include "speccheck/accuracy/accuracy.hpp"
#include "speccheck/correction/speccheck.hpp"
#include "speccheck/session/json.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace speccheck::session {

enum class ErrorCode {
    InvalidSource,   // create/load: source does not parse or validate
    PendingQuery,    // step while an oracle question is open
    NoPendingQuery,  // answer without a question
    PendingChoice,   // step while an Or-action awaits a choice
    NoPendingChoice, // choose without an Or-action
    BadChoice,       // choice index out of range
    BadRequest,      // malformed command or argument
    Io,
    VersionMismatch,
    Corrupt, // replaying the log does not reproduce the saved source
};

std::string_view to_string(ErrorCode c) noexcept;

class SessionError : public std::runtime_error {
public:
    SessionError(ErrorCode code, const std::string& message, std::vector<lang::Diagnostic> diagnostics = {})
        : std::runtime_error(message), code_(code), diagnostics_(std::move(diagnostics))
    {
    }
    [[nodiscard]] ErrorCode code() const noexcept { return code_; }
    [[nodiscard]] const std::vector<lang::Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

private:
    ErrorCode code_;
    std::vector<lang::Diagnostic> diagnostics_;
};

struct Settings {
    eval::Budget budget;
    bool spec_only = false;
    // Function under check; empty picks the default entry.
    std::string entry;

    [[nodiscard]] correction::CheckOptions check_options() const { return {budget, spec_only}; }
};

[[nodiscard]] Json to_json(const Settings& s);
[[nodiscard]] Settings settings_from_json(const Json& j);

enum class EditKind { Pre, Post, Body, BehaviorsAppend, FullSource };

std::string_view to_string(EditKind k) noexcept;
// Accepts `pre`, `post`, `body`, `behaviors`, `behaviors-append`, `source`, `full-source`.
[[nodiscard]] std::optional<EditKind> parse_edit_kind(std::string_view s) noexcept;

struct EditResult {
    bool ok = false;
    std::vector<lang::Diagnostic> diagnostics;
};

// Parses and validates `source`, or returns error diagnostics.
[[nodiscard]] std::variant<lang::AnnotatedProgram, std::vector<lang::Diagnostic>>
load_program(const std::string& source, const std::string& entry);

// Source text with one region of `f` replaced. Missing regions are
// inserted. Pre/post text without its `@pre name` head gets one.
[[nodiscard]] std::string splice(const std::string& source, const lang::FunctionDef& f, EditKind kind,
                                 const std::string& text);

// One refinement dialogue over an annotated program. Two pause points per
// behavior: after the P verdict and after the Q or triple verdict. Every
// successful operation appends to an event log from which the session can
// be rebuilt.
class Session {
public:
    // Throws SessionError(InvalidSource).
    Session(std::string id, std::string source, Settings settings = {});

    [[nodiscard]] const std::string& id() const noexcept { return id_; }
    [[nodiscard]] const std::string& source() const noexcept { return source_; }
    [[nodiscard]] const std::string& initial_source() const noexcept { return initial_source_; }
    [[nodiscard]] const lang::AnnotatedProgram& program() const noexcept { return program_; }
    [[nodiscard]] const lang::FunctionDef& function() const { return program_.entry_function(); }
    [[nodiscard]] const Settings& settings() const noexcept { return settings_; }
    [[nodiscard]] bool spec_only() const { return settings_.spec_only || function().spec_only(); }
    [[nodiscard]] std::size_t cursor() const noexcept { return cursor_; }
    // True between the P verdict and the Q verdict of the current behavior.
    [[nodiscard]] bool mid_behavior() const noexcept { return mid_behavior_; }
    [[nodiscard]] const std::optional<correction::OracleQuery>& pending_query() const noexcept { return pending_; }
    [[nodiscard]] const std::optional<correction::Verdict>& pending_choice() const noexcept { return choice_; }
    [[nodiscard]] const std::vector<Json>& log() const noexcept { return log_; }
    [[nodiscard]] const std::vector<lang::Diagnostic>& warnings() const noexcept { return warnings_; }

    correction::StepResult step();
    correction::Verdict answer(bool g);
    // Index is 1-based over the Or-action's disjuncts.
    correction::Action choose(std::size_t index);
    EditResult edit(EditKind kind, const std::string& text);
    // Back to the first behavior; oracle answers are kept.
    void restart();
    accuracy::AccuracyReport accuracy(const accuracy::DomainSpec& domain, const accuracy::AccuracyOptions& options = {});

    // Full observable state for clients.
    [[nodiscard]] Json state() const;
    [[nodiscard]] Json snapshot() const;
    // Rebuilds a session by replaying a snapshot's log. Throws SessionError
    // (VersionMismatch, Corrupt, InvalidSource).
    [[nodiscard]] static Session from_snapshot(const Json& doc);

    void save(const std::filesystem::path& path) const;
    [[nodiscard]] static Session load(const std::filesystem::path& path);

    static constexpr int format_version = 1;

private:
    std::string id_;
    std::string initial_source_;
    std::string source_;
    Settings settings_;
    lang::AnnotatedProgram program_;
    std::vector<lang::Diagnostic> warnings_;
    std::size_t cursor_ = 0;
    bool mid_behavior_ = false;
    std::optional<correction::OracleQuery> pending_;
    std::optional<correction::Verdict> choice_;
    std::map<std::pair<Bindings, Bindings>, bool> answers_;
    std::vector<Json> log_;

    void append(Json event);
    correction::Verdict finish_behavior(correction::Verdict v);
    [[nodiscard]] correction::OracleLookup lookup() const;
};

} // namespace speccheck::session
