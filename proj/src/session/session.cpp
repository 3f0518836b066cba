#include "speccheck/session/session.hpp"

#include "speccheck/lang/parser.hpp"

#include <fstream>
#include <sstream>

namespace speccheck::session {

using correction::OracleQuery;
using correction::StepResult;
using correction::Verdict;

std::string_view to_string(ErrorCode c) noexcept
{
    switch (c) {
    case ErrorCode::InvalidSource: return "invalid-source";
    case ErrorCode::PendingQuery: return "pending-query";
    case ErrorCode::NoPendingQuery: return "no-pending-query";
    case ErrorCode::PendingChoice: return "pending-choice";
    case ErrorCode::NoPendingChoice: return "no-pending-choice";
    case ErrorCode::BadChoice: return "bad-choice";
    case ErrorCode::BadRequest: return "bad-request";
    case ErrorCode::Io: return "io-error";
    case ErrorCode::VersionMismatch: return "version-mismatch";
    case ErrorCode::Corrupt: return "corrupt-session";
    }
    return "error";
}

Json to_json(const Settings& s)
{
    return Json{{"stepBudget", s.budget.max_steps},
                {"depthBudget", s.budget.max_depth},
                {"specOnly", s.spec_only},
                {"entry", s.entry}};
}

Settings settings_from_json(const Json& j)
{
    Settings s;
    if (!j.is_object())
        return s;
    try {
        if (j.contains("stepBudget"))
            s.budget.max_steps = j["stepBudget"].get<std::uint64_t>();
        if (j.contains("depthBudget"))
            s.budget.max_depth = j["depthBudget"].get<std::uint32_t>();
        if (j.contains("specOnly"))
            s.spec_only = j["specOnly"].get<bool>();
        if (j.contains("entry"))
            s.entry = j["entry"].get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw SessionError(ErrorCode::BadRequest, std::string("bad settings: ") + e.what());
    }
    return s;
}

std::string_view to_string(EditKind k) noexcept
{
    switch (k) {
    case EditKind::Pre: return "pre";
    case EditKind::Post: return "post";
    case EditKind::Body: return "body";
    case EditKind::BehaviorsAppend: return "behaviors-append";
    case EditKind::FullSource: return "full-source";
    }
    return "?";
}

std::optional<EditKind> parse_edit_kind(std::string_view s) noexcept
{
    if (s == "pre")
        return EditKind::Pre;
    if (s == "post")
        return EditKind::Post;
    if (s == "body")
        return EditKind::Body;
    if (s == "behaviors" || s == "behaviors-append")
        return EditKind::BehaviorsAppend;
    if (s == "source" || s == "full-source")
        return EditKind::FullSource;
    return std::nullopt;
}

std::variant<lang::AnnotatedProgram, std::vector<lang::Diagnostic>> load_program(const std::string& source,
                                                                                    const std::string& entry)
{
    lang::AnnotatedProgram program;
    try {
        program = lang::parse_source(source);
    } catch (const lang::LexError& e) {
        return std::vector<lang::Diagnostic>{{lang::Severity::Error, e.loc(), e.message()}};
    } catch (const lang::ParseError& e) {
        return std::vector<lang::Diagnostic>{
            {lang::Severity::Error, e.loc(), "expected " + e.expected() + ", found " + e.found()}};
    }
    if (program.functions.empty())
        return std::vector<lang::Diagnostic>{{lang::Severity::Error, {1, 1, 0}, "no function definitions"}};
    if (!entry.empty()) {
        if (!program.find(entry))
            return std::vector<lang::Diagnostic>{{lang::Severity::Error, {1, 1, 0}, "no function named '" + entry + "'"}};
        program.entry = entry;
    }
    auto diags = lang::validate(program);
    if (lang::has_errors(diags))
        return diags;
    return program;
}

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool starts_with(const std::string& s, std::string_view p) { return s.rfind(p, 0) == 0; }

std::string indent_lines(const std::string& text, const std::string& indent)
{
    std::string out;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!first)
            out += "\n";
        if (!line.empty())
            out += indent + line;
        first = false;
    }
    return out;
}

std::size_t line_start(const std::string& s, std::size_t pos)
{
    while (pos > 0 && s[pos - 1] != '\n')
        --pos;
    return pos;
}

bool only_blanks(const std::string& s, std::size_t from, std::size_t to)
{
    for (std::size_t k = from; k < to; ++k)
        if (s[k] != ' ' && s[k] != '\t')
            return false;
    return true;
}

// Removes [b, e) and, when that leaves its line blank, the whole line.
void erase_region(std::string& s, std::size_t b, std::size_t e)
{
    const std::size_t ls = line_start(s, b);
    std::size_t le = e;
    while (le < s.size() && (s[le] == ' ' || s[le] == '\t'))
        ++le;
    if (only_blanks(s, ls, b) && (le == s.size() || s[le] == '\n')) {
        s.erase(ls, std::min(le + 1, s.size()) - ls);
        return;
    }
    s.erase(b, e - b);
}

std::string predicate_name(const lang::FunctionDef& f, EditKind kind)
{
    const auto& own = kind == EditKind::Pre ? f.pre : f.post;
    const auto& other = kind == EditKind::Pre ? f.post : f.pre;
    if (own)
        return own->name;
    if (other)
        return other->name;
    if (!f.behaviors.empty())
        return f.behaviors.front().group;
    return f.name;
}

// Inserts `text` (already indented) as new lines just before the closing
// brace at `close`.
void insert_before_close(std::string& s, std::size_t close, const std::string& text)
{
    const std::size_t ls = line_start(s, close);
    if (only_blanks(s, ls, close))
        s.insert(ls, text + "\n");
    else
        s.insert(close, "\n" + text + "\n");
}

} // namespace

std::string splice(const std::string& source, const lang::FunctionDef& f, EditKind kind, const std::string& text)
{
    if (kind == EditKind::FullSource)
        return text;
    std::string s = source;
    const auto& layout = f.layout;

    if (layout.interface_form) {
        // `int f(...);` becomes `int f(...) {\n}` and the edit lands inside.
        std::string braces = " {\n}";
        s.replace(layout.body_open, 1, braces);
        const std::size_t close = layout.body_open + braces.size() - 1;
        std::string body = text;
        if (kind == EditKind::Pre || kind == EditKind::Post) {
            const std::string t = trim(text);
            const char* head = kind == EditKind::Pre ? "@pre" : "@post";
            body = starts_with(t, head) ? t : std::string(head) + " " + predicate_name(f, kind) + " (" + t + ");";
        } else if (kind == EditKind::BehaviorsAppend && !starts_with(trim(text), "@behavior")) {
            body = "@behavior " + f.name + " {\n" + indent_lines(trim(text), "    ") + "\n}";
        }
        s.insert(close, indent_lines(trim(body), "    ") + "\n");
        return s;
    }

    switch (kind) {
    case EditKind::Pre:
    case EditKind::Post: {
        const std::string t = trim(text);
        const char* head = kind == EditKind::Pre ? "@pre" : "@post";
        const std::string annotation =
            starts_with(t, head) ? t : std::string(head) + " " + predicate_name(f, kind) + " (" + t + ");";
        const auto& span = kind == EditKind::Pre ? layout.pre : layout.post;
        if (span) {
            const std::size_t ls = line_start(s, span->begin);
            const std::string indent = only_blanks(s, ls, span->begin) ? s.substr(ls, span->begin - ls) : "";
            std::string placed = indent_lines(annotation, indent);
            placed.erase(0, std::min(placed.size(), indent.size()));
            s.replace(span->begin, span->end - span->begin, placed);
        }
        else if (kind == EditKind::Post && layout.pre)
            s.insert(layout.pre->end, "\n" + indent_lines(annotation, "    "));
        else
            s.insert(layout.body_open, "\n" + indent_lines(annotation, "    "));
        return s;
    }
    case EditKind::Body: {
        const std::string t = trim(text);
        if (layout.statements.empty()) {
            if (!t.empty())
                s.insert(layout.body_open, "\n" + indent_lines(t, "    "));
            return s;
        }
        const std::size_t first = layout.statements.front().begin;
        const std::size_t ls = line_start(s, first);
        const std::string indent = only_blanks(s, ls, first) ? s.substr(ls, first - ls) : "    ";
        for (auto it = layout.statements.rbegin(); it != layout.statements.rend(); ++it) {
            if (it->begin == first)
                s.erase(it->begin, it->end - it->begin);
            else
                erase_region(s, it->begin, it->end);
        }
        std::string body = indent_lines(t, indent);
        body.erase(0, std::min(body.size(), indent.size()));
        s.insert(first, body);
        if (t.empty())
            erase_region(s, first, first);
        return s;
    }
    case EditKind::BehaviorsAppend: {
        const std::string t = trim(text);
        if (starts_with(t, "@behavior")) {
            insert_before_close(s, layout.body_close, indent_lines(t, "    "));
        } else if (!layout.behavior_block_close.empty()) {
            insert_before_close(s, layout.behavior_block_close.back(), indent_lines(t, "        "));
        } else {
            const std::string block = "@behavior " + predicate_name(f, EditKind::Post) + " {\n" +
                                      indent_lines(t, "    ") + "\n}";
            insert_before_close(s, layout.body_close, indent_lines(block, "    "));
        }
        return s;
    }
    case EditKind::FullSource:
        break;
    }
    return s;
}

Session::Session(std::string id, std::string source, Settings settings)
    : id_(std::move(id)), initial_source_(source), source_(std::move(source)), settings_(std::move(settings))
{
    auto loaded = load_program(source_, settings_.entry);
    if (auto* diags = std::get_if<std::vector<lang::Diagnostic>>(&loaded)) {
        std::string msg = diags->empty() ? "invalid source" : diags->front().to_string();
        throw SessionError(ErrorCode::InvalidSource, msg, std::move(*diags));
    }
    program_ = std::move(std::get<lang::AnnotatedProgram>(loaded));
    warnings_ = lang::validate(program_);
    append(Json{{"type", "created"},
                {"settings", to_json(settings_)},
                {"specOnly", spec_only()},
                {"behaviors", function().behaviors.size()}});
}

void Session::append(Json event)
{
    Json e;
    e["seq"] = log_.size();
    for (auto& [k, v] : event.items())
        e[k] = std::move(v);
    log_.push_back(std::move(e));
}

correction::OracleLookup Session::lookup() const
{
    return [this](const Bindings& i, const Bindings& o) -> std::optional<bool> {
        auto it = answers_.find({i, o});
        if (it == answers_.end())
            return std::nullopt;
        return it->second;
    };
}

Verdict Session::finish_behavior(Verdict v)
{
    ++cursor_;
    mid_behavior_ = false;
    if (v.action.op() == correction::Action::Op::Or)
        choice_ = v;
    return v;
}

StepResult Session::step()
{
    if (pending_)
        throw SessionError(ErrorCode::PendingQuery, "answer the pending oracle question first");
    if (choice_)
        throw SessionError(ErrorCode::PendingChoice, "choose one of the alternatives first");
    StepResult result = correction::Done{};
    const auto& behaviors = function().behaviors;
    if (cursor_ < behaviors.size()) {
        if (!mid_behavior_) {
            result = correction::pre_verdict(program_, cursor_, settings_.check_options());
            mid_behavior_ = true;
        } else {
            auto post = correction::post_verdict(program_, cursor_, settings_.check_options(), lookup());
            if (auto* q = std::get_if<OracleQuery>(&post)) {
                pending_ = *q;
                result = *q;
            } else {
                result = finish_behavior(std::get<Verdict>(std::move(post)));
            }
        }
    }
    append(Json{{"type", "step"}, {"result", to_json(result)}});
    return result;
}

Verdict Session::answer(bool g)
{
    if (!pending_)
        throw SessionError(ErrorCode::NoPendingQuery, "no oracle question is pending");
    answers_[{pending_->input, pending_->output}] = g;
    auto post = correction::post_verdict(program_, cursor_, settings_.check_options(), lookup());
    pending_.reset();
    Verdict v = finish_behavior(std::get<Verdict>(std::move(post)));
    append(Json{{"type", "answer"}, {"answer", g}, {"result", to_json(v)}});
    return v;
}

correction::Action Session::choose(std::size_t index)
{
    if (!choice_)
        throw SessionError(ErrorCode::NoPendingChoice, "no alternative is awaiting a choice");
    const auto& options = choice_->action.operands();
    if (index < 1 || index > options.size())
        throw SessionError(ErrorCode::BadChoice,
                           "choice must be between 1 and " + std::to_string(options.size()));
    correction::Action chosen = options[index - 1];
    append(Json{{"type", "choose"},
                {"index", index},
                {"behaviorIndex", choice_->behavior_index},
                {"chosen", to_json(chosen)}});
    choice_.reset();
    return chosen;
}

EditResult Session::edit(EditKind kind, const std::string& text)
{
    EditResult r;
    std::string next = splice(source_, function(), kind, text);
    auto loaded = load_program(next, settings_.entry);
    if (auto* diags = std::get_if<std::vector<lang::Diagnostic>>(&loaded)) {
        r.diagnostics = std::move(*diags);
        return r;
    }
    source_ = std::move(next);
    program_ = std::move(std::get<lang::AnnotatedProgram>(loaded));
    warnings_ = lang::validate(program_);
    r.ok = true;
    r.diagnostics = warnings_;
    // An edit between the two pause points re-checks the current behavior.
    bool restarted = false;
    if (mid_behavior_ || pending_) {
        mid_behavior_ = false;
        pending_.reset();
        restarted = true;
    }
    cursor_ = std::min(cursor_, function().behaviors.size());
    append(Json{{"type", "edit"},
                {"kind", std::string(to_string(kind))},
                {"text", text},
                {"restartedBehavior", restarted},
                {"diagnostics", to_json(r.diagnostics)}});
    return r;
}

void Session::restart()
{
    cursor_ = 0;
    mid_behavior_ = false;
    pending_.reset();
    choice_.reset();
    append(Json{{"type", "restart"}});
}

accuracy::AccuracyReport Session::accuracy(const accuracy::DomainSpec& domain,
                                           const accuracy::AccuracyOptions& options)
{
    accuracy::ManualSpec spec(program_, function(), settings_.budget);
    accuracy::AccuracyReport report;
    auto reference = accuracy::load_reference(domain, program_, settings_.budget);
    accuracy::BoundDomain bound(domain, program_, function());
    if (reference) {
        report = accuracy::check_accuracy(spec, bound, *reference, options);
    } else {
        report = accuracy::check_accuracy(spec, accuracy::labeled_from_behaviors(function()), options);
    }
    append(Json{{"type", "accuracy"},
                {"verdict", std::string(accuracy::to_string(report.verdict()))},
                {"checked", report.checked}});
    return report;
}

namespace {

Json region(const std::string& source, const std::optional<lang::SourceSpan>& span)
{
    if (!span)
        return nullptr;
    return source.substr(span->begin, span->end - span->begin);
}

} // namespace

Json Session::state() const
{
    const auto& f = function();
    Json j;
    j["id"] = id_;
    j["sourceText"] = source_;
    j["entry"] = f.name;
    j["specOnly"] = spec_only();
    j["settings"] = to_json(settings_);
    std::string body;
    for (const auto& st : f.layout.statements) {
        if (!body.empty())
            body += "\n";
        body += source_.substr(st.begin, st.end - st.begin);
    }
    j["panes"] = {{"pre", region(source_, f.layout.pre)}, {"post", region(source_, f.layout.post)}, {"body", body}};
    Json behaviors = Json::array();
    for (const auto& b : f.behaviors)
        behaviors.push_back(to_json(b));
    j["behaviors"] = std::move(behaviors);
    j["cursor"] = cursor_;
    j["phase"] = cursor_ >= f.behaviors.size() ? "done" : (mid_behavior_ ? "post" : "pre");
    j["pendingQuery"] = pending_ ? to_json(*pending_) : Json(nullptr);
    j["pendingChoice"] = choice_ ? to_json(*choice_) : Json(nullptr);
    j["warnings"] = to_json(warnings_);
    j["logLength"] = log_.size();
    j["latest"] = nullptr;
    for (auto it = log_.rbegin(); it != log_.rend(); ++it) {
        if (it->contains("result")) {
            j["latest"] = (*it)["result"];
            break;
        }
    }
    return j;
}

Json Session::snapshot() const
{
    Json j;
    j["format"] = "speccheck-session";
    j["version"] = format_version;
    j["id"] = id_;
    j["settings"] = to_json(settings_);
    j["initialSource"] = initial_source_;
    j["sourceText"] = source_;
    j["log"] = log_;
    return j;
}

Session Session::from_snapshot(const Json& doc)
{
    if (!doc.is_object() || doc.value("format", "") != "speccheck-session")
        throw SessionError(ErrorCode::Corrupt, "not a saved session");
    const int version = doc.value("version", 0);
    if (version != format_version)
        throw SessionError(ErrorCode::VersionMismatch,
                           "session format version " + std::to_string(version) + " is not supported (expected " +
                               std::to_string(format_version) + ")");
    try {
        Session s(doc.at("id").get<std::string>(), doc.at("initialSource").get<std::string>(),
                  settings_from_json(doc.at("settings")));
        const Json& log = doc.at("log");
        for (std::size_t k = 1; k < log.size(); ++k) {
            const Json& e = log[k];
            const std::string type = e.at("type").get<std::string>();
            if (type == "step")
                (void)s.step();
            else if (type == "answer")
                (void)s.answer(e.at("answer").get<bool>());
            else if (type == "choose")
                (void)s.choose(e.at("index").get<std::size_t>());
            else if (type == "edit") {
                auto kind = parse_edit_kind(e.at("kind").get<std::string>());
                if (!kind || !s.edit(*kind, e.at("text").get<std::string>()).ok)
                    throw SessionError(ErrorCode::Corrupt, "logged edit no longer applies");
            } else if (type == "restart")
                s.restart();
            else if (type == "accuracy")
                s.append(e); // results are not replayed
            else
                throw SessionError(ErrorCode::Corrupt, "unknown event '" + type + "'");
        }
        if (s.log_.size() != log.size())
            throw SessionError(ErrorCode::Corrupt, "log length mismatch after replay");
        for (std::size_t k = 0; k < log.size(); ++k)
            if (s.log_[k].value("result", Json()) != log[k].value("result", Json()))
                throw SessionError(ErrorCode::Corrupt, "replay diverged at event " + std::to_string(k));
        if (s.source_ != doc.at("sourceText").get<std::string>())
            throw SessionError(ErrorCode::Corrupt, "replayed source differs from the saved source");
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw SessionError(ErrorCode::Corrupt, std::string("malformed session: ") + e.what());
    }
}

void Session::save(const std::filesystem::path& path) const
{
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw SessionError(ErrorCode::Io, "cannot write " + path.string());
    out << snapshot().dump(2) << "\n";
    if (!out)
        throw SessionError(ErrorCode::Io, "write failed for " + path.string());
}

Session Session::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw SessionError(ErrorCode::Io, "cannot read " + path.string());
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw SessionError(ErrorCode::Corrupt, std::string("malformed session file: ") + e.what());
    }
    return from_snapshot(doc);
}

} // namespace speccheck::session
