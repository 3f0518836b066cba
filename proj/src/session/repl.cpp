#include "speccheck/session/repl.hpp"

#include <fstream>
#include <sstream>

namespace speccheck::session {

using correction::OracleQuery;
using correction::Verdict;

std::string render_text(const correction::StepResult& r)
{
    if (const auto* v = std::get_if<Verdict>(&r)) {
        std::string out = correction::describe(*v);
        const std::string detail = v->action.to_string();
        if (detail != v->action.summary())
            out += "\n    " + detail;
        if (v->action.op() == correction::Action::Op::Or) {
            const auto& ops = v->action.operands();
            for (std::size_t k = 0; k < ops.size(); ++k)
                out += "\n    choose " + std::to_string(k + 1) + ": " + ops[k].summary();
        }
        for (const auto& w : v->warnings)
            out += "\n    warning: " + w;
        return out;
    }
    if (const auto* q = std::get_if<OracleQuery>(&r))
        return "#" + std::to_string(q->behavior_index + 1) + " query: is o=" + q->output.to_source() +
               " correct for i=" + q->input.to_source() + "? (answer yes|no)";
    return "done";
}

std::string render_text(const accuracy::AccuracyReport& r)
{
    std::ostringstream out;
    out << "accuracy: " << accuracy::to_string(r.verdict()) << " on this domain (" << r.checked << " behaviors, "
        << r.dont_care << " dontCare)";
    auto list = [&](const char* what, std::uint64_t count, const std::vector<accuracy::AccuracyWitness>& ws) {
        if (count == 0)
            return;
        out << "\n" << what << ": " << count;
        for (const auto& w : ws) {
            out << "\n    i=" << w.input.to_source() << " o=" << w.output.to_source() << " ("
                << lang::to_string(w.kind) << ")";
            if (!w.note.empty())
                out << " " << w.note;
        }
        if (ws.size() < count)
            out << "\n    ... " << (count - ws.size()) << " more";
    };
    list("overWitness", r.over_count, r.over);
    list("underWitness", r.under_count, r.under);
    list("undefinedWitness", r.undefined_count, r.undefined);
    if (r.stopped_early)
        out << "\nstopped at the first witness";
    return out.str();
}

void Repl::emit(const std::string& command, const Json& payload)
{
    if (json_) {
        Json j{{"command", command}};
        for (const auto& [k, v] : payload.items())
            j[k] = v;
        out_ << j.dump() << "\n";
    } else if (payload.contains("text")) {
        out_ << payload["text"].get<std::string>() << "\n";
    }
    out_.flush();
}

void Repl::emit_step(const correction::StepResult& r)
{
    emit("step", Json{{"result", to_json(r)}, {"text", render_text(r)}});
}

void Repl::emit_error(const std::string& command, const SessionError& e)
{
    std::string text = "error: " + std::string(e.what());
    for (const auto& d : e.diagnostics())
        text += "\n    " + d.to_string();
    emit(command, Json{{"error", {{"code", std::string(to_string(e.code()))},
                                  {"message", e.what()},
                                  {"diagnostics", to_json(e.diagnostics())}}},
                       {"text", text}});
}

namespace {

std::string rest_after(const std::string& line, std::size_t words)
{
    std::size_t pos = 0;
    for (std::size_t w = 0; w < words; ++w) {
        pos = line.find_first_not_of(" \t", pos);
        if (pos == std::string::npos)
            return {};
        pos = line.find_first_of(" \t", pos);
        if (pos == std::string::npos)
            return {};
    }
    pos = line.find_first_not_of(" \t", pos);
    return pos == std::string::npos ? std::string() : line.substr(pos);
}

} // namespace

bool Repl::execute(const std::string& raw, std::istream& in)
{
    std::string line = raw;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
        line.pop_back();
    std::istringstream words(line);
    std::string cmd;
    words >> cmd;
    if (cmd.empty() || cmd[0] == '#')
        return true;

    try {
        if (cmd == "step") {
            int n = 1;
            if (!(words >> n))
                n = 1;
            for (int k = 0; k < n; ++k)
                emit_step(session_.step());
        } else if (cmd == "finish") {
            while (true) {
                auto r = session_.step();
                emit_step(r);
                if (!std::holds_alternative<Verdict>(r) || session_.pending_choice())
                    break;
            }
        } else if (cmd == "answer") {
            std::string a;
            words >> a;
            bool g;
            if (a == "yes" || a == "true" || a == "y")
                g = true;
            else if (a == "no" || a == "false" || a == "n")
                g = false;
            else
                throw SessionError(ErrorCode::BadRequest, "answer takes yes or no");
            auto v = session_.answer(g);
            emit("answer", Json{{"result", to_json(v)}, {"text", render_text(v)}});
        } else if (cmd == "choose") {
            std::size_t n = 0;
            if (!(words >> n))
                throw SessionError(ErrorCode::BadRequest, "choose takes a number");
            auto a = session_.choose(n);
            emit("choose", Json{{"index", n}, {"chosen", to_json(a)}, {"text", "chose " + a.to_string()}});
        } else if (cmd == "restart") {
            session_.restart();
            emit("restart", Json{{"text", "restarted at behavior 1"}});
        } else if (cmd == "edit") {
            std::string kind_word;
            words >> kind_word;
            auto kind = parse_edit_kind(kind_word);
            if (!kind)
                throw SessionError(ErrorCode::BadRequest, "edit takes pre, post, body, behaviors or source");
            std::string text = rest_after(line, 2);
            if (text.rfind("<<", 0) == 0) {
                const std::string marker = text.substr(2);
                text.clear();
                std::string next;
                bool closed = false;
                while (std::getline(in, next)) {
                    if (!next.empty() && next.back() == '\r')
                        next.pop_back();
                    if (next == marker) {
                        closed = true;
                        break;
                    }
                    text += next + "\n";
                }
                if (!closed)
                    throw SessionError(ErrorCode::BadRequest, "missing heredoc terminator '" + marker + "'");
            }
            auto r = session_.edit(*kind, text);
            std::string out = "edit " + std::string(to_string(*kind)) + (r.ok ? ": ok" : ": rejected");
            for (const auto& d : r.diagnostics)
                out += "\n    " + d.to_string();
            emit("edit", Json{{"kind", std::string(to_string(*kind))},
                              {"ok", r.ok},
                              {"diagnostics", to_json(r.diagnostics)},
                              {"text", out}});
            return r.ok;
        } else if (cmd == "accuracy") {
            std::string path, flag;
            words >> path >> flag;
            if (path.empty())
                throw SessionError(ErrorCode::BadRequest, "accuracy takes a domain file");
            accuracy::AccuracyOptions opts;
            opts.fail_fast = flag == "--fail-fast";
            opts.threads = 0;
            try {
                auto report = session_.accuracy(accuracy::load_domain(path), opts);
                emit("accuracy", Json{{"report", to_json(report)}, {"text", render_text(report)}});
            } catch (const accuracy::DomainTooLarge& e) {
                throw SessionError(ErrorCode::BadRequest, e.what());
            } catch (const accuracy::DomainError& e) {
                throw SessionError(ErrorCode::BadRequest, e.what());
            }
        } else if (cmd == "save") {
            const std::string path = rest_after(line, 1);
            session_.save(path);
            emit("save", Json{{"path", path}, {"text", "saved to " + path}});
        } else if (cmd == "load") {
            const std::string path = rest_after(line, 1);
            session_ = Session::load(path);
            emit("load", Json{{"path", path}, {"state", session_.state()}, {"text", "loaded " + path}});
        } else if (cmd == "show") {
            const Json st = session_.state();
            std::ostringstream text;
            text << session_.source();
            const std::size_t n = session_.function().behaviors.size();
            if (session_.cursor() >= n)
                text << "-- all " << n << " behaviors checked";
            else
                text << "-- behavior " << session_.cursor() + 1 << " of " << n << ", next: "
                     << st["phase"].get<std::string>();
            emit("show", Json{{"state", st}, {"text", text.str()}});
        } else if (cmd == "log") {
            std::string text;
            for (const auto& e : session_.log())
                text += (text.empty() ? "" : "\n") + e.dump();
            emit("log", Json{{"log", session_.log()}, {"text", text}});
        } else if (cmd == "help") {
            emit("help", Json{{"text", "step [n] | finish | answer yes|no | choose n | restart\n"
                                       "edit pre|post|body|behaviors|source <text> (or <<END ... END)\n"
                                       "accuracy <domain.json> [--fail-fast] | save <path> | load <path>\n"
                                       "show | log | quit"}});
        } else if (cmd == "quit" || cmd == "exit") {
            quit_ = true;
        } else {
            throw SessionError(ErrorCode::BadRequest, "unknown command '" + cmd + "' (try help)");
        }
    } catch (const SessionError& e) {
        emit_error(cmd, e);
        return false;
    }
    return true;
}

int Repl::run(std::istream& in, bool prompt)
{
    int failures = 0;
    std::string line;
    while (!quit_) {
        if (prompt) {
            out_ << "> ";
            out_.flush();
        }
        if (!std::getline(in, line))
            break;
        if (!execute(line, in))
            ++failures;
    }
    return failures;
}

int run_batch(const std::filesystem::path& source_path, const std::filesystem::path& domain_path,
              const BatchOptions& options, std::ostream& out, std::ostream& err)
{
    std::ifstream src(source_path);
    if (!src) {
        err << "error: cannot read " << source_path.string() << "\n";
        return BatchParseError;
    }
    std::ostringstream text;
    text << src.rdbuf();
    auto loaded = load_program(text.str(), options.settings.entry);
    if (auto* diags = std::get_if<std::vector<lang::Diagnostic>>(&loaded)) {
        for (const auto& d : *diags)
            err << source_path.string() << ":" << d.to_string() << "\n";
        return BatchParseError;
    }
    const auto& program = std::get<lang::AnnotatedProgram>(loaded);
    const auto& f = program.entry_function();

    accuracy::DomainSpec domain;
    std::unique_ptr<accuracy::ReferenceLabeler> reference;
    try {
        domain = accuracy::load_domain(domain_path);
        reference = accuracy::load_reference(domain, program, options.settings.budget);
    } catch (const accuracy::DomainError& e) {
        err << "error: " << e.what() << "\n";
        return BatchParseError;
    }

    correction::OracleLookup lookup;
    if (reference) {
        lookup = [&](const Bindings& i, const Bindings& o) -> std::optional<bool> {
            auto k = reference->label(i, o);
            if (k == lang::BehaviorKind::DontCare)
                return std::nullopt;
            return k == lang::BehaviorKind::Good;
        };
    }

    int code = BatchOk;
    Json verdicts = Json::array();
    Json queries = Json::array();
    correction::SpecCheckResult checked;
    eval::run_on_deep_stack([&] { checked = correction::run_spec_check(program, options.settings.check_options(), lookup); });
    for (const auto& v : checked.verdicts) {
        verdicts.push_back(to_json(v));
        if (!options.json)
            out << render_text(v) << "\n";
        if (v.action.is_skip())
            continue;
        bool budget = false;
        for (const auto& op : v.action.operands())
            budget = budget || op.is_basic(correction::BasicKind::RaiseBudget);
        code = std::max(code, budget ? int(BatchCapExceeded) : int(BatchWitnesses));
        if (options.fail_fast)
            break;
    }
    for (const auto& q : checked.unresolved) {
        queries.push_back(to_json(q));
        if (!options.json)
            out << render_text(q) << " (unresolved)\n";
        code = std::max(code, int(BatchWitnesses));
    }

    Json report_json = nullptr;
    if (!(options.fail_fast && code != BatchOk)) {
        try {
            accuracy::ManualSpec spec(program, f, options.settings.budget);
            accuracy::AccuracyOptions opts;
            opts.fail_fast = options.fail_fast;
            opts.threads = options.threads;
            accuracy::AccuracyReport report;
            accuracy::BoundDomain bound(domain, program, f);
            if (reference) {
                report = accuracy::check_accuracy(spec, bound, *reference, opts);
            } else {
                report = accuracy::check_accuracy(spec, accuracy::labeled_from_behaviors(f), opts);
            }
            report_json = to_json(report);
            if (!options.json)
                out << render_text(report) << "\n";
            if (!report.accurate())
                code = std::max(code, int(BatchWitnesses));
        } catch (const accuracy::DomainTooLarge& e) {
            err << "error: " << e.what() << "\n";
            code = BatchCapExceeded;
        } catch (const accuracy::DomainError& e) {
            err << "error: " << e.what() << "\n";
            return BatchParseError;
        } catch (const accuracy::InconsistentLabels& e) {
            err << "error: " << e.what() << "\n";
            return BatchParseError;
        }
    }
    if (options.json) {
        out << Json{{"file", source_path.string()},
                    {"verdicts", verdicts},
                    {"unresolved", queries},
                    {"accuracy", report_json},
                    {"exitCode", code}}
                   .dump()
            << "\n";
    }
    return code;
}

} // namespace speccheck::session
