#include "doctest.h"

#include "corpus.hpp"

#include "speccheck/session/repl.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace speccheck;
using namespace speccheck::session;
using correction::OracleQuery;
using correction::Verdict;

namespace {

Session open(const std::string& file, Settings settings = {})
{
    return Session("t", testing::read_corpus(file), settings);
}

Verdict verdict(const correction::StepResult& r)
{
    REQUIRE(std::holds_alternative<Verdict>(r));
    return std::get<Verdict>(r);
}

// Runs a script through the text driver and returns the JSON events.
std::vector<Json> drive(Session s, const std::string& script)
{
    std::ostringstream out;
    Repl repl(std::move(s), out, true);
    std::istringstream in(script);
    repl.run(in);
    std::vector<Json> events;
    std::istringstream lines(out.str());
    std::string line;
    while (std::getline(lines, line))
        events.push_back(Json::parse(line));
    return events;
}

std::vector<std::string> split_lines(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        out.push_back(line);
    return out;
}

std::string without_script_comments(const std::string& script)
{
    std::string out;
    for (const auto& l : split_lines(script))
        if (!l.empty() && l[0] != '#')
            out += l + "\n";
    return out;
}

} // namespace

TEST_CASE("creating sessions")
{
    auto s = open("linear_search.sc");
    CHECK(s.function().behaviors.size() == 7);
    CHECK(s.spec_only());
    CHECK(s.cursor() == 0);
    REQUIRE(s.log().size() == 1);
    CHECK(s.log()[0]["type"] == "created");
    CHECK_FALSE(open("linear_search_annotated.sc").spec_only());

    try {
        Session bad("x", "int f(int x) { return x +; }");
        FAIL("expected InvalidSource");
    } catch (const SessionError& e) {
        CHECK(e.code() == ErrorCode::InvalidSource);
        REQUIRE_FALSE(e.diagnostics().empty());
        CHECK(e.diagnostics()[0].loc.line == 1);
    }
}

TEST_CASE("golden trace through the script driver")
{
    auto events = drive(open("linear_search.sc"), testing::read_corpus("linear_search.trace"));
    std::vector<std::string> seen;
    for (const auto& e : events) {
        REQUIRE_FALSE(e.contains("error"));
        if (e["command"] == "step" && e["result"]["type"] == "verdict")
            seen.push_back(e["result"]["text"].get<std::string>());
    }
    const std::vector<std::string> expected{
        "#1 good pre P=false (want true): Weaken(P)",
        "#1 good post P=false Q=true (want true): Skip",
        "#2 good pre P=true (want true): Skip",
        "#2 good post P=true Q=true (want true): Skip",
        "#3 bad pre P=true (want true): Skip",
        "#3 bad post P=true Q=true (want false): Strengthen(Q)",
        "#4 bad pre P=true (want true): Skip",
        "#4 bad post P=true Q=true (want false): Strengthen(Q)",
        "#5 dontCare pre P=false (want false): Skip",
        "#5 dontCare post P=false Q=false: Skip (no Q action)",
        "#6 good pre P=true (want true): Skip",
        "#6 good post P=true Q=false (want true): Weaken(Q)",
        "#7 good pre P=true (want true): Skip",
        "#7 good post P=true Q=undefined (want true): MakeWellDefined(Q)",
    };
    CHECK(seen == expected);
    CHECK(events.back()["result"]["type"] == "done");
}

TEST_CASE("the edited spec separates the surviving pairs")
{
    Session s = open("linear_search.sc");
    std::ostringstream sink;
    Repl repl(std::move(s), sink, true);
    std::istringstream in(testing::read_corpus("linear_search.trace"));
    repl.run(in);
    const auto& prog = repl.session().program();
    const auto& behaviors = repl.session().function().behaviors;
    for (std::size_t k = 0; k + 1 < behaviors.size(); ++k) {
        const auto& b = behaviors[k];
        const auto p = eval::eval_pre_on_behavior(prog, b);
        const auto q = eval::eval_post_on_behavior(prog, b);
        if (b.kind == lang::BehaviorKind::Good) {
            CHECK(p.is_true());
            CHECK(q.is_true());
        } else if (b.kind == lang::BehaviorKind::Bad) {
            CHECK(p.is_true());
            CHECK(q.is_false());
        }
    }
    // Pair 7 (l = -1) falls outside the final precondition.
    CHECK(eval::eval_pre_on_behavior(prog, behaviors.back()).is_false());
}

TEST_CASE("first step of a fresh session")
{
    auto s = open("linear_search.sc");
    const auto v = verdict(s.step());
    CHECK(v.action.summary() == "Weaken(P)");
    CHECK(v.behavior_index == 0);
    CHECK(s.mid_behavior());
}

TEST_CASE("Pair 1 after weakening P is Skip for both")
{
    auto s = open("linear_search.sc");
    (void)s.step();
    (void)s.step();
    REQUIRE(s.edit(EditKind::Pre, "l <= r").ok);
    s.restart();
    CHECK(verdict(s.step()).action.is_skip());
    CHECK(verdict(s.step()).action.is_skip());
}

TEST_CASE("an edit between pause points re-checks the current behavior")
{
    auto s = open("linear_search.sc");
    (void)s.step();
    REQUIRE(s.edit(EditKind::Pre, "l <= r").ok);
    CHECK_FALSE(s.mid_behavior());
    const auto v = verdict(s.step());
    CHECK(v.behavior_index == 0);
    CHECK(v.stage == correction::Stage::Pre);
    CHECK(v.action.is_skip());
    CHECK(s.log().back()["type"] == "step");
    CHECK(s.log()[s.log().size() - 2]["restartedBehavior"] == true);
}

TEST_CASE("a failing edit changes nothing")
{
    auto s = open("linear_search.sc");
    (void)s.step();
    const Json before = s.state();
    const auto log_size = s.log().size();
    for (auto [kind, text] : std::vector<std::pair<EditKind, std::string>>{
             {EditKind::Pre, "l <= "},
             {EditKind::Post, "undefinedName = 1"},
             {EditKind::Body, "return true;"},
             {EditKind::BehaviorsAppend, "good { input={a={1}} output={rv=0} }"},
             {EditKind::FullSource, "int"}}) {
        auto r = s.edit(kind, text);
        CHECK_FALSE(r.ok);
        CHECK(lang::has_errors(r.diagnostics));
        CHECK(s.state() == before);
        CHECK(s.log().size() == log_size);
    }
}

TEST_CASE("oracle questions")
{
    auto s = open("linear_search_annotated.sc");
    CHECK_THROWS_AS(s.answer(true), SessionError);
    (void)s.step();
    (void)s.step();
    (void)s.step();
    auto r = s.step();
    REQUIRE(std::holds_alternative<OracleQuery>(r));
    CHECK(std::get<OracleQuery>(r).output == Bindings{{"rv", -1}});
    try {
        (void)s.step();
        FAIL("expected PendingQuery");
    } catch (const SessionError& e) {
        CHECK(e.code() == ErrorCode::PendingQuery);
    }
    const auto v = s.answer(false);
    CHECK(v.action.summary() == "ReviseImpl");
    try {
        (void)s.answer(false);
        FAIL("expected NoPendingQuery");
    } catch (const SessionError& e) {
        CHECK(e.code() == ErrorCode::NoPendingQuery);
    }
    // The answer is remembered across a restart.
    s.restart();
    (void)s.step();
    (void)s.step();
    (void)s.step();
    CHECK(verdict(s.step()).action.summary() == "ReviseImpl");
}

TEST_CASE("or-actions wait for a choice")
{
    auto s = open("search_sorted.sc");
    (void)s.step();
    REQUIRE(std::holds_alternative<OracleQuery>(s.step()));
    const auto v = s.answer(false);
    CHECK(v.p.is_false());
    CHECK(v.q->is_true());
    CHECK(v.g == false);
    CHECK(v.action.summary() == "Or(Strengthen(P), ReviseImpl)");
    REQUIRE(s.pending_choice());
    CHECK_THROWS_AS(s.step(), SessionError);
    CHECK_THROWS_AS(s.choose(3), SessionError);
    CHECK(s.choose(2).summary() == "ReviseImpl");
    CHECK(s.log().back()["type"] == "choose");
    CHECK(s.log().back()["index"] == 2);
    CHECK(std::holds_alternative<correction::Done>(s.step()));
    CHECK_THROWS_AS(s.choose(1), SessionError);
}

TEST_CASE("appending behaviors grows the queue")
{
    auto s = open("linear_search_annotated.sc");
    const auto n = s.function().behaviors.size();
    auto r = s.edit(EditKind::BehaviorsAppend,
                    "good { input={a={5,2,7,6,7,8}, l=1, r=5, e=7} output={rv=4} }\n"
                    "bad { input={a={5,2,7,6,7,8}, l=1, r=5, e=7} output={rv=2} }");
    REQUIRE(r.ok);
    CHECK(s.function().behaviors.size() == n + 2);
    CHECK(s.function().behaviors.back().kind == lang::BehaviorKind::Bad);
}

TEST_CASE("replacing break with return i fixes Pair 2")
{
    auto s = open("linear_search_annotated.sc");
    auto src = s.source();
    REQUIRE(s.edit(EditKind::FullSource, src.replace(src.find("break;"), 6, "return i;")).ok);
    auto out = eval::exec_function(s.program(), s.function(), s.function().behaviors[1].input);
    REQUIRE(std::holds_alternative<eval::Returned>(out));
    CHECK(std::get<eval::Returned>(out).rv == Value(1));
}

TEST_CASE("splicing into each region")
{
    SUBCASE("interface form gains a body")
    {
        Session s("t", "int f(int x);");
        REQUIRE(s.edit(EditKind::Pre, "x > 0").ok);
        REQUIRE(s.edit(EditKind::Body, "return x;").ok);
        REQUIRE(s.edit(EditKind::Post, "rv = x").ok);
        REQUIRE(s.edit(EditKind::BehaviorsAppend, "good { input={x=1} output={rv=1} }").ok);
        CHECK(s.function().pre);
        CHECK(s.function().post);
        CHECK(s.function().body.size() == 1);
        CHECK(s.function().behaviors.size() == 1);
        CHECK(verdict(s.step()).action.is_skip());
    }
    SUBCASE("body replacement keeps the annotations")
    {
        auto s = open("linear_search_annotated.sc");
        REQUIRE(s.edit(EditKind::Body, "return -1;").ok);
        CHECK(s.function().body.size() == 1);
        CHECK(s.function().pre);
        CHECK(s.function().post);
        CHECK(s.function().behaviors.size() == 2);
    }
    SUBCASE("a whole annotation is taken verbatim")
    {
        auto s = open("linear_search_annotated.sc");
        REQUIRE(s.edit(EditKind::Post, "@post other { (rv >= -1) }").ok);
        CHECK(s.function().post->name == "other");
        CHECK(s.function().post->clauses.size() == 1);
    }
}

TEST_CASE("replaying the log reproduces the session")
{
    const auto script = split_lines(without_script_comments(testing::read_corpus("linear_search.trace")));
    for (std::size_t prefix = 0; prefix <= script.size(); ++prefix) {
        std::ostringstream sink;
        Repl repl(open("linear_search.sc"), sink, true);
        for (std::size_t k = 0; k < prefix; ++k) {
            std::istringstream none;
            repl.execute(script[k], none);
        }
        const Session& s = repl.session();
        Session back = Session::from_snapshot(s.snapshot());
        CHECK(back.source() == s.source());
        CHECK(back.cursor() == s.cursor());
        CHECK(back.mid_behavior() == s.mid_behavior());
        CHECK(back.log() == s.log());
        CHECK(back.state() == s.state());
    }
}

TEST_CASE("save and load")
{
    const auto dir = std::filesystem::temp_directory_path() / "speccheck_session_test";
    std::filesystem::create_directories(dir);
    auto s = open("linear_search.sc");
    for (int k = 0; k < 3; ++k)
        (void)s.step();
    REQUIRE(s.edit(EditKind::Pre, "l <= r").ok);
    s.save(dir / "mid.json");
    auto loaded = Session::load(dir / "mid.json");
    CHECK(to_json(loaded.step()) == to_json(s.step()));

    Json doc = s.snapshot();
    doc["version"] = Session::format_version + 1;
    try {
        (void)Session::from_snapshot(doc);
        FAIL("expected VersionMismatch");
    } catch (const SessionError& e) {
        CHECK(e.code() == ErrorCode::VersionMismatch);
    }

    doc = s.snapshot();
    doc["sourceText"] = "int g();";
    CHECK_THROWS_AS((void)Session::from_snapshot(doc), SessionError);

    const Json before = s.state();
    try {
        s.save(dir / "missing-dir" / "x.json");
        FAIL("expected an IO error");
    } catch (const SessionError& e) {
        CHECK(e.code() == ErrorCode::Io);
    }
    CHECK(s.state() == before);
    std::filesystem::remove_all(dir);
}

TEST_CASE("budgets come from the settings")
{
    Settings tight;
    tight.budget.max_steps = 50;
    Session s("t", R"(int f(int n) {
        @pre p (n >= 0);
        int i = 0;
        while (i < n) i++;
        return i;
        @post q (rv = n);
        @behavior b { good { input={n=1000} output={rv=1000} } }
    })",
              tight);
    (void)s.step();
    const auto v = verdict(s.step());
    CHECK(v.stage == correction::Stage::Exec);
    CHECK(v.action.summary() == "Or(ReviseImpl, RaiseBudget)");
    CHECK(s.pending_choice());
}

TEST_CASE("session accuracy uses the domain's reference")
{
    auto s = open("linear_search_final.sc");
    auto report = s.accuracy(accuracy::load_domain(testing::corpus_path("linear_search.domain.json")));
    CHECK(report.accurate());
    CHECK(s.log().back()["type"] == "accuracy");
    // Without a reference, the behaviors are the labels.
    auto plain = accuracy::load_domain(testing::corpus_path("linear_search.domain.json"));
    plain.reference.reset();
    CHECK(s.accuracy(plain).checked == s.function().behaviors.size());
}

TEST_CASE("batch check exit codes")
{
    const auto domain = testing::corpus_path("linear_search.domain.json");
    std::ostringstream out, err;
    BatchOptions opts;
    CHECK(run_batch(testing::corpus_path("linear_search_final.sc"), domain, opts, out, err) == BatchOk);
    CHECK(run_batch(testing::corpus_path("linear_search_pre_pair4.sc"), domain, opts, out, err) == BatchWitnesses);
    CHECK(out.str().find("underWitness") != std::string::npos);
    CHECK(run_batch(testing::corpus_path("linear_search_final.sc"), "/no/such/domain.json", opts, out, err) ==
          BatchParseError);
    CHECK(run_batch("/no/such/file.sc", domain, opts, out, err) == BatchParseError);

    const auto dir = std::filesystem::temp_directory_path() / "speccheck_batch_test";
    std::filesystem::create_directories(dir);
    {
        std::ofstream big(dir / "big.json");
        big << R"({"vars": {"a": {"lenRange": [0, 8], "elemRange": [0, 9]}, "l": {"range": [0, 9]},
                 "r": {"range": [0, 9]}, "e": {"range": [0, 9]}, "rv": {"range": [-1, 9]}},
                 "reference": {"file": ")"
            << testing::corpus_path("rightmost_ref.sc") << R"(", "function": "rightmost"}})";
    }
    CHECK(run_batch(testing::corpus_path("linear_search_final.sc"), dir / "big.json", opts, out, err) ==
          BatchCapExceeded);
    std::filesystem::remove_all(dir);

    std::ostringstream json_out;
    opts.json = true;
    CHECK(run_batch(testing::corpus_path("linear_search_pre_pair6.sc"), domain, opts, json_out, err) ==
          BatchWitnesses);
    const Json j = Json::parse(json_out.str());
    CHECK(j["accuracy"]["verdict"] == "both");
    CHECK(j["exitCode"] == 3);
}
