#include "doctest.h"

#include "corpus.hpp"

#include "speccheck/lang/parser.hpp"
#include "speccheck/lang/printer.hpp"

using namespace speccheck;
using namespace speccheck::lang;

namespace {

const char* const corpus_files[] = {
    "linear_search.sc",          "linear_search_annotated.sc", "linear_search_final.sc",
    "linear_search_pre_pair4.sc", "linear_search_pre_pair6.sc", "linear_search_leftmost.sc",
    "rightmost_ref.sc",           "search_sorted.sc",           "same_words.sc",
};

} // namespace

TEST_CASE("interface form parses to a bodiless function")
{
    auto p = parse_source("int linearSearch(int [] a, int l, int r, int e);");
    REQUIRE(p.functions.size() == 1);
    const auto& f = p.functions[0];
    CHECK(f.name == "linearSearch");
    REQUIRE(f.params.size() == 4);
    CHECK(f.params[0].type == Type::IntArray);
    CHECK(f.params[3].name == "e");
    CHECK(f.body.empty());
    CHECK_FALSE(f.pre);
    CHECK_FALSE(f.post);
    CHECK(f.behaviors.empty());
    CHECK(f.layout.interface_form);
}

TEST_CASE("annotated listing attaches pre, post and behaviors")
{
    auto p = testing::load_corpus("linear_search_annotated.sc");
    const auto& f = p.entry_function();
    REQUIRE(f.pre);
    CHECK(f.pre->name == "ls");
    REQUIRE(f.post);
    CHECK(f.post->name == "ls");
    CHECK(f.post->clauses.size() == 3);
    CHECK(f.behaviors.size() >= 2);
    CHECK(f.behaviors[0].kind == BehaviorKind::Good);
    CHECK(f.behaviors[0].input.find("a")->as_array() == IntArray{1, 2, 3});
    CHECK(f.behaviors[0].output.find("rv")->as_int() == -1);
    CHECK_FALSE(f.body.empty());
}

TEST_CASE("empty source is a parse error")
{
    CHECK_THROWS_AS((void)parse_source(""), ParseError);
    CHECK_THROWS_AS((void)parse_source("   // just a comment\n"), ParseError);
}

TEST_CASE("parse errors report expectation and location")
{
    try {
        (void)parse_source("int f(int x) {\n  return x +;\n}");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.loc().line == 2);
        CHECK_FALSE(e.expected().empty());
    }
}

TEST_CASE("chained comparison equals its explicit conjunction")
{
    CHECK(parse_predicate("0 <= l <= r < n") == parse_predicate("0 <= l && l <= r && r < n"));
    CHECK(parse_predicate("0 ≤ l ≤ r < a.size") == parse_predicate("0 <= l && l <= r && r < a.size"));
}

TEST_CASE("= and == both compare in predicates")
{
    CHECK(parse_predicate("a[rv] = e") == parse_predicate("a[rv] == e"));
}

TEST_CASE("implication is right associative and binds loosest")
{
    auto e = parse_predicate("a => b => c && d");
    auto expected = make_binary(BinaryOp::Implies, make_var("a"),
                                make_binary(BinaryOp::Implies, make_var("b"),
                                            make_binary(BinaryOp::And, make_var("c"), make_var("d"))));
    CHECK(e == expected);
}

TEST_CASE("multi-binder quantifier nests, trailing comma allowed")
{
    auto multi = parse_predicate("exists (int x:[0 .. 2], int y:[1 .. 3],) { x = y }");
    auto nested = parse_predicate("exists int x:[0 .. 2] (exists int y:[1 .. 3] (x = y))");
    CHECK(multi == nested);
}

TEST_CASE("annotations may precede or follow the body")
{
    auto before = parse_source("int f(int x) { @pre p (x > 0); return x; @post p { rv = x } }");
    auto after = parse_source("int f(int x) { return x; @post p { rv = x } @pre p { x > 0; } }");
    CHECK(before == after);
}

TEST_CASE("statement sugar")
{
    auto a = parse_source("int f(int i) { i++; i--; return i; }");
    auto b = parse_source("int f(int i) { i = i + 1; i = i - 1; return i; }");
    CHECK(a == b);
}

TEST_CASE("round trip over the corpus")
{
    for (const char* name : corpus_files) {
        CAPTURE(name);
        auto p = testing::load_corpus(name);
        auto printed = pretty_print(p);
        auto again = parse_source(printed);
        CHECK(again == p);
        CHECK(pretty_print(again) == printed);
    }
}

TEST_CASE("printer layouts")
{
    auto p = parse_source("int f(int x);");
    CHECK(pretty_print(p).find("int f(int x);") != std::string::npos);

    auto q = parse_source("int g(int x) { return x; @behavior b { good { input={x=1} output={rv=1} } } }");
    CHECK(pretty_print(q.functions[0].behaviors[0]) == "good { input={x=1} output={rv=1} }");
}
