#include "doctest.h"

#include "corpus.hpp"

#include "speccheck/lang/parser.hpp"
#include "speccheck/lang/validate.hpp"

#include <algorithm>

using namespace speccheck::lang;

namespace {

std::size_t count(const std::vector<Diagnostic>& ds, Severity s)
{
    return static_cast<std::size_t>(std::count_if(ds.begin(), ds.end(), [&](const Diagnostic& d) { return d.severity == s; }));
}

} // namespace

TEST_CASE("final annotated linearSearch validates cleanly")
{
    CHECK(validate(testing::load_corpus("linear_search_final.sc")).empty());
    CHECK(validate(testing::load_corpus("linear_search_annotated.sc")).empty());
}

TEST_CASE("every corpus program is free of errors")
{
    for (const char* name : {"linear_search.sc", "linear_search_pre_pair4.sc", "linear_search_pre_pair6.sc",
                             "linear_search_leftmost.sc", "rightmost_ref.sc", "search_sorted.sc", "same_words.sc"}) {
        CAPTURE(name);
        auto ds = validate(testing::load_corpus(name));
        for (const auto& d : ds)
            MESSAGE(d.to_string());
        CHECK_FALSE(has_errors(ds));
    }
}

TEST_CASE("unknown identifier in postcondition is an error")
{
    auto p = parse_source("int f(int x) { return x; @pre p (x > 0); @post p { rv = z } }");
    auto ds = validate(p);
    CHECK(count(ds, Severity::Error) == 1);
}

TEST_CASE("input not free in the specification is a warning")
{
    auto p = parse_source("int f(int x, int y) { return x; @pre p (true); @post p { rv = x } }");
    auto ds = validate(p);
    CHECK(count(ds, Severity::Error) == 0);
    REQUIRE(count(ds, Severity::Warning) >= 1);
    CHECK(std::any_of(ds.begin(), ds.end(), [](const Diagnostic& d) {
        return d.message.find("input variable not free in specification") != std::string::npos &&
               d.message.find("'y'") != std::string::npos;
    }));
}

TEST_CASE("structural errors")
{
    // break outside a loop
    CHECK(has_errors(validate(parse_source("int f(int x) { break; return x; }"))));
    // missing return on some path
    CHECK(has_errors(validate(parse_source("int f(int x) { if (x > 0) { return 1; } }"))));
    // duplicate parameter
    CHECK(has_errors(validate(parse_source("int f(int x, int x) { return x; }"))));
    // type mismatch
    CHECK(has_errors(validate(parse_source("int f(int x) { return x && true; }"))));
    // quantifier in code
    CHECK(has_errors(validate(parse_source("bool f(int x) { return forall int k:[0 .. x] (k >= 0); }"))));
    // undefined callee
    CHECK(has_errors(validate(parse_source("int f(int x) { return g(x); }"))));
    // behavior missing an input parameter
    CHECK(has_errors(validate(parse_source(
        "int f(int x, int y) { return x; @behavior b { good { input={x=1} output={rv=1} } } }"))));
    // behavior value of the wrong type
    CHECK(has_errors(validate(parse_source(
        "int f(int[] a) { return 0; @behavior b { good { input={a=3} output={rv=1} } } }"))));
    // spec-only function whose behavior has no rv
    CHECK(has_errors(validate(parse_source("int f(int x); int g(int x) { @behavior b { good { input={x=1} output={} } } }"))));
}

TEST_CASE("free variables exclude quantifier-bound names")
{
    auto vars = free_variables(parse_predicate("forall int k:[l .. r] (e != a[k])"));
    CHECK(vars == std::set<std::string>{"a", "e", "l", "r"});
}
