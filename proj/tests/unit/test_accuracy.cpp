#include "doctest.h"

#include "corpus.hpp"

#include "speccheck/accuracy/accuracy.hpp"
#include "speccheck/lang/parser.hpp"

#include <chrono>
#include <random>

using namespace speccheck;
using namespace speccheck::accuracy;
using lang::BehaviorKind;

namespace {

// Test-side search oracles over a[l..r].
Int rightmost(const IntArray& a, Int l, Int r, Int e)
{
    for (Int i = r; i >= l; --i)
        if (a[static_cast<std::size_t>(i)] == e)
            return i;
    return -1;
}

Int leftmost(const IntArray& a, Int l, Int r, Int e)
{
    for (Int i = l; i <= r; ++i)
        if (a[static_cast<std::size_t>(i)] == e)
            return i;
    return -1;
}

int occurrences(const IntArray& a, Int l, Int r, Int e)
{
    int n = 0;
    for (Int i = l; i <= r; ++i)
        n += a[static_cast<std::size_t>(i)] == e;
    return n;
}

struct SearchInput {
    IntArray a;
    Int l, r, e;
};

SearchInput unpack(const Bindings& in)
{
    return {in.find("a")->as_array(), in.find("l")->as_int(), in.find("r")->as_int(), in.find("e")->as_int()};
}

// All arrays of length 1..3 over {0,1,2}, by brute force.
std::vector<IntArray> small_arrays()
{
    std::vector<IntArray> out;
    for (int len = 1; len <= 3; ++len) {
        int total = 1;
        for (int k = 0; k < len; ++k)
            total *= 3;
        for (int code = 0; code < total; ++code) {
            IntArray a(static_cast<std::size_t>(len));
            int c = code;
            for (int pos = len - 1; pos >= 0; --pos) {
                a[static_cast<std::size_t>(pos)] = c % 3;
                c /= 3;
            }
            out.push_back(a);
        }
    }
    return out;
}

std::uint64_t brute_search_behaviors()
{
    std::uint64_t n = 0;
    for (const auto& a : small_arrays())
        for (Int l = 0; l <= 2; ++l)
            for (Int r = 0; r <= 2; ++r)
                for (Int e = 0; e <= 2; ++e)
                    if (l <= r && r < static_cast<Int>(a.size()))
                        n += 4; // rv in {-1,0,1,2}
    return n;
}

struct SearchDomain {
    lang::AnnotatedProgram program;
    DomainSpec spec;
    std::unique_ptr<BoundDomain> bound;
    std::unique_ptr<ReferenceLabeler> labeler;

    explicit SearchDomain(const std::string& file) : program(testing::load_corpus(file))
    {
        spec = load_domain(testing::corpus_path("linear_search.domain.json"));
        bound = std::make_unique<BoundDomain>(spec, program, program.entry_function());
        labeler = load_reference(spec, program);
    }

    AccuracyReport check(unsigned threads = 1)
    {
        ManualSpec s(program, program.entry_function());
        AccuracyOptions opts;
        opts.threads = threads;
        return check_accuracy(s, *bound, *labeler, opts);
    }
};

void verify_with_oracle(const AccuracyReport& r)
{
    for (const auto& w : r.over) {
        auto s = unpack(w.input);
        CHECK(w.kind == BehaviorKind::Good);
        CHECK(w.output.find("rv")->as_int() == rightmost(s.a, s.l, s.r, s.e));
    }
    for (const auto& w : r.under) {
        auto s = unpack(w.input);
        CHECK(w.kind == BehaviorKind::Bad);
        CHECK(w.output.find("rv")->as_int() != rightmost(s.a, s.l, s.r, s.e));
    }
    CHECK(std::is_sorted(r.over.begin(), r.over.end()));
    CHECK(std::is_sorted(r.under.begin(), r.under.end()));
}

} // namespace

TEST_CASE("integer and boolean domains enumerate their product")
{
    auto prog = lang::parse_source("int f(int x, int y) { return x; }");
    auto spec = parse_domain(R"({"vars": {"x": {"range": [0, 1]}, "y": {"set": [5, 3]}}})");
    BoundDomain d(spec, prog, prog.entry_function());
    CHECK(d.predicted_count() == 4);
    std::vector<Bindings> seen;
    enumerate(d, [&](const Bindings& in, const Bindings& out) {
        CHECK(out.empty());
        seen.push_back(in);
        return true;
    });
    CHECK(seen == std::vector<Bindings>{{{"x", 0}, {"y", 3}}, {{"x", 0}, {"y", 5}}, {{"x", 1}, {"y", 3}},
                                        {{"x", 1}, {"y", 5}}});

    auto spec2 = parse_domain(R"({"vars": {"x": {"range": [0, 2]}, "rv": {"range": [0, 3]}}})");
    auto prog2 = lang::parse_source("int g(int x) { return x; }");
    BoundDomain d2(spec2, prog2, prog2.entry_function());
    CHECK(d2.predicted_count() == 12);
    std::uint64_t n = 0;
    enumerate(d2, [&](const Bindings&, const Bindings&) { return ++n, true; });
    CHECK(n == 12);
}

TEST_CASE("array domains run by length then lexicographically")
{
    auto v = VarDomain::arrays(0, 2, {1, 0});
    REQUIRE(v.size() == 1 + 2 + 4);
    std::vector<Value> got;
    for (std::uint64_t i = 0; i < v.size(); ++i)
        got.push_back(v.at(i));
    CHECK(got == std::vector<Value>{IntArray{}, IntArray{0}, IntArray{1}, IntArray{0, 0}, IntArray{0, 1},
                                    IntArray{1, 0}, IntArray{1, 1}});
    CHECK(VarDomain::booleans().at(1) == Value(true));
}

TEST_CASE("filtered search domain matches a brute-force count")
{
    SearchDomain d("linear_search_final.sc");
    CHECK(d.bound->predicted_count() == 39u * 27u * 4u);
    std::uint64_t n = 0;
    enumerate(*d.bound, [&](const Bindings& in, const Bindings&) {
        ++n;
        auto s = unpack(in);
        CHECK((0 <= s.l && s.l <= s.r && s.r < static_cast<Int>(s.a.size())));
        return true;
    });
    CHECK(n == brute_search_behaviors());
}

TEST_CASE("domain errors")
{
    auto prog = lang::parse_source("int f(int x, int[] a) { return x; }");
    CHECK_THROWS_AS(BoundDomain(parse_domain(R"({"vars": {"x": {"range": [0, 1]}}})"), prog, prog.entry_function()),
                    DomainError);
    CHECK_THROWS_AS(BoundDomain(parse_domain(R"({"vars": {"x": {"range": [0, 1]}, "a": {"range": [0, 1]}}})"), prog,
                                prog.entry_function()),
                    DomainError);
    CHECK_THROWS_AS((void)parse_domain("{not json"), DomainError);
    CHECK_THROWS_AS((void)parse_domain(R"({"vars": {"x": {"weird": 1}}})"), DomainError);
    try {
        (void)BoundDomain(parse_domain(R"({"vars": {"x": {"range": [0, 99]}, "a": {"lenRange": [0, 6],
                           "elemRange": [0, 9]}}, "cap": 1000})"),
                          prog, prog.entry_function());
        FAIL("expected DomainTooLarge");
    } catch (const DomainTooLarge& e) {
        CHECK(e.cap() == 1000);
        CHECK(e.count() > 1000);
    }
}

TEST_CASE("a filter that is undefined rejects the input")
{
    auto prog = lang::parse_source("int f(int[] a) { return 0; }");
    auto spec = parse_domain(R"({"vars": {"a": {"lenRange": [0, 2], "elemRange": [0, 1]}}, "filter": "a[1] = 1"})");
    BoundDomain d(spec, prog, prog.entry_function());
    std::vector<Bindings> seen;
    enumerate(d, [&](const Bindings& in, const Bindings&) { return seen.push_back(in), true; });
    CHECK(seen == std::vector<Bindings>{{{"a", IntArray{0, 1}}}, {{"a", IntArray{1, 1}}}});
}

TEST_CASE("labeled sets reject good/bad conflicts")
{
    LabeledSet s;
    const Bindings i{{"x", 1}}, o{{"rv", 1}};
    s.add(i, o, BehaviorKind::Good);
    s.add(i, o, BehaviorKind::Good);
    s.add(i, o, BehaviorKind::DontCare);
    CHECK(s.size() == 1);
    CHECK(s.find(i, o) == BehaviorKind::Good);
    CHECK_THROWS_AS(s.add(i, o, BehaviorKind::Bad), InconsistentLabels);
}

namespace {

LabeledSet random_labels(std::mt19937& rng)
{
    LabeledSet s;
    std::uniform_int_distribution<int> v(0, 3), kind(0, 2), count(0, 25);
    const int n = count(rng);
    for (int k = 0; k < n; ++k) {
        const Bindings i{{"x", v(rng)}}, o{{"rv", v(rng)}};
        const auto want = static_cast<BehaviorKind>(kind(rng));
        auto have = s.find(i, o);
        if (have && *have != BehaviorKind::DontCare && want != BehaviorKind::DontCare && *have != want)
            continue;
        s.add(i, o, want);
    }
    return s;
}

} // namespace

TEST_CASE("a generated spec is accurate on its own labels")
{
    std::mt19937 rng(20261017);
    for (int round = 0; round < 300; ++round) {
        auto labels = random_labels(rng);
        auto spec = generate_spec(labels);
        auto r = check_accuracy(spec, labels);
        CHECK(r.accurate());
        CHECK(r.checked == labels.size());
    }
}

TEST_CASE("accuracy is preserved on subsets of the labels")
{
    std::mt19937 rng(7);
    for (int round = 0; round < 300; ++round) {
        auto labels = random_labels(rng);
        auto spec = generate_spec(labels);
        LabeledSet subset;
        for (const auto& e : labels.entries())
            if (rng() % 2)
                subset.add(e.input, e.output, e.kind);
        CHECK(check_accuracy(spec, subset).accurate());
    }
}

TEST_CASE("report merge is order-insensitive")
{
    std::mt19937 rng(11);
    auto prog = lang::parse_source("int f(int x) { @pre p (x >= 1); @post q (rv = x); }");
    ManualSpec spec(prog, prog.entry_function());
    for (int round = 0; round < 50; ++round) {
        auto labels = random_labels(rng);
        AccuracyReport parts[3];
        int k = 0;
        for (const auto& e : labels.entries())
            classify(spec, e.input, e.output, e.kind, parts[k++ % 3]);
        AccuracyReport left = parts[0], right = parts[1];
        left.merge(parts[1]);
        left.merge(parts[2]);
        right.merge(parts[2]);
        AccuracyReport right_first = parts[0];
        right_first.merge(right);
        auto whole = check_accuracy(spec, labels);
        for (const auto* r : {&left, &right_first}) {
            CHECK(r->over_count == whole.over_count);
            CHECK(r->under_count == whole.under_count);
            CHECK(r->checked == whole.checked);
            CHECK(r->over.size() == whole.over.size());
            CHECK(r->under.size() == whole.under.size());
            for (std::size_t j = 0; j < r->under.size() && j < whole.under.size(); ++j)
                CHECK(r->under[j].input == whole.under[j].input);
        }
    }
}

TEST_CASE("final search spec is accurate on the small domain")
{
    const auto start = std::chrono::steady_clock::now();
    SearchDomain d("linear_search_final.sc");
    auto r = d.check();
    CHECK(to_string(r.verdict()) == std::string_view("accurate"));
    CHECK(r.checked == brute_search_behaviors());
    CHECK(r.over.empty());
    CHECK(r.under.empty());
    CHECK(r.undefined.empty());
    CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(30));
}

TEST_CASE("spec before Pair 6 rejects good behaviors")
{
    SearchDomain d("linear_search_pre_pair6.sc");
    auto r = d.check();
    CHECK(r.over_count > 0);
    // It also admits off-range matches, so the combined verdict is both.
    CHECK(r.verdict() == AccuracyVerdict::Both);
    verify_with_oracle(r);
    // rv=-1 while e occurs only outside [l, r]
    bool found = false;
    for (const auto& w : r.over) {
        auto s = unpack(w.input);
        if (w.output.find("rv")->as_int() == -1 && occurrences(s.a, 0, static_cast<Int>(s.a.size()) - 1, s.e) > 0)
            found = true;
    }
    CHECK(found);
}

TEST_CASE("spec before Pair 4 admits bad behaviors")
{
    SearchDomain d("linear_search_pre_pair4.sc");
    auto r = d.check();
    CHECK(r.verdict() == AccuracyVerdict::UnderConstrained);
    CHECK(r.over_count == 0);
    CHECK(r.under_count > 0);
    verify_with_oracle(r);
    for (const auto& w : r.undefined) {
        auto s = unpack(w.input);
        CHECK(w.output.find("rv")->as_int() >= static_cast<Int>(s.a.size()));
    }
}

TEST_CASE("parallel accuracy run matches the sequential one")
{
    SearchDomain d("linear_search_pre_pair6.sc");
    auto a = d.check(1);
    auto b = d.check(4);
    CHECK(a.over_count == b.over_count);
    CHECK(a.under_count == b.under_count);
    CHECK(a.undefined_count == b.undefined_count);
    CHECK(a.checked == b.checked);
    REQUIRE(a.under.size() == b.under.size());
    for (std::size_t k = 0; k < a.under.size(); ++k) {
        CHECK(a.under[k].input == b.under[k].input);
        CHECK(a.under[k].output == b.under[k].output);
    }
}

TEST_CASE("fail-fast stops at the first witness")
{
    SearchDomain d("linear_search_pre_pair4.sc");
    ManualSpec s(d.program, d.program.entry_function());
    AccuracyOptions opts;
    opts.fail_fast = true;
    auto r = check_accuracy(s, *d.bound, *d.labeler, opts);
    CHECK(r.stopped_early);
    CHECK(r.over_count + r.under_count + r.undefined_count == 1);
}

TEST_CASE("leftmost and rightmost specs differ exactly on repeated matches")
{
    SearchDomain d("linear_search_leftmost.sc");
    LabeledSet labels;
    enumerate(*d.bound, [&](const Bindings& in, const Bindings& out) {
        labels.add(in, out, d.labeler->label(in, out));
        return true;
    });
    auto generated = generate_spec(labels);
    ManualSpec leftmost_spec(d.program, d.program.entry_function());
    auto diff = compare_specs(leftmost_spec, generated, *d.bound);

    std::uint64_t repeated = 0;
    for (const auto& a : small_arrays())
        for (Int l = 0; l <= 2; ++l)
            for (Int r = l; r < static_cast<Int>(a.size()); ++r)
                for (Int e = 0; e <= 2; ++e)
                    repeated += occurrences(a, l, r, e) >= 2;
    REQUIRE(repeated > 0);
    CHECK(diff.undefined_count == 0);
    CHECK(diff.only_first_count == repeated);
    CHECK(diff.only_second_count == repeated);
    for (const auto& w : diff.only_first) {
        auto s = unpack(w.input);
        CHECK(occurrences(s.a, s.l, s.r, s.e) >= 2);
        CHECK(w.output.find("rv")->as_int() == leftmost(s.a, s.l, s.r, s.e));
    }
    for (const auto& w : diff.only_second) {
        auto s = unpack(w.input);
        CHECK(w.output.find("rv")->as_int() == rightmost(s.a, s.l, s.r, s.e));
    }
}

TEST_CASE("reference labels agree with the test oracle")
{
    SearchDomain d("linear_search_final.sc");
    int checked = 0;
    enumerate(*d.bound, [&](const Bindings& in, const Bindings& out) {
        auto s = unpack(in);
        const bool good = out.find("rv")->as_int() == rightmost(s.a, s.l, s.r, s.e);
        CHECK(d.labeler->label(in, out) == (good ? BehaviorKind::Good : BehaviorKind::Bad));
        ++checked;
        return true;
    });
    CHECK(checked > 0);
}
