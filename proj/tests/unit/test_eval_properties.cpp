#include "doctest.h"

#include "corpus.hpp"

#include "speccheck/eval/evaluator.hpp"
#include "speccheck/lang/parser.hpp"

#include <random>

using namespace speccheck;
using namespace speccheck::eval;
using namespace speccheck::lang;

namespace {

// Random well-typed predicate text over ints x, y, array a and any bound names in scope.
class PredGen {
public:
    explicit PredGen(std::uint32_t seed) : rng_(seed) {}

    std::string boolean(int depth, std::vector<std::string> bound = {})
    {
        bound_ = std::move(bound);
        return b(depth);
    }

    Bindings env()
    {
        Bindings out;
        out.set("x", Value(Int{pick(-3, 3)}));
        out.set("y", Value(Int{pick(-3, 3)}));
        IntArray a(static_cast<std::size_t>(pick(0, 3)));
        for (auto& v : a)
            v = pick(-2, 2);
        out.set("a", Value(a));
        return out;
    }

    Int pick(Int lo, Int hi) { return std::uniform_int_distribution<Int>(lo, hi)(rng_); }

private:
    std::mt19937 rng_;
    std::vector<std::string> bound_;
    int fresh_ = 0;

    std::string i(int depth)
    {
        const Int choice = depth <= 0 ? pick(0, 3) : pick(0, 9);
        switch (choice) {
        case 0: return std::to_string(pick(-3, 3));
        case 1: return "x";
        case 2: return "y";
        case 3:
            if (!bound_.empty())
                return bound_[static_cast<std::size_t>(pick(0, static_cast<Int>(bound_.size()) - 1))];
            return "a.size";
        case 4: return "a[" + i(depth - 1) + "]";
        case 5: return "(" + i(depth - 1) + " + " + i(depth - 1) + ")";
        case 6: return "(" + i(depth - 1) + " - " + i(depth - 1) + ")";
        case 7: return "(" + i(depth - 1) + " * " + i(depth - 1) + ")";
        case 8: return "(" + i(depth - 1) + " / " + i(depth - 1) + ")";
        default: return "(" + i(depth - 1) + " % " + i(depth - 1) + ")";
        }
    }

    std::string b(int depth)
    {
        static const char* const cmp[] = {"=", "!=", "<", "<=", ">", ">="};
        const Int choice = depth <= 0 ? pick(0, 1) : pick(0, 7);
        switch (choice) {
        case 0: return pick(0, 4) == 0 ? (pick(0, 1) ? "true" : "false") : "(" + i(1) + " " + cmp[pick(0, 5)] + " " + i(1) + ")";
        case 1: return "(" + i(depth) + " " + cmp[pick(0, 5)] + " " + i(depth) + ")";
        case 2: return "!" + b(depth - 1);
        case 3: return "(" + b(depth - 1) + " && " + b(depth - 1) + ")";
        case 4: return "(" + b(depth - 1) + " || " + b(depth - 1) + ")";
        case 5: return "(" + b(depth - 1) + " => " + b(depth - 1) + ")";
        default: {
            const std::string var = "k" + std::to_string(fresh_++);
            const std::string lo = std::to_string(pick(-2, 2));
            const std::string hi = std::to_string(pick(-2, 3));
            bound_.push_back(var);
            std::string body = b(depth - 1);
            bound_.pop_back();
            return std::string(choice == 6 ? "forall" : "exists") + " int " + var + ":[" + lo + " .. " + hi + "] (" +
                   body + ")";
        }
        }
    }
};

const AnnotatedProgram& no_functions()
{
    static const AnnotatedProgram empty;
    return empty;
}

TriBool eval_text(const std::string& text, const Bindings& env)
{
    return eval_predicate(parse_predicate(text), Env(no_functions(), env));
}

// Ordered instance fold: the first instance that is not the neutral value decides.
TriBool instance_fold(bool forall, const std::string& var, Int lo, Int hi, const std::string& body, Bindings env)
{
    const Expr parsed = parse_predicate(body);
    for (Int k = lo; k <= hi; ++k) {
        env.set(var, Value(k));
        TriBool t = eval_predicate(parsed, Env(no_functions(), env));
        if (t.is_undefined() || t.is_true() != forall)
            return t;
    }
    return TriBool::of(forall);
}

} // namespace

TEST_CASE("De Morgan holds on 1000 random predicates")
{
    PredGen gen(20261017);
    for (int n = 0; n < 1000; ++n) {
        const std::string A = gen.boolean(3);
        const std::string B = gen.boolean(3);
        const Bindings env = gen.env();
        CAPTURE(A);
        CAPTURE(B);
        CAPTURE(env.to_source());
        CHECK(eval_text("!(" + A + " && " + B + ")", env).same_state(eval_text("(!" + A + " || !" + B + ")", env)));
        CHECK(eval_text("!(" + A + " || " + B + ")", env).same_state(eval_text("(!" + A + " && !" + B + ")", env)));
        CHECK(eval_text("(" + A + " => " + B + ")", env).same_state(eval_text("(!" + A + " || " + B + ")", env)));
    }
}

TEST_CASE("multi-binder quantifiers equal their nesting on 1000 random bodies")
{
    PredGen gen(7);
    for (int n = 0; n < 1000; ++n) {
        const std::string body = gen.boolean(2, {"u", "v"});
        const Bindings env = gen.env();
        const std::string r1 = "[" + std::to_string(gen.pick(-1, 1)) + " .. " + std::to_string(gen.pick(-1, 2)) + "]";
        const std::string r2 = "[" + std::to_string(gen.pick(-1, 1)) + " .. " + std::to_string(gen.pick(-1, 2)) + "]";
        for (const char* q : {"forall", "exists"}) {
            const std::string multi = std::string(q) + " (int u:" + r1 + ", int v:" + r2 + ") { " + body + " }";
            const std::string nested =
                std::string(q) + " int u:" + r1 + " (" + std::string(q) + " int v:" + r2 + " (" + body + "))";
            CAPTURE(multi);
            CAPTURE(env.to_source());
            CHECK(eval_text(multi, env).same_state(eval_text(nested, env)));
        }
    }
}

TEST_CASE("quantifiers equal the ordered fold of their instances")
{
    PredGen gen(99);
    for (int n = 0; n < 1000; ++n) {
        const std::string body = gen.boolean(2, {"k"});
        const Bindings env = gen.env();
        const Int lo = gen.pick(-2, 2);
        const Int hi = gen.pick(-2, 3);
        const std::string range = "[" + std::to_string(lo) + " .. " + std::to_string(hi) + "]";
        CAPTURE(body);
        CAPTURE(range);
        CAPTURE(env.to_source());
        CHECK(eval_text("forall int k:" + range + " (" + body + ")", env)
                  .same_state(instance_fold(true, "k", lo, hi, body, env)));
        CHECK(eval_text("exists int k:" + range + " (" + body + ")", env)
                  .same_state(instance_fold(false, "k", lo, hi, body, env)));
        CHECK(eval_text("exists int k:" + range + " (" + body + ")", env)
                  .same_state(eval_text("!forall int k:" + range + " (!" + body + ")", env)));
    }
}

TEST_CASE("every corpus program terminates within the default budgets")
{
    for (const char* name : {"linear_search_annotated.sc", "rightmost_ref.sc", "search_sorted.sc", "same_words.sc"}) {
        CAPTURE(name);
        auto p = testing::load_corpus(name);
        for (const auto& f : p.functions) {
            for (const auto& b : f.behaviors) {
                if (f.spec_only())
                    continue;
                auto out = exec_function(p, f, b.input);
                CHECK_FALSE(std::holds_alternative<BudgetExceeded>(out));
                CHECK_FALSE(eval_pre(p, f, b.input).value.is_undefined());
            }
        }
    }
}
