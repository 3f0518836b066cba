#pragma once

#include "speccheck/eval/tribool.hpp"
#include "speccheck/lang/ast.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

namespace speccheck::eval {

struct Budget {
    std::uint64_t max_steps = 1'000'000;
    std::uint32_t max_depth = 10'000;
};

// A reference to a variable with no binding. Signals a validation escape;
// never turned into Undefined.
class UnboundVariable : public std::runtime_error {
public:
    explicit UnboundVariable(const std::string& name)
        : std::runtime_error("unbound variable '" + name + "'"), name_(name)
    {
    }
    [[nodiscard]] const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class Env {
public:
    explicit Env(const lang::AnnotatedProgram& program, Bindings bindings = {})
        : program_(&program), bindings_(std::move(bindings))
    {
    }

    void bind(std::string_view name, Value v) { bindings_.set(name, std::move(v)); }
    [[nodiscard]] const Bindings& bindings() const noexcept { return bindings_; }
    [[nodiscard]] const lang::AnnotatedProgram& program() const noexcept { return *program_; }

private:
    const lang::AnnotatedProgram* program_;
    Bindings bindings_;
};

// Runs `fn` on a thread with enough native stack for the default depth
// budget. Batch callers wrap whole loops so evaluations run inline.
void run_on_deep_stack(const std::function<void()>& fn);

struct PredicateResult {
    TriBool value = TriBool::falsity();
    // Faults whose Undefined was hidden by a False (or True) sibling.
    std::vector<Fault> masked;
};

// Three-valued evaluation. Clauses of a named predicate are conjoined.
// `a && b` is False when either side is False, `a || b` True when either
// side is True, `a => b` is `!a || b`. Quantifiers evaluate their range
// first and visit it in ascending order; the first element that is not
// neutral (False for forall, True for exists, or Undefined) decides.
[[nodiscard]] PredicateResult eval_predicate_detailed(const lang::NamedPredicate& pred, const Env& env,
                                                      const Budget& budget = {});
[[nodiscard]] PredicateResult eval_predicate_detailed(const lang::Expr& pred, const Env& env,
                                                      const Budget& budget = {});
[[nodiscard]] TriBool eval_predicate(const lang::NamedPredicate& pred, const Env& env, const Budget& budget = {});
[[nodiscard]] TriBool eval_predicate(const lang::Expr& pred, const Env& env, const Budget& budget = {});

[[nodiscard]] std::variant<Value, Fault> eval_builtin(std::string_view name, std::span<const Value> args);

enum class BudgetKind { Steps, RecursionDepth };

struct Returned {
    Value rv;
    // Final contents of every array parameter.
    Bindings final_ref_state;
};

struct ExecFault {
    Fault reason;
};

struct BudgetExceeded {
    BudgetKind kind = BudgetKind::Steps;
    Fault reason;
};

using ExecOutcome = std::variant<Returned, ExecFault, BudgetExceeded>;

// Arrays are passed by reference, scalars by value. Never hangs: loops and
// recursion are bounded by `budget`.
[[nodiscard]] ExecOutcome exec_function(const lang::AnnotatedProgram& program, const lang::FunctionDef& f,
                                        const Bindings& args, const Budget& budget = {});

// Output valuation of an execution: rv plus every array parameter whose
// final contents differ from the input.
[[nodiscard]] Bindings outputs_of(const lang::FunctionDef& f, const Bindings& input, const Returned& r);

// P(i) for the given function; an absent @pre is the constant False.
[[nodiscard]] PredicateResult eval_pre(const lang::AnnotatedProgram& program, const lang::FunctionDef& f,
                                       const Bindings& input, const Budget& budget = {});
// Q(i,o); output bindings shadow inputs of the same name. An absent @post
// is the constant True.
[[nodiscard]] PredicateResult eval_post(const lang::AnnotatedProgram& program, const lang::FunctionDef& f,
                                        const Bindings& input, const Bindings& output, const Budget& budget = {});

[[nodiscard]] TriBool eval_pre_on_behavior(const lang::AnnotatedProgram& program, const lang::Behavior& b,
                                           const Budget& budget = {});
[[nodiscard]] TriBool eval_post_on_behavior(const lang::AnnotatedProgram& program, const lang::Behavior& b,
                                            const Budget& budget = {});

} // namespace speccheck::eval
