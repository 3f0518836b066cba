#pragma once

#include "speccheck/correction/action.hpp"
#include "speccheck/eval/evaluator.hpp"
#include "speccheck/lang/ast.hpp"

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace speccheck::correction {

// Which rule set produced a verdict.
enum class Stage {
    Pre,       // Table 1
    Post,      // Table 2 (spec-only), or no action for dontCare
    Triple,    // Table 3, P(i) true
    NegTriple, // Table 4, P(i) false
    Exec,      // S faulted or ran out of budget
};

std::string_view to_string(Stage s) noexcept;

struct Verdict {
    std::size_t behavior_index = 0;
    lang::BehaviorKind kind = lang::BehaviorKind::Good;
    Stage stage = Stage::Pre;
    Bindings input;
    // The behavior's output in spec-only mode, the executed output otherwise.
    std::optional<Bindings> output;
    eval::TriBool p = eval::TriBool::falsity();
    std::optional<eval::TriBool> q;
    std::optional<bool> g;
    bool required_p = true;
    std::optional<bool> required_q;
    Action action = Action::skip();
    // Masked faults, execution faults and other notes.
    std::vector<std::string> warnings;
};

struct OracleQuery {
    std::size_t behavior_index = 0;
    Bindings input;
    Bindings output;
};

struct Done {};

using StepResult = std::variant<Verdict, OracleQuery, Done>;

struct CheckOptions {
    eval::Budget budget;
    // Check the behaviors' own outputs even when the entry function has a body.
    bool spec_only = false;
};

// g(i,o) from the developer, or nullopt when unknown.
using OracleLookup = std::function<std::optional<bool>(const Bindings& input, const Bindings& output)>;

// True when `o` equals the output of a good behavior with input `i`;
// nullopt when no such behavior exists.
[[nodiscard]] std::optional<bool> g_from_behaviors(const lang::FunctionDef& f, const Bindings& input,
                                                   const Bindings& output);

[[nodiscard]] bool same_valuation(const Bindings& a, const Bindings& b);

// First pause point: P(i) against Table 1.
[[nodiscard]] Verdict pre_verdict(const lang::AnnotatedProgram& program, std::size_t index,
                                  const CheckOptions& options);

// Second pause point: Q(i,o) against Table 2 when S is empty, or S, Q and g
// against Tables 3 and 4. Returns an OracleQuery when g cannot be resolved
// from the behaviors or `lookup`.
[[nodiscard]] std::variant<Verdict, OracleQuery> post_verdict(const lang::AnnotatedProgram& program,
                                                              std::size_t index, const CheckOptions& options,
                                                              const OracleLookup& lookup);

struct SpecCheckResult {
    std::vector<Verdict> verdicts;
    std::vector<OracleQuery> unresolved;
};

// Non-interactive run over every behavior of the entry function, in order.
[[nodiscard]] SpecCheckResult run_spec_check(const lang::AnnotatedProgram& program, const CheckOptions& options,
                                             const OracleLookup& lookup = {});

// One line per verdict: `#2 good pre P=true (want true): Skip`.
[[nodiscard]] std::string describe(const Verdict& v);

} // namespace speccheck::correction
