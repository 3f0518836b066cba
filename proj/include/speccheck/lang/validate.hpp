#pragma once

#include "speccheck/lang/ast.hpp"

#include <set>
#include <string>
#include <vector>

namespace speccheck::lang {

enum class Severity { Error, Warning };

struct Diagnostic {
    Severity severity = Severity::Error;
    SourceLoc loc;
    std::string message;

    [[nodiscard]] std::string to_string() const;
};

// Empty iff every structural, scoping and typing invariant holds. Missing
// input/output variables in a function's specification are warnings; all
// other findings are errors.
[[nodiscard]] std::vector<Diagnostic> validate(const AnnotatedProgram& program);

[[nodiscard]] bool has_errors(const std::vector<Diagnostic>& diagnostics) noexcept;

// Free variables of an expression (quantifier-bound names excluded).
[[nodiscard]] std::set<std::string> free_variables(const Expr& expr);

} // namespace speccheck::lang
