#pragma once

#include "speccheck/lang/ast.hpp"

#include <string>

namespace speccheck::lang {

// Canonical source text. parse(print(p)) is structurally equal to p.
[[nodiscard]] std::string pretty_print(const AnnotatedProgram& program);
[[nodiscard]] std::string pretty_print(const FunctionDef& function);
[[nodiscard]] std::string pretty_print(const Expr& expr);
[[nodiscard]] std::string pretty_print(const NamedPredicate& pred, bool is_pre);
[[nodiscard]] std::string pretty_print(const Behavior& behavior);

} // namespace speccheck::lang
