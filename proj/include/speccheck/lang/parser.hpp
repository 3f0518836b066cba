#pragma once

#include "speccheck/lang/ast.hpp"
#include "speccheck/lang/lexer.hpp"

#include <string_view>
#include <vector>

namespace speccheck::lang {

// Throws ParseError. Annotation blocks attach to their enclosing function
// regardless of where they appear among its statements.
[[nodiscard]] AnnotatedProgram parse(const std::vector<Token>& tokens);

// tokenize + parse. Throws LexError or ParseError.
[[nodiscard]] AnnotatedProgram parse_source(std::string_view source);

// A single predicate expression, e.g. for domain filters.
[[nodiscard]] Expr parse_predicate(std::string_view text);

} // namespace speccheck::lang
