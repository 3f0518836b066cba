#pragma once

#include "speccheck/correction/action.hpp"
#include "speccheck/eval/tribool.hpp"
#include "speccheck/lang/ast.hpp"

#include <stdexcept>

namespace speccheck::correction {

class InvalidKind : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Precondition adequacy. Undefined asks for a well-defined P.
[[nodiscard]] Action precondition_action(lang::BehaviorKind kind, const eval::TriBool& p, const Bindings& input);

// Postcondition adequacy for spec-only checking. Throws InvalidKind for
// dontCare, which constrains no postcondition.
[[nodiscard]] Action postcondition_action(lang::BehaviorKind kind, const eval::TriBool& q, const Bindings& input,
                                          const Bindings& output);

// {P}S{Q} adequacy when P(i) holds; g is the oracle's judgement of o.
[[nodiscard]] Action triple_action(bool g, const eval::TriBool& q, const Bindings& input, const Bindings& output);

// {P}S{Q} adequacy when P(i) is false.
[[nodiscard]] Action neg_triple_action(bool g, const eval::TriBool& q, const Bindings& input, const Bindings& output);

} // namespace speccheck::correction
