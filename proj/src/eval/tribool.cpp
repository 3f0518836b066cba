#include "speccheck/eval/tribool.hpp"

namespace speccheck::eval {

std::string_view to_string(FaultKind k) noexcept
{
    switch (k) {
    case FaultKind::IndexOutOfBounds: return "index-out-of-bounds";
    case FaultKind::SliceOutOfBounds: return "slice-out-of-bounds";
    case FaultKind::DivisionByZero: return "division-by-zero";
    case FaultKind::Overflow: return "integer-overflow";
    case FaultKind::TypeMismatch: return "type-mismatch";
    case FaultKind::NoImplementation: return "no-implementation";
    case FaultKind::MissingReturn: return "missing-return";
    case FaultKind::StepBudget: return "step-budget-exceeded";
    case FaultKind::DepthBudget: return "recursion-budget-exceeded";
    }
    return "fault";
}

std::string Fault::to_string() const
{
    return std::string(eval::to_string(kind)) + " at " + loc.to_string() + ": " + message;
}

std::string_view TriBool::name() const noexcept
{
    switch (state_) {
    case State::True: return "true";
    case State::False: return "false";
    case State::Undefined: return "undefined";
    }
    return "?";
}

std::string TriBool::to_string() const
{
    if (is_undefined())
        return "undefined(" + reason_->to_string() + ")";
    return std::string(name());
}

} // namespace speccheck::eval
