#pragma once

#include "speccheck/lang/source.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace speccheck::eval {

enum class FaultKind {
    IndexOutOfBounds,
    SliceOutOfBounds,
    DivisionByZero,
    Overflow,
    TypeMismatch,
    NoImplementation,
    MissingReturn,
    StepBudget,
    DepthBudget,
};

std::string_view to_string(FaultKind k) noexcept;

struct Fault {
    FaultKind kind = FaultKind::TypeMismatch;
    lang::SourceLoc loc;
    std::string message;

    [[nodiscard]] bool is_budget() const noexcept
    {
        return kind == FaultKind::StepBudget || kind == FaultKind::DepthBudget;
    }
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const Fault&, const Fault&) = default;
};

// Outcome of evaluating a predicate. Undefined always carries the fault
// that made it so.
class TriBool {
public:
    enum class State { True, False, Undefined };

    static TriBool of(bool b) { return TriBool(b ? State::True : State::False, std::nullopt); }
    static TriBool truth() { return of(true); }
    static TriBool falsity() { return of(false); }
    static TriBool undefined(Fault reason) { return TriBool(State::Undefined, std::move(reason)); }

    [[nodiscard]] State state() const noexcept { return state_; }
    [[nodiscard]] bool is_true() const noexcept { return state_ == State::True; }
    [[nodiscard]] bool is_false() const noexcept { return state_ == State::False; }
    [[nodiscard]] bool is_undefined() const noexcept { return state_ == State::Undefined; }
    [[nodiscard]] const Fault& reason() const { return *reason_; }

    [[nodiscard]] TriBool negate() const
    {
        if (is_undefined())
            return *this;
        return of(!is_true());
    }

    // "true", "false", "undefined"
    [[nodiscard]] std::string_view name() const noexcept;
    // name plus the fault for Undefined.
    [[nodiscard]] std::string to_string() const;

    // Compares truth state only; the reasons of two Undefined values may differ.
    [[nodiscard]] bool same_state(const TriBool& o) const noexcept { return state_ == o.state_; }

    friend bool operator==(const TriBool&, const TriBool&) = default;

private:
    TriBool(State s, std::optional<Fault> r) : state_(s), reason_(std::move(r)) {}

    State state_ = State::False;
    std::optional<Fault> reason_;
};

} // namespace speccheck::eval
