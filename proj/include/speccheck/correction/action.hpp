#pragma once

#include "speccheck/lang/value.hpp"

#include <optional>
#include <string>
#include <vector>

namespace speccheck::correction {

enum class Target { P, Q };

std::string_view to_string(Target t) noexcept;

enum class BasicKind {
    Skip,
    Weaken,          // make R(v) true
    Strengthen,      // make R(v) false
    ReviseImpl,      // stop S from producing o on i
    MakeWellDefined, // make R(v) evaluable
    RaiseBudget,     // the run hit a step or depth limit
};

std::string_view to_string(BasicKind k) noexcept;

// The valuation an action refers to: an input, or an input/output pair.
struct Witness {
    Bindings input;
    std::optional<Bindings> output;

    friend bool operator==(const Witness&, const Witness&) = default;
};

// Boolean formula over basic actions.
class Action {
public:
    enum class Op { Basic, And, Or };

    static Action skip();
    static Action weaken(Target t, Witness w);
    static Action strengthen(Target t, Witness w);
    static Action revise_impl(Witness w);
    static Action make_well_defined(Target t, Witness w);
    static Action raise_budget(Witness w);
    static Action both(Action a, Action b);
    static Action either(Action a, Action b);

    [[nodiscard]] Op op() const noexcept { return op_; }
    [[nodiscard]] BasicKind kind() const noexcept { return kind_; }
    [[nodiscard]] const std::optional<Target>& target() const noexcept { return target_; }
    [[nodiscard]] const Witness& witness() const noexcept { return witness_; }
    [[nodiscard]] const std::vector<Action>& operands() const noexcept { return operands_; }

    [[nodiscard]] bool is_skip() const noexcept { return op_ == Op::Basic && kind_ == BasicKind::Skip; }
    [[nodiscard]] bool is_basic(BasicKind k) const noexcept { return op_ == Op::Basic && kind_ == k; }

    // `Weaken(P)`, `And(Strengthen(Q), ReviseImpl)`
    [[nodiscard]] std::string summary() const;
    // summary plus witnesses.
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const Action&, const Action&) = default;

private:
    Action() = default;
    static Action basic(BasicKind k, std::optional<Target> t, Witness w);

    Op op_ = Op::Basic;
    BasicKind kind_ = BasicKind::Skip;
    std::optional<Target> target_;
    Witness witness_;
    std::vector<Action> operands_;
};

} // namespace speccheck::correction
