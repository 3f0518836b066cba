#include "speccheck/correction/tables.hpp"

namespace speccheck::correction {

using lang::BehaviorKind;

Action precondition_action(BehaviorKind kind, const eval::TriBool& p, const Bindings& input)
{
    Witness w{input, std::nullopt};
    if (p.is_undefined())
        return Action::make_well_defined(Target::P, w);
    if (kind == BehaviorKind::DontCare)
        return p.is_true() ? Action::strengthen(Target::P, w) : Action::skip();
    return p.is_true() ? Action::skip() : Action::weaken(Target::P, w);
}

Action postcondition_action(BehaviorKind kind, const eval::TriBool& q, const Bindings& input, const Bindings& output)
{
    if (kind == BehaviorKind::DontCare)
        throw InvalidKind("dontCare behaviors take no postcondition action");
    Witness w{input, output};
    if (q.is_undefined())
        return Action::make_well_defined(Target::Q, w);
    if (kind == BehaviorKind::Good)
        return q.is_true() ? Action::skip() : Action::weaken(Target::Q, w);
    return q.is_true() ? Action::strengthen(Target::Q, w) : Action::skip();
}

Action triple_action(bool g, const eval::TriBool& q, const Bindings& input, const Bindings& output)
{
    Witness w{input, output};
    if (q.is_undefined())
        return Action::make_well_defined(Target::Q, w);
    if (g)
        return q.is_true() ? Action::skip() : Action::weaken(Target::Q, w);
    if (q.is_true())
        return Action::both(Action::strengthen(Target::Q, w), Action::revise_impl(w));
    return Action::revise_impl(w);
}

Action neg_triple_action(bool g, const eval::TriBool& q, const Bindings& input, const Bindings& output)
{
    Witness w{input, output};
    if (q.is_undefined())
        return Action::make_well_defined(Target::Q, w);
    if (g)
        return q.is_true() ? Action::skip() : Action::either(Action::strengthen(Target::Q, w), Action::skip());
    if (q.is_true())
        return Action::either(Action::strengthen(Target::P, Witness{input, std::nullopt}), Action::revise_impl(w));
    return Action::skip();
}

} // namespace speccheck::correction
