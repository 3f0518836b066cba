#include "speccheck/correction/action.hpp"

namespace speccheck::correction {

std::string_view to_string(Target t) noexcept
{
    return t == Target::P ? "P" : "Q";
}

std::string_view to_string(BasicKind k) noexcept
{
    switch (k) {
    case BasicKind::Skip: return "Skip";
    case BasicKind::Weaken: return "Weaken";
    case BasicKind::Strengthen: return "Strengthen";
    case BasicKind::ReviseImpl: return "ReviseImpl";
    case BasicKind::MakeWellDefined: return "MakeWellDefined";
    case BasicKind::RaiseBudget: return "RaiseBudget";
    }
    return "?";
}

Action Action::basic(BasicKind k, std::optional<Target> t, Witness w)
{
    Action a;
    a.kind_ = k;
    a.target_ = t;
    a.witness_ = std::move(w);
    return a;
}

Action Action::skip() { return basic(BasicKind::Skip, std::nullopt, {}); }
Action Action::weaken(Target t, Witness w) { return basic(BasicKind::Weaken, t, std::move(w)); }
Action Action::strengthen(Target t, Witness w) { return basic(BasicKind::Strengthen, t, std::move(w)); }
Action Action::revise_impl(Witness w) { return basic(BasicKind::ReviseImpl, std::nullopt, std::move(w)); }
Action Action::make_well_defined(Target t, Witness w) { return basic(BasicKind::MakeWellDefined, t, std::move(w)); }
Action Action::raise_budget(Witness w) { return basic(BasicKind::RaiseBudget, std::nullopt, std::move(w)); }

Action Action::both(Action a, Action b)
{
    Action r;
    r.op_ = Op::And;
    r.operands_ = {std::move(a), std::move(b)};
    return r;
}

Action Action::either(Action a, Action b)
{
    Action r;
    r.op_ = Op::Or;
    r.operands_ = {std::move(a), std::move(b)};
    return r;
}

namespace {

std::string render(const Action& a, bool with_witness)
{
    if (a.op() != Action::Op::Basic) {
        std::string out = a.op() == Action::Op::And ? "And(" : "Or(";
        for (std::size_t i = 0; i < a.operands().size(); ++i) {
            if (i)
                out += ", ";
            out += render(a.operands()[i], with_witness);
        }
        return out + ")";
    }
    std::string out(to_string(a.kind()));
    if (a.kind() == BasicKind::Skip)
        return out;
    std::vector<std::string> args;
    if (a.target())
        args.emplace_back(to_string(*a.target()));
    if (with_witness) {
        std::string w = "i=" + a.witness().input.to_source();
        if (a.witness().output)
            w += ", o=" + a.witness().output->to_source();
        args.push_back(std::move(w));
    }
    if (args.empty())
        return out;
    out += "(";
    for (std::size_t i = 0; i < args.size(); ++i)
        out += (i ? ", " : "") + args[i];
    return out + ")";
}

} // namespace

std::string Action::summary() const { return render(*this, false); }
std::string Action::to_string() const { return render(*this, true); }

} // namespace speccheck::correction
