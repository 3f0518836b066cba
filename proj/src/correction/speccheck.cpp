#include "speccheck/correction/speccheck.hpp"

#include "speccheck/correction/tables.hpp"

namespace speccheck::correction {

using namespace speccheck::lang;
using eval::TriBool;

std::string_view to_string(Stage s) noexcept
{
    switch (s) {
    case Stage::Pre: return "pre";
    case Stage::Post: return "post";
    case Stage::Triple: return "triple";
    case Stage::NegTriple: return "neg-triple";
    case Stage::Exec: return "exec";
    }
    return "?";
}

bool same_valuation(const Bindings& a, const Bindings& b)
{
    if (a.size() != b.size())
        return false;
    for (const auto& [name, v] : a) {
        const Value* other = b.find(name);
        if (!other || *other != v)
            return false;
    }
    return true;
}

std::optional<bool> g_from_behaviors(const FunctionDef& f, const Bindings& input, const Bindings& output)
{
    for (const auto& b : f.behaviors)
        if (b.kind == BehaviorKind::Good && same_valuation(b.input, input) && same_valuation(b.output, output))
            return true;
    return std::nullopt;
}

namespace {

void note_masked(Verdict& v, const char* what, const std::vector<eval::Fault>& masked)
{
    for (const auto& f : masked)
        v.warnings.push_back(std::string("masked fault in ") + what + ": " + f.to_string());
}

} // namespace

Verdict pre_verdict(const AnnotatedProgram& program, std::size_t index, const CheckOptions& options)
{
    const FunctionDef& f = program.entry_function();
    const Behavior& b = f.behaviors.at(index);
    Verdict v;
    v.behavior_index = index;
    v.kind = b.kind;
    v.stage = Stage::Pre;
    v.input = b.input;
    auto p = eval::eval_pre(program, f, b.input, options.budget);
    v.p = p.value;
    note_masked(v, "P", p.masked);
    v.required_p = b.kind != BehaviorKind::DontCare;
    v.action = precondition_action(b.kind, v.p, b.input);
    return v;
}

std::variant<Verdict, OracleQuery> post_verdict(const AnnotatedProgram& program, std::size_t index,
                                                const CheckOptions& options, const OracleLookup& lookup)
{
    const FunctionDef& f = program.entry_function();
    const Behavior& b = f.behaviors.at(index);
    Verdict v;
    v.behavior_index = index;
    v.kind = b.kind;
    v.input = b.input;
    auto p = eval::eval_pre(program, f, b.input, options.budget);
    v.p = p.value;
    note_masked(v, "P", p.masked);

    const bool spec_only = options.spec_only || f.spec_only();
    if (spec_only || b.kind == BehaviorKind::DontCare) {
        v.stage = Stage::Post;
        v.output = b.output;
        auto q = eval::eval_post(program, f, b.input, b.output, options.budget);
        v.q = q.value;
        note_masked(v, "Q", q.masked);
        v.required_p = b.kind != BehaviorKind::DontCare;
        if (b.kind == BehaviorKind::DontCare) {
            v.action = Action::skip();
            if (!spec_only)
                v.warnings.push_back("dontCare behaviors are not executed");
        } else {
            v.required_q = b.kind == BehaviorKind::Good;
            v.action = postcondition_action(b.kind, *v.q, b.input, b.output);
        }
        return v;
    }

    v.required_p = v.p.is_true();
    if (v.p.is_undefined()) {
        v.stage = Stage::Triple;
        v.required_p = true;
        v.action = precondition_action(b.kind, v.p, b.input);
        v.warnings.push_back("S not executed: P(i) is undefined");
        return v;
    }

    auto outcome = eval::exec_function(program, f, b.input, options.budget);
    if (const auto* ret = std::get_if<eval::Returned>(&outcome)) {
        const Bindings o = eval::outputs_of(f, b.input, *ret);
        v.output = o;
        auto q = eval::eval_post(program, f, b.input, o, options.budget);
        v.q = q.value;
        note_masked(v, "Q", q.masked);
        std::optional<bool> g = g_from_behaviors(f, b.input, o);
        if (!g && lookup)
            g = lookup(b.input, o);
        if (!g)
            return OracleQuery{index, b.input, o};
        v.g = g;
        if (v.p.is_true()) {
            v.stage = Stage::Triple;
            v.required_q = *g;
            v.action = triple_action(*g, *v.q, b.input, o);
        } else {
            v.stage = Stage::NegTriple;
            v.action = neg_triple_action(*g, *v.q, b.input, o);
        }
        return v;
    }

    v.stage = Stage::Exec;
    Witness w{b.input, std::nullopt};
    if (const auto* budget = std::get_if<eval::BudgetExceeded>(&outcome)) {
        v.warnings.push_back(budget->reason.to_string());
        v.action = Action::either(Action::revise_impl(w), Action::raise_budget(w));
    } else {
        v.warnings.push_back(std::get<eval::ExecFault>(outcome).reason.to_string());
        v.action = Action::revise_impl(w);
    }
    return v;
}

SpecCheckResult run_spec_check(const AnnotatedProgram& program, const CheckOptions& options,
                               const OracleLookup& lookup)
{
    SpecCheckResult out;
    const auto& behaviors = program.entry_function().behaviors;
    for (std::size_t i = 0; i < behaviors.size(); ++i) {
        out.verdicts.push_back(pre_verdict(program, i, options));
        auto post = post_verdict(program, i, options, lookup);
        if (auto* v = std::get_if<Verdict>(&post))
            out.verdicts.push_back(std::move(*v));
        else
            out.unresolved.push_back(std::get<OracleQuery>(post));
    }
    return out;
}

std::string describe(const Verdict& v)
{
    std::string out = "#" + std::to_string(v.behavior_index + 1) + " " + std::string(lang::to_string(v.kind)) + " " +
                      std::string(to_string(v.stage)) + " P=" + std::string(v.p.name());
    if (v.stage == Stage::Pre)
        out += " (want " + std::string(v.required_p ? "true" : "false") + ")";
    if (v.q) {
        out += " Q=" + std::string(v.q->name());
        if (v.required_q)
            out += " (want " + std::string(*v.required_q ? "true" : "false") + ")";
    }
    if (v.g)
        out += std::string(" g=") + (*v.g ? "true" : "false");
    if (v.output && v.stage != Stage::Pre && v.stage != Stage::Post)
        out += " o=" + v.output->to_source();
    out += ": " + v.action.summary();
    if (v.stage == Stage::Post && v.kind == BehaviorKind::DontCare)
        out += " (no Q action)";
    return out;
}

} // namespace speccheck::correction
