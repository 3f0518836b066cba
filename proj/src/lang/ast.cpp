#include "speccheck/lang/ast.hpp"

#include <stdexcept>

namespace speccheck::lang {

std::string_view to_string(BinaryOp op) noexcept
{
    switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Mod: return "%";
    case BinaryOp::Eq: return "=";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::And: return "&&";
    case BinaryOp::Or: return "||";
    case BinaryOp::Implies: return "=>";
    }
    return "?";
}

bool is_comparison(BinaryOp op) noexcept
{
    switch (op) {
    case BinaryOp::Eq:
    case BinaryOp::Ne:
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge:
        return true;
    default:
        return false;
    }
}

bool is_arithmetic(BinaryOp op) noexcept
{
    switch (op) {
    case BinaryOp::Add:
    case BinaryOp::Sub:
    case BinaryOp::Mul:
    case BinaryOp::Div:
    case BinaryOp::Mod:
        return true;
    default:
        return false;
    }
}

bool is_logical(BinaryOp op) noexcept
{
    return op == BinaryOp::And || op == BinaryOp::Or || op == BinaryOp::Implies;
}

Expr make_int(Int v, SourceLoc loc) { return Expr{IntLit{v}, {loc}}; }
Expr make_bool(bool v, SourceLoc loc) { return Expr{BoolLit{v}, {loc}}; }
Expr make_var(std::string name, SourceLoc loc) { return Expr{VarRef{std::move(name)}, {loc}}; }

Expr make_unary(UnaryOp op, Expr operand, SourceLoc loc)
{
    return Expr{UnaryExpr{op, std::move(operand)}, {loc}};
}

Expr make_binary(BinaryOp op, Expr lhs, Expr rhs, SourceLoc loc)
{
    return Expr{BinaryExpr{op, std::move(lhs), std::move(rhs)}, {loc}};
}

Expr make_quant(QuantKind kind, std::string var, Expr lo, Expr hi, Expr body, SourceLoc loc)
{
    return Expr{QuantExpr{kind, std::move(var), std::move(lo), std::move(hi), std::move(body)}, {loc}};
}

std::string_view to_string(BehaviorKind k) noexcept
{
    switch (k) {
    case BehaviorKind::Good: return "good";
    case BehaviorKind::Bad: return "bad";
    case BehaviorKind::DontCare: return "dontCare";
    }
    return "?";
}

const Param* FunctionDef::find_param(std::string_view n) const
{
    for (const auto& p : params)
        if (p.name == n)
            return &p;
    return nullptr;
}

const FunctionDef* AnnotatedProgram::find(std::string_view name) const
{
    for (const auto& f : functions)
        if (f.name == name)
            return &f;
    return nullptr;
}

const FunctionDef& AnnotatedProgram::entry_function() const
{
    if (const auto* f = find(entry))
        return *f;
    throw std::logic_error("entry function '" + entry + "' is not defined");
}

std::string default_entry(const AnnotatedProgram& program)
{
    for (const auto& f : program.functions)
        if (f.has_annotations())
            return f.name;
    return program.functions.empty() ? std::string{} : program.functions.front().name;
}

} // namespace speccheck::lang
