#include "speccheck/lang/printer.hpp"

namespace speccheck::lang {

namespace {

enum Prec : int {
    PrecImplies = 1,
    PrecOr,
    PrecAnd,
    PrecCmp,
    PrecAdd,
    PrecMul,
    PrecUnary,
    PrecPostfix,
    PrecPrimary,
};

int binary_prec(BinaryOp op)
{
    switch (op) {
    case BinaryOp::Implies: return PrecImplies;
    case BinaryOp::Or: return PrecOr;
    case BinaryOp::And: return PrecAnd;
    case BinaryOp::Add:
    case BinaryOp::Sub: return PrecAdd;
    case BinaryOp::Mul:
    case BinaryOp::Div:
    case BinaryOp::Mod: return PrecMul;
    default: return PrecCmp;
    }
}

int prec_of(const Expr& e)
{
    return std::visit(
        [](const auto& n) -> int {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, BinaryExpr>)
                return binary_prec(n.op);
            else if constexpr (std::is_same_v<T, UnaryExpr>)
                return PrecUnary;
            else if constexpr (std::is_same_v<T, IndexExpr> || std::is_same_v<T, SliceExpr> ||
                               std::is_same_v<T, SizeExpr>)
                return PrecPostfix;
            else
                return PrecPrimary;
        },
        e.node);
}

void print_expr(std::string& out, const Expr& e, int min_prec);

void print_child(std::string& out, const Expr& e, int min_prec)
{
    if (prec_of(e) < min_prec) {
        out += '(';
        print_expr(out, e, 0);
        out += ')';
    } else {
        print_expr(out, e, min_prec);
    }
}

void print_expr(std::string& out, const Expr& e, int /*min_prec*/)
{
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, IntLit>) {
                out += std::to_string(n.value);
            } else if constexpr (std::is_same_v<T, BoolLit>) {
                out += n.value ? "true" : "false";
            } else if constexpr (std::is_same_v<T, VarRef>) {
                out += n.name;
            } else if constexpr (std::is_same_v<T, IndexExpr>) {
                print_child(out, *n.base, PrecPostfix);
                out += '[';
                print_expr(out, *n.index, 0);
                out += ']';
            } else if constexpr (std::is_same_v<T, SliceExpr>) {
                print_child(out, *n.base, PrecPostfix);
                out += '[';
                print_expr(out, *n.lo, 0);
                out += ':';
                print_expr(out, *n.hi, 0);
                out += ']';
            } else if constexpr (std::is_same_v<T, SizeExpr>) {
                print_child(out, *n.base, PrecPostfix);
                out += ".size";
            } else if constexpr (std::is_same_v<T, UnaryExpr>) {
                std::string operand;
                print_child(operand, *n.operand, PrecUnary);
                out += n.op == UnaryOp::Neg ? '-' : '!';
                if (!operand.empty() && (operand.front() == '-' || operand.front() == '!'))
                    out += ' ';
                out += operand;
            } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                const int p = binary_prec(n.op);
                int lhs_min = p;
                int rhs_min = p + 1;
                if (n.op == BinaryOp::Implies) {
                    lhs_min = p + 1;
                    rhs_min = p;
                } else if (is_comparison(n.op)) {
                    lhs_min = p + 1;
                }
                print_child(out, *n.lhs, lhs_min);
                out += ' ';
                out += to_string(n.op);
                out += ' ';
                print_child(out, *n.rhs, rhs_min);
            } else if constexpr (std::is_same_v<T, QuantExpr>) {
                out += n.kind == QuantKind::Forall ? "forall int " : "exists int ";
                out += n.var;
                out += ":[";
                print_expr(out, *n.lo, 0);
                out += " .. ";
                print_expr(out, *n.hi, 0);
                out += "] (";
                print_expr(out, *n.body, 0);
                out += ')';
            } else if constexpr (std::is_same_v<T, CallExpr>) {
                out += n.callee;
                out += '(';
                for (std::size_t i = 0; i < n.args.size(); ++i) {
                    if (i)
                        out += ", ";
                    print_expr(out, n.args[i], 0);
                }
                out += ')';
            }
        },
        e.node);
}

std::string type_name(Type t)
{
    return std::string(to_string(t));
}

void indent(std::string& out, int depth)
{
    out.append(static_cast<std::size_t>(depth) * 4, ' ');
}

void print_block(std::string& out, const Block& block, int depth);

void print_stmt(std::string& out, const Stmt& s, int depth)
{
    indent(out, depth);
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, DeclStmt>) {
                out += type_name(n.type) + " " + n.name + " = " + pretty_print(n.init) + ";\n";
            } else if constexpr (std::is_same_v<T, AssignStmt>) {
                out += n.target;
                if (n.index)
                    out += "[" + pretty_print(*n.index) + "]";
                out += " = " + pretty_print(n.value) + ";\n";
            } else if constexpr (std::is_same_v<T, IfStmt>) {
                out += "if (" + pretty_print(n.cond) + ") {\n";
                print_block(out, n.then_branch, depth + 1);
                indent(out, depth);
                out += "}";
                if (!n.else_branch.empty()) {
                    out += " else {\n";
                    print_block(out, n.else_branch, depth + 1);
                    indent(out, depth);
                    out += "}";
                }
                out += "\n";
            } else if constexpr (std::is_same_v<T, WhileStmt>) {
                out += "while (" + pretty_print(n.cond) + ") {\n";
                print_block(out, n.body, depth + 1);
                indent(out, depth);
                out += "}\n";
            } else if constexpr (std::is_same_v<T, BreakStmt>) {
                out += "break;\n";
            } else if constexpr (std::is_same_v<T, ReturnStmt>) {
                out += "return " + pretty_print(n.value) + ";\n";
            } else if constexpr (std::is_same_v<T, ExprStmt>) {
                out += pretty_print(n.expr) + ";\n";
            }
        },
        s.node);
}

void print_block(std::string& out, const Block& block, int depth)
{
    for (const auto& s : block)
        print_stmt(out, s, depth);
}

void print_predicate(std::string& out, const NamedPredicate& p, bool is_pre, int depth)
{
    indent(out, depth);
    out += is_pre ? "@pre " : "@post ";
    out += p.name;
    out += " {\n";
    for (const auto& c : p.clauses) {
        indent(out, depth + 1);
        out += pretty_print(c);
        out += ";\n";
    }
    indent(out, depth);
    out += "}\n";
}

} // namespace

std::string pretty_print(const Expr& expr)
{
    std::string out;
    print_expr(out, expr, 0);
    return out;
}

std::string pretty_print(const NamedPredicate& pred, bool is_pre)
{
    std::string out;
    print_predicate(out, pred, is_pre, 0);
    return out;
}

std::string pretty_print(const Behavior& b)
{
    std::string out(to_string(b.kind));
    out += " { input=" + b.input.to_source() + " output=" + b.output.to_source() + " }";
    return out;
}

std::string pretty_print(const FunctionDef& f)
{
    std::string out = type_name(f.return_type) + " " + f.name + "(";
    for (std::size_t i = 0; i < f.params.size(); ++i) {
        if (i)
            out += ", ";
        out += type_name(f.params[i].type) + " " + f.params[i].name;
    }
    out += ")";
    if (f.body.empty() && !f.has_annotations())
        return out + ";\n";
    out += " {\n";
    if (f.pre)
        print_predicate(out, *f.pre, true, 1);
    print_block(out, f.body, 1);
    if (f.post)
        print_predicate(out, *f.post, false, 1);
    // One block per run of behaviors sharing a block name keeps the order.
    std::size_t i = 0;
    while (i < f.behaviors.size()) {
        const std::string& group = f.behaviors[i].group;
        indent(out, 1);
        out += "@behavior " + group + " {\n";
        while (i < f.behaviors.size() && f.behaviors[i].group == group) {
            indent(out, 2);
            out += pretty_print(f.behaviors[i]) + "\n";
            ++i;
        }
        indent(out, 1);
        out += "}\n";
    }
    out += "}\n";
    return out;
}

std::string pretty_print(const AnnotatedProgram& program)
{
    std::string out;
    for (std::size_t i = 0; i < program.functions.size(); ++i) {
        if (i)
            out += "\n";
        out += pretty_print(program.functions[i]);
    }
    return out;
}

} // namespace speccheck::lang
