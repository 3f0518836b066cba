#include "speccheck/lang/validate.hpp"

#include "speccheck/lang/builtins.hpp"

#include <algorithm>
#include <map>
#include <optional>

namespace speccheck::lang {

std::string Diagnostic::to_string() const
{
    return loc.to_string() + ": " + (severity == Severity::Error ? "error: " : "warning: ") + message;
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) noexcept
{
    for (const auto& d : diagnostics)
        if (d.severity == Severity::Error)
            return true;
    return false;
}

namespace {

void collect_free(const Expr& e, std::vector<std::string>& bound, std::set<std::string>& out)
{
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, VarRef>) {
                if (std::find(bound.begin(), bound.end(), n.name) == bound.end())
                    out.insert(n.name);
            } else if constexpr (std::is_same_v<T, IndexExpr>) {
                collect_free(*n.base, bound, out);
                collect_free(*n.index, bound, out);
            } else if constexpr (std::is_same_v<T, SliceExpr>) {
                collect_free(*n.base, bound, out);
                collect_free(*n.lo, bound, out);
                collect_free(*n.hi, bound, out);
            } else if constexpr (std::is_same_v<T, SizeExpr>) {
                collect_free(*n.base, bound, out);
            } else if constexpr (std::is_same_v<T, UnaryExpr>) {
                collect_free(*n.operand, bound, out);
            } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                collect_free(*n.lhs, bound, out);
                collect_free(*n.rhs, bound, out);
            } else if constexpr (std::is_same_v<T, QuantExpr>) {
                collect_free(*n.lo, bound, out);
                collect_free(*n.hi, bound, out);
                bound.push_back(n.var);
                collect_free(*n.body, bound, out);
                bound.pop_back();
            } else if constexpr (std::is_same_v<T, CallExpr>) {
                for (const auto& a : n.args)
                    collect_free(a, bound, out);
            }
        },
        e.node);
}

enum class Context { Code, Predicate };

class Validator {
public:
    explicit Validator(const AnnotatedProgram& p) : program_(p) {}

    std::vector<Diagnostic> run()
    {
        if (program_.functions.empty())
            error({}, "program defines no function");
        std::map<std::string, SourceLoc> seen;
        for (const auto& f : program_.functions) {
            if (find_builtin(f.name))
                error(f.where.loc, "function '" + f.name + "' shadows a built-in");
            if (!seen.emplace(f.name, f.where.loc).second)
                error(f.where.loc, "function '" + f.name + "' is defined more than once");
        }
        if (!program_.functions.empty() && !program_.find(program_.entry))
            error({}, "entry function '" + program_.entry + "' is not defined");
        for (const auto& f : program_.functions)
            function(f);
        return std::move(diags_);
    }

private:
    const AnnotatedProgram& program_;
    std::vector<Diagnostic> diags_;
    const FunctionDef* fn_ = nullptr;
    Context ctx_ = Context::Code;
    std::vector<std::map<std::string, Type>> scopes_;
    int loop_depth_ = 0;

    void error(SourceLoc loc, std::string msg) { diags_.push_back({Severity::Error, loc, std::move(msg)}); }
    void warning(SourceLoc loc, std::string msg)
    {
        diags_.push_back({Severity::Warning, loc, std::move(msg)});
    }

    std::optional<Type> lookup(const std::string& name) const
    {
        for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
            auto f = it->find(name);
            if (f != it->end())
                return f->second;
        }
        return std::nullopt;
    }

    void function(const FunctionDef& f)
    {
        fn_ = &f;
        std::map<std::string, Type> params;
        for (const auto& p : f.params)
            if (!params.emplace(p.name, p.type).second)
                error(f.where.loc, "duplicate parameter '" + p.name + "' in '" + f.name + "'");

        // Body.
        ctx_ = Context::Code;
        scopes_ = {params};
        loop_depth_ = 0;
        block(f.body);
        if (!f.body.empty() && !returns(f.body))
            error(f.where.loc, "control can reach the end of '" + f.name + "' without a return");

        // Specification.
        ctx_ = Context::Predicate;
        std::set<std::string> spec_vars;
        if (f.pre) {
            scopes_ = {params};
            predicate(*f.pre, spec_vars);
        }
        if (f.post) {
            auto post_scope = params;
            post_scope[std::string(return_value_name)] = f.return_type;
            scopes_ = {post_scope};
            predicate(*f.post, spec_vars);
        }
        if (f.pre || f.post) {
            for (const auto& p : f.params)
                if (!spec_vars.count(p.name))
                    warning(f.where.loc,
                            "input variable not free in specification: '" + p.name + "' of '" + f.name + "'");
            if (!spec_vars.count(std::string(return_value_name)))
                warning(f.where.loc, "output variable not free in specification: 'rv' of '" + f.name + "'");
        }

        for (const auto& b : f.behaviors)
            behavior(f, b);
        scopes_.clear();
    }

    void predicate(const NamedPredicate& p, std::set<std::string>& vars)
    {
        for (const auto& clause : p.clauses) {
            expect_type(clause, Type::Bool, "specification clause");
            const auto fv = free_variables(clause);
            vars.insert(fv.begin(), fv.end());
        }
    }

    void behavior(const FunctionDef& f, const Behavior& b)
    {
        const SourceLoc loc = b.where.loc;
        for (const auto& p : f.params) {
            const Value* v = b.input.find(p.name);
            if (!v)
                error(loc, "behavior input does not bind parameter '" + p.name + "'");
            else if (v->type() != p.type)
                error(loc, "behavior input '" + p.name + "' has type " + std::string(to_string(v->type())) +
                               ", expected " + std::string(to_string(p.type)));
        }
        for (const auto& [name, v] : b.input)
            if (!f.find_param(name))
                error(loc, "behavior input names unknown parameter '" + name + "'");
        for (const auto& [name, v] : b.output) {
            if (name == return_value_name) {
                if (v.type() != f.return_type)
                    error(loc, "behavior output 'rv' has type " + std::string(to_string(v.type())) + ", expected " +
                                   std::string(to_string(f.return_type)));
                continue;
            }
            const Param* p = f.find_param(name);
            if (!p || p->type != Type::IntArray)
                error(loc, "behavior output '" + name + "' is neither rv nor an array parameter");
            else if (v.type() != Type::IntArray)
                error(loc, "behavior output '" + name + "' must be an array");
        }
        if (f.spec_only() && !b.output.contains(return_value_name))
            error(loc, "behavior of '" + f.name + "' must supply output rv when the body is empty");
    }

    // ---- statements ----

    static bool returns(const Block& b)
    {
        for (const auto& s : b) {
            if (std::holds_alternative<ReturnStmt>(s.node))
                return true;
            if (const auto* i = std::get_if<IfStmt>(&s.node))
                if (returns(i->then_branch) && returns(i->else_branch))
                    return true;
        }
        return false;
    }

    void block(const Block& b)
    {
        scopes_.emplace_back();
        for (const auto& s : b)
            statement(s);
        scopes_.pop_back();
    }

    void statement(const Stmt& s)
    {
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, DeclStmt>) {
                    expect_type(n.init, n.type, "initializer of '" + n.name + "'");
                    if (scopes_.back().count(n.name))
                        error(s.loc(), "'" + n.name + "' is already declared in this scope");
                    scopes_.back()[n.name] = n.type;
                } else if constexpr (std::is_same_v<T, AssignStmt>) {
                    auto t = lookup(n.target);
                    if (!t) {
                        error(s.loc(), "assignment to undeclared variable '" + n.target + "'");
                        type_of(n.value);
                        return;
                    }
                    if (n.index) {
                        if (*t != Type::IntArray)
                            error(s.loc(), "indexed assignment to non-array '" + n.target + "'");
                        expect_type(*n.index, Type::Int, "array index");
                        expect_type(n.value, Type::Int, "array element");
                    } else {
                        expect_type(n.value, *t, "assignment to '" + n.target + "'");
                    }
                } else if constexpr (std::is_same_v<T, IfStmt>) {
                    expect_type(n.cond, Type::Bool, "if condition");
                    block(n.then_branch);
                    block(n.else_branch);
                } else if constexpr (std::is_same_v<T, WhileStmt>) {
                    expect_type(n.cond, Type::Bool, "while condition");
                    ++loop_depth_;
                    block(n.body);
                    --loop_depth_;
                } else if constexpr (std::is_same_v<T, BreakStmt>) {
                    if (loop_depth_ == 0)
                        error(s.loc(), "break outside of a while loop");
                } else if constexpr (std::is_same_v<T, ReturnStmt>) {
                    expect_type(n.value, fn_->return_type, "return value");
                } else if constexpr (std::is_same_v<T, ExprStmt>) {
                    if (!std::holds_alternative<CallExpr>(n.expr.node))
                        error(s.loc(), "expression statement must be a call");
                    type_of(n.expr);
                }
            },
            s.node);
    }

    // ---- expressions ----

    void expect_type(const Expr& e, Type want, const std::string& what)
    {
        auto t = type_of(e);
        if (t && *t != want)
            error(e.loc(), what + " has type " + std::string(to_string(*t)) + ", expected " +
                               std::string(to_string(want)));
    }

    std::optional<Type> type_of(const Expr& e)
    {
        return std::visit([&](const auto& n) -> std::optional<Type> { return type_node(e, n); }, e.node);
    }

    std::optional<Type> type_node(const Expr&, const IntLit&) { return Type::Int; }
    std::optional<Type> type_node(const Expr&, const BoolLit&) { return Type::Bool; }

    std::optional<Type> type_node(const Expr& e, const VarRef& n)
    {
        if (auto t = lookup(n.name))
            return t;
        error(e.loc(), "unknown identifier '" + n.name + "'");
        return std::nullopt;
    }

    std::optional<Type> type_node(const Expr& e, const IndexExpr& n)
    {
        auto b = type_of(*n.base);
        if (b && *b != Type::IntArray)
            error(e.loc(), "indexing a value of type " + std::string(to_string(*b)));
        expect_type(*n.index, Type::Int, "array index");
        return Type::Int;
    }

    std::optional<Type> type_node(const Expr& e, const SliceExpr& n)
    {
        if (ctx_ == Context::Code)
            error(e.loc(), "array slices are only allowed in specifications");
        auto b = type_of(*n.base);
        if (b && *b != Type::IntArray)
            error(e.loc(), "slicing a value of type " + std::string(to_string(*b)));
        expect_type(*n.lo, Type::Int, "slice bound");
        expect_type(*n.hi, Type::Int, "slice bound");
        return Type::IntArray;
    }

    std::optional<Type> type_node(const Expr& e, const SizeExpr& n)
    {
        auto b = type_of(*n.base);
        if (b && *b != Type::IntArray)
            error(e.loc(), ".size of a value of type " + std::string(to_string(*b)));
        return Type::Int;
    }

    std::optional<Type> type_node(const Expr&, const UnaryExpr& n)
    {
        const Type want = n.op == UnaryOp::Neg ? Type::Int : Type::Bool;
        expect_type(*n.operand, want, n.op == UnaryOp::Neg ? "operand of '-'" : "operand of '!'");
        return want;
    }

    std::optional<Type> type_node(const Expr& e, const BinaryExpr& n)
    {
        const std::string op(to_string(n.op));
        if (is_arithmetic(n.op)) {
            expect_type(*n.lhs, Type::Int, "operand of '" + op + "'");
            expect_type(*n.rhs, Type::Int, "operand of '" + op + "'");
            return Type::Int;
        }
        if (is_logical(n.op)) {
            expect_type(*n.lhs, Type::Bool, "operand of '" + op + "'");
            expect_type(*n.rhs, Type::Bool, "operand of '" + op + "'");
            return Type::Bool;
        }
        if (n.op == BinaryOp::Eq || n.op == BinaryOp::Ne) {
            auto l = type_of(*n.lhs);
            auto r = type_of(*n.rhs);
            if (l && r && *l != *r)
                error(e.loc(), "comparing " + std::string(to_string(*l)) + " with " + std::string(to_string(*r)));
            return Type::Bool;
        }
        expect_type(*n.lhs, Type::Int, "operand of '" + op + "'");
        expect_type(*n.rhs, Type::Int, "operand of '" + op + "'");
        return Type::Bool;
    }

    std::optional<Type> type_node(const Expr& e, const QuantExpr& n)
    {
        if (ctx_ == Context::Code)
            error(e.loc(), "quantifiers are only allowed in specifications");
        expect_type(*n.lo, Type::Int, "quantifier bound");
        expect_type(*n.hi, Type::Int, "quantifier bound");
        scopes_.push_back({{n.var, Type::Int}});
        expect_type(*n.body, Type::Bool, "quantifier body");
        scopes_.pop_back();
        return Type::Bool;
    }

    std::optional<Type> type_node(const Expr& e, const CallExpr& n)
    {
        if (auto b = find_builtin(n.callee)) {
            if (n.args.size() != 1) {
                error(e.loc(), "built-in '" + n.callee + "' takes one argument");
                for (const auto& a : n.args)
                    type_of(a);
            } else {
                expect_type(n.args[0], b->param, "argument of '" + n.callee + "'");
            }
            return b->result;
        }
        const FunctionDef* f = program_.find(n.callee);
        if (!f) {
            error(e.loc(), "call to undefined function '" + n.callee + "'");
            for (const auto& a : n.args)
                type_of(a);
            return std::nullopt;
        }
        if (f->params.size() != n.args.size()) {
            error(e.loc(), "'" + n.callee + "' expects " + std::to_string(f->params.size()) + " arguments, got " +
                               std::to_string(n.args.size()));
            for (const auto& a : n.args)
                type_of(a);
        } else {
            for (std::size_t i = 0; i < n.args.size(); ++i)
                expect_type(n.args[i], f->params[i].type, "argument '" + f->params[i].name + "' of '" + n.callee + "'");
        }
        return f->return_type;
    }
};

} // namespace

std::set<std::string> free_variables(const Expr& expr)
{
    std::vector<std::string> bound;
    std::set<std::string> out;
    collect_free(expr, bound, out);
    return out;
}

std::vector<Diagnostic> validate(const AnnotatedProgram& program)
{
    return Validator(program).run();
}

} // namespace speccheck::lang
