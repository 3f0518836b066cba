#pragma once

#include "speccheck/lang/box.hpp"
#include "speccheck/lang/source.hpp"
#include "speccheck/lang/value.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace speccheck::lang {

enum class UnaryOp { Neg, Not };

enum class BinaryOp { Add, Sub, Mul, Div, Mod, Eq, Ne, Lt, Le, Gt, Ge, And, Or, Implies };

enum class QuantKind { Forall, Exists };

std::string_view to_string(BinaryOp op) noexcept;
[[nodiscard]] bool is_comparison(BinaryOp op) noexcept;
[[nodiscard]] bool is_arithmetic(BinaryOp op) noexcept;
[[nodiscard]] bool is_logical(BinaryOp op) noexcept;

struct Expr;

struct IntLit {
    Int value = 0;
    friend bool operator==(const IntLit&, const IntLit&) = default;
};

struct BoolLit {
    bool value = false;
    friend bool operator==(const BoolLit&, const BoolLit&) = default;
};

struct VarRef {
    std::string name;
    friend bool operator==(const VarRef&, const VarRef&) = default;
};

struct IndexExpr {
    Box<Expr> base;
    Box<Expr> index;
    friend bool operator==(const IndexExpr&, const IndexExpr&) = default;
};

// a[lo:hi], inclusive on both ends; lo > hi is the empty array.
struct SliceExpr {
    Box<Expr> base;
    Box<Expr> lo;
    Box<Expr> hi;
    friend bool operator==(const SliceExpr&, const SliceExpr&) = default;
};

// a.size
struct SizeExpr {
    Box<Expr> base;
    friend bool operator==(const SizeExpr&, const SizeExpr&) = default;
};

struct UnaryExpr {
    UnaryOp op;
    Box<Expr> operand;
    friend bool operator==(const UnaryExpr&, const UnaryExpr&) = default;
};

struct BinaryExpr {
    BinaryOp op;
    Box<Expr> lhs;
    Box<Expr> rhs;
    friend bool operator==(const BinaryExpr&, const BinaryExpr&) = default;
};

// Single bound variable over the inclusive range [lo .. hi]. Multi-binder
// quantifiers in source are nested during parsing.
struct QuantExpr {
    QuantKind kind;
    std::string var;
    Box<Expr> lo;
    Box<Expr> hi;
    Box<Expr> body;
    friend bool operator==(const QuantExpr&, const QuantExpr&) = default;
};

struct CallExpr {
    std::string callee;
    std::vector<Expr> args;
    friend bool operator==(const CallExpr&, const CallExpr&) = default;
};

struct Expr {
    using Node = std::variant<IntLit, BoolLit, VarRef, IndexExpr, SliceExpr, SizeExpr, UnaryExpr,
                              BinaryExpr, QuantExpr, CallExpr>;
    Node node;
    Provenance where;

    [[nodiscard]] SourceLoc loc() const noexcept { return where.loc; }
    friend bool operator==(const Expr&, const Expr&) = default;
};

Expr make_int(Int v, SourceLoc loc = {});
Expr make_bool(bool v, SourceLoc loc = {});
Expr make_var(std::string name, SourceLoc loc = {});
Expr make_unary(UnaryOp op, Expr operand, SourceLoc loc = {});
Expr make_binary(BinaryOp op, Expr lhs, Expr rhs, SourceLoc loc = {});
Expr make_quant(QuantKind kind, std::string var, Expr lo, Expr hi, Expr body, SourceLoc loc = {});

struct Stmt;
using Block = std::vector<Stmt>;

struct DeclStmt {
    Type type;
    std::string name;
    Expr init;
    friend bool operator==(const DeclStmt&, const DeclStmt&) = default;
};

struct AssignStmt {
    std::string target;
    std::optional<Expr> index;
    Expr value;
    friend bool operator==(const AssignStmt&, const AssignStmt&) = default;
};

struct IfStmt {
    Expr cond;
    Block then_branch;
    Block else_branch;
    friend bool operator==(const IfStmt&, const IfStmt&) = default;
};

struct WhileStmt {
    Expr cond;
    Block body;
    friend bool operator==(const WhileStmt&, const WhileStmt&) = default;
};

struct BreakStmt {
    friend bool operator==(const BreakStmt&, const BreakStmt&) = default;
};

struct ReturnStmt {
    Expr value;
    friend bool operator==(const ReturnStmt&, const ReturnStmt&) = default;
};

struct ExprStmt {
    Expr expr;
    friend bool operator==(const ExprStmt&, const ExprStmt&) = default;
};

struct Stmt {
    using Node = std::variant<DeclStmt, AssignStmt, IfStmt, WhileStmt, BreakStmt, ReturnStmt, ExprStmt>;
    Node node;
    Provenance where;

    [[nodiscard]] SourceLoc loc() const noexcept { return where.loc; }
    friend bool operator==(const Stmt&, const Stmt&) = default;
};

enum class BehaviorKind { Good, Bad, DontCare };

std::string_view to_string(BehaviorKind k) noexcept;

struct Behavior {
    BehaviorKind kind = BehaviorKind::Good;
    Bindings input;
    Bindings output;
    // Name of the enclosing @behavior block.
    std::string group;
    Provenance where;

    friend bool operator==(const Behavior&, const Behavior&) = default;
};

// Clauses are an implicit conjunction.
struct NamedPredicate {
    std::string name;
    std::vector<Expr> clauses;
    Provenance where;

    friend bool operator==(const NamedPredicate&, const NamedPredicate&) = default;
};

struct Param {
    std::string name;
    Type type = Type::Int;
    friend bool operator==(const Param&, const Param&) = default;
};

// Where each part of a function lives in the source text. Used to splice
// edits; ignored by equality.
struct FunctionLayout {
    SourceSpan whole;
    bool interface_form = false;       // `int f(...);`
    std::size_t body_open = 0;         // just after `{` (or offset of `;`)
    std::size_t body_close = 0;        // offset of the closing `}`
    std::optional<SourceSpan> pre;
    std::optional<SourceSpan> post;
    std::vector<SourceSpan> statements;
    std::vector<std::size_t> behavior_block_close; // offset of each block's `}`

    friend bool operator==(const FunctionLayout&, const FunctionLayout&) noexcept { return true; }
};

struct FunctionDef {
    std::string name;
    std::vector<Param> params;
    Type return_type = Type::Int;
    Block body;
    std::optional<NamedPredicate> pre;
    std::optional<NamedPredicate> post;
    std::vector<Behavior> behaviors;
    Provenance where;
    FunctionLayout layout;

    [[nodiscard]] bool spec_only() const noexcept { return body.empty(); }
    [[nodiscard]] const Param* find_param(std::string_view n) const;
    [[nodiscard]] bool has_annotations() const noexcept { return pre || post || !behaviors.empty(); }

    friend bool operator==(const FunctionDef&, const FunctionDef&) = default;
};

inline constexpr std::string_view return_value_name = "rv";

struct AnnotatedProgram {
    std::vector<FunctionDef> functions;
    // Function under analysis: the first function carrying an annotation,
    // else the first function.
    std::string entry;

    [[nodiscard]] const FunctionDef* find(std::string_view name) const;
    [[nodiscard]] const FunctionDef& entry_function() const;

    friend bool operator==(const AnnotatedProgram&, const AnnotatedProgram&) = default;
};

std::string default_entry(const AnnotatedProgram& program);

} // namespace speccheck::lang
