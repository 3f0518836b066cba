#include "speccheck/lang/parser.hpp"

namespace speccheck::lang {

namespace {

class Parser {
public:
    explicit Parser(const std::vector<Token>& tokens) : toks_(tokens) {}

    AnnotatedProgram program()
    {
        AnnotatedProgram prog;
        if (at_end())
            fail("function definition");
        while (!at_end())
            prog.functions.push_back(function());
        prog.entry = default_entry(prog);
        return prog;
    }

    Expr single_predicate()
    {
        Expr e = expr();
        accept_semi();
        if (!at_end())
            fail("end of predicate");
        return e;
    }

private:
    const std::vector<Token>& toks_;
    std::size_t pos_ = 0;

    [[nodiscard]] const Token& cur() const { return toks_[pos_]; }
    [[nodiscard]] const Token& peek(std::size_t ahead = 1) const
    {
        return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
    }
    [[nodiscard]] bool at_end() const { return cur().kind == TokenKind::End; }
    [[nodiscard]] std::size_t prev_end() const { return pos_ == 0 ? 0 : toks_[pos_ - 1].end; }

    const Token& take()
    {
        const Token& t = toks_[pos_];
        if (t.kind != TokenKind::End)
            ++pos_;
        return t;
    }

    [[noreturn]] void fail(const std::string& expected) const
    {
        throw ParseError(cur().loc, expected, cur().describe());
    }

    bool accept_op(std::string_view op)
    {
        if (cur().is_op(op)) {
            take();
            return true;
        }
        return false;
    }
    void expect_op(std::string_view op)
    {
        if (!accept_op(op))
            fail("'" + std::string(op) + "'");
    }
    bool accept_keyword(std::string_view kw)
    {
        if (cur().is_keyword(kw)) {
            take();
            return true;
        }
        return false;
    }
    bool accept_semi()
    {
        if (cur().kind == TokenKind::Semi) {
            take();
            return true;
        }
        return false;
    }
    void expect_semi()
    {
        if (!accept_semi())
            fail("';'");
    }
    std::string expect_ident(const char* what = "identifier")
    {
        if (cur().kind != TokenKind::Ident)
            fail(what);
        return take().lexeme;
    }

    [[nodiscard]] bool at_type() const
    {
        return cur().is_keyword("int") || cur().is_keyword("bool") || cur().is_keyword("boolean");
    }

    Type type()
    {
        if (accept_keyword("bool") || accept_keyword("boolean"))
            return Type::Bool;
        if (!accept_keyword("int"))
            fail("type");
        if (cur().is_op("[") && peek().is_op("]")) {
            take();
            take();
            return Type::IntArray;
        }
        return Type::Int;
    }

    FunctionDef function()
    {
        FunctionDef f;
        f.layout.whole.begin = cur().loc.offset;
        f.where.loc = cur().loc;
        if (!at_type())
            fail("function definition");
        f.return_type = type();
        f.name = expect_ident("function name");
        expect_op("(");
        if (!cur().is_op(")")) {
            do {
                Param p;
                p.type = type();
                p.name = expect_ident("parameter name");
                f.params.push_back(std::move(p));
            } while (accept_op(","));
        }
        expect_op(")");

        if (cur().kind == TokenKind::Semi) {
            f.layout.interface_form = true;
            f.layout.body_open = cur().loc.offset;
            f.layout.body_close = cur().loc.offset;
            take();
            f.layout.whole.end = prev_end();
            return f;
        }
        expect_op("{");
        f.layout.body_open = prev_end();
        while (!cur().is_op("}")) {
            if (at_end())
                fail("'}'");
            if (cur().kind == TokenKind::Annotation)
                annotation(f);
            else {
                const std::size_t begin = cur().loc.offset;
                f.body.push_back(statement());
                f.layout.statements.push_back({begin, prev_end()});
            }
        }
        f.layout.body_close = cur().loc.offset;
        take();
        f.layout.whole.end = prev_end();
        return f;
    }

    void annotation(FunctionDef& f)
    {
        const Token& head = take();
        const std::size_t begin = head.loc.offset;
        if (head.lexeme == "@pre" || head.lexeme == "@post") {
            const bool is_pre = head.lexeme == "@pre";
            auto& slot = is_pre ? f.pre : f.post;
            if (slot)
                throw ParseError(head.loc, "at most one " + head.lexeme + " block", "a second one");
            NamedPredicate np;
            np.where.loc = head.loc;
            np.name = expect_ident("specification name");
            if (accept_op("{")) {
                while (!cur().is_op("}")) {
                    if (at_end())
                        fail("'}'");
                    np.clauses.push_back(expr());
                    accept_semi();
                }
                take();
                if (np.clauses.empty())
                    throw ParseError(head.loc, "at least one predicate clause", "an empty block");
            } else {
                np.clauses.push_back(expr());
                expect_semi();
            }
            slot = std::move(np);
            (is_pre ? f.layout.pre : f.layout.post) = SourceSpan{begin, prev_end()};
            return;
        }
        // @behavior
        const std::string group = expect_ident("behavior block name");
        expect_op("{");
        while (!cur().is_op("}")) {
            if (at_end())
                fail("'}'");
            f.behaviors.push_back(behavior(group));
        }
        f.layout.behavior_block_close.push_back(cur().loc.offset);
        take();
    }

    Behavior behavior(const std::string& group)
    {
        Behavior b;
        b.group = group;
        b.where.loc = cur().loc;
        if (accept_keyword("good"))
            b.kind = BehaviorKind::Good;
        else if (accept_keyword("bad"))
            b.kind = BehaviorKind::Bad;
        else if (accept_keyword("dontCare"))
            b.kind = BehaviorKind::DontCare;
        else
            fail("'good', 'bad' or 'dontCare'");
        expect_op("{");
        if (cur().kind != TokenKind::Ident || cur().lexeme != "input")
            fail("'input'");
        take();
        expect_op("=");
        b.input = val_map();
        accept_semi();
        if (cur().kind == TokenKind::Ident && cur().lexeme == "output") {
            take();
            expect_op("=");
            b.output = val_map();
            accept_semi();
        }
        expect_op("}");
        accept_semi();
        return b;
    }

    Bindings val_map()
    {
        Bindings m;
        expect_op("{");
        if (accept_op("}"))
            return m;
        do {
            const Token& name_tok = cur();
            std::string name = expect_ident("variable name");
            if (m.contains(name))
                throw ParseError(name_tok.loc, "distinct names in value map", "duplicate '" + name + "'");
            expect_op("=");
            m.set(name, value());
        } while (accept_op(","));
        expect_op("}");
        return m;
    }

    Value value()
    {
        if (cur().kind == TokenKind::ArrayLit)
            return Value(IntArray(take().codes));
        if (accept_keyword("true"))
            return Value(true);
        if (accept_keyword("false"))
            return Value(false);
        const bool negative = accept_op("-");
        if (cur().kind != TokenKind::IntLit)
            fail("value");
        const Int v = take().int_value;
        return Value(negative ? -v : v);
    }

    // ---- statements ----

    Block stmt_body()
    {
        Block b;
        if (accept_op("{")) {
            while (!cur().is_op("}")) {
                if (at_end())
                    fail("'}'");
                if (cur().kind == TokenKind::Annotation)
                    throw ParseError(cur().loc, "statement", "annotation inside a nested block");
                b.push_back(statement());
            }
            take();
        } else {
            b.push_back(statement());
        }
        return b;
    }

    Stmt statement()
    {
        const SourceLoc loc = cur().loc;
        if (at_type()) {
            DeclStmt d{type(), expect_ident("variable name"), make_int(0)};
            expect_op("=");
            d.init = expr();
            expect_semi();
            return Stmt{std::move(d), {loc}};
        }
        if (accept_keyword("if")) {
            expect_op("(");
            Expr cond = expr();
            expect_op(")");
            IfStmt s{std::move(cond), stmt_body(), {}};
            if (accept_keyword("else"))
                s.else_branch = stmt_body();
            return Stmt{std::move(s), {loc}};
        }
        if (accept_keyword("while")) {
            expect_op("(");
            Expr cond = expr();
            expect_op(")");
            return Stmt{WhileStmt{std::move(cond), stmt_body()}, {loc}};
        }
        if (accept_keyword("break")) {
            expect_semi();
            return Stmt{BreakStmt{}, {loc}};
        }
        if (accept_keyword("return")) {
            Expr v = expr();
            expect_semi();
            return Stmt{ReturnStmt{std::move(v)}, {loc}};
        }
        if (cur().kind == TokenKind::Ident) {
            const std::string name = cur().lexeme;
            if (peek().is_op("=")) {
                take();
                take();
                AssignStmt a{name, std::nullopt, expr()};
                expect_semi();
                return Stmt{std::move(a), {loc}};
            }
            if (peek().is_op("++") || peek().is_op("--")) {
                take();
                const bool inc = take().lexeme == "++";
                expect_semi();
                return Stmt{AssignStmt{name, std::nullopt,
                                       make_binary(inc ? BinaryOp::Add : BinaryOp::Sub, make_var(name, loc),
                                                   make_int(1, loc), loc)},
                            {loc}};
            }
            if (peek().is_op("[")) {
                const std::size_t save = pos_;
                take();
                take();
                Expr index = expr();
                if (accept_op("]") && accept_op("=")) {
                    AssignStmt a{name, std::move(index), expr()};
                    expect_semi();
                    return Stmt{std::move(a), {loc}};
                }
                pos_ = save;
            }
        }
        Expr e = expr();
        expect_semi();
        return Stmt{ExprStmt{std::move(e)}, {loc}};
    }

    // ---- expressions ----

    Expr expr() { return implication(); }

    Expr implication()
    {
        Expr lhs = disjunction();
        if (cur().is_op("=>")) {
            const SourceLoc loc = take().loc;
            Expr rhs = implication();
            return make_binary(BinaryOp::Implies, std::move(lhs), std::move(rhs), loc);
        }
        return lhs;
    }

    Expr disjunction()
    {
        Expr lhs = conjunction();
        while (cur().is_op("||")) {
            const SourceLoc loc = take().loc;
            lhs = make_binary(BinaryOp::Or, std::move(lhs), conjunction(), loc);
        }
        return lhs;
    }

    Expr conjunction()
    {
        Expr lhs = comparison();
        while (cur().is_op("&&")) {
            const SourceLoc loc = take().loc;
            lhs = make_binary(BinaryOp::And, std::move(lhs), comparison(), loc);
        }
        return lhs;
    }

    std::optional<BinaryOp> comparison_op() const
    {
        const Token& t = cur();
        if (t.kind != TokenKind::Op)
            return std::nullopt;
        if (t.lexeme == "=" || t.lexeme == "==")
            return BinaryOp::Eq;
        if (t.lexeme == "!=")
            return BinaryOp::Ne;
        if (t.lexeme == "<")
            return BinaryOp::Lt;
        if (t.lexeme == "<=")
            return BinaryOp::Le;
        if (t.lexeme == ">")
            return BinaryOp::Gt;
        if (t.lexeme == ">=")
            return BinaryOp::Ge;
        return std::nullopt;
    }

    // `a <= b < c` desugars to `a <= b && b < c`.
    Expr comparison()
    {
        Expr first = additive();
        std::vector<std::pair<BinaryOp, SourceLoc>> ops;
        std::vector<Expr> operands;
        operands.push_back(std::move(first));
        while (auto op = comparison_op()) {
            ops.emplace_back(*op, take().loc);
            operands.push_back(additive());
        }
        if (ops.empty())
            return std::move(operands.front());
        std::optional<Expr> result;
        for (std::size_t i = 0; i < ops.size(); ++i) {
            Expr link = make_binary(ops[i].first, operands[i], operands[i + 1], ops[i].second);
            if (result)
                result = make_binary(BinaryOp::And, std::move(*result), std::move(link), ops[i].second);
            else
                result = std::move(link);
        }
        return std::move(*result);
    }

    Expr additive()
    {
        Expr lhs = multiplicative();
        while (cur().is_op("+") || cur().is_op("-")) {
            const Token& t = take();
            const auto op = t.lexeme == "+" ? BinaryOp::Add : BinaryOp::Sub;
            lhs = make_binary(op, std::move(lhs), multiplicative(), t.loc);
        }
        return lhs;
    }

    Expr multiplicative()
    {
        Expr lhs = unary();
        while (cur().is_op("*") || cur().is_op("/") || cur().is_op("%")) {
            const Token& t = take();
            const auto op = t.lexeme == "*" ? BinaryOp::Mul : t.lexeme == "/" ? BinaryOp::Div : BinaryOp::Mod;
            lhs = make_binary(op, std::move(lhs), unary(), t.loc);
        }
        return lhs;
    }

    Expr unary()
    {
        if (cur().is_op("-")) {
            const SourceLoc loc = take().loc;
            return make_unary(UnaryOp::Neg, unary(), loc);
        }
        if (cur().is_op("!")) {
            const SourceLoc loc = take().loc;
            return make_unary(UnaryOp::Not, unary(), loc);
        }
        return postfix();
    }

    Expr postfix()
    {
        Expr e = primary();
        while (true) {
            if (cur().is_op("[")) {
                const SourceLoc loc = take().loc;
                Expr index = expr();
                if (accept_op(":")) {
                    Expr hi = expr();
                    expect_op("]");
                    e = Expr{SliceExpr{std::move(e), std::move(index), std::move(hi)}, {loc}};
                } else {
                    expect_op("]");
                    e = Expr{IndexExpr{std::move(e), std::move(index)}, {loc}};
                }
            } else if (cur().is_op(".") && peek().kind == TokenKind::Ident && peek().lexeme == "size") {
                const SourceLoc loc = take().loc;
                take();
                e = Expr{SizeExpr{std::move(e)}, {loc}};
            } else {
                return e;
            }
        }
    }

    Expr primary()
    {
        const Token& t = cur();
        const SourceLoc loc = t.loc;
        switch (t.kind) {
        case TokenKind::IntLit:
            take();
            return make_int(t.int_value, loc);
        case TokenKind::Keyword:
            if (accept_keyword("true"))
                return make_bool(true, loc);
            if (accept_keyword("false"))
                return make_bool(false, loc);
            if (t.lexeme == "forall" || t.lexeme == "exists")
                return quantifier();
            break;
        case TokenKind::Ident: {
            std::string name = take().lexeme;
            if (accept_op("(")) {
                CallExpr call{std::move(name), {}};
                if (!cur().is_op(")")) {
                    do {
                        call.args.push_back(expr());
                    } while (accept_op(","));
                }
                expect_op(")");
                return Expr{std::move(call), {loc}};
            }
            return make_var(std::move(name), loc);
        }
        case TokenKind::Op:
            if (accept_op("(")) {
                Expr e = expr();
                expect_op(")");
                return e;
            }
            break;
        default:
            break;
        }
        fail("expression");
    }

    struct Binder {
        std::string var;
        Expr lo;
        Expr hi;
        SourceLoc loc;
    };

    Binder binder()
    {
        const SourceLoc loc = cur().loc;
        accept_keyword("int");
        std::string var = expect_ident("bound variable");
        expect_op(":");
        expect_op("[");
        Expr lo = expr();
        expect_op("..");
        Expr hi = expr();
        expect_op("]");
        return Binder{std::move(var), std::move(lo), std::move(hi), loc};
    }

    // forall int k:[lo .. hi] (body)
    // exists (int x:[..], int y:[..],) { body }
    Expr quantifier()
    {
        const Token& head = take();
        const QuantKind kind = head.lexeme == "forall" ? QuantKind::Forall : QuantKind::Exists;
        std::vector<Binder> binders;
        if (accept_op("(")) {
            binders.push_back(binder());
            while (accept_op(",")) {
                if (cur().is_op(")"))
                    break; // trailing comma
                binders.push_back(binder());
            }
            expect_op(")");
        } else {
            binders.push_back(binder());
        }
        Expr body = make_bool(true);
        if (accept_op("{")) {
            body = expr();
            accept_semi();
            expect_op("}");
        } else {
            body = unary();
        }
        for (auto it = binders.rbegin(); it != binders.rend(); ++it)
            body = make_quant(kind, it->var, std::move(it->lo), std::move(it->hi), std::move(body), it->loc);
        return body;
    }
};

} // namespace

AnnotatedProgram parse(const std::vector<Token>& tokens)
{
    if (tokens.empty() || tokens.back().kind != TokenKind::End)
        throw ParseError({}, "token stream terminated by end of input", "unterminated stream");
    return Parser(tokens).program();
}

AnnotatedProgram parse_source(std::string_view source)
{
    return parse(tokenize(source));
}

Expr parse_predicate(std::string_view text)
{
    const auto tokens = tokenize(text);
    return Parser(tokens).single_predicate();
}

} // namespace speccheck::lang
