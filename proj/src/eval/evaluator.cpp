#include "speccheck/eval/evaluator.hpp"

#include "speccheck/lang/builtins.hpp"

#include <exception>
#include <functional>
#include <limits>
#include <memory>
#include <pthread.h>
#include <type_traits>

namespace speccheck::eval {

using namespace speccheck::lang;

namespace {

using ArrayRef = std::shared_ptr<IntArray>;
using RtValue = std::variant<Int, bool, ArrayRef>;

struct FaultSignal {
    Fault fault;
};

[[noreturn]] void raise(FaultKind kind, SourceLoc loc, std::string message)
{
    throw FaultSignal{Fault{kind, loc, std::move(message)}};
}

RtValue to_runtime(const Value& v)
{
    if (v.is_int())
        return v.as_int();
    if (v.is_bool())
        return v.as_bool();
    return std::make_shared<IntArray>(v.as_array());
}

Value to_value(const RtValue& v)
{
    if (const auto* i = std::get_if<Int>(&v))
        return Value(*i);
    if (const auto* b = std::get_if<bool>(&v))
        return Value(*b);
    return Value(*std::get<ArrayRef>(v));
}

std::string_view kind_name(const RtValue& v)
{
    if (std::holds_alternative<Int>(v))
        return "int";
    if (std::holds_alternative<bool>(v))
        return "bool";
    return "int[]";
}

// Lowest usable native stack address of the calling thread, with headroom
// for the frames between two depth checks.
const char* stack_floor()
{
    thread_local const char* floor = [] {
        pthread_attr_t attr;
        void* addr = nullptr;
        std::size_t size = 0;
        if (pthread_getattr_np(pthread_self(), &attr) != 0)
            return static_cast<const char*>(nullptr);
        pthread_attr_getstack(&attr, &addr, &size);
        pthread_attr_destroy(&attr);
        constexpr std::size_t headroom = 512 * 1024;
        if (size <= 2 * headroom)
            return static_cast<const char*>(nullptr);
        return static_cast<const char*>(addr) + headroom;
    }();
    return floor;
}

constexpr std::size_t deep_stack_size = std::size_t{256} << 20;
constexpr std::size_t deep_stack_wanted = std::size_t{64} << 20;

thread_local bool on_deep_stack = false;

// Interpreted calls cost about 1.5KB of native stack each, so the default
// depth budget does not fit in a typical 8MB thread. Runs `fn` inline when
// enough stack remains, otherwise on a helper thread with a large stack.
template <class Fn>
std::invoke_result_t<Fn&> with_deep_stack(Fn&& fn)
{
    using Result = std::invoke_result_t<Fn&>;
    char probe = 0;
    const char* floor = stack_floor();
    if (on_deep_stack || (floor && static_cast<std::size_t>(&probe - floor) >= deep_stack_wanted))
        return fn();

    struct Job {
        std::remove_reference_t<Fn>* fn;
        std::optional<Result> result;
        std::exception_ptr error;
    } job{&fn, std::nullopt, nullptr};

    auto trampoline = [](void* arg) -> void* {
        auto* j = static_cast<Job*>(arg);
        on_deep_stack = true;
        try {
            j->result.emplace((*j->fn)());
        } catch (...) {
            j->error = std::current_exception();
        }
        return nullptr;
    };

    pthread_attr_t attr;
    pthread_attr_init(&attr);
    pthread_attr_setstacksize(&attr, deep_stack_size);
    pthread_t thread;
    const int rc = pthread_create(&thread, &attr, trampoline, &job);
    pthread_attr_destroy(&attr);
    if (rc != 0)
        return fn();
    pthread_join(thread, nullptr);
    if (job.error)
        std::rethrow_exception(job.error);
    return std::move(*job.result);
}

enum class Flow { Normal, Break, Return };

class Machine {
public:
    Machine(const AnnotatedProgram& program, const Budget& budget, std::vector<Fault>* masked)
        : program_(program), budget_(budget), masked_(masked), floor_(stack_floor())
    {
    }

    // ---- predicate entry ----

    TriBool predicate(const NamedPredicate& pred, const Bindings& env)
    {
        open_frame(env);
        std::optional<TriBool> undefined;
        for (const auto& clause : pred.clauses) {
            TriBool t = tri(clause);
            if (t.is_false()) {
                if (undefined)
                    mask(*undefined);
                return t;
            }
            if (t.is_undefined() && !undefined)
                undefined = std::move(t);
        }
        return undefined ? *undefined : TriBool::truth();
    }

    TriBool predicate(const Expr& pred, const Bindings& env)
    {
        open_frame(env);
        return tri(pred);
    }

    // ---- function entry ----

    ExecOutcome exec(const FunctionDef& f, const Bindings& args)
    {
        std::vector<RtValue> actuals;
        for (const auto& p : f.params) {
            const Value* v = args.find(p.name);
            if (!v)
                throw UnboundVariable(p.name);
            actuals.push_back(to_runtime(*v));
        }
        try {
            RtValue rv = call(f, actuals, f.where.loc);
            Returned r{to_value(rv), {}};
            for (std::size_t i = 0; i < f.params.size(); ++i)
                if (f.params[i].type == Type::IntArray)
                    r.final_ref_state.set(f.params[i].name, to_value(actuals[i]));
            return r;
        } catch (const FaultSignal& s) {
            if (s.fault.kind == FaultKind::StepBudget)
                return BudgetExceeded{BudgetKind::Steps, s.fault};
            if (s.fault.kind == FaultKind::DepthBudget)
                return BudgetExceeded{BudgetKind::RecursionDepth, s.fault};
            return ExecFault{s.fault};
        }
    }

private:
    struct Frame {
        std::vector<std::pair<std::string, RtValue>> vars;
    };

    const AnnotatedProgram& program_;
    Budget budget_;
    std::vector<Fault>* masked_;
    const char* floor_;
    std::uint64_t steps_ = 0;
    std::uint32_t depth_ = 0;
    std::vector<Frame> frames_;
    bool code_mode_ = false;
    // Pending return value of the innermost call.
    RtValue ret_;

    void open_frame(const Bindings& env)
    {
        frames_.clear();
        frames_.emplace_back();
        for (const auto& [name, v] : env)
            frames_.back().vars.emplace_back(name, to_runtime(v));
    }

    void mask(const TriBool& t)
    {
        if (masked_ && t.is_undefined())
            masked_->push_back(t.reason());
    }

    void tick(SourceLoc loc)
    {
        if (++steps_ > budget_.max_steps)
            raise(FaultKind::StepBudget, loc,
                  "step budget of " + std::to_string(budget_.max_steps) + " exhausted");
    }

    RtValue& lookup(const std::string& name)
    {
        auto& vars = frames_.back().vars;
        for (auto it = vars.rbegin(); it != vars.rend(); ++it)
            if (it->first == name)
                return it->second;
        throw UnboundVariable(name);
    }

    // ---- three-valued layer ----

    TriBool tri(const Expr& e)
    {
        if (const auto* b = std::get_if<BinaryExpr>(&e.node); b && is_logical(b->op))
            return tri_binary(*b);
        if (const auto* u = std::get_if<UnaryExpr>(&e.node); u && u->op == UnaryOp::Not)
            return tri(*u->operand).negate();
        if (const auto* q = std::get_if<QuantExpr>(&e.node))
            return tri_quant(*q, e.loc());
        try {
            RtValue v = value(e);
            if (const auto* b = std::get_if<bool>(&v))
                return TriBool::of(*b);
            raise(FaultKind::TypeMismatch, e.loc(), std::string("expected bool, got ") + std::string(kind_name(v)));
        } catch (const FaultSignal& s) {
            return TriBool::undefined(s.fault);
        }
    }

    TriBool tri_binary(const BinaryExpr& b)
    {
        TriBool l = tri(*b.lhs);
        switch (b.op) {
        case BinaryOp::And: {
            if (l.is_false())
                return l;
            TriBool r = tri(*b.rhs);
            if (r.is_false()) {
                mask(l);
                return r;
            }
            if (l.is_undefined())
                return l;
            return r;
        }
        case BinaryOp::Or: {
            if (l.is_true())
                return l;
            TriBool r = tri(*b.rhs);
            if (r.is_true()) {
                mask(l);
                return r;
            }
            if (l.is_undefined())
                return l;
            return r;
        }
        default: { // Implies
            if (l.is_false())
                return TriBool::truth();
            TriBool r = tri(*b.rhs);
            if (r.is_true()) {
                mask(l);
                return r;
            }
            if (l.is_undefined())
                return l;
            return r;
        }
        }
    }

    TriBool tri_quant(const QuantExpr& q, SourceLoc loc)
    {
        Int lo = 0;
        Int hi = 0;
        try {
            lo = as_int(value(*q.lo), q.lo->loc());
            hi = as_int(value(*q.hi), q.hi->loc());
        } catch (const FaultSignal& s) {
            return TriBool::undefined(s.fault);
        }
        const bool forall = q.kind == QuantKind::Forall;
        auto& vars = frames_.back().vars;
        vars.emplace_back(q.var, Int{lo});
        const std::size_t slot = vars.size() - 1;
        std::optional<TriBool> result;
        for (Int k = lo; k <= hi; ++k) {
            try {
                tick(loc);
            } catch (const FaultSignal& s) {
                result = TriBool::undefined(s.fault);
                break;
            }
            frames_.back().vars[slot].second = k;
            TriBool t = tri(*q.body);
            if (t.is_undefined() || t.is_true() != forall) {
                result = std::move(t);
                break;
            }
            if (k == std::numeric_limits<Int>::max())
                break;
        }
        frames_.back().vars.pop_back();
        return result ? *result : TriBool::of(forall);
    }

    // ---- values ----

    static Int as_int(const RtValue& v, SourceLoc loc)
    {
        if (const auto* i = std::get_if<Int>(&v))
            return *i;
        raise(FaultKind::TypeMismatch, loc, std::string("expected int, got ") + std::string(kind_name(v)));
    }

    static bool as_bool(const RtValue& v, SourceLoc loc)
    {
        if (const auto* b = std::get_if<bool>(&v))
            return *b;
        raise(FaultKind::TypeMismatch, loc, std::string("expected bool, got ") + std::string(kind_name(v)));
    }

    static const ArrayRef& as_array(const RtValue& v, SourceLoc loc)
    {
        if (const auto* a = std::get_if<ArrayRef>(&v))
            return *a;
        raise(FaultKind::TypeMismatch, loc, std::string("expected int[], got ") + std::string(kind_name(v)));
    }

    RtValue value(const Expr& e)
    {
        return std::visit([&](const auto& n) -> RtValue { return node_value(e, n); }, e.node);
    }

    RtValue node_value(const Expr&, const IntLit& n) { return n.value; }
    RtValue node_value(const Expr&, const BoolLit& n) { return n.value; }
    RtValue node_value(const Expr&, const VarRef& n) { return lookup(n.name); }

    RtValue node_value(const Expr& e, const IndexExpr& n)
    {
        RtValue base = value(*n.base);
        const Int idx = as_int(value(*n.index), n.index->loc());
        const auto& arr = as_array(base, n.base->loc());
        if (idx < 0 || static_cast<std::uint64_t>(idx) >= arr->size())
            raise(FaultKind::IndexOutOfBounds, e.loc(),
                  "index " + std::to_string(idx) + " out of bounds for array of size " + std::to_string(arr->size()));
        return (*arr)[static_cast<std::size_t>(idx)];
    }

    RtValue node_value(const Expr& e, const SliceExpr& n)
    {
        RtValue base = value(*n.base);
        const Int lo = as_int(value(*n.lo), n.lo->loc());
        const Int hi = as_int(value(*n.hi), n.hi->loc());
        const auto& arr = as_array(base, n.base->loc());
        if (lo > hi)
            return std::make_shared<IntArray>();
        const auto size = static_cast<Int>(arr->size());
        if (lo < 0 || hi >= size)
            raise(FaultKind::SliceOutOfBounds, e.loc(),
                  "slice [" + std::to_string(lo) + ":" + std::to_string(hi) + "] out of bounds for array of size " +
                      std::to_string(size));
        return std::make_shared<IntArray>(arr->begin() + lo, arr->begin() + hi + 1);
    }

    RtValue node_value(const Expr& e, const SizeExpr& n)
    {
        RtValue base = value(*n.base);
        return static_cast<Int>(as_array(base, e.loc())->size());
    }

    RtValue node_value(const Expr& e, const UnaryExpr& n)
    {
        if (n.op == UnaryOp::Not) {
            if (!code_mode_)
                return tri_to_value(tri(e), e.loc());
            return !as_bool(value(*n.operand), n.operand->loc());
        }
        const Int v = as_int(value(*n.operand), n.operand->loc());
        if (v == std::numeric_limits<Int>::min())
            raise(FaultKind::Overflow, e.loc(), "negation overflows");
        return -v;
    }

    RtValue tri_to_value(const TriBool& t, SourceLoc)
    {
        if (t.is_undefined())
            throw FaultSignal{t.reason()};
        return t.is_true();
    }

    RtValue node_value(const Expr& e, const BinaryExpr& n)
    {
        if (is_logical(n.op)) {
            if (!code_mode_)
                return tri_to_value(tri(e), e.loc());
            // C-style short circuit; a fault aborts execution.
            const bool l = as_bool(value(*n.lhs), n.lhs->loc());
            switch (n.op) {
            case BinaryOp::And:
                return l ? as_bool(value(*n.rhs), n.rhs->loc()) : false;
            case BinaryOp::Or:
                return l ? true : as_bool(value(*n.rhs), n.rhs->loc());
            default:
                return l ? as_bool(value(*n.rhs), n.rhs->loc()) : true;
            }
        }
        RtValue lv = value(*n.lhs);
        RtValue rv = value(*n.rhs);
        if (n.op == BinaryOp::Eq || n.op == BinaryOp::Ne) {
            if (lv.index() != rv.index())
                raise(FaultKind::TypeMismatch, e.loc(),
                      "comparing " + std::string(kind_name(lv)) + " with " + std::string(kind_name(rv)));
            bool eq = false;
            if (const auto* a = std::get_if<ArrayRef>(&lv))
                eq = **a == *std::get<ArrayRef>(rv);
            else
                eq = lv == rv;
            return n.op == BinaryOp::Eq ? eq : !eq;
        }
        const Int a = as_int(lv, n.lhs->loc());
        const Int b = as_int(rv, n.rhs->loc());
        Int out = 0;
        switch (n.op) {
        case BinaryOp::Add:
            if (__builtin_add_overflow(a, b, &out))
                raise(FaultKind::Overflow, e.loc(), "addition overflows");
            return out;
        case BinaryOp::Sub:
            if (__builtin_sub_overflow(a, b, &out))
                raise(FaultKind::Overflow, e.loc(), "subtraction overflows");
            return out;
        case BinaryOp::Mul:
            if (__builtin_mul_overflow(a, b, &out))
                raise(FaultKind::Overflow, e.loc(), "multiplication overflows");
            return out;
        case BinaryOp::Div:
        case BinaryOp::Mod:
            if (b == 0)
                raise(FaultKind::DivisionByZero, e.loc(), n.op == BinaryOp::Div ? "division by zero" : "modulo by zero");
            if (a == std::numeric_limits<Int>::min() && b == -1)
                raise(FaultKind::Overflow, e.loc(), "division overflows");
            return n.op == BinaryOp::Div ? a / b : a % b;
        case BinaryOp::Lt: return a < b;
        case BinaryOp::Le: return a <= b;
        case BinaryOp::Gt: return a > b;
        case BinaryOp::Ge: return a >= b;
        default: break;
        }
        raise(FaultKind::TypeMismatch, e.loc(), "unsupported operator");
    }

    RtValue node_value(const Expr& e, const QuantExpr&)
    {
        if (code_mode_)
            raise(FaultKind::TypeMismatch, e.loc(), "quantifier in implementation code");
        return tri_to_value(tri(e), e.loc());
    }

    RtValue node_value(const Expr& e, const CallExpr& n)
    {
        std::vector<RtValue> args;
        args.reserve(n.args.size());
        for (const auto& a : n.args)
            args.push_back(value(a));
        if (find_builtin(n.callee)) {
            std::vector<Value> vals;
            for (const auto& a : args)
                vals.push_back(to_value(a));
            auto r = eval_builtin(n.callee, vals);
            if (auto* f = std::get_if<Fault>(&r)) {
                f->loc = e.loc();
                throw FaultSignal{*f};
            }
            return to_runtime(std::get<Value>(r));
        }
        const FunctionDef* f = program_.find(n.callee);
        if (!f)
            raise(FaultKind::NoImplementation, e.loc(), "call to undefined function '" + n.callee + "'");
        return call(*f, args, e.loc());
    }

    RtValue call(const FunctionDef& f, std::vector<RtValue>& args, SourceLoc loc)
    {
        if (f.spec_only())
            raise(FaultKind::NoImplementation, loc, "'" + f.name + "' has no implementation body");
        if (args.size() != f.params.size())
            raise(FaultKind::TypeMismatch, loc, "wrong number of arguments to '" + f.name + "'");
        tick(loc);
        char probe = 0;
        if (depth_ + 1 > budget_.max_depth || (floor_ && &probe < floor_))
            raise(FaultKind::DepthBudget, loc,
                  "recursion depth budget of " + std::to_string(budget_.max_depth) + " exhausted in '" + f.name + "'");

        Frame frame;
        for (std::size_t i = 0; i < args.size(); ++i)
            frame.vars.emplace_back(f.params[i].name, args[i]);

        const bool saved_mode = code_mode_;
        frames_.push_back(std::move(frame));
        ++depth_;
        code_mode_ = true;
        struct Restore {
            Machine& m;
            bool mode;
            ~Restore()
            {
                m.frames_.pop_back();
                --m.depth_;
                m.code_mode_ = mode;
            }
        } restore{*this, saved_mode};

        if (exec_block(f.body) != Flow::Return)
            raise(FaultKind::MissingReturn, loc, "'" + f.name + "' finished without returning");
        // Array arguments were mutated in place through the shared handles.
        return std::move(ret_);
    }

    // ---- statements ----

    Flow exec_block(const Block& block)
    {
        auto& vars = frames_.back().vars;
        const std::size_t mark = vars.size();
        Flow flow = Flow::Normal;
        for (const auto& s : block) {
            flow = exec(s);
            if (flow != Flow::Normal)
                break;
        }
        frames_.back().vars.resize(mark);
        return flow;
    }

    Flow exec(const Stmt& s)
    {
        tick(s.loc());
        return std::visit([&](const auto& n) { return exec_node(s, n); }, s.node);
    }

    Flow exec_node(const Stmt&, const DeclStmt& n)
    {
        RtValue v = value(n.init);
        frames_.back().vars.emplace_back(n.name, std::move(v));
        return Flow::Normal;
    }

    Flow exec_node(const Stmt& s, const AssignStmt& n)
    {
        if (n.index) {
            const Int idx = as_int(value(*n.index), n.index->loc());
            const Int v = as_int(value(n.value), n.value.loc());
            const ArrayRef arr = as_array(lookup(n.target), s.loc());
            if (idx < 0 || static_cast<std::uint64_t>(idx) >= arr->size())
                raise(FaultKind::IndexOutOfBounds, s.loc(),
                      "write to index " + std::to_string(idx) + " of array of size " + std::to_string(arr->size()));
            (*arr)[static_cast<std::size_t>(idx)] = v;
            return Flow::Normal;
        }
        RtValue v = value(n.value);
        lookup(n.target) = std::move(v);
        return Flow::Normal;
    }

    Flow exec_node(const Stmt&, const IfStmt& n)
    {
        if (as_bool(value(n.cond), n.cond.loc()))
            return exec_block(n.then_branch);
        return exec_block(n.else_branch);
    }

    Flow exec_node(const Stmt&, const WhileStmt& n)
    {
        while (true) {
            tick(n.cond.loc());
            if (!as_bool(value(n.cond), n.cond.loc()))
                return Flow::Normal;
            const Flow f = exec_block(n.body);
            if (f == Flow::Break)
                return Flow::Normal;
            if (f == Flow::Return)
                return f;
        }
    }

    Flow exec_node(const Stmt&, const BreakStmt&) { return Flow::Break; }

    Flow exec_node(const Stmt&, const ReturnStmt& n)
    {
        ret_ = value(n.value);
        return Flow::Return;
    }

    Flow exec_node(const Stmt&, const ExprStmt& n)
    {
        value(n.expr);
        return Flow::Normal;
    }
};

Bindings with_outputs(const Bindings& input, const Bindings& output)
{
    Bindings env = input;
    for (const auto& [name, v] : output)
        env.set(name, v);
    return env;
}

} // namespace

void run_on_deep_stack(const std::function<void()>& fn)
{
    with_deep_stack([&] {
        fn();
        return 0;
    });
}

PredicateResult eval_predicate_detailed(const NamedPredicate& pred, const Env& env, const Budget& budget)
{
    return with_deep_stack([&] {
        PredicateResult r;
        Machine m(env.program(), budget, &r.masked);
        r.value = m.predicate(pred, env.bindings());
        return r;
    });
}

PredicateResult eval_predicate_detailed(const Expr& pred, const Env& env, const Budget& budget)
{
    return with_deep_stack([&] {
        PredicateResult r;
        Machine m(env.program(), budget, &r.masked);
        r.value = m.predicate(pred, env.bindings());
        return r;
    });
}

TriBool eval_predicate(const NamedPredicate& pred, const Env& env, const Budget& budget)
{
    return eval_predicate_detailed(pred, env, budget).value;
}

TriBool eval_predicate(const Expr& pred, const Env& env, const Budget& budget)
{
    return eval_predicate_detailed(pred, env, budget).value;
}

std::variant<Value, Fault> eval_builtin(std::string_view name, std::span<const Value> args)
{
    const auto sig = find_builtin(name);
    if (!sig)
        return Fault{FaultKind::NoImplementation, {}, "unknown built-in '" + std::string(name) + "'"};
    if (args.size() != 1)
        return Fault{FaultKind::TypeMismatch, {}, "built-in '" + std::string(name) + "' takes one argument"};
    const Value& a = args[0];
    if (a.type() != sig->param)
        return Fault{FaultKind::TypeMismatch, {},
                     "built-in '" + std::string(name) + "' expects " + std::string(to_string(sig->param)) + ", got " +
                         std::string(to_string(a.type()))};
    if (name == "scasize")
        return Value(static_cast<Int>(a.as_array().size()));
    const Int c = a.as_int();
    if (name == "scalpha")
        return Value((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'));
    if (name == "scnum")
        return Value(c >= '0' && c <= '9');
    return Value(c == ' '); // scblank
}

ExecOutcome exec_function(const AnnotatedProgram& program, const FunctionDef& f, const Bindings& args,
                          const Budget& budget)
{
    return with_deep_stack([&] {
        Machine m(program, budget, nullptr);
        return m.exec(f, args);
    });
}

Bindings outputs_of(const FunctionDef& f, const Bindings& input, const Returned& r)
{
    Bindings out;
    out.set(return_value_name, r.rv);
    for (const auto& [name, v] : r.final_ref_state) {
        const Value* before = input.find(name);
        if (!before || *before != v)
            out.set(name, v);
    }
    (void)f;
    return out;
}

PredicateResult eval_pre(const AnnotatedProgram& program, const FunctionDef& f, const Bindings& input,
                         const Budget& budget)
{
    if (!f.pre)
        return PredicateResult{TriBool::falsity(), {}};
    return eval_predicate_detailed(*f.pre, Env(program, input), budget);
}

PredicateResult eval_post(const AnnotatedProgram& program, const FunctionDef& f, const Bindings& input,
                          const Bindings& output, const Budget& budget)
{
    if (!f.post)
        return PredicateResult{TriBool::truth(), {}};
    return eval_predicate_detailed(*f.post, Env(program, with_outputs(input, output)), budget);
}

TriBool eval_pre_on_behavior(const AnnotatedProgram& program, const Behavior& b, const Budget& budget)
{
    return eval_pre(program, program.entry_function(), b.input, budget).value;
}

TriBool eval_post_on_behavior(const AnnotatedProgram& program, const Behavior& b, const Budget& budget)
{
    return eval_post(program, program.entry_function(), b.input, b.output, budget).value;
}

} // namespace speccheck::eval
