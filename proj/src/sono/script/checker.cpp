#include "sono/script/checker.hpp"

#include "sono/script/catalog.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>

namespace sono::script {
namespace {

constexpr double kMinLiteralSize = 2.5;
constexpr double kMaxLiteralSize = 5.0;

std::string quoted(std::string_view s)
{
    return "'" + std::string(s) + "'";
}

bool compatible(Type expected, Type actual)
{
    return expected == Type::Any || actual == Type::Any || expected == actual;
}

std::string list_names(std::span<const std::string_view> names)
{
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i > 0)
            out += ", ";
        out += names[i];
    }
    return out;
}

std::string number_text(double v)
{
    std::ostringstream os;
    os << v;
    return os.str();
}

std::optional<double> literal_number(const Expr& e)
{
    if (const auto* n = std::get_if<NumberLit>(&e.node))
        return n->value;
    if (const auto* u = std::get_if<Unary>(&e.node); u && u->op == UnaryOp::Negate) {
        if (auto v = literal_number(*u->operand))
            return -*v;
    }
    return std::nullopt;
}

struct GlobalInfo {
    int index;
    Type type;
};

struct LocalInfo {
    int index;
    Type type;
};

struct CallEdge {
    int to;
    SourcePos pos;
};

class Checker {
public:
    Checker(Program& program, std::vector<Diagnostic>& diags) : program_(program), diags_(diags) {}

    void run()
    {
        check_title();
        check_globals();
        check_handlers();
        check_call_graph();
    }

private:
    void error(DiagCode code, SourcePos pos, std::string message)
    {
        diags_.push_back(Diagnostic::error(code, pos, std::move(message)));
    }

    void check_title()
    {
        if (!program_.title) {
            error(DiagCode::MissingTitle, SourcePos{1, 1}, "script has no title; add a line such as title \"My Visual\"");
        } else if (program_.title->find_first_not_of(" \t") == std::string::npos) {
            error(DiagCode::MissingTitle, program_.title_pos, "title must not be empty");
        }
    }

    void check_globals()
    {
        for (std::size_t i = 0; i < program_.vars.size(); ++i) {
            auto& var = program_.vars[i];
            Type type = Type::Any;
            if (var.init) {
                in_default_ = true;
                type = expr(*var.init);
                in_default_ = false;
                if (type == Type::Void) {
                    error(DiagCode::Type, var.init->pos, "default of " + quoted(var.name) + " produces no value");
                    type = Type::Any;
                }
            } else {
                error(DiagCode::UndefinedVar, var.pos,
                      "variable " + quoted(var.name) + " has no initializer; every variable needs a default value");
            }
            if (reserved(var.name)) {
                error(DiagCode::Duplicate, var.pos, quoted(var.name) + " is a reserved name");
            } else if (globals_.contains(var.name)) {
                error(DiagCode::Duplicate, var.pos, "variable " + quoted(var.name) + " is declared more than once");
            } else {
                globals_.emplace(var.name, GlobalInfo{static_cast<int>(i), type});
            }
            global_types_.push_back(type);
        }
    }

    static bool reserved(std::string_view name)
    {
        return name == "draw" || find_constant(name) || find_builtin(name) || find_handler(name);
    }

    void check_handlers()
    {
        std::array<const FnDecl*, kHandlerCount> seen{};
        for (auto& fn : program_.fns) {
            const HandlerSpec* spec = find_handler(fn.name);
            if (!spec) {
                error(DiagCode::UnknownFunction, fn.pos,
                      "only the handlers on_sound, update and draw may be defined; found fn " + quoted(fn.name));
                continue;
            }
            const int k = static_cast<int>(spec->kind);
            if (seen[static_cast<std::size_t>(k)]) {
                error(DiagCode::Duplicate, fn.pos, "handler " + quoted(fn.name) + " is defined more than once");
                continue;
            }
            seen[static_cast<std::size_t>(k)] = &fn;
            handler_fns_[static_cast<std::size_t>(k)] = &fn;
            if (fn.params.size() != spec->params.size()) {
                error(DiagCode::Arity, fn.pos,
                      "handler " + quoted(fn.name) + " must take " + std::to_string(spec->params.size()) +
                          " parameter(s) (" + list_names(spec->params) + "), found " +
                          std::to_string(fn.params.size()));
            }
        }
        for (const auto& spec : handlers()) {
            if (!seen[static_cast<std::size_t>(spec.kind)]) {
                error(DiagCode::MissingHandler, program_.eof_pos,
                      "missing required handler: fn " + std::string(spec.name) + "(" + list_names(spec.params) +
                          ")");
            }
        }
        for (std::size_t k = 0; k < handler_fns_.size(); ++k) {
            if (handler_fns_[k])
                check_function(*handler_fns_[k], handlers()[k]);
        }
    }

    void check_function(FnDecl& fn, const HandlerSpec& spec)
    {
        current_handler_ = static_cast<int>(spec.kind);
        scopes_.clear();
        scopes_.emplace_back();
        next_local_ = 0;
        loop_depth_ = 0;
        for (std::size_t i = 0; i < fn.params.size(); ++i) {
            const auto& p = fn.params[i];
            const Type t = fn.params.size() == spec.param_types.size() ? spec.param_types[i] : Type::Any;
            if (scopes_.back().contains(p.name)) {
                error(DiagCode::Duplicate, p.pos, "parameter " + quoted(p.name) + " is declared more than once");
                ++next_local_;
                continue;
            }
            scopes_.back().emplace(p.name, LocalInfo{next_local_++, t});
        }
        block(fn.body);
        fn.local_count = next_local_;
        current_handler_ = -1;
    }

    void block(Block& stmts)
    {
        scopes_.emplace_back();
        for (auto& s : stmts)
            stmt(*s);
        scopes_.pop_back();
    }

    const LocalInfo* lookup_local(const std::string& name) const
    {
        for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
            if (auto f = it->find(name); f != it->end())
                return &f->second;
        }
        return nullptr;
    }

    void stmt(Stmt& s)
    {
        std::visit([&](auto& node) { stmt_node(s, node); }, s.node);
    }

    void stmt_node(Stmt& s, LetStmt& let)
    {
        Type t = Type::Any;
        if (let.init) {
            t = value_expr(*let.init, "initializer of " + quoted(let.name));
        } else {
            error(DiagCode::UndefinedVar, s.pos, "variable " + quoted(let.name) + " has no initializer");
        }
        if (reserved(let.name)) {
            error(DiagCode::Duplicate, s.pos, quoted(let.name) + " is a reserved name");
            return;
        }
        if (scopes_.back().contains(let.name)) {
            error(DiagCode::Duplicate, s.pos, "variable " + quoted(let.name) + " is already declared in this block");
            return;
        }
        let.slot = Slot{Slot::Scope::Local, next_local_};
        scopes_.back().emplace(let.name, LocalInfo{next_local_++, t});
    }

    void stmt_node(Stmt&, AssignStmt& assign)
    {
        const Type target = assign_target(*assign.target);
        const Type value = value_expr(*assign.value, "assigned value");
        if (assign.op == AssignOp::Set) {
            if (!compatible(target, value))
                error(DiagCode::Type, assign.value->pos,
                      "cannot assign a " + std::string(type_name(value)) + " to a " +
                          std::string(type_name(target)) + " variable");
            return;
        }
        static constexpr BinaryOp ops[] = {BinaryOp::Add, BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul, BinaryOp::Div};
        const Type result = binary_type(ops[static_cast<int>(assign.op)], target, value, assign.value->pos);
        if (!compatible(target, result))
            error(DiagCode::Type, assign.value->pos,
                  "compound assignment would change a " + std::string(type_name(target)) + " into a " +
                      std::string(type_name(result)));
    }

    void stmt_node(Stmt&, IfStmt& s)
    {
        condition(*s.cond, "if");
        block(s.then_block);
        block(s.else_block);
    }

    void stmt_node(Stmt&, ForStmt& s)
    {
        Type var_type = Type::Number;
        if (s.end) {
            const Type a = value_expr(*s.start, "range start");
            const Type b = value_expr(*s.end, "range end");
            if (!compatible(Type::Number, a))
                error(DiagCode::Type, s.start->pos, "range start must be a number, got " + std::string(type_name(a)));
            if (!compatible(Type::Number, b))
                error(DiagCode::Type, s.end->pos, "range end must be a number, got " + std::string(type_name(b)));
        } else {
            const Type t = value_expr(*s.start, "loop source");
            if (!compatible(Type::List, t))
                error(DiagCode::Type, s.start->pos,
                      "for-in needs a range a..b or a list, got " + std::string(type_name(t)));
            var_type = Type::Any;
        }
        scopes_.emplace_back();
        s.slot = Slot{Slot::Scope::Local, next_local_};
        scopes_.back().emplace(s.var, LocalInfo{next_local_++, var_type});
        ++loop_depth_;
        block(s.body);
        --loop_depth_;
        scopes_.pop_back();
    }

    void stmt_node(Stmt&, WhileStmt& s)
    {
        condition(*s.cond, "while");
        ++loop_depth_;
        block(s.body);
        --loop_depth_;
    }

    void stmt_node(Stmt&, ReturnStmt&) {}

    void stmt_node(Stmt& s, BreakStmt&)
    {
        if (loop_depth_ == 0)
            error(DiagCode::Syntax, s.pos, "'break' outside of a loop");
    }

    void stmt_node(Stmt& s, ContinueStmt&)
    {
        if (loop_depth_ == 0)
            error(DiagCode::Syntax, s.pos, "'continue' outside of a loop");
    }

    void stmt_node(Stmt&, ExprStmt& s) { expr(*s.expr); }

    void condition(Expr& e, std::string_view what)
    {
        const Type t = value_expr(e, std::string(what) + " condition");
        if (!compatible(Type::Bool, t))
            error(DiagCode::Type, e.pos, std::string(what) + " condition must be a bool, got " + std::string(type_name(t)));
    }

    // Expression whose value is used; Void is an error.
    Type value_expr(Expr& e, const std::string& what)
    {
        const Type t = expr(e);
        if (t == Type::Void) {
            error(DiagCode::Type, e.pos, what + " produces no value");
            return Type::Any;
        }
        return t;
    }

    Type assign_target(Expr& e)
    {
        if (auto* id = std::get_if<Ident>(&e.node)) {
            if (const LocalInfo* local = lookup_local(id->name)) {
                id->slot = Slot{Slot::Scope::Local, local->index};
                return local->type;
            }
            if (auto g = globals_.find(id->name); g != globals_.end()) {
                id->slot = Slot{Slot::Scope::Global, g->second.index};
                return g->second.type;
            }
            if (find_constant(id->name)) {
                error(DiagCode::Type, e.pos, "cannot assign to constant " + quoted(id->name));
                return Type::Any;
            }
            error(DiagCode::UndefinedVar, e.pos, "assignment to undeclared variable " + quoted(id->name));
            return Type::Any;
        }
        // Member and index targets: resolve the base like any expression.
        return expr(e);
    }

    Type expr(Expr& e)
    {
        return std::visit([&](auto& node) { return expr_node(e, node); }, e.node);
    }

    Type expr_node(Expr&, NumberLit&) { return Type::Number; }
    Type expr_node(Expr&, StringLit&) { return Type::String; }
    Type expr_node(Expr&, BoolLit&) { return Type::Bool; }

    Type expr_node(Expr&, ListLit& list)
    {
        for (auto& item : list.items)
            value_expr(*item, "list element");
        return Type::List;
    }

    Type expr_node(Expr& e, Ident& id)
    {
        if (!in_default_) {
            if (const LocalInfo* local = lookup_local(id.name)) {
                id.slot = Slot{Slot::Scope::Local, local->index};
                return local->type;
            }
        }
        if (auto g = globals_.find(id.name); g != globals_.end()) {
            id.slot = Slot{Slot::Scope::Global, g->second.index};
            return g->second.type;
        }
        int ci = -1;
        if (find_constant(id.name, &ci)) {
            id.slot = Slot{Slot::Scope::Constant, ci};
            return Type::Number;
        }
        if (in_default_ && std::any_of(program_.vars.begin(), program_.vars.end(),
                                       [&](const VarDecl& v) { return v.name == id.name; })) {
            error(DiagCode::UndefinedVar, e.pos,
                  "variable " + quoted(id.name) + " is used before its declaration; defaults may only use variables "
                                                  "declared above");
        } else {
            error(DiagCode::UndefinedVar, e.pos, "undefined variable " + quoted(id.name));
        }
        return Type::Any;
    }

    Type expr_node(Expr& e, Unary& u)
    {
        const Type t = value_expr(*u.operand, "operand");
        if (u.op == UnaryOp::Not) {
            if (!compatible(Type::Bool, t))
                error(DiagCode::Type, e.pos, "'not' needs a bool, got " + std::string(type_name(t)));
            return Type::Bool;
        }
        if (t != Type::Any && t != Type::Number && t != Type::Vec2) {
            error(DiagCode::Type, e.pos, "cannot negate a " + std::string(type_name(t)));
            return Type::Any;
        }
        return t;
    }

    Type expr_node(Expr& e, Binary& b)
    {
        const Type lhs = value_expr(*b.lhs, "left operand");
        const Type rhs = value_expr(*b.rhs, "right operand");
        return binary_type(b.op, lhs, rhs, e.pos);
    }

    Type binary_type(BinaryOp op, Type lhs, Type rhs, SourcePos pos)
    {
        auto bad = [&](std::string_view sym) {
            error(DiagCode::Type, pos,
                  "operator " + std::string(sym) + " cannot combine " + std::string(type_name(lhs)) + " and " +
                      std::string(type_name(rhs)));
            return Type::Any;
        };
        const bool any = lhs == Type::Any || rhs == Type::Any;
        switch (op) {
        case BinaryOp::And:
        case BinaryOp::Or:
            if (!compatible(Type::Bool, lhs) || !compatible(Type::Bool, rhs))
                bad(op == BinaryOp::And ? "and" : "or");
            return Type::Bool;
        case BinaryOp::Eq:
        case BinaryOp::Ne:
            if (!any && lhs != rhs)
                bad(op == BinaryOp::Eq ? "==" : "!=");
            return Type::Bool;
        case BinaryOp::Lt:
        case BinaryOp::Le:
        case BinaryOp::Gt:
        case BinaryOp::Ge:
            if (!compatible(Type::Number, lhs) || !compatible(Type::Number, rhs))
                bad("comparison");
            return Type::Bool;
        case BinaryOp::Add:
            if (any)
                return lhs == Type::Any ? rhs : lhs;
            if (lhs == rhs && (lhs == Type::Number || lhs == Type::Vec2 || lhs == Type::String))
                return lhs;
            return bad("+");
        case BinaryOp::Sub:
            if (any)
                return lhs == Type::Any ? rhs : lhs;
            if (lhs == rhs && (lhs == Type::Number || lhs == Type::Vec2))
                return lhs;
            return bad("-");
        case BinaryOp::Mul:
            if (lhs == Type::Number && rhs == Type::Number)
                return Type::Number;
            if ((lhs == Type::Vec2 && compatible(Type::Number, rhs)) || (rhs == Type::Vec2 && compatible(Type::Number, lhs)))
                return Type::Vec2;
            if (lhs == Type::Color && compatible(Type::Number, rhs))
                return Type::Color;
            if (any) {
                const Type known = lhs == Type::Any ? rhs : lhs;
                if (known == Type::Any || known == Type::Number)
                    return Type::Any;
                if (known == Type::Vec2 || known == Type::Color)
                    return known;
            }
            return bad("*");
        case BinaryOp::Div:
            if (compatible(Type::Number, rhs) && (lhs == Type::Number || lhs == Type::Vec2))
                return lhs;
            if (any && (lhs == Type::Any || lhs == Type::Number || lhs == Type::Vec2) &&
                compatible(Type::Number, rhs))
                return lhs;
            return bad("/");
        case BinaryOp::Mod:
            if (compatible(Type::Number, lhs) && compatible(Type::Number, rhs))
                return Type::Number;
            return bad("%");
        }
        return Type::Any;
    }

    void expect_arg(const std::string& callee, std::size_t i, std::string_view name, Type expected, Type actual,
                    SourcePos pos)
    {
        if (!compatible(expected, actual)) {
            error(DiagCode::Type, pos,
                  callee + " argument " + std::to_string(i + 1) + (name.empty() ? "" : " (" + std::string(name) + ")") +
                      " expects " + std::string(type_name(expected)) + ", got " + std::string(type_name(actual)));
        }
    }

    Type expr_node(Expr& e, Call& call)
    {
        std::vector<Type> args;
        for (auto& a : call.args)
            args.push_back(value_expr(*a, "argument"));

        if (const HandlerSpec* h = find_handler(call.callee)) {
            if (in_default_) {
                error(DiagCode::UnknownFunction, e.pos, "handlers cannot be called from variable defaults");
                return Type::Void;
            }
            call.handler = static_cast<int>(h->kind);
            if (args.size() != h->params.size()) {
                error(DiagCode::Arity, e.pos,
                      "handler " + quoted(h->name) + " takes " + std::to_string(h->params.size()) + " argument(s), got " +
                          std::to_string(args.size()));
            } else {
                for (std::size_t i = 0; i < args.size(); ++i)
                    expect_arg(std::string(h->name), i, h->params[i], h->param_types[i], args[i], call.args[i]->pos);
            }
            if (current_handler_ >= 0)
                edges_[static_cast<std::size_t>(current_handler_)].push_back(CallEdge{call.handler, e.pos});
            return Type::Void;
        }

        const BuiltinSpec* spec = find_builtin(call.callee);
        if (!spec) {
            if (find_constant(call.callee))
                error(DiagCode::UnknownFunction, e.pos, quoted(call.callee) + " is a constant; write it without ()");
            else
                error(DiagCode::UnknownFunction, e.pos,
                      "unknown function " + quoted(call.callee) + "; see the builtin list");
            return Type::Any;
        }
        call.builtin = static_cast<int>(spec->id);
        const int n = static_cast<int>(args.size());
        if (n < spec->min_args || n > spec->max_args) {
            const std::string expected = spec->min_args == spec->max_args
                                             ? std::to_string(spec->min_args)
                                             : std::to_string(spec->min_args) + " or " + std::to_string(spec->max_args);
            error(DiagCode::Arity, e.pos,
                  quoted(spec->name) + " expects " + expected + " argument(s), got " + std::to_string(n));
            return builtin_result(spec->id, args);
        }
        const std::string name(spec->name);
        switch (spec->id) {
        case Builtin::Lerp: {
            const Type a = args[0];
            const Type b = args[1];
            for (int i = 0; i < 2; ++i) {
                const Type t = args[static_cast<std::size_t>(i)];
                if (t != Type::Any && t != Type::Number && t != Type::Vec2 && t != Type::Color)
                    error(DiagCode::Type, call.args[static_cast<std::size_t>(i)]->pos,
                          "lerp argument " + std::to_string(i + 1) + " expects number, vec2 or color, got " +
                              std::string(type_name(t)));
            }
            if (a != Type::Any && b != Type::Any && a != b)
                error(DiagCode::Type, e.pos,
                      "lerp endpoints must have the same kind, got " + std::string(type_name(a)) + " and " +
                          std::string(type_name(b)));
            expect_arg(name, 2, "t", Type::Number, args[2], call.args[2]->pos);
            break;
        }
        case Builtin::Len:
            if (args[0] != Type::Any && args[0] != Type::List && args[0] != Type::String)
                error(DiagCode::Type, call.args[0]->pos, "len expects a list or string, got " +
                                                             std::string(type_name(args[0])));
            break;
        case Builtin::Push:
            expect_arg(name, 0, "list", Type::List, args[0], call.args[0]->pos);
            break;
        default:
            for (std::size_t i = 0; i < args.size(); ++i)
                expect_arg(name, i, "", Type::Number, args[i], call.args[i]->pos);
            break;
        }
        return builtin_result(spec->id, args);
    }

    static Type builtin_result(Builtin id, const std::vector<Type>& args)
    {
        switch (id) {
        case Builtin::Vec2: return Type::Vec2;
        case Builtin::Rgb:
        case Builtin::Rgb255:
        case Builtin::Hsv: return Type::Color;
        case Builtin::Push: return Type::List;
        case Builtin::Lerp:
            if (args.size() >= 2)
                return args[0] != Type::Any ? args[0] : args[1];
            return Type::Any;
        default: return Type::Number;
        }
    }

    Type expr_node(Expr& e, DrawCall& call)
    {
        std::vector<Type> args;
        for (auto& a : call.args)
            args.push_back(value_expr(*a, "argument"));
        const PrimitiveSpec* spec = find_primitive(call.primitive);
        if (!spec) {
            std::string names;
            for (const auto& p : primitives())
                names += (names.empty() ? "" : ", ") + std::string(p.name);
            error(DiagCode::UnknownPrimitive, call.name_pos,
                  "draw." + call.primitive + " does not exist; available shapes: " + names);
            return Type::Void;
        }
        call.primitive_id = static_cast<int>(spec->id);
        const std::string callee = "draw." + std::string(spec->name);
        if (args.size() != spec->params.size()) {
            error(DiagCode::Arity, e.pos,
                  callee + " expects " + std::to_string(spec->params.size()) + " arguments (" +
                      list_names(spec->param_names) + "), got " + std::to_string(args.size()));
            return Type::Void;
        }
        for (std::size_t i = 0; i < args.size(); ++i)
            expect_arg(callee, i, spec->param_names[i], spec->params[i], args[i], call.args[i]->pos);
        if (spec->id == Primitive::Rect) {
            for (std::size_t i : {std::size_t{1}, std::size_t{2}}) {
                if (auto v = literal_number(*call.args[i]); v && (*v < kMinLiteralSize || *v > kMaxLiteralSize)) {
                    diags_.push_back(Diagnostic::warning(
                        DiagCode::SizeRange, call.args[i]->pos,
                        "draw.rect " + std::string(spec->param_names[i]) + " " + number_text(*v) +
                            " is outside the recommended range [2.5, 5]"));
                }
            }
        }
        return Type::Void;
    }

    Type expr_node(Expr& e, Member& m)
    {
        const Type t = value_expr(*m.object, "object");
        if (t == Type::Any)
            return Type::Any;
        if (t == Type::Vec2 && (m.field == "x" || m.field == "y"))
            return Type::Number;
        if (t == Type::Color && (m.field == "r" || m.field == "g" || m.field == "b" || m.field == "a"))
            return Type::Number;
        error(DiagCode::Type, e.pos, "a " + std::string(type_name(t)) + " has no field " + quoted(m.field));
        return Type::Any;
    }

    Type expr_node(Expr& e, Index& ix)
    {
        const Type t = value_expr(*ix.object, "indexed value");
        const Type i = value_expr(*ix.index, "index");
        if (!compatible(Type::List, t))
            error(DiagCode::Type, e.pos, "only lists can be indexed, got " + std::string(type_name(t)));
        if (!compatible(Type::Number, i))
            error(DiagCode::Type, ix.index->pos, "list index must be a number, got " + std::string(type_name(i)));
        return Type::Any;
    }

    void check_call_graph()
    {
        // Colors: 0 unvisited, 1 on stack, 2 done.
        std::array<int, kHandlerCount> color{};
        std::function<void(int)> visit = [&](int n) {
            color[static_cast<std::size_t>(n)] = 1;
            for (const auto& edge : edges_[static_cast<std::size_t>(n)]) {
                const int c = color[static_cast<std::size_t>(edge.to)];
                if (c == 1) {
                    error(DiagCode::Recursion, edge.pos,
                          "call to " + quoted(handlers()[static_cast<std::size_t>(edge.to)].name) +
                              " creates a recursive cycle; handlers may not call themselves directly or indirectly");
                } else if (c == 0) {
                    visit(edge.to);
                }
            }
            color[static_cast<std::size_t>(n)] = 2;
        };
        for (int n = 0; n < kHandlerCount; ++n) {
            if (color[static_cast<std::size_t>(n)] == 0)
                visit(n);
        }
    }

    Program& program_;
    std::vector<Diagnostic>& diags_;
    std::unordered_map<std::string, GlobalInfo> globals_;
    std::vector<Type> global_types_;
    std::vector<std::unordered_map<std::string, LocalInfo>> scopes_;
    std::array<FnDecl*, kHandlerCount> handler_fns_{};
    std::array<std::vector<CallEdge>, kHandlerCount> edges_{};
    int next_local_ = 0;
    int loop_depth_ = 0;
    int current_handler_ = -1;
    bool in_default_ = false;
};

} // namespace

void check_program(Program& program, std::vector<Diagnostic>& diagnostics)
{
    Checker(program, diagnostics).run();
}

} // namespace sono::script
