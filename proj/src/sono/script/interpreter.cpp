#include "sono/script/interpreter.hpp"

#include "sono/script/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sono::script {
namespace {

std::string kind_of(const Value& v)
{
    return std::string(type_name(v.type()));
}

std::string num_text(double v)
{
    std::ostringstream os;
    os << v;
    return os.str();
}

// Thrown by the pure helpers below; the caller attaches a position.
struct OpError {
    std::string message;
};

Value apply_binary(BinaryOp op, const Value& lhs, const Value& rhs)
{
    auto bad = [&](std::string_view sym) -> OpError {
        return OpError{"operator " + std::string(sym) + " cannot combine " + kind_of(lhs) + " and " + kind_of(rhs)};
    };
    const bool nums = lhs.is_number() && rhs.is_number();
    switch (op) {
    case BinaryOp::Eq: return Value(lhs == rhs);
    case BinaryOp::Ne: return Value(!(lhs == rhs));
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge: {
        if (!nums)
            throw bad("comparison");
        const double a = lhs.as_number();
        const double b = rhs.as_number();
        switch (op) {
        case BinaryOp::Lt: return Value(a < b);
        case BinaryOp::Le: return Value(a <= b);
        case BinaryOp::Gt: return Value(a > b);
        default: return Value(a >= b);
        }
    }
    case BinaryOp::Add:
        if (nums)
            return Value(lhs.as_number() + rhs.as_number());
        if (lhs.type() == Type::Vec2 && rhs.type() == Type::Vec2)
            return Value(Vec2{lhs.as_vec2().x + rhs.as_vec2().x, lhs.as_vec2().y + rhs.as_vec2().y});
        if (lhs.type() == Type::String && rhs.type() == Type::String) {
            if (lhs.as_string().size() + rhs.as_string().size() > kMaxStringLength)
                throw OpError{"string longer than " + std::to_string(kMaxStringLength) + " characters"};
            return Value(lhs.as_string() + rhs.as_string());
        }
        throw bad("+");
    case BinaryOp::Sub:
        if (nums)
            return Value(lhs.as_number() - rhs.as_number());
        if (lhs.type() == Type::Vec2 && rhs.type() == Type::Vec2)
            return Value(Vec2{lhs.as_vec2().x - rhs.as_vec2().x, lhs.as_vec2().y - rhs.as_vec2().y});
        throw bad("-");
    case BinaryOp::Mul:
        if (nums)
            return Value(lhs.as_number() * rhs.as_number());
        if (lhs.type() == Type::Vec2 && rhs.is_number())
            return Value(Vec2{lhs.as_vec2().x * rhs.as_number(), lhs.as_vec2().y * rhs.as_number()});
        if (lhs.is_number() && rhs.type() == Type::Vec2)
            return Value(Vec2{rhs.as_vec2().x * lhs.as_number(), rhs.as_vec2().y * lhs.as_number()});
        if (lhs.type() == Type::Color && rhs.is_number()) {
            const Color& c = lhs.as_color();
            const double k = rhs.as_number();
            return Value(Color::clamped(c.r * k, c.g * k, c.b * k, c.a));
        }
        throw bad("*");
    case BinaryOp::Div:
        if (!rhs.is_number() || !(lhs.is_number() || lhs.type() == Type::Vec2))
            throw bad("/");
        if (rhs.as_number() == 0.0)
            throw OpError{"division by zero"};
        if (lhs.is_number())
            return Value(lhs.as_number() / rhs.as_number());
        return Value(Vec2{lhs.as_vec2().x / rhs.as_number(), lhs.as_vec2().y / rhs.as_number()});
    case BinaryOp::Mod: {
        if (!nums)
            throw bad("%");
        const double b = rhs.as_number();
        if (b == 0.0)
            throw OpError{"modulo by zero"};
        const double a = lhs.as_number();
        return Value(a - b * std::floor(a / b));
    }
    case BinaryOp::And:
    case BinaryOp::Or:
        break;   // short-circuit, handled by the caller
    }
    throw bad("?");
}

bool value_is_finite(const Value& v)
{
    switch (v.type()) {
    case Type::Number: return std::isfinite(v.as_number());
    case Type::Vec2: return std::isfinite(v.as_vec2().x) && std::isfinite(v.as_vec2().y);
    default: return true;
    }
}

Value lerp_values(const Value& a, const Value& b, double t)
{
    t = std::clamp(t, 0.0, 1.0);
    auto mix = [t](double x, double y) { return x + (y - x) * t; };
    if (a.is_number() && b.is_number())
        return Value(mix(a.as_number(), b.as_number()));
    if (a.type() == Type::Vec2 && b.type() == Type::Vec2)
        return Value(Vec2{mix(a.as_vec2().x, b.as_vec2().x), mix(a.as_vec2().y, b.as_vec2().y)});
    if (a.type() == Type::Color && b.type() == Type::Color) {
        const Color& x = a.as_color();
        const Color& y = b.as_color();
        return Value(Color::clamped(mix(x.r, y.r), mix(x.g, y.g), mix(x.b, y.b), mix(x.a, y.a)));
    }
    throw OpError{"lerp endpoints must be two numbers, two vec2 or two colors, got " + kind_of(a) + " and " +
                  kind_of(b)};
}

Color hsv_color(double h, double s, double v, double a)
{
    h = h - std::floor(h);
    s = std::clamp(s, 0.0, 1.0);
    v = std::clamp(v, 0.0, 1.0);
    const double scaled = h * 6.0;
    const int sector = static_cast<int>(scaled) % 6;
    const double f = scaled - std::floor(scaled);
    const double p = v * (1.0 - s);
    const double q = v * (1.0 - s * f);
    const double u = v * (1.0 - s * (1.0 - f));
    switch (sector) {
    case 0: return Color::clamped(v, u, p, a);
    case 1: return Color::clamped(q, v, p, a);
    case 2: return Color::clamped(p, v, u, a);
    case 3: return Color::clamped(p, q, v, a);
    case 4: return Color::clamped(u, p, v, a);
    default: return Color::clamped(v, p, q, a);
    }
}

double non_negative(double v)
{
    return v < 0.0 ? 0.0 : v;
}

} // namespace

Interpreter::Interpreter(const CompiledScript& script, std::vector<Value>& globals, std::uint64_t budget,
                         std::vector<ShapeCommand>* shapes)
    : script_(script), globals_(globals), budget_(budget), shapes_(shapes)
{
}

void Interpreter::step(SourcePos pos)
{
    if (++steps_ > budget_) {
        throw RuntimeFault{DiagCode::Budget, pos,
                           "step budget of " + std::to_string(budget_) +
                               " exceeded; look for a loop that never ends or does too much work per call"};
    }
}

void Interpreter::fail(SourcePos pos, std::string message) const
{
    throw RuntimeFault{DiagCode::Runtime, pos, std::move(message)};
}

double Interpreter::finite(double v, SourcePos pos) const
{
    if (!std::isfinite(v))
        fail(pos, "arithmetic produced a non-finite number");
    return v;
}

double Interpreter::number(const Value& v, SourcePos pos, std::string_view what) const
{
    if (!v.is_number())
        fail(pos, std::string(what) + " must be a number, got " + kind_of(v));
    return v.as_number();
}

void Interpreter::initialize_globals()
{
    const auto& vars = script_.program.vars;
    globals_.assign(vars.size(), Value());
    for (std::size_t i = 0; i < vars.size(); ++i)
        globals_[i] = eval(*vars[i].init);
}

void Interpreter::call_handler(HandlerKind kind, std::span<const Value> args)
{
    const FnDecl* fn = script_.handlers[static_cast<std::size_t>(kind)];
    Frame frame;
    frame.locals.resize(static_cast<std::size_t>(std::max(fn->local_count, static_cast<int>(args.size()))));
    std::copy(args.begin(), args.end(), frame.locals.begin());
    frames_.push_back(std::move(frame));
    try {
        exec_block(fn->body);
    } catch (...) {
        frames_.pop_back();
        throw;
    }
    frames_.pop_back();
}

Interpreter::Flow Interpreter::exec_block(const Block& block)
{
    for (const auto& s : block) {
        const Flow f = exec(*s);
        if (f != Flow::Normal)
            return f;
    }
    return Flow::Normal;
}

Interpreter::Flow Interpreter::exec(const Stmt& stmt)
{
    step(stmt.pos);
    return std::visit(
        [&](const auto& node) -> Flow {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, LetStmt>) {
                slot_ref(node.slot, stmt.pos) = eval(*node.init);
                return Flow::Normal;
            } else if constexpr (std::is_same_v<T, AssignStmt>) {
                Value value = eval(*node.value);
                if (node.op != AssignOp::Set) {
                    static constexpr BinaryOp ops[] = {BinaryOp::Add, BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul,
                                                       BinaryOp::Div};
                    try {
                        value = apply_binary(ops[static_cast<int>(node.op)], reference(*node.target), value);
                    } catch (const OpError& e) {
                        fail(node.value->pos, e.message);
                    }
                    if (!value_is_finite(value))
                        fail(node.value->pos, "arithmetic produced a non-finite number");
                }
                assign(*node.target, std::move(value), node.value->pos);
                return Flow::Normal;
            } else if constexpr (std::is_same_v<T, IfStmt>) {
                const Value c = eval(*node.cond);
                if (c.type() != Type::Bool)
                    fail(node.cond->pos, "condition must be a bool, got " + kind_of(c));
                return exec_block(c.as_bool() ? node.then_block : node.else_block);
            } else if constexpr (std::is_same_v<T, ForStmt>) {
                return run_loop(stmt, [&]() -> Flow {
                    if (node.end) {
                        const double start = number(eval(*node.start), node.start->pos, "range start");
                        const double end = number(eval(*node.end), node.end->pos, "range end");
                        for (double i = start; i < end; i += 1.0) {
                            step(stmt.pos);
                            slot_ref(node.slot, stmt.pos) = Value(i);
                            const Flow f = exec_block(node.body);
                            if (f == Flow::Break)
                                break;
                            if (f == Flow::Return)
                                return f;
                        }
                    } else {
                        const Value source = eval(*node.start);
                        if (source.type() != Type::List)
                            fail(node.start->pos, "for-in needs a list, got " + kind_of(source));
                        for (const Value& item : source.as_list()) {
                            step(stmt.pos);
                            slot_ref(node.slot, stmt.pos) = item;
                            const Flow f = exec_block(node.body);
                            if (f == Flow::Break)
                                break;
                            if (f == Flow::Return)
                                return f;
                        }
                    }
                    return Flow::Normal;
                });
            } else if constexpr (std::is_same_v<T, WhileStmt>) {
                return run_loop(stmt, [&]() -> Flow {
                    for (;;) {
                        const Value c = eval(*node.cond);
                        if (c.type() != Type::Bool)
                            fail(node.cond->pos, "condition must be a bool, got " + kind_of(c));
                        if (!c.as_bool())
                            break;
                        const Flow f = exec_block(node.body);
                        if (f == Flow::Break)
                            break;
                        if (f == Flow::Return)
                            return f;
                    }
                    return Flow::Normal;
                });
            } else if constexpr (std::is_same_v<T, ReturnStmt>) {
                return Flow::Return;
            } else if constexpr (std::is_same_v<T, BreakStmt>) {
                return Flow::Break;
            } else if constexpr (std::is_same_v<T, ContinueStmt>) {
                return Flow::Continue;
            } else {
                eval(*node.expr);
                return Flow::Normal;
            }
        },
        stmt.node);
}

Interpreter::Flow Interpreter::run_loop(const Stmt& loop, const std::function<Flow()>& body)
{
    try {
        return body();
    } catch (RuntimeFault& fault) {
        if (fault.code == DiagCode::Budget && !fault.at_loop) {
            fault.pos = loop.pos;
            fault.at_loop = true;
        }
        throw;
    }
}

Value& Interpreter::slot_ref(const Slot& slot, SourcePos pos)
{
    switch (slot.scope) {
    case Slot::Scope::Global: return globals_.at(static_cast<std::size_t>(slot.index));
    case Slot::Scope::Local: return frames_.back().locals.at(static_cast<std::size_t>(slot.index));
    default: fail(pos, "internal error: unresolved name");
    }
}

Value& Interpreter::reference(const Expr& target)
{
    if (const auto* id = std::get_if<Ident>(&target.node))
        return slot_ref(id->slot, target.pos);
    if (const auto* ix = std::get_if<Index>(&target.node)) {
        Value& base = reference(*ix->object);
        step(target.pos);
        const double i = number(eval(*ix->index), ix->index->pos, "list index");
        if (base.type() != Type::List)
            fail(target.pos, "only lists can be indexed, got " + kind_of(base));
        auto& list = std::get<List>(base.data);
        if (i != std::floor(i) || i < 0 || i >= static_cast<double>(list.size()))
            fail(target.pos, "index " + num_text(i) + " is out of range for a list of length " +
                                 std::to_string(list.size()));
        return list[static_cast<std::size_t>(i)];
    }
    if (const auto* m = std::get_if<Member>(&target.node)) {
        // Fields are plain numbers; hand back a temporary holding the value.
        static thread_local Value scratch;
        scratch = eval_member(target, *m);
        return scratch;
    }
    fail(target.pos, "expression cannot be assigned to");
}

void Interpreter::assign(const Expr& target, Value value, SourcePos pos)
{
    if (const auto* m = std::get_if<Member>(&target.node)) {
        Value& base = reference(*m->object);
        const double v = number(value, pos, "field value");
        if (base.type() == Type::Vec2) {
            auto& p = std::get<Vec2>(base.data);
            (m->field == "x" ? p.x : p.y) = v;
            return;
        }
        if (base.type() == Type::Color) {
            Color c = base.as_color();
            double* field = m->field == "r" ? &c.r : m->field == "g" ? &c.g : m->field == "b" ? &c.b : &c.a;
            *field = v;
            base = Value(Color::clamped(c.r, c.g, c.b, c.a));
            return;
        }
        fail(target.pos, "a " + kind_of(base) + " has no field '" + m->field + "'");
    }
    Value& slot = reference(target);
    if (std::holds_alternative<Ident>(target.node) && slot.type() != value.type()) {
        fail(pos, "cannot assign a " + kind_of(value) + " to a variable holding a " + kind_of(slot));
    }
    slot = std::move(value);
}

Value Interpreter::eval(const Expr& e)
{
    step(e.pos);
    return std::visit(
        [&](const auto& node) -> Value {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, NumberLit>) {
                return Value(node.value);
            } else if constexpr (std::is_same_v<T, StringLit>) {
                return Value(node.value);
            } else if constexpr (std::is_same_v<T, BoolLit>) {
                return Value(node.value);
            } else if constexpr (std::is_same_v<T, ListLit>) {
                if (node.items.size() > kMaxListLength)
                    fail(e.pos, "list longer than " + std::to_string(kMaxListLength) + " elements");
                List items;
                items.reserve(node.items.size());
                for (const auto& item : node.items)
                    items.push_back(eval(*item));
                return Value(std::move(items));
            } else if constexpr (std::is_same_v<T, Ident>) {
                if (node.slot.scope == Slot::Scope::Constant)
                    return Value(constant_value(node.slot.index));
                return slot_ref(node.slot, e.pos);
            } else if constexpr (std::is_same_v<T, Unary>) {
                return eval_unary(e, node);
            } else if constexpr (std::is_same_v<T, Binary>) {
                return eval_binary(e, node);
            } else if constexpr (std::is_same_v<T, Call>) {
                return eval_call(e, node);
            } else if constexpr (std::is_same_v<T, DrawCall>) {
                eval_draw(e, node);
                return Value();
            } else if constexpr (std::is_same_v<T, Member>) {
                return eval_member(e, node);
            } else {
                return eval_index(e, node);
            }
        },
        e.node);
}

Value Interpreter::eval_unary(const Expr& e, const Unary& u)
{
    const Value v = eval(*u.operand);
    if (u.op == UnaryOp::Not) {
        if (v.type() != Type::Bool)
            fail(e.pos, "'not' needs a bool, got " + kind_of(v));
        return Value(!v.as_bool());
    }
    if (v.is_number())
        return Value(-v.as_number());
    if (v.type() == Type::Vec2)
        return Value(Vec2{-v.as_vec2().x, -v.as_vec2().y});
    fail(e.pos, "cannot negate a " + kind_of(v));
}

Value Interpreter::eval_binary(const Expr& e, const Binary& b)
{
    if (b.op == BinaryOp::And || b.op == BinaryOp::Or) {
        const Value lhs = eval(*b.lhs);
        if (lhs.type() != Type::Bool)
            fail(b.lhs->pos, "logic operators need bools, got " + kind_of(lhs));
        if (lhs.as_bool() == (b.op == BinaryOp::Or))
            return lhs;
        const Value rhs = eval(*b.rhs);
        if (rhs.type() != Type::Bool)
            fail(b.rhs->pos, "logic operators need bools, got " + kind_of(rhs));
        return rhs;
    }
    const Value lhs = eval(*b.lhs);
    const Value rhs = eval(*b.rhs);
    Value out;
    try {
        out = apply_binary(b.op, lhs, rhs);
    } catch (const OpError& err) {
        fail(e.pos, err.message);
    }
    if (!value_is_finite(out))
        fail(e.pos, "arithmetic produced a non-finite number");
    return out;
}

Value Interpreter::eval_call(const Expr& e, const Call& c)
{
    std::vector<Value> args;
    args.reserve(c.args.size());
    for (const auto& a : c.args)
        args.push_back(eval(*a));
    if (c.handler >= 0) {
        call_handler(static_cast<HandlerKind>(c.handler), args);
        return Value();
    }
    return eval_builtin(e, c, std::move(args));
}

Value Interpreter::eval_builtin(const Expr& e, const Call& c, std::vector<Value> args)
{
    const auto id = static_cast<Builtin>(c.builtin);
    const std::string name = c.callee;
    auto num = [&](std::size_t i) {
        return number(args[i], c.args[i]->pos, name + " argument " + std::to_string(i + 1));
    };
    auto result = [&](double v) { return Value(finite(v, e.pos)); };
    switch (id) {
    case Builtin::Clamp: {
        const double x = num(0);
        const double lo = num(1);
        const double hi = num(2);
        return Value(std::min(std::max(x, lo), hi));
    }
    case Builtin::Lerp: {
        const double t = num(2);
        try {
            return lerp_values(args[0], args[1], t);
        } catch (const OpError& err) {
            fail(e.pos, err.message);
        }
    }
    case Builtin::Abs: return result(std::abs(num(0)));
    case Builtin::Floor: return result(std::floor(num(0)));
    case Builtin::Ceil: return result(std::ceil(num(0)));
    case Builtin::Round: return result(std::round(num(0)));
    case Builtin::Sqrt: {
        const double x = num(0);
        if (x < 0.0)
            fail(e.pos, "sqrt of a negative number (" + num_text(x) + ")");
        return result(std::sqrt(x));
    }
    case Builtin::Min: return result(std::min(num(0), num(1)));
    case Builtin::Max: return result(std::max(num(0), num(1)));
    case Builtin::Pow: return result(std::pow(num(0), num(1)));
    case Builtin::Sin: return result(std::sin(num(0)));
    case Builtin::Cos: return result(std::cos(num(0)));
    case Builtin::Atan2: return result(std::atan2(num(0), num(1)));
    case Builtin::Vec2: return Value(Vec2{num(0), num(1)});
    case Builtin::Rgb: return Value(Color::clamped(num(0), num(1), num(2), args.size() > 3 ? num(3) : 1.0));
    case Builtin::Rgb255:
        return Value(Color::clamped(num(0) / 255.0, num(1) / 255.0, num(2) / 255.0,
                                    args.size() > 3 ? num(3) / 255.0 : 1.0));
    case Builtin::Hsv: return Value(hsv_color(num(0), num(1), num(2), args.size() > 3 ? num(3) : 1.0));
    case Builtin::Len:
        if (args[0].type() == Type::List)
            return Value(static_cast<double>(args[0].as_list().size()));
        if (args[0].type() == Type::String)
            return Value(static_cast<double>(args[0].as_string().size()));
        fail(e.pos, "len needs a list or string, got " + kind_of(args[0]));
    case Builtin::Push: {
        if (args[0].type() != Type::List)
            fail(e.pos, "push needs a list, got " + kind_of(args[0]));
        List items = std::get<List>(std::move(args[0].data));
        if (items.size() >= kMaxListLength)
            fail(e.pos, "list longer than " + std::to_string(kMaxListLength) + " elements");
        items.push_back(std::move(args[1]));
        return Value(std::move(items));
    }
    }
    fail(e.pos, "unknown builtin '" + name + "'");
}

void Interpreter::eval_draw(const Expr& e, const DrawCall& d)
{
    std::vector<Value> args;
    args.reserve(d.args.size());
    for (const auto& a : d.args)
        args.push_back(eval(*a));

    const std::string callee = "draw." + d.primitive;
    auto num = [&](std::size_t i) {
        return number(args[i], d.args[i]->pos, callee + " argument " + std::to_string(i + 1));
    };
    auto vec = [&](std::size_t i) {
        if (args[i].type() != Type::Vec2)
            fail(d.args[i]->pos, callee + " argument " + std::to_string(i + 1) + " must be a vec2, got " +
                                     kind_of(args[i]));
        return args[i].as_vec2();
    };
    auto color = [&](std::size_t i) {
        if (args[i].type() != Type::Color)
            fail(d.args[i]->pos, callee + " argument " + std::to_string(i + 1) + " must be a color, got " +
                                     kind_of(args[i]));
        return args[i].as_color();
    };
    auto points = [&](std::size_t i, std::size_t minimum) {
        if (args[i].type() != Type::List)
            fail(d.args[i]->pos, callee + " points must be a list, got " + kind_of(args[i]));
        std::vector<Vec2> out;
        for (const Value& p : args[i].as_list()) {
            if (p.type() != Type::Vec2)
                fail(d.args[i]->pos, callee + " points must all be vec2, found a " + kind_of(p));
            out.push_back(p.as_vec2());
        }
        if (out.size() < minimum)
            fail(d.args[i]->pos, callee + " needs at least " + std::to_string(minimum) + " points, got " +
                                     std::to_string(out.size()));
        return out;
    };

    ShapeCommand cmd;
    switch (static_cast<Primitive>(d.primitive_id)) {
    case Primitive::Rect:
        cmd = shape::Rect{vec(0), non_negative(num(1)), non_negative(num(2)), non_negative(num(3)), color(4)};
        break;
    case Primitive::Disc: cmd = shape::Disc{vec(0), non_negative(num(1)), color(2)}; break;
    case Primitive::Ring: cmd = shape::Ring{vec(0), non_negative(num(1)), non_negative(num(2)), color(3)}; break;
    case Primitive::Arc:
        cmd = shape::Arc{vec(0), non_negative(num(1)), non_negative(num(2)), num(3), num(4), color(5)};
        break;
    case Primitive::Line: cmd = shape::Line{vec(0), vec(1), non_negative(num(2)), color(3)}; break;
    case Primitive::Polyline: cmd = shape::Polyline{points(0, 2), non_negative(num(1)), color(2)}; break;
    case Primitive::Polygon: cmd = shape::Polygon{points(0, 3), color(1)}; break;
    case Primitive::Triangle: cmd = shape::Triangle{vec(0), vec(1), vec(2), color(3)}; break;
    case Primitive::RegularPolygon: {
        const double sides = std::round(num(1));
        if (sides < 3 || sides > 1000)
            fail(d.args[1]->pos, "regular_polygon needs between 3 and 1000 sides, got " + num_text(sides));
        cmd = shape::RegularPolygon{vec(0), static_cast<int>(sides), non_negative(num(2)), num(3), color(4)};
        break;
    }
    }
    if (!shapes_)
        return;
    if (shapes_->size() >= kMaxShapesPerFrame)
        fail(e.pos, "more than " + std::to_string(kMaxShapesPerFrame) + " shapes in one frame");
    shapes_->push_back(std::move(cmd));
}

Value Interpreter::eval_member(const Expr& e, const Member& m)
{
    const Value base = eval(*m.object);
    if (base.type() == Type::Vec2) {
        if (m.field == "x")
            return Value(base.as_vec2().x);
        if (m.field == "y")
            return Value(base.as_vec2().y);
    } else if (base.type() == Type::Color) {
        const Color& c = base.as_color();
        if (m.field == "r")
            return Value(c.r);
        if (m.field == "g")
            return Value(c.g);
        if (m.field == "b")
            return Value(c.b);
        if (m.field == "a")
            return Value(c.a);
    }
    fail(e.pos, "a " + kind_of(base) + " has no field '" + m.field + "'");
}

Value Interpreter::eval_index(const Expr& e, const Index& ix)
{
    const Value base = eval(*ix.object);
    const double i = number(eval(*ix.index), ix.index->pos, "list index");
    if (base.type() != Type::List)
        fail(e.pos, "only lists can be indexed, got " + kind_of(base));
    const auto& list = base.as_list();
    if (i != std::floor(i) || i < 0 || i >= static_cast<double>(list.size()))
        fail(e.pos, "index " + num_text(i) + " is out of range for a list of length " + std::to_string(list.size()));
    return list[static_cast<std::size_t>(i)];
}

} // namespace sono::script
