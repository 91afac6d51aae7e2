#pragma once

#include "sono/script/compile.hpp"
#include "sono/script/shapes.hpp"
#include "sono/script/value.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace sono::script {

inline constexpr std::uint64_t kDefaultStepBudget = 200'000;
inline constexpr std::size_t kMaxListLength = 10'000;
inline constexpr std::size_t kMaxStringLength = 10'000;
inline constexpr std::size_t kMaxShapesPerFrame = 5'000;

/// Thrown out of the evaluator; becomes an E_BUDGET or E_RUNTIME diagnostic.
struct RuntimeFault {
    DiagCode code;
    SourcePos pos;
    std::string message;
    bool at_loop = false;   // budget faults are reported at the innermost loop
};

/// Evaluates one entry point (a handler call or the variable defaults) of a
/// checked program against a global store. Not reusable across entry points:
/// each instance carries its own step counter.
class Interpreter {
public:
    /// shapes may be null, in which case draw calls are evaluated and dropped.
    Interpreter(const CompiledScript& script, std::vector<Value>& globals, std::uint64_t budget,
                std::vector<ShapeCommand>* shapes);

    void call_handler(HandlerKind kind, std::span<const Value> args);

    /// Fills `globals` from the declared defaults, in declaration order.
    void initialize_globals();

    std::uint64_t steps() const { return steps_; }

private:
    enum class Flow { Normal, Break, Continue, Return };

    struct Frame {
        std::vector<Value> locals;
    };

    void step(SourcePos pos);
    [[noreturn]] void fail(SourcePos pos, std::string message) const;

    Flow exec_block(const Block& block);
    Flow exec(const Stmt& stmt);
    Flow run_loop(const Stmt& loop, const std::function<Flow()>& body);
    void assign(const Expr& target, Value value, SourcePos pos);
    Value& reference(const Expr& target);

    Value eval(const Expr& e);
    Value eval_unary(const Expr& e, const Unary& u);
    Value eval_binary(const Expr& e, const Binary& b);
    Value eval_call(const Expr& e, const Call& c);
    Value eval_builtin(const Expr& e, const Call& c, std::vector<Value> args);
    void eval_draw(const Expr& e, const DrawCall& d);
    Value eval_member(const Expr& e, const Member& m);
    Value eval_index(const Expr& e, const Index& ix);

    Value& slot_ref(const Slot& slot, SourcePos pos);
    double number(const Value& v, SourcePos pos, std::string_view what) const;
    double finite(double v, SourcePos pos) const;

    const CompiledScript& script_;
    std::vector<Value>& globals_;
    std::uint64_t budget_;
    std::uint64_t steps_ = 0;
    std::vector<ShapeCommand>* shapes_;
    std::vector<Frame> frames_;
};

} // namespace sono::script
