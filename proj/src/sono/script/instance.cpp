#include "sono/script/instance.hpp"

#include "sono/common/error.hpp"

#include <cmath>

namespace sono::script {
namespace {

Diagnostic to_diagnostic(const RuntimeFault& fault, std::string_view handler)
{
    std::string message = fault.message;
    if (!handler.empty())
        message = "in " + std::string(handler) + ": " + message;
    return Diagnostic::error(fault.code, fault.pos, std::move(message));
}

} // namespace

ScriptInstance::ScriptInstance(std::shared_ptr<const CompiledScript> script, std::uint64_t budget)
    : script_(std::move(script)), budget_(budget)
{
}

InstantiateResult ScriptInstance::create(std::shared_ptr<const CompiledScript> script, std::uint64_t step_budget)
{
    if (!script)
        throw InputError("cannot instantiate a script that failed to compile");
    if (step_budget == 0)
        throw InputError("step budget must be positive");
    std::unique_ptr<ScriptInstance> inst(new ScriptInstance(std::move(script), step_budget));
    try {
        Interpreter interp(*inst->script_, inst->store_, step_budget, nullptr);
        interp.initialize_globals();
    } catch (const RuntimeFault& fault) {
        return InstantiateResult{nullptr, to_diagnostic(fault, "variable defaults")};
    }
    return InstantiateResult{std::move(inst), std::nullopt};
}

std::optional<Diagnostic> ScriptInstance::run(HandlerKind kind, std::span<const Value> args,
                                              std::vector<ShapeCommand>* shapes)
{
    std::vector<Value> snapshot = store_;
    try {
        Interpreter interp(*script_, store_, budget_, shapes);
        interp.call_handler(kind, args);
    } catch (const RuntimeFault& fault) {
        store_ = std::move(snapshot);
        static constexpr std::string_view names[] = {"on_sound", "update", "draw"};
        return to_diagnostic(fault, names[static_cast<std::size_t>(kind)]);
    }
    return std::nullopt;
}

std::optional<Diagnostic> ScriptInstance::dispatch_sound(std::string classification, double frequency,
                                                         double distance)
{
    if (!std::isfinite(frequency) || !std::isfinite(distance))
        throw InputError("sound inputs must be finite numbers");
    const Value args[] = {Value(std::move(classification)), Value(frequency), Value(distance)};
    return run(HandlerKind::OnSound, args, nullptr);
}

std::optional<Diagnostic> ScriptInstance::tick(double dt)
{
    if (!std::isfinite(dt) || dt <= 0.0)
        throw InputError("update interval must be a positive number of seconds");
    const Value args[] = {Value(dt)};
    return run(HandlerKind::Update, args, nullptr);
}

RenderResult ScriptInstance::render(bool should_draw)
{
    RenderResult out;
    if (should_draw) {
        out.diagnostic = run(HandlerKind::Draw, {}, &out.commands);
        if (out.diagnostic)
            out.commands.clear();
    }
    last_commands_ = out.commands;
    return out;
}

std::optional<Value> ScriptInstance::get(std::string_view name) const
{
    const auto& vars = script_->program.vars;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (vars[i].name == name)
            return store_[i];
    }
    return std::nullopt;
}

void ScriptInstance::set(std::string_view name, Value value)
{
    const auto& vars = script_->program.vars;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (vars[i].name != name)
            continue;
        if (store_[i].type() != value.type())
            throw InputError("variable '" + std::string(name) + "' holds a " + std::string(type_name(store_[i].type())) +
                             ", not a " + std::string(type_name(value.type())));
        store_[i] = std::move(value);
        return;
    }
    throw InputError("no variable named '" + std::string(name) + "'");
}

} // namespace sono::script
