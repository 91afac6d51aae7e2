#pragma once

#include "sono/script/compile.hpp"
#include "sono/script/interpreter.hpp"
#include "sono/script/shapes.hpp"

#include <memory>
#include <optional>
#include <string_view>
#include <vector>

namespace sono::script {

class ScriptInstance;

struct InstantiateResult {
    std::unique_ptr<ScriptInstance> instance;   // null when a default faulted
    std::optional<Diagnostic> diagnostic;
};

struct RenderResult {
    std::vector<ShapeCommand> commands;
    std::optional<Diagnostic> diagnostic;
};

/// Runtime state of one compiled script: its variable store plus the shapes
/// produced by the most recent render. A handler call that faults leaves the
/// store exactly as it was before the call.
class ScriptInstance {
public:
    static InstantiateResult create(std::shared_ptr<const CompiledScript> script,
                                    std::uint64_t step_budget = kDefaultStepBudget);

    std::optional<Diagnostic> dispatch_sound(std::string classification, double frequency, double distance);

    /// Throws InputError unless dt is finite and positive.
    std::optional<Diagnostic> tick(double dt);

    /// With should_draw false the draw handler is not run and no shapes are
    /// produced.
    RenderResult render(bool should_draw);

    std::optional<Value> get(std::string_view name) const;
    /// Overwrites a script variable with a value of the same kind. Throws
    /// InputError for unknown names or a kind mismatch.
    void set(std::string_view name, Value value);
    const std::vector<Value>& store() const { return store_; }
    const std::vector<ShapeCommand>& last_commands() const { return last_commands_; }
    const CompiledScript& script() const { return *script_; }
    std::shared_ptr<const CompiledScript> shared_script() const { return script_; }

private:
    ScriptInstance(std::shared_ptr<const CompiledScript> script, std::uint64_t budget);

    std::optional<Diagnostic> run(HandlerKind kind, std::span<const Value> args, std::vector<ShapeCommand>* shapes);

    std::shared_ptr<const CompiledScript> script_;
    std::uint64_t budget_;
    std::vector<Value> store_;
    std::vector<ShapeCommand> last_commands_;
};

} // namespace sono::script
