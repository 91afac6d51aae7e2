#include "sono/script/compile.hpp"

#include "sono/script/catalog.hpp"
#include "sono/script/checker.hpp"
#include "sono/script/parser.hpp"

#include <algorithm>

namespace sono::script {

std::vector<std::string> CompiledScript::variable_names() const
{
    std::vector<std::string> names;
    names.reserve(program.vars.size());
    for (const auto& v : program.vars)
        names.push_back(v.name);
    return names;
}

namespace {

void sort_by_position(std::vector<Diagnostic>& diags)
{
    std::stable_sort(diags.begin(), diags.end(), [](const Diagnostic& a, const Diagnostic& b) {
        return a.pos.line != b.pos.line ? a.pos.line < b.pos.line : a.pos.col < b.pos.col;
    });
}

} // namespace

CompileResult compile(ScriptSource source)
{
    CompileResult result;
    auto script = std::make_shared<CompiledScript>();
    script->program = parse(source.text, result.diagnostics);
    if (has_errors(result.diagnostics)) {
        sort_by_position(result.diagnostics);
        return result;
    }

    check_program(script->program, result.diagnostics);
    sort_by_position(result.diagnostics);
    if (has_errors(result.diagnostics))
        return result;

    for (const auto& fn : script->program.fns) {
        if (const HandlerSpec* spec = find_handler(fn.name))
            script->handlers[static_cast<std::size_t>(spec->kind)] = &fn;
    }
    script->source = std::move(source.text);
    script->origin = std::move(source.origin);
    result.script = std::move(script);
    return result;
}

} // namespace sono::script
