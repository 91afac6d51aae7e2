#pragma once

#include "sono/script/ast.hpp"

#include <array>
#include <memory>
#include <string>
#include <vector>

namespace sono::script {

struct ScriptSource {
    std::string text;
    std::string origin;   // file path or "<generated>", used in messages only
};

/// A program that passed every static check. Immutable and shareable between
/// instances.
struct CompiledScript {
    Program program;
    std::string source;
    std::string origin;
    std::array<const FnDecl*, kHandlerCount> handlers{};

    const std::string& title() const { return *program.title; }
    std::string summary() const { return program.summary.value_or(""); }
    std::vector<std::string> variable_names() const;
};

struct CompileResult {
    std::shared_ptr<const CompiledScript> script;   // null when any error was reported
    std::vector<Diagnostic> diagnostics;            // ordered by position

    bool ok() const { return script != nullptr; }
};

/// When the text has syntax errors, only those are reported.
CompileResult compile(ScriptSource source);

} // namespace sono::script
