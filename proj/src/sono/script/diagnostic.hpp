#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace sono::script {

struct SourcePos {
    int line = 1;
    int col = 1;

    friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

enum class Severity { Error, Warning };

// Stable identifiers; scripts, prompts and the wire protocol refer to these
// by their string form.
enum class DiagCode {
    Syntax,
    MissingTitle,
    MissingHandler,
    UnknownFunction,
    UnknownPrimitive,
    Arity,
    UndefinedVar,
    Type,
    Duplicate,
    Recursion,
    Budget,
    Runtime,
    SizeRange,
};

inline constexpr DiagCode kAllDiagCodes[] = {
    DiagCode::Syntax,         DiagCode::MissingTitle, DiagCode::MissingHandler, DiagCode::UnknownFunction,
    DiagCode::UnknownPrimitive, DiagCode::Arity,      DiagCode::UndefinedVar,   DiagCode::Type,
    DiagCode::Duplicate,      DiagCode::Recursion,    DiagCode::Budget,         DiagCode::Runtime,
    DiagCode::SizeRange,
};

std::string_view code_name(DiagCode code);
bool parse_code(std::string_view name, DiagCode& out);
Severity default_severity(DiagCode code);

struct Diagnostic {
    Severity severity = Severity::Error;
    DiagCode code = DiagCode::Syntax;
    SourcePos pos;
    std::string message;

    static Diagnostic error(DiagCode code, SourcePos pos, std::string message)
    {
        return {Severity::Error, code, pos, std::move(message)};
    }
    static Diagnostic warning(DiagCode code, SourcePos pos, std::string message)
    {
        return {Severity::Warning, code, pos, std::move(message)};
    }

    bool is_error() const { return severity == Severity::Error; }

    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

/// "line:col: error E_CODE: message"
std::string format_diagnostic(const Diagnostic& d);

bool has_errors(const std::vector<Diagnostic>& diagnostics);

} // namespace sono::script
