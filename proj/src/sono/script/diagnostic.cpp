#include "sono/script/diagnostic.hpp"

#include <algorithm>

namespace sono::script {

std::string_view code_name(DiagCode code)
{
    switch (code) {
    case DiagCode::Syntax: return "E_SYNTAX";
    case DiagCode::MissingTitle: return "E_MISSING_TITLE";
    case DiagCode::MissingHandler: return "E_MISSING_HANDLER";
    case DiagCode::UnknownFunction: return "E_UNKNOWN_FUNCTION";
    case DiagCode::UnknownPrimitive: return "E_UNKNOWN_PRIMITIVE";
    case DiagCode::Arity: return "E_ARITY";
    case DiagCode::UndefinedVar: return "E_UNDEFINED_VAR";
    case DiagCode::Type: return "E_TYPE";
    case DiagCode::Duplicate: return "E_DUPLICATE";
    case DiagCode::Recursion: return "E_RECURSION";
    case DiagCode::Budget: return "E_BUDGET";
    case DiagCode::Runtime: return "E_RUNTIME";
    case DiagCode::SizeRange: return "W_SIZE_RANGE";
    }
    return "E_UNKNOWN";
}

bool parse_code(std::string_view name, DiagCode& out)
{
    for (DiagCode c : kAllDiagCodes) {
        if (code_name(c) == name) {
            out = c;
            return true;
        }
    }
    return false;
}

Severity default_severity(DiagCode code)
{
    return code == DiagCode::SizeRange ? Severity::Warning : Severity::Error;
}

std::string format_diagnostic(const Diagnostic& d)
{
    std::string out = std::to_string(d.pos.line) + ":" + std::to_string(d.pos.col) + ": ";
    out += d.is_error() ? "error " : "warning ";
    out += code_name(d.code);
    out += ": ";
    out += d.message;
    return out;
}

bool has_errors(const std::vector<Diagnostic>& diagnostics)
{
    return std::any_of(diagnostics.begin(), diagnostics.end(), [](const Diagnostic& d) { return d.is_error(); });
}

} // namespace sono::script
