#pragma once

#include "sono/script/ast.hpp"
#include "sono/script/lexer.hpp"

#include <string_view>
#include <vector>

namespace sono::script {

/// Recursive-descent parser. Syntax errors are appended to `diagnostics`
/// (E_SYNTAX, plus E_DUPLICATE for a second title); the parser resynchronizes
/// at statement boundaries so several errors can be reported at once.
Program parse(std::string_view source, std::vector<Diagnostic>& diagnostics);

} // namespace sono::script
