#pragma once

#include "sono/script/ast.hpp"

#include <vector>

namespace sono::script {

/// Static verification of a parsed program: script contract (title, the
/// three handlers with their exact parameters, initialized variables), name
/// resolution, kind checking of builtin and draw calls, and the handler call
/// graph. Resolves every identifier to a slot in place; on return each
/// handler's local_count is set.
void check_program(Program& program, std::vector<Diagnostic>& diagnostics);

} // namespace sono::script
