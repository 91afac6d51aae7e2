#pragma once

#include <string_view>

// Text assets compiled into the library (see cmake/embed_assets.cmake).
namespace sono::assets {

std::string_view enhance_template();
std::string_view generate_template();
std::string_view check_template();
std::string_view language_reference();
std::string_view example_script();

} // namespace sono::assets
