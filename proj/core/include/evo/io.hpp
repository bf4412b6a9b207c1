#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "evo/algebra.hpp"

namespace evo {

/// Parses the shared matrix format. JSON objects {"dim": n, "matrix": [[...], ...]}
/// and bare row arrays [[...], ...] are recognised by a leading brace or
/// bracket; anything else is read as plain text:
/// n on the first line followed by n whitespace-separated rows.
EvolutionAlgebra parse_algebra(std::string_view text);
EvolutionAlgebra load_algebra(const std::filesystem::path& path);

std::string format_algebra_json(const EvolutionAlgebra& a);
std::string format_algebra_text(const EvolutionAlgebra& a);

}  // namespace evo
