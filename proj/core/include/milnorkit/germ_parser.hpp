#pragma once

#include <span>
#include <string>
#include <string_view>

#include "milnorkit/germ.hpp"
#include "milnorkit/polynomial.hpp"

namespace milnorkit {

/// Parses a germ file (see docs/germ-format.md). Throws SyntaxError with the
/// 1-based line/column on malformed input, Error{hypothesis} when M > K >= 2
/// fails, and Error{constant_term} when a component does not vanish at 0.
MapGerm parse_germ(std::string_view text);

MapGerm load_germ_file(const std::string& path);

/// Canonical germ-file text; parse_germ(format_germ(f)) reproduces f.
std::string format_germ(const MapGerm& f);

/// Parses one polynomial expression in the given variables. `line` and
/// `column` locate the first character of `expr` for error reporting.
Polynomial parse_polynomial(std::string_view expr, std::span<const std::string> variables,
                            std::size_t line = 1, std::size_t column = 1);

}  // namespace milnorkit
