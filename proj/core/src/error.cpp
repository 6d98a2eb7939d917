#include "milnorkit/error.hpp"

namespace milnorkit {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::syntax: return "syntax";
    case Errc::dimension: return "dimension";
    case Errc::hypothesis: return "hypothesis";
    case Errc::constant_term: return "constant_term";
    case Errc::range: return "range";
    case Errc::precondition: return "precondition";
    case Errc::invariant_breach: return "invariant_breach";
    case Errc::acceptance_rate_too_low: return "acceptance_rate_too_low";
    case Errc::empty_fiber: return "empty_fiber";
    case Errc::no_radius_found: return "no_radius_found";
    case Errc::clique_budget_exceeded: return "clique_budget_exceeded";
    case Errc::unknown_name: return "unknown_name";
    case Errc::io: return "io";
  }
  return "unknown";
}

SyntaxError::SyntaxError(std::size_t line, std::size_t column, const std::string& what)
    : Error(Errc::syntax,
            "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

}  // namespace milnorkit
