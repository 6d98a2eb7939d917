#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace milnorkit {

enum class Errc {
  syntax,
  dimension,
  hypothesis,
  constant_term,
  range,
  precondition,
  invariant_breach,
  acceptance_rate_too_low,
  empty_fiber,
  no_radius_found,
  clique_budget_exceeded,
  unknown_name,
  io,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// that the command-line front end can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Syntax error in a germ file, with 1-based line/column of the offending token.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, std::size_t column, const std::string& what);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace milnorkit
