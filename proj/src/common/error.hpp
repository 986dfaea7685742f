#pragma once

#include <stdexcept>
#include <string>

namespace archbench {

enum class ErrorCode {
  invalid_architecture,
  parse,
  no_neighbor,
  unsupported_reduction,
  format,
  duplicate_key,
  missing_arch,
  epoch,
  parameter,
  numeric,
  undefined_correlation,
  degenerate,
  missing_cell,
  validation,
  io,
  exhausted,
};

const char *error_code_name(ErrorCode code) noexcept;

// All failures inside the core are reported as Error; the C API maps the
// code onto its status enum.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string &what)
      : Error(ErrorCode::parse,
              what + " (at position " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class FormatError : public Error {
 public:
  FormatError(std::size_t line, const std::string &what)
      : Error(ErrorCode::format,
              "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace archbench
