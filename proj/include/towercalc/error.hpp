#pragma once

#include <stdexcept>
#include <string>

namespace towercalc {

enum class ErrorKind {
  invalid_input,
  dimension_mismatch,
  grade_overflow,
  grade_underflow,
  construction_failure,
  consistency_failure,
  not_in_span,
  unsupported_dimension,
  hypothesis_violation,
  parse_error,
};

const char* to_string(ErrorKind kind);

class TowerError : public std::runtime_error {
 public:
  TowerError(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace towercalc
