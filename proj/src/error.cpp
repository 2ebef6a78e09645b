#include "towercalc/error.hpp"

namespace towercalc {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::dimension_mismatch: return "dimension-mismatch";
    case ErrorKind::grade_overflow: return "grade-overflow";
    case ErrorKind::grade_underflow: return "grade-underflow";
    case ErrorKind::construction_failure: return "construction-failure";
    case ErrorKind::consistency_failure: return "consistency-failure";
    case ErrorKind::not_in_span: return "not-in-span";
    case ErrorKind::unsupported_dimension: return "unsupported-dimension";
    case ErrorKind::hypothesis_violation: return "hypothesis-violation";
    case ErrorKind::parse_error: return "parse-error";
  }
  return "unknown";
}

}  // namespace towercalc
