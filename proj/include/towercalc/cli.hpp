#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "towercalc/towers.hpp"

namespace towercalc::cli {

inline constexpr int kOk = 0;
inline constexpr int kCheckFailure = 1;
inline constexpr int kUsage = 2;
inline constexpr int kInternal = 3;

/// Runs the command line (args exclude the program name). Reports go to out,
/// warnings and error records to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Verification of a tower-set or tower-family document.
struct VerifyOutcome {
  bool ok = true;
  nlohmann::json report;
  std::vector<CheckItem> failures;
};
VerifyOutcome verify_document(const nlohmann::json& doc, bool structure = true);

/// Parses "(-,0,2,1)" or "-,0,2,1".
TowerIndex parse_index(const std::string& text);

}  // namespace towercalc::cli
