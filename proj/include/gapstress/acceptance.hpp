#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gapstress {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  std::string detail;
};

/// Runs the full acceptance suite.  Sweep artifacts (CSV/JSON/report) are
/// written under out_dir.  Each criterion prints one pass/fail line to log
/// as it completes.
std::vector<CriterionResult> run_acceptance(const std::string& out_dir, std::ostream& log);

inline bool all_passed(const std::vector<CriterionResult>& rs) {
  for (const auto& r : rs)
    if (!r.pass) return false;
  return true;
}

}  // namespace gapstress
