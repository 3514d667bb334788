#pragma once

#include <string>
#include <vector>

#include "nmlab/experiments.hpp"

namespace nmlab {

struct ClaimCheck {
  std::string check;
  std::string expected;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<ClaimCheck> checks;

  bool all_passed() const;
  /// JSON array of {check, expected, measured, tolerance, pass, detail}.
  std::string to_json_text() const;
  /// One line per check.
  std::string summary() const;
};

/// Re-derives the analytic and numerical claims about the protocol and
/// reports each with its measured value and tolerance.
VerifyReport verify_claims(const RunConfig& cfg);

}  // namespace nmlab
