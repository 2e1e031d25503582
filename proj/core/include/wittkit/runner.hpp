#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "wittkit/ringspec.hpp"

namespace wittkit {

struct RunOptions {
  std::uint64_t seed = 1;  ///< default for checks without their own seed=
  unsigned jobs = 1;
  bool timing = true;
};

enum class Verdict { Pass, Fail, Error };
const char* to_string(Verdict v);

struct CheckResult {
  std::string name;
  std::string kind;
  Verdict verdict = Verdict::Error;
  nlohmann::ordered_json details = nlohmann::ordered_json::object();
  /// Every certificate in `details` was re-verified from scratch.
  bool certificates_verified = true;
  nlohmann::ordered_json precision = nlohmann::ordered_json::object();
  double wall_time_ms = 0;
};

struct RunReport {
  std::uint64_t seed = 1;
  std::vector<CheckResult> checks;

  bool pass() const;
  nlohmann::ordered_json to_json(bool timing) const;
};

/// Runs one check against a built environment. Library errors become an
/// Error verdict with the error kind recorded in `details`.
CheckResult run_check(const SpecBlock& block, const SpecEnvironment& env, const RunOptions& options);

/// Runs every check of the plan, up to `jobs` at a time. Results keep the
/// declaration order.
RunReport run_checks(const CheckPlan& plan, const RunOptions& options = {});

}  // namespace wittkit
