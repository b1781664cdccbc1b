#pragma once

#include <string>
#include <vector>

namespace widom {

/// Outcome of one packaged verification check.
struct CheckResult {
  int id = 0;
  std::string suite;     ///< suite name, e.g. "interval-baseline"
  std::string title;
  bool pass = false;
  std::string detail;    ///< the measured quantities behind the verdict
  double seconds = 0.0;
};

/// Names of the packaged suites, in check order.
const std::vector<std::string>& suite_names();

/// Runs one suite by name. Throws ValidationError for an unknown name.
CheckResult run_suite(const std::string& name);

/// Runs the named suites ("all" expands to every suite), in order.
std::vector<CheckResult> run_suites(const std::vector<std::string>& names);

/// "PASS [id] suite: title | detail (seconds)".
std::string format_check(const CheckResult& r);

}  // namespace widom
