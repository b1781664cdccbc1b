#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "widom/errors.hpp"
#include "widom/minimax.hpp"
#include "widom/set_geometry.hpp"

namespace widom::cli {

/// Schema violation, reported with the JSON pointer of the offending field
/// (or line:column for syntax errors).
class ConfigError : public ValidationError {
 public:
  ConfigError(const std::string& where, const std::string& what)
      : ValidationError(where + ": " + what), where_(where) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

enum class Task { capacity, green, levin, cheb, series, verify_theorems, diagnostics };

std::string to_string(Task t);
Task parse_task(const std::string& s, const std::string& where);

/// A parsed set descriptor. `real` is filled whenever every component lies on the real axis.
struct SetSpec {
  std::string kind;
  std::vector<Shape> shapes;
  std::optional<RealIntervalUnion> real;
};

struct ExperimentConfig {
  nlohmann::json effective;  ///< config after overrides, without the output section
  std::string set_id;
  std::optional<SetSpec> set;
  Task task = Task::capacity;

  std::vector<std::size_t> degrees;            ///< series
  std::size_t degree = 0;                      ///< cheb
  std::vector<Complex> probes;                 ///< green
  std::vector<std::string> suites{"all"};      ///< verify-theorems
  std::vector<double> truncation_levels;       ///< levin
  std::vector<double> heights;                 ///< levin crosscuts
  std::size_t fit_window = 8;                  ///< series
  std::size_t holder_levels = 25;              ///< diagnostics
  std::size_t perfectness_levels = 8;          ///< diagnostics
  std::vector<std::size_t> level_curve_degrees{8, 16, 32, 64, 128, 256};
  int level_curve_k = 1;
  SolverOptions solver;

  std::filesystem::path out_dir = "results";
  std::string prefix;
};

/// Parses and validates a config document. Relative curve-file paths resolve
/// against base_dir, and referenced files must exist.
ExperimentConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir,
                              const std::optional<std::string>& task_override = std::nullopt);

/// Reads the file, reporting JSON syntax errors as line:column.
ExperimentConfig load_config(const std::filesystem::path& path,
                             const std::optional<std::string>& task_override = std::nullopt);

/// Parses a set descriptor object found at JSON pointer `where`.
SetSpec parse_set(const nlohmann::json& j, const std::string& where, const std::filesystem::path& base_dir);

/// Reads "x y" or "x,y" vertex lines; '#' starts a comment.
std::vector<Complex> read_curve_file(const std::filesystem::path& path);

/// FNV-1a 64-bit hash of the canonical (sorted-key, compact) dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& effective);

}  // namespace widom::cli
