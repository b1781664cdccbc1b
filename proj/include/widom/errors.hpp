#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace widom {

/// Rejected input: a precondition or schema violation detected before any numerics run.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A solver could not produce a result meeting its contract.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what, std::optional<std::size_t> index = std::nullopt)
      : std::runtime_error(what), index_(index) {}

  /// Offending gap / component / row index, when the failure is localized.
  std::optional<std::size_t> index() const { return index_; }

 private:
  std::optional<std::size_t> index_;
};

}  // namespace widom
