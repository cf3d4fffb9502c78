#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sdnet {

/// Base of every error raised by the library. `kind()` is the stable name
/// written into machine-readable reports.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& message) : Error("DimensionError", message) {}
};

/// One problem found while checking a network description.
struct Violation {
  enum class Kind { NonNormalizedSlice, NegativeEntry, SizeMismatch };
  Kind kind;
  std::string message;
  std::size_t slice = 0;  // flat (s, x_1..x_k) slice index when applicable
  double sum = 0.0;       // slice sum for NonNormalizedSlice
};

class NormalizationError : public Error {
 public:
  NormalizationError(const std::string& message, std::size_t slice, double sum,
                     std::vector<Violation> all = {})
      : Error("NormalizationError", message), slice_(slice), sum_(sum), all_(std::move(all)) {}

  std::size_t slice() const noexcept { return slice_; }
  double sum() const noexcept { return sum_; }
  const std::vector<Violation>& violations() const noexcept { return all_; }

 private:
  std::size_t slice_;
  double sum_;
  std::vector<Violation> all_;
};

class IndexError : public Error {
 public:
  explicit IndexError(const std::string& message) : Error("IndexError", message) {}
};

class SymbolRangeError : public Error {
 public:
  explicit SymbolRangeError(const std::string& message) : Error("SymbolRangeError", message) {}
};

class ReducibleChainError : public Error {
 public:
  explicit ReducibleChainError(const std::string& message)
      : Error("ReducibleChainError", message) {}
};

class InstanceTooLarge : public Error {
 public:
  InstanceTooLarge(const std::string& what, std::uint64_t cells, std::uint64_t budget)
      : Error("InstanceTooLarge", what + ": " + std::to_string(cells) + " cells exceed budget " +
                                      std::to_string(budget)),
        cells_(cells),
        budget_(budget) {}

  std::uint64_t cells() const noexcept { return cells_; }
  std::uint64_t budget() const noexcept { return budget_; }

 private:
  std::uint64_t cells_;
  std::uint64_t budget_;
};

class LengthMismatch : public Error {
 public:
  explicit LengthMismatch(const std::string& message) : Error("LengthMismatch", message) {}
};

class PreconditionViolated : public Error {
 public:
  explicit PreconditionViolated(const std::string& message)
      : Error("PreconditionViolated", message) {}
};

/// No state sequence is both typical and has small enough conditional error.
/// Carries the best candidate seen (lowest conditional error among typical
/// sequences), if any typical sequence was examined at all.
class NoQualifyingSequence : public Error {
 public:
  NoQualifyingSequence(const std::string& message,
                       std::optional<std::vector<std::uint32_t>> best_candidate,
                       std::optional<double> best_error)
      : Error("NoQualifyingSequence", message),
        best_candidate_(std::move(best_candidate)),
        best_error_(best_error) {}

  const std::optional<std::vector<std::uint32_t>>& best_candidate() const noexcept {
    return best_candidate_;
  }
  std::optional<double> best_conditional_error() const noexcept { return best_error_; }

 private:
  std::optional<std::vector<std::uint32_t>> best_candidate_;
  std::optional<double> best_error_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message) : Error("ConfigError", message) {}
};

}  // namespace sdnet
