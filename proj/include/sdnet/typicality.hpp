#pragma once

#include <span>
#include <vector>

#include "sdnet/common.hpp"

namespace sdnet {

/// Occurrence counts N(s | s^n) of a sequence over a fixed alphabet.
struct TypeCounts {
  std::vector<std::size_t> counts;
  std::size_t length = 0;

  std::size_t operator[](Symbol s) const { return counts.at(s); }
  /// Empirical PMF N(s|s^n)/n; all zeros for an empty sequence.
  std::vector<double> type() const;
};

/// Counts over `alphabet_size` symbols. Symbols outside the alphabet throw IndexError.
TypeCounts empirical_counts(std::span<const Symbol> seq, std::size_t alphabet_size);

/// Prefix counts N(s | s^i) for every i <= n, answered in O(1).
class PrefixCounts {
 public:
  PrefixCounts(std::span<const Symbol> seq, std::size_t alphabet_size);

  std::size_t count(Symbol s, std::size_t prefix_length) const;
  std::size_t length() const noexcept { return n_; }

 private:
  std::size_t n_;
  std::size_t m_;
  std::vector<std::size_t> table_;  // (n+1) x m
};

/// Strong typicality: |N(s|s^n)/n - P(s)| <= delta * P(s) for every s, with
/// N(s|s^n) = 0 required wherever P(s) = 0. The empty sequence is not typical.
bool is_delta_typical(std::span<const Symbol> seq, std::span<const double> pmf, double delta);

}  // namespace sdnet
