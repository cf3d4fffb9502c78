#include "sdnet/typicality.hpp"

#include <cmath>
#include <string>

#include "sdnet/errors.hpp"

namespace sdnet {

std::vector<double> TypeCounts::type() const {
  std::vector<double> out(counts.size(), 0.0);
  if (length == 0) return out;
  for (std::size_t s = 0; s < counts.size(); ++s)
    out[s] = static_cast<double>(counts[s]) / static_cast<double>(length);
  return out;
}

TypeCounts empirical_counts(std::span<const Symbol> seq, std::size_t alphabet_size) {
  TypeCounts tc{std::vector<std::size_t>(alphabet_size, 0), seq.size()};
  for (Symbol s : seq) {
    if (s >= alphabet_size) throw IndexError("symbol " + std::to_string(s) + " outside alphabet");
    ++tc.counts[s];
  }
  return tc;
}

PrefixCounts::PrefixCounts(std::span<const Symbol> seq, std::size_t alphabet_size)
    : n_(seq.size()), m_(alphabet_size), table_((seq.size() + 1) * alphabet_size, 0) {
  for (std::size_t i = 0; i < n_; ++i) {
    if (seq[i] >= m_) throw IndexError("symbol " + std::to_string(seq[i]) + " outside alphabet");
    for (std::size_t s = 0; s < m_; ++s) table_[(i + 1) * m_ + s] = table_[i * m_ + s];
    ++table_[(i + 1) * m_ + seq[i]];
  }
}

std::size_t PrefixCounts::count(Symbol s, std::size_t prefix_length) const {
  if (s >= m_ || prefix_length > n_) throw IndexError("prefix count query out of range");
  return table_[prefix_length * m_ + s];
}

bool is_delta_typical(std::span<const Symbol> seq, std::span<const double> pmf, double delta) {
  if (seq.empty()) return false;
  const auto tc = empirical_counts(seq, pmf.size());
  const double n = static_cast<double>(seq.size());
  for (std::size_t s = 0; s < pmf.size(); ++s) {
    if (pmf[s] <= 0.0) {
      if (tc.counts[s] != 0) return false;
      continue;
    }
    // The slack absorbs rounding on exact boundary cases such as N/n = 1/3 vs P = 1/2, delta = 1/3.
    const double gap = std::abs(static_cast<double>(tc.counts[s]) / n - pmf[s]);
    if (gap > delta * pmf[s] + 1e-12) return false;
  }
  return true;
}

}  // namespace sdnet
