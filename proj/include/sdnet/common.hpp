#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

namespace sdnet {

/// A letter of any finite alphabet (state, input or output), 0-based.
using Symbol = std::uint32_t;
using Sequence = std::vector<Symbol>;

/// Flattened message index. Tuples of messages are flattened mixed-radix
/// over ascending message ids, first id most significant.
using MessageIndex = std::uint64_t;

/// Decoder output reserved for "decoding failed"; never equal to a message.
inline constexpr MessageIndex kDecodeFailure = std::numeric_limits<MessageIndex>::max();

inline constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

/// a*b, or kSaturated on overflow.
constexpr std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) noexcept {
  if (a == 0 || b == 0) return 0;
  if (a == kSaturated || b == kSaturated || a > kSaturated / b) return kSaturated;
  return a * b;
}

constexpr std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) noexcept {
  return a > kSaturated - b ? kSaturated : a + b;
}

constexpr std::uint64_t saturating_pow(std::uint64_t base, std::size_t exp) noexcept {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r = saturating_mul(r, base);
  return r;
}

/// Row-major index of a sequence over a uniform radix (first symbol most significant).
inline std::uint64_t sequence_index(std::span<const Symbol> seq, std::uint64_t radix) noexcept {
  std::uint64_t idx = 0;
  for (Symbol s : seq) idx = idx * radix + s;
  return idx;
}

inline void index_to_sequence(std::uint64_t idx, std::uint64_t radix, std::span<Symbol> out) noexcept {
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = static_cast<Symbol>(idx % radix);
    idx /= radix;
  }
}

/// Lexicographic successor over a uniform radix. Returns false after the last sequence.
inline bool next_sequence(std::span<Symbol> seq, std::uint64_t radix) noexcept {
  for (std::size_t i = seq.size(); i-- > 0;) {
    if (++seq[i] < radix) return true;
    seq[i] = 0;
  }
  return false;
}

// Randomness. The engine is the standard 64-bit Mersenne Twister; the helpers
// below avoid std::*_distribution so that draws are identical across standard
// library implementations.
using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

/// Independent engine for substream `stream` of `seed`.
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  return Rng(mix_seed(seed, stream));
}

inline double uniform01(Rng& rng) noexcept {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Unbiased integer in [0, bound).
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) noexcept {
  const std::uint64_t limit = kSaturated - kSaturated % bound;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % bound;
}

/// Draw from a PMF by inversion. Rounding slack falls on the last positive entry.
inline std::size_t sample_categorical(std::span<const double> pmf, Rng& rng) noexcept {
  const double u = uniform01(rng);
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < pmf.size(); ++i) {
    if (pmf[i] <= 0.0) continue;
    acc += pmf[i];
    last = i;
    if (u < acc) return i;
  }
  return last;
}

inline constexpr double kProbabilityTolerance = 1e-9;

}  // namespace sdnet
