#pragma once

#include <functional>
#include <span>
#include <vector>

#include "sdnet/common.hpp"
#include "sdnet/network.hpp"
#include "sdnet/topology.hpp"

namespace sdnet {

/// Decoder phi_b: (y_b^n, s^n) -> flattened demanded-message index, or
/// kDecodeFailure. Receivers always see the whole state sequence.
using DecoderRule =
    std::function<MessageIndex(std::span<const Symbol> outputs, std::span<const Symbol> states)>;

/// Coding scheme whose encoders see the entire state sequence before
/// transmission. Encoders and decoders are deterministic.
class NoncausalScheme {
 public:
  /// Writes f_a(m, s^n) into `codeword` (length n).
  using EncoderRule =
      std::function<void(MessageIndex message, std::span<const Symbol> states, std::span<Symbol> codeword)>;

  NoncausalScheme(MessageTopology topology, Alphabets alphabets, std::size_t blocklength,
                  std::vector<EncoderRule> encoders, std::vector<DecoderRule> decoders);

  std::size_t blocklength() const noexcept { return n_; }
  const MessageTopology& topology() const noexcept { return topology_; }
  const Alphabets& alphabets() const noexcept { return alphabets_; }

  /// Codeword x_a^n. Throws LengthMismatch, IndexError or SymbolRangeError.
  Sequence encode(std::size_t a, MessageIndex message, std::span<const Symbol> states) const;
  void encode_into(std::size_t a, MessageIndex message, std::span<const Symbol> states,
                   std::span<Symbol> codeword) const;

  MessageIndex decode(std::size_t b, std::span<const Symbol> outputs, std::span<const Symbol> states) const;

 private:
  MessageTopology topology_;
  Alphabets alphabets_;
  std::size_t n_;
  std::vector<EncoderRule> encoders_;
  std::vector<DecoderRule> decoders_;
};

/// Coding scheme whose encoders learn the states one at a time.
///
/// An encoder is started per message and then fed s_1, s_2, ...; each call
/// returns x_{a,i} right after s_i is revealed. Causality is a property of
/// the interface: an encoder can only ever have seen s^i when it emits x_i.
class CausalScheme {
 public:
  using Step = std::function<Symbol(Symbol state)>;
  using EncoderRule = std::function<Step(MessageIndex message)>;

  CausalScheme(MessageTopology topology, Alphabets alphabets, std::size_t blocklength,
               std::vector<EncoderRule> encoders, std::vector<DecoderRule> decoders);

  std::size_t blocklength() const noexcept { return n_; }
  const MessageTopology& topology() const noexcept { return topology_; }
  const Alphabets& alphabets() const noexcept { return alphabets_; }

  /// Inputs produced while streaming `states` (any length up to the blocklength).
  Sequence encode(std::size_t a, MessageIndex message, std::span<const Symbol> states) const;
  void encode_into(std::size_t a, MessageIndex message, std::span<const Symbol> states,
                   std::span<Symbol> codeword) const;

  /// f_{a,i}(m, s^i) with i = prefix.size() >= 1.
  Symbol encode_at(std::size_t a, MessageIndex message, std::span<const Symbol> prefix) const;

  MessageIndex decode(std::size_t b, std::span<const Symbol> outputs, std::span<const Symbol> states) const;

 private:
  MessageTopology topology_;
  Alphabets alphabets_;
  std::size_t n_;
  std::vector<EncoderRule> encoders_;
  std::vector<DecoderRule> decoders_;
};

/// Materialized noncausal scheme.
///
/// encoders[a] has M_a * |S|^n * n symbols, laid out [m][s^n index][i].
/// decoders[b] has |S|^n * |Y_b|^n entries, laid out [s^n index][y_b^n index].
/// Sequence indices are row-major with the first letter most significant.
struct NoncausalTables {
  std::size_t blocklength = 0;
  std::vector<std::vector<Symbol>> encoders;
  std::vector<std::vector<MessageIndex>> decoders;
};

/// Materialized causal scheme. encoders[a][i-1] holds f_{a,i}, laid out
/// [m][s^i index] (M_a * |S|^i entries). Decoders as for NoncausalTables.
struct CausalTables {
  std::size_t blocklength = 0;
  std::vector<std::vector<std::vector<Symbol>>> encoders;
  std::vector<std::vector<MessageIndex>> decoders;
};

/// Throws DimensionError on size mismatches and SymbolRangeError on entries
/// outside the input alphabets or the demanded message sets.
NoncausalScheme make_table_scheme(const MessageTopology& topology, const Alphabets& alphabets,
                                  NoncausalTables tables);
CausalScheme make_causal_table_scheme(const MessageTopology& topology, const Alphabets& alphabets,
                                      CausalTables tables);

/// Evaluates every rule over its full domain. Throws InstanceTooLarge past `cell_budget`.
NoncausalTables tabulate(const NoncausalScheme& scheme, std::uint64_t cell_budget);
CausalTables tabulate(const CausalScheme& scheme, std::uint64_t cell_budget);

/// A causal scheme used with noncausal state information: the codeword is
/// the causal encoder run over s^n, decoders are unchanged.
NoncausalScheme lift_causal(const CausalScheme& scheme);

}  // namespace sdnet
