#include "sdnet/scheme.hpp"

#include <memory>
#include <string>

namespace sdnet {
namespace {

void check_rule_counts(const MessageTopology& topology, const Alphabets& alphabets,
                       std::size_t encoders, std::size_t decoders) {
  if (topology.transmitters() != alphabets.transmitters() || topology.receivers() != alphabets.receivers())
    throw DimensionError("topology does not match the network's transmitter/receiver counts");
  if (encoders != topology.transmitters()) throw DimensionError("one encoder per transmitter required");
  if (decoders != topology.receivers()) throw DimensionError("one decoder per receiver required");
}

void check_decoder_input(const Alphabets& alphabets, std::size_t n, std::size_t b,
                         std::span<const Symbol> outputs, std::span<const Symbol> states) {
  if (b >= alphabets.receivers()) throw IndexError("no receiver " + std::to_string(b));
  if (outputs.size() != n || states.size() != n)
    throw LengthMismatch("decoder expects length-" + std::to_string(n) + " outputs and states");
  for (Symbol y : outputs)
    if (y >= alphabets.outputs[b]) throw IndexError("output symbol out of range");
  for (Symbol s : states)
    if (s >= alphabets.states) throw IndexError("state symbol out of range");
}

void check_states(const Alphabets& alphabets, std::span<const Symbol> states) {
  for (Symbol s : states)
    if (s >= alphabets.states) throw IndexError("state symbol " + std::to_string(s) + " out of range");
}

DecoderRule table_decoder(std::shared_ptr<const std::vector<MessageIndex>> table, std::uint64_t state_radix,
                          std::uint64_t output_radix, std::uint64_t output_sequences) {
  return [table = std::move(table), state_radix, output_radix, output_sequences](
             std::span<const Symbol> y, std::span<const Symbol> s) {
    return (*table)[sequence_index(s, state_radix) * output_sequences + sequence_index(y, output_radix)];
  };
}

void check_decoder_table(const MessageTopology& topology, const Alphabets& alphabets, std::size_t n,
                         const std::vector<std::vector<MessageIndex>>& decoders) {
  if (decoders.size() != topology.receivers()) throw DimensionError("one decoder table per receiver required");
  const std::uint64_t s_seqs = saturating_pow(alphabets.states, n);
  for (std::size_t b = 0; b < decoders.size(); ++b) {
    const std::uint64_t expected = saturating_mul(s_seqs, saturating_pow(alphabets.outputs[b], n));
    if (decoders[b].size() != expected)
      throw DimensionError("decoder table " + std::to_string(b) + " has " + std::to_string(decoders[b].size()) +
                           " entries, expected " + std::to_string(expected));
    const auto limit = topology.decoder_message_count(b);
    for (auto v : decoders[b])
      if (v != kDecodeFailure && v >= limit)
        throw SymbolRangeError("decoder table " + std::to_string(b) + " emits message " + std::to_string(v) +
                               " outside its demanded set of size " + std::to_string(limit));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// NoncausalScheme

NoncausalScheme::NoncausalScheme(MessageTopology topology, Alphabets alphabets, std::size_t blocklength,
                                 std::vector<EncoderRule> encoders, std::vector<DecoderRule> decoders)
    : topology_(std::move(topology)),
      alphabets_(std::move(alphabets)),
      n_(blocklength),
      encoders_(std::move(encoders)),
      decoders_(std::move(decoders)) {
  if (n_ == 0) throw DimensionError("blocklength must be at least 1");
  check_rule_counts(topology_, alphabets_, encoders_.size(), decoders_.size());
}

void NoncausalScheme::encode_into(std::size_t a, MessageIndex message, std::span<const Symbol> states,
                                  std::span<Symbol> codeword) const {
  if (a >= encoders_.size()) throw IndexError("no transmitter " + std::to_string(a));
  if (states.size() != n_ || codeword.size() != n_)
    throw LengthMismatch("noncausal encoder expects " + std::to_string(n_) + " states");
  if (message >= topology_.encoder_message_count(a)) throw IndexError("message index out of range");
  check_states(alphabets_, states);
  encoders_[a](message, states, codeword);
  for (Symbol x : codeword)
    if (x >= alphabets_.inputs[a])
      throw SymbolRangeError("encoder " + std::to_string(a) + " emitted symbol " + std::to_string(x));
}

Sequence NoncausalScheme::encode(std::size_t a, MessageIndex message, std::span<const Symbol> states) const {
  Sequence out(n_);
  encode_into(a, message, states, out);
  return out;
}

MessageIndex NoncausalScheme::decode(std::size_t b, std::span<const Symbol> outputs,
                                     std::span<const Symbol> states) const {
  check_decoder_input(alphabets_, n_, b, outputs, states);
  return decoders_[b](outputs, states);
}

// ---------------------------------------------------------------------------
// CausalScheme

CausalScheme::CausalScheme(MessageTopology topology, Alphabets alphabets, std::size_t blocklength,
                           std::vector<EncoderRule> encoders, std::vector<DecoderRule> decoders)
    : topology_(std::move(topology)),
      alphabets_(std::move(alphabets)),
      n_(blocklength),
      encoders_(std::move(encoders)),
      decoders_(std::move(decoders)) {
  if (n_ == 0) throw DimensionError("blocklength must be at least 1");
  check_rule_counts(topology_, alphabets_, encoders_.size(), decoders_.size());
}

void CausalScheme::encode_into(std::size_t a, MessageIndex message, std::span<const Symbol> states,
                               std::span<Symbol> codeword) const {
  if (a >= encoders_.size()) throw IndexError("no transmitter " + std::to_string(a));
  if (states.size() > n_ || codeword.size() != states.size())
    throw LengthMismatch("causal encoder fed more states than its blocklength");
  if (message >= topology_.encoder_message_count(a)) throw IndexError("message index out of range");
  check_states(alphabets_, states);
  auto step = encoders_[a](message);
  for (std::size_t i = 0; i < states.size(); ++i) {
    codeword[i] = step(states[i]);
    if (codeword[i] >= alphabets_.inputs[a])
      throw SymbolRangeError("encoder " + std::to_string(a) + " emitted symbol " + std::to_string(codeword[i]));
  }
}

Sequence CausalScheme::encode(std::size_t a, MessageIndex message, std::span<const Symbol> states) const {
  Sequence out(states.size());
  encode_into(a, message, states, out);
  return out;
}

Symbol CausalScheme::encode_at(std::size_t a, MessageIndex message, std::span<const Symbol> prefix) const {
  if (prefix.empty()) throw LengthMismatch("causal encoder needs at least one state");
  return encode(a, message, prefix).back();
}

MessageIndex CausalScheme::decode(std::size_t b, std::span<const Symbol> outputs,
                                  std::span<const Symbol> states) const {
  check_decoder_input(alphabets_, n_, b, outputs, states);
  return decoders_[b](outputs, states);
}

// ---------------------------------------------------------------------------
// Tables

NoncausalScheme make_table_scheme(const MessageTopology& topology, const Alphabets& alphabets,
                                  NoncausalTables tables) {
  const std::size_t n = tables.blocklength;
  if (n == 0) throw DimensionError("blocklength must be at least 1");
  if (tables.encoders.size() != topology.transmitters())
    throw DimensionError("one encoder table per transmitter required");
  check_decoder_table(topology, alphabets, n, tables.decoders);

  const std::uint64_t s_seqs = saturating_pow(alphabets.states, n);
  std::vector<NoncausalScheme::EncoderRule> encoders;
  for (std::size_t a = 0; a < tables.encoders.size(); ++a) {
    const auto& t = tables.encoders[a];
    const std::uint64_t expected = saturating_mul(saturating_mul(topology.encoder_message_count(a), s_seqs), n);
    if (t.size() != expected)
      throw DimensionError("encoder table " + std::to_string(a) + " has " + std::to_string(t.size()) +
                           " entries, expected " + std::to_string(expected));
    for (Symbol x : t)
      if (x >= alphabets.inputs[a])
        throw SymbolRangeError("encoder table " + std::to_string(a) + " holds symbol " + std::to_string(x) +
                               " outside an alphabet of size " + std::to_string(alphabets.inputs[a]));
    auto shared = std::make_shared<const std::vector<Symbol>>(std::move(tables.encoders[a]));
    const std::uint64_t radix = alphabets.states;
    encoders.push_back([shared, s_seqs, radix, n](MessageIndex m, std::span<const Symbol> s, std::span<Symbol> out) {
      const auto base = (m * s_seqs + sequence_index(s, radix)) * n;
      std::copy_n(shared->begin() + static_cast<std::ptrdiff_t>(base), n, out.begin());
    });
  }

  std::vector<DecoderRule> decoders;
  for (std::size_t b = 0; b < tables.decoders.size(); ++b) {
    auto shared = std::make_shared<const std::vector<MessageIndex>>(std::move(tables.decoders[b]));
    decoders.push_back(table_decoder(shared, alphabets.states, alphabets.outputs[b],
                                     saturating_pow(alphabets.outputs[b], n)));
  }
  return NoncausalScheme(topology, alphabets, n, std::move(encoders), std::move(decoders));
}

CausalScheme make_causal_table_scheme(const MessageTopology& topology, const Alphabets& alphabets,
                                      CausalTables tables) {
  const std::size_t n = tables.blocklength;
  if (n == 0) throw DimensionError("blocklength must be at least 1");
  if (tables.encoders.size() != topology.transmitters())
    throw DimensionError("one encoder table per transmitter required");
  check_decoder_table(topology, alphabets, n, tables.decoders);

  std::vector<CausalScheme::EncoderRule> encoders;
  for (std::size_t a = 0; a < tables.encoders.size(); ++a) {
    auto& per_time = tables.encoders[a];
    if (per_time.size() != n)
      throw DimensionError("causal encoder " + std::to_string(a) + " needs one table per time step");
    std::vector<std::uint64_t> prefixes(n);  // |S|^i for i = 1..n
    for (std::size_t i = 0; i < n; ++i) {
      prefixes[i] = saturating_pow(alphabets.states, i + 1);
      const auto expected = saturating_mul(topology.encoder_message_count(a), prefixes[i]);
      if (per_time[i].size() != expected)
        throw DimensionError("causal encoder " + std::to_string(a) + " time " + std::to_string(i + 1) + " has " +
                             std::to_string(per_time[i].size()) + " entries, expected " + std::to_string(expected));
      for (Symbol x : per_time[i])
        if (x >= alphabets.inputs[a])
          throw SymbolRangeError("causal encoder table " + std::to_string(a) + " holds symbol " + std::to_string(x));
    }
    auto shared = std::make_shared<const std::vector<std::vector<Symbol>>>(std::move(per_time));
    const std::uint64_t radix = alphabets.states;
    encoders.push_back([shared, prefixes, radix](MessageIndex m) -> CausalScheme::Step {
      return [shared, prefixes, radix, m, t = std::size_t{0}, prefix = std::uint64_t{0}](Symbol s) mutable {
        prefix = prefix * radix + s;
        const Symbol x = (*shared)[t][m * prefixes[t] + prefix];
        ++t;
        return x;
      };
    });
  }

  std::vector<DecoderRule> decoders;
  for (std::size_t b = 0; b < tables.decoders.size(); ++b) {
    auto shared = std::make_shared<const std::vector<MessageIndex>>(std::move(tables.decoders[b]));
    decoders.push_back(table_decoder(shared, alphabets.states, alphabets.outputs[b],
                                     saturating_pow(alphabets.outputs[b], n)));
  }
  return CausalScheme(topology, alphabets, n, std::move(encoders), std::move(decoders));
}

namespace {

template <class Scheme>
std::vector<std::vector<MessageIndex>> tabulate_decoders(const Scheme& scheme, std::uint64_t& cells,
                                                         std::uint64_t cell_budget) {
  const auto& al = scheme.alphabets();
  const std::size_t n = scheme.blocklength();
  const std::uint64_t s_seqs = saturating_pow(al.states, n);
  for (std::size_t b = 0; b < al.receivers(); ++b)
    cells = saturating_add(cells, saturating_mul(s_seqs, saturating_pow(al.outputs[b], n)));
  if (cells > cell_budget) throw InstanceTooLarge("scheme tabulation", cells, cell_budget);

  std::vector<std::vector<MessageIndex>> out(al.receivers());
  Sequence s(n), y(n);
  for (std::size_t b = 0; b < al.receivers(); ++b) {
    const std::uint64_t y_seqs = saturating_pow(al.outputs[b], n);
    out[b].resize(s_seqs * y_seqs);
    for (std::uint64_t si = 0; si < s_seqs; ++si) {
      index_to_sequence(si, al.states, s);
      for (std::uint64_t yi = 0; yi < y_seqs; ++yi) {
        index_to_sequence(yi, al.outputs[b], y);
        out[b][si * y_seqs + yi] = scheme.decode(b, y, s);
      }
    }
  }
  return out;
}

}  // namespace

NoncausalTables tabulate(const NoncausalScheme& scheme, std::uint64_t cell_budget) {
  const auto& al = scheme.alphabets();
  const auto& topo = scheme.topology();
  const std::size_t n = scheme.blocklength();
  const std::uint64_t s_seqs = saturating_pow(al.states, n);
  std::uint64_t cells = 0;
  for (std::size_t a = 0; a < al.transmitters(); ++a)
    cells = saturating_add(cells, saturating_mul(saturating_mul(topo.encoder_message_count(a), s_seqs), n));
  if (cells > cell_budget) throw InstanceTooLarge("scheme tabulation", cells, cell_budget);

  NoncausalTables t;
  t.blocklength = n;
  Sequence s(n);
  for (std::size_t a = 0; a < al.transmitters(); ++a) {
    const auto ma = topo.encoder_message_count(a);
    auto& table = t.encoders.emplace_back(ma * s_seqs * n);
    for (MessageIndex m = 0; m < ma; ++m)
      for (std::uint64_t si = 0; si < s_seqs; ++si) {
        index_to_sequence(si, al.states, s);
        scheme.encode_into(a, m, s, std::span<Symbol>(table).subspan((m * s_seqs + si) * n, n));
      }
  }
  t.decoders = tabulate_decoders(scheme, cells, cell_budget);
  return t;
}

CausalTables tabulate(const CausalScheme& scheme, std::uint64_t cell_budget) {
  const auto& al = scheme.alphabets();
  const auto& topo = scheme.topology();
  const std::size_t n = scheme.blocklength();
  std::uint64_t cells = 0;
  for (std::size_t a = 0; a < al.transmitters(); ++a)
    for (std::size_t i = 1; i <= n; ++i)
      cells = saturating_add(cells, saturating_mul(topo.encoder_message_count(a), saturating_pow(al.states, i)));
  if (cells > cell_budget) throw InstanceTooLarge("scheme tabulation", cells, cell_budget);

  CausalTables t;
  t.blocklength = n;
  Sequence s(n);
  for (std::size_t a = 0; a < al.transmitters(); ++a) {
    const auto ma = topo.encoder_message_count(a);
    auto& per_time = t.encoders.emplace_back(n);
    for (std::size_t i = 1; i <= n; ++i) {
      const std::uint64_t prefixes = saturating_pow(al.states, i);
      auto& table = per_time[i - 1];
      table.resize(ma * prefixes);
      std::span<Symbol> prefix(s.data(), i);
      for (MessageIndex m = 0; m < ma; ++m)
        for (std::uint64_t pi = 0; pi < prefixes; ++pi) {
          index_to_sequence(pi, al.states, prefix);
          table[m * prefixes + pi] = scheme.encode_at(a, m, prefix);
        }
    }
  }
  t.decoders = tabulate_decoders(scheme, cells, cell_budget);
  return t;
}

NoncausalScheme lift_causal(const CausalScheme& scheme) {
  auto shared = std::make_shared<const CausalScheme>(scheme);
  std::vector<NoncausalScheme::EncoderRule> encoders;
  for (std::size_t a = 0; a < scheme.topology().transmitters(); ++a)
    encoders.push_back([shared, a](MessageIndex m, std::span<const Symbol> s, std::span<Symbol> out) {
      shared->encode_into(a, m, s, out);
    });
  std::vector<DecoderRule> decoders;
  for (std::size_t b = 0; b < scheme.topology().receivers(); ++b)
    decoders.push_back([shared, b](std::span<const Symbol> y, std::span<const Symbol> s) {
      return shared->decode(b, y, s);
    });
  return NoncausalScheme(scheme.topology(), scheme.alphabets(), scheme.blocklength(), std::move(encoders),
                         std::move(decoders));
}

}  // namespace sdnet
