#include "sdnet/codes.hpp"

#include <memory>
#include <string>

namespace sdnet {
namespace {

// Per global message tuple, the row-major input index at each time.
using InputPlan = std::vector<std::vector<std::size_t>>;

InputPlan plan_inputs(const MessageTopology& topo, const NetworkLaw& net, std::size_t n,
                      const std::vector<std::vector<Sequence>>& codewords /* [a][m_a] */) {
  const auto& al = net.alphabets();
  InputPlan plan(topo.tuple_count(), std::vector<std::size_t>(n, 0));
  for (MessageIndex m = 0; m < topo.tuple_count(); ++m)
    for (std::size_t a = 0; a < al.transmitters(); ++a) {
      const auto& cw = codewords[a][topo.encoder_view(m, a)];
      for (std::size_t i = 0; i < n; ++i) plan[m][i] = plan[m][i] * al.inputs[a] + cw[i];
    }
  return plan;
}

// Likelihood of every y_b^n (row-major) given the inputs and states.
std::vector<double> receiver_likelihoods(const NetworkLaw& net, std::size_t b, std::span<const Symbol> states,
                                         const std::vector<std::size_t>& inputs) {
  std::vector<double> lik{1.0};
  const std::size_t ny = net.alphabets().outputs[b];
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto w = net.receiver_marginal(b, inputs[i], states[i]);
    std::vector<double> next(lik.size() * ny);
    for (std::size_t j = 0; j < lik.size(); ++j)
      for (std::size_t y = 0; y < ny; ++y) next[j * ny + y] = lik[j] * w[y];
    lik = std::move(next);
  }
  return lik;
}

// MAP decoder of every receiver for one state sequence, indexed by y_b^n.
std::vector<std::vector<MessageIndex>> map_for_slice(const MessageTopology& topo, const NetworkLaw& net,
                                                     std::span<const Symbol> states, const InputPlan& plan) {
  const std::size_t l = net.receivers();
  std::vector<std::vector<MessageIndex>> out(l);
  for (std::size_t b = 0; b < l; ++b) {
    const auto demanded = topo.decoder_message_count(b);
    std::vector<double> score;
    for (MessageIndex m = 0; m < topo.tuple_count(); ++m) {
      const auto lik = receiver_likelihoods(net, b, states, plan[m]);
      if (score.empty()) score.assign(lik.size() * demanded, 0.0);
      const auto d = topo.decoder_view(m, b);
      for (std::size_t y = 0; y < lik.size(); ++y) score[y * demanded + d] += lik[y];
    }
    const std::size_t y_seqs = score.size() / demanded;
    out[b].resize(y_seqs);
    for (std::size_t y = 0; y < y_seqs; ++y) {
      MessageIndex best = 0;
      double best_score = score[y * demanded];
      // Relative slack so that mathematically equal posteriors tie despite rounding.
      for (MessageIndex d = 1; d < demanded; ++d)
        if (score[y * demanded + d] > best_score * (1.0 + 1e-12)) {
          best = d;
          best_score = score[y * demanded + d];
        }
      out[b][y] = best;
    }
  }
  return out;
}

// Pr{some receiver errs | S^n = states} with the given per-slice decoders.
double slice_error(const MessageTopology& topo, const NetworkLaw& net, std::span<const Symbol> states,
                   const InputPlan& plan, const std::vector<std::vector<MessageIndex>>& decoders) {
  const std::size_t n = states.size();
  const std::size_t l = net.receivers();
  const auto& al = net.alphabets();
  std::vector<MessageIndex> truth(l);
  std::vector<std::vector<std::size_t>> y_index(n + 1, std::vector<std::size_t>(l, 0));
  double err = 0.0;

  for (MessageIndex m = 0; m < topo.tuple_count(); ++m) {
    for (std::size_t b = 0; b < l; ++b) truth[b] = topo.decoder_view(m, b);
    auto walk = [&](auto&& self, std::size_t i, double prob) -> void {
      if (i == n) {
        for (std::size_t b = 0; b < l; ++b)
          if (decoders[b][y_index[n][b]] != truth[b]) {
            err += prob;
            return;
          }
        return;
      }
      const auto w = net.output_distribution(plan[m][i], states[i]);
      for (std::size_t y = 0; y < w.size(); ++y) {
        if (w[y] == 0.0) continue;
        for (std::size_t b = 0; b < l; ++b)
          y_index[i + 1][b] = y_index[i][b] * al.outputs[b] + net.receiver_output(y, b);
        self(self, i + 1, prob * w[y]);
      }
    };
    walk(walk, 0, 1.0);
  }
  return err / static_cast<double>(topo.tuple_count());
}

void require_budget(const char* what, std::uint64_t cells, std::uint64_t budget) {
  if (cells > budget) throw InstanceTooLarge(what, cells, budget);
}

}  // namespace

Sequence random_codeword(std::uint64_t seed, std::size_t a, MessageIndex m, std::span<const Symbol> states,
                         std::size_t alphabet_size) {
  std::uint64_t key = mix_seed(mix_seed(seed, a), m);
  for (Symbol s : states) key = mix_seed(key, s);
  Rng rng(mix_seed(key, states.size()));
  Sequence out(states.size());
  for (auto& x : out) x = static_cast<Symbol>(uniform_below(rng, alphabet_size));
  return out;
}

std::vector<std::vector<MessageIndex>> map_decoder_tables(const MessageTopology& topology, const NetworkLaw& net,
                                                          std::size_t n,
                                                          const std::vector<NoncausalScheme::EncoderRule>& encoders,
                                                          std::uint64_t cell_budget) {
  topology.check_compatible(net);
  const auto& al = net.alphabets();
  const std::uint64_t s_seqs = saturating_pow(al.states, n);
  for (std::size_t b = 0; b < al.receivers(); ++b)
    require_budget("MAP decoder table", saturating_mul(s_seqs, saturating_pow(al.outputs[b], n)), cell_budget);

  std::vector<std::vector<MessageIndex>> tables(al.receivers());
  Sequence states(n);
  for (std::uint64_t si = 0; si < s_seqs; ++si) {
    index_to_sequence(si, al.states, states);
    std::vector<std::vector<Sequence>> codewords(al.transmitters());
    for (std::size_t a = 0; a < al.transmitters(); ++a)
      for (MessageIndex m = 0; m < topology.encoder_message_count(a); ++m) {
        Sequence cw(n);
        encoders[a](m, states, cw);
        codewords[a].push_back(std::move(cw));
      }
    const auto slice = map_for_slice(topology, net, states, plan_inputs(topology, net, n, codewords));
    for (std::size_t b = 0; b < al.receivers(); ++b)
      tables[b].insert(tables[b].end(), slice[b].begin(), slice[b].end());
  }
  return tables;
}

NoncausalScheme random_code(const MessageTopology& topology, const NetworkLaw& net, std::size_t n,
                            std::uint64_t seed, const RandomCodeOptions& options) {
  if (n == 0) throw DimensionError("blocklength must be at least 1");
  topology.check_compatible(net);
  const auto& al = net.alphabets();

  std::vector<NoncausalScheme::EncoderRule> encoders;
  for (std::size_t a = 0; a < al.transmitters(); ++a)
    encoders.push_back([seed, a, size = al.inputs[a]](MessageIndex m, std::span<const Symbol> s,
                                                      std::span<Symbol> out) {
      const auto cw = random_codeword(seed, a, m, s, size);
      std::copy(cw.begin(), cw.end(), out.begin());
    });

  std::vector<DecoderRule> decoders;
  if (options.decoders) {
    decoders = *options.decoders;
  } else {
    require_budget("random code", saturating_mul(saturating_pow(al.states, n), topology.tuple_count()),
                   options.cell_budget);
    auto tables = map_decoder_tables(topology, net, n, encoders, options.cell_budget);
    for (std::size_t b = 0; b < al.receivers(); ++b) {
      auto shared = std::make_shared<const std::vector<MessageIndex>>(std::move(tables[b]));
      const std::uint64_t y_seqs = saturating_pow(al.outputs[b], n);
      decoders.push_back([shared, y_seqs, sr = al.states, yr = al.outputs[b]](std::span<const Symbol> y,
                                                                               std::span<const Symbol> s) {
        return (*shared)[sequence_index(s, sr) * y_seqs + sequence_index(y, yr)];
      });
    }
  }
  return NoncausalScheme(topology, al, n, std::move(encoders), std::move(decoders));
}

NoncausalScheme brute_force_optimal(const MessageTopology& topology, const NetworkLaw& net,
                                    const StateProcess& process, std::size_t n, std::uint64_t search_budget) {
  if (n == 0) throw DimensionError("blocklength must be at least 1");
  topology.check_compatible(net);
  if (process.alphabet_size() != net.state_size())
    throw DimensionError("state process alphabet does not match the network");
  const auto& al = net.alphabets();
  const std::size_t k = al.transmitters();

  // One digit per (a, m_a, i), in the order those entries appear in the flattened table.
  std::vector<std::size_t> radix;
  std::uint64_t codebooks = 1;
  for (std::size_t a = 0; a < k; ++a) {
    const auto ma = topology.encoder_message_count(a);
    for (std::uint64_t j = 0; j < saturating_mul(ma, n); ++j) {
      radix.push_back(al.inputs[a]);
      codebooks = saturating_mul(codebooks, al.inputs[a]);
      if (codebooks == kSaturated) break;
    }
  }
  const std::uint64_t s_seqs = saturating_pow(al.states, n);
  require_budget("brute-force search", saturating_mul(s_seqs, codebooks), search_budget);
  for (std::size_t b = 0; b < al.receivers(); ++b)
    require_budget("MAP decoder table", saturating_mul(s_seqs, saturating_pow(al.outputs[b], n)), search_budget);

  auto codewords_of = [&](const std::vector<std::size_t>& digits) {
    std::vector<std::vector<Sequence>> cw(k);
    std::size_t pos = 0;
    for (std::size_t a = 0; a < k; ++a)
      for (MessageIndex m = 0; m < topology.encoder_message_count(a); ++m) {
        Sequence c(n);
        for (std::size_t i = 0; i < n; ++i) c[i] = static_cast<Symbol>(digits[pos++]);
        cw[a].push_back(std::move(c));
      }
    return cw;
  };

  NoncausalTables tables;
  tables.blocklength = n;
  for (std::size_t a = 0; a < k; ++a)
    tables.encoders.emplace_back(topology.encoder_message_count(a) * s_seqs * n, 0);
  tables.decoders.resize(al.receivers());

  Sequence states(n);
  for (std::uint64_t si = 0; si < s_seqs; ++si) {
    index_to_sequence(si, al.states, states);
    std::vector<std::size_t> digits(radix.size(), 0);
    std::vector<std::size_t> best_digits = digits;
    std::vector<std::vector<MessageIndex>> best_decoders;
    double best_err = 2.0;

    const bool reachable = process.probability(states) > 0.0;
    do {
      const auto plan = plan_inputs(topology, net, n, codewords_of(digits));
      auto decoders = map_for_slice(topology, net, states, plan);
      const double err = slice_error(topology, net, states, plan, decoders);
      if (err < best_err - 1e-12) {
        best_err = err;
        best_digits = digits;
        best_decoders = std::move(decoders);
      }
      if (!reachable) break;
      // Odometer: last digit fastest, so candidates come in lexicographic order.
      std::size_t p = digits.size();
      while (p-- > 0) {
        if (++digits[p] < radix[p]) break;
        digits[p] = 0;
      }
      if (p == static_cast<std::size_t>(-1)) break;
    } while (true);

    const auto cw = codewords_of(best_digits);
    for (std::size_t a = 0; a < k; ++a)
      for (MessageIndex m = 0; m < cw[a].size(); ++m)
        std::copy(cw[a][m].begin(), cw[a][m].end(),
                  tables.encoders[a].begin() + static_cast<std::ptrdiff_t>((m * s_seqs + si) * n));
    for (std::size_t b = 0; b < al.receivers(); ++b)
      tables.decoders[b].insert(tables.decoders[b].end(), best_decoders[b].begin(), best_decoders[b].end());
  }
  return make_table_scheme(topology, al, std::move(tables));
}

}  // namespace sdnet
