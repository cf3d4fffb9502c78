#pragma once

// Small networks and a brute-force error oracle shared by the test binaries.
// The oracle walks every message tuple and every joint output sequence
// directly from the channel law; it shares no code with the evaluator.

#include <cmath>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "sdnet/codes.hpp"
#include "sdnet/network.hpp"
#include "sdnet/scheme.hpp"
#include "sdnet/state_process.hpp"
#include "sdnet/topology.hpp"

namespace fixtures {

using namespace sdnet;

// fn(s, x) -> PMF over joint outputs.
inline NetworkLaw make_network(std::size_t states, std::vector<std::size_t> inputs, std::vector<std::size_t> outputs,
                               const std::function<std::vector<double>(Symbol, const std::vector<Symbol>&)>& fn) {
  RawNetwork raw;
  raw.alphabets = {inputs, outputs, states};
  for (Symbol s = 0; s < states; ++s) {
    std::vector<Symbol> x(inputs.size(), 0);
    do {
      auto pmf = fn(s, x);
      raw.w.insert(raw.w.end(), pmf.begin(), pmf.end());
    } while ([&] {
      // last transmitter varies fastest
      for (std::size_t a = x.size(); a-- > 0;) {
        if (++x[a] < inputs[a]) return true;
        x[a] = 0;
      }
      return false;
    }());
  }
  return validate_network(raw);
}

inline std::vector<double> bit(Symbol y) { return y ? std::vector<double>{0, 1} : std::vector<double>{1, 0}; }

inline std::vector<double> flip(Symbol y, double eps) {
  return y ? std::vector<double>{eps, 1 - eps} : std::vector<double>{1 - eps, eps};
}

/// Y = X xor S.
inline NetworkLaw xor_single() {
  return make_network(2, {2}, {2}, [](Symbol s, const std::vector<Symbol>& x) { return bit(x[0] ^ s); });
}

/// Y = X; the state (of the given alphabet size) has no effect.
inline NetworkLaw noiseless(std::size_t states = 2) {
  return make_network(states, {2}, {2}, [](Symbol, const std::vector<Symbol>& x) { return bit(x[0]); });
}

/// BSC(eps) whose output ignores the state.
inline NetworkLaw bsc(double eps, std::size_t states = 2) {
  return make_network(states, {2}, {2}, [eps](Symbol, const std::vector<Symbol>& x) { return flip(x[0], eps); });
}

/// Y = X xor S xor Z, Z ~ Bernoulli(eps).
inline NetworkLaw bsc_with_state(double eps) {
  return make_network(2, {2}, {2}, [eps](Symbol s, const std::vector<Symbol>& x) { return flip(x[0] ^ s, eps); });
}

/// Y = X1 xor X2 xor S (optionally through a BSC(eps)).
inline NetworkLaw xor_mac(double eps = 0.0) {
  return make_network(2, {2, 2}, {2},
                      [eps](Symbol s, const std::vector<Symbol>& x) { return flip(x[0] ^ x[1] ^ s, eps); });
}

/// Y_b = X xor S xor Z_b with independent Z_1 ~ Bern(e1), Z_2 ~ Bern(e2).
inline NetworkLaw broadcast(double e1, double e2) {
  return make_network(2, {2}, {2, 2}, [e1, e2](Symbol s, const std::vector<Symbol>& x) {
    const auto a = flip(x[0] ^ s, e1), b = flip(x[0] ^ s, e2);
    return std::vector<double>{a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]};
  });
}

inline MessageTopology single_user(std::uint64_t m) { return MessageTopology({m}, {{0}}, {{0}}); }
inline MessageTopology mac(std::uint64_t m1, std::uint64_t m2) {
  return MessageTopology({m1, m2}, {{0}, {1}}, {{0, 1}});
}
inline MessageTopology broadcast_private(std::uint64_t m1, std::uint64_t m2) {
  return MessageTopology({m1, m2}, {{0, 1}}, {{0}, {1}});
}

inline StateProcess uniform_iid(std::size_t m = 2) { return StateProcess::iid(std::vector<double>(m, 1.0 / m)); }

/// Pr{error | S = states} by direct enumeration.
template <class Scheme>
double oracle_error_given_states(const Scheme& scheme, const NetworkLaw& net, const std::vector<Symbol>& states) {
  const auto& topo = scheme.topology();
  const auto& al = net.alphabets();
  const std::size_t n = states.size();
  const std::size_t k = al.transmitters(), l = al.receivers();
  const auto jy = net.joint_output_count();
  double total = 0.0;
  for (MessageIndex tuple = 0; tuple < topo.tuple_count(); ++tuple) {
    std::vector<Sequence> x(k);
    for (std::size_t a = 0; a < k; ++a) x[a] = scheme.encode(a, topo.encoder_view(tuple, a), states);
    std::vector<std::size_t> y(n, 0);
    for (;;) {
      double pr = 1.0;
      for (std::size_t i = 0; i < n && pr > 0.0; ++i) {
        std::vector<Symbol> xi(k);
        for (std::size_t a = 0; a < k; ++a) xi[a] = x[a][i];
        pr *= net.output_distribution(xi, states[i])[y[i]];
      }
      if (pr > 0.0) {
        bool wrong = false;
        for (std::size_t b = 0; b < l && !wrong; ++b) {
          Sequence yb(n);
          for (std::size_t i = 0; i < n; ++i) yb[i] = net.receiver_output(y[i], b);
          wrong = scheme.decode(b, yb, states) != topo.decoder_view(tuple, b);
        }
        if (wrong) total += pr;
      }
      std::size_t i = n;
      while (i > 0 && ++y[i - 1] == jy) y[--i] = 0;
      if (i == 0) break;
    }
  }
  return total / static_cast<double>(topo.tuple_count());
}

template <class Scheme>
double oracle_error(const Scheme& scheme, const NetworkLaw& net, const StateProcess& process) {
  const std::size_t n = scheme.blocklength();
  const std::size_t m = net.state_size();
  std::vector<Symbol> s(n, 0);
  double total = 0.0;
  do {
    const double pr = process.probability(s);
    if (pr > 0.0) total += pr * oracle_error_given_states(scheme, net, s);
  } while (next_sequence(s, m));
  return total;
}

/// A random causal table scheme (decoders arbitrary but in range).
inline CausalScheme random_causal_tables(const MessageTopology& topo, const Alphabets& al, std::size_t n,
                                         std::mt19937_64& rng) {
  CausalTables t;
  t.blocklength = n;
  for (std::size_t a = 0; a < al.transmitters(); ++a) {
    auto& per_time = t.encoders.emplace_back();
    std::uniform_int_distribution<Symbol> xs(0, static_cast<Symbol>(al.inputs[a] - 1));
    std::uint64_t prefixes = 1;
    for (std::size_t i = 1; i <= n; ++i) {
      prefixes *= al.states;
      auto& table = per_time.emplace_back(topo.encoder_message_count(a) * prefixes);
      for (auto& v : table) v = xs(rng);
    }
  }
  for (std::size_t b = 0; b < al.receivers(); ++b) {
    std::uint64_t cells = 1;
    for (std::size_t i = 0; i < n; ++i) cells *= al.states * al.outputs[b];
    std::uniform_int_distribution<MessageIndex> ms(0, topo.decoder_message_count(b) - 1);
    auto& table = t.decoders.emplace_back(cells);
    for (auto& v : table) v = ms(rng);
  }
  return make_causal_table_scheme(topo, al, std::move(t));
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("sdnet_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace fixtures
