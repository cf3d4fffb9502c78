#include "sdnet/evaluation.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <numeric>

#include "sdnet/parallel.hpp"

namespace sdnet {

std::string to_string(EstimateMode mode) { return mode == EstimateMode::Exact ? "exact" : "monte-carlo"; }

ConfidenceInterval clopper_pearson(std::uint64_t events, std::uint64_t trials, double level) {
  ConfidenceInterval ci{0.0, 1.0, level};
  if (trials == 0) return ci;
  const double alpha = 1.0 - level;
  const auto k = static_cast<double>(events);
  const auto n = static_cast<double>(trials);
  if (events > 0) ci.lower = boost::math::ibeta_inv(k, n - k + 1.0, alpha / 2.0);
  if (events < trials) ci.upper = boost::math::ibeta_inv(k + 1.0, n - k, 1.0 - alpha / 2.0);
  return ci;
}

ErrorEstimate ErrorEstimate::sampled(std::uint64_t events, std::uint64_t trials, std::uint64_t seed, double level) {
  ErrorEstimate e;
  e.mode = EstimateMode::MonteCarlo;
  e.trials = trials;
  e.events = events;
  e.value = trials ? static_cast<double>(events) / static_cast<double>(trials) : 0.0;
  e.ci = clopper_pearson(events, trials, level);
  e.seed = seed;
  return e;
}

std::uint64_t conditional_cells(const MessageTopology& topology, const Alphabets& alphabets, std::size_t n) {
  return saturating_mul(topology.tuple_count(), saturating_pow(alphabets.joint_outputs(), n));
}

namespace {

template <class Scheme>
void check_scheme_network(const Scheme& scheme, const NetworkLaw& net) {
  if (!(scheme.alphabets() == net.alphabets()))
    throw DimensionError("scheme alphabets do not match the network");
}

// Codewords for every encoder and encoder-side message, then per-tuple input indices.
template <class Scheme>
std::vector<std::vector<std::size_t>> input_indices(const Scheme& scheme, const NetworkLaw& net,
                                                    std::span<const Symbol> states) {
  const auto& topo = scheme.topology();
  const auto& al = net.alphabets();
  const std::size_t n = states.size();
  std::vector<std::vector<Sequence>> cw(al.transmitters());
  for (std::size_t a = 0; a < al.transmitters(); ++a)
    for (MessageIndex m = 0; m < topo.encoder_message_count(a); ++m) cw[a].push_back(scheme.encode(a, m, states));

  std::vector<std::vector<std::size_t>> idx(topo.tuple_count(), std::vector<std::size_t>(n, 0));
  for (MessageIndex m = 0; m < topo.tuple_count(); ++m)
    for (std::size_t a = 0; a < al.transmitters(); ++a) {
      const auto& x = cw[a][topo.encoder_view(m, a)];
      for (std::size_t i = 0; i < n; ++i) idx[m][i] = idx[m][i] * al.inputs[a] + x[i];
    }
  return idx;
}

template <class Scheme>
double exact_given_states_impl(const Scheme& scheme, const NetworkLaw& net, std::span<const Symbol> states,
                               std::uint64_t cell_budget) {
  check_scheme_network(scheme, net);
  const std::size_t n = scheme.blocklength();
  if (states.size() != n)
    throw LengthMismatch("state sequence has length " + std::to_string(states.size()) + ", scheme blocklength is " +
                         std::to_string(n));
  const auto& topo = scheme.topology();
  const auto cells = conditional_cells(topo, net.alphabets(), n);
  if (cells > cell_budget) throw InstanceTooLarge("exact conditional error", cells, cell_budget);

  const std::size_t l = net.receivers();
  const auto inputs = input_indices(scheme, net, states);
  std::vector<Sequence> outputs(l, Sequence(n));
  std::vector<MessageIndex> truth(l);
  double err = 0.0;

  for (MessageIndex m = 0; m < topo.tuple_count(); ++m) {
    for (std::size_t b = 0; b < l; ++b) truth[b] = topo.decoder_view(m, b);
    auto walk = [&](auto&& self, std::size_t i, double prob) -> void {
      if (i == n) {
        for (std::size_t b = 0; b < l; ++b)
          if (scheme.decode(b, outputs[b], states) != truth[b]) {
            err += prob;
            break;
          }
        return;
      }
      const auto w = net.output_distribution(inputs[m][i], states[i]);
      for (std::size_t y = 0; y < w.size(); ++y) {
        if (w[y] == 0.0) continue;
        for (std::size_t b = 0; b < l; ++b) outputs[b][i] = net.receiver_output(y, b);
        self(self, i + 1, prob * w[y]);
      }
    };
    walk(walk, 0, 1.0);
  }
  return err / static_cast<double>(topo.tuple_count());
}

template <class Scheme>
double exact_error_impl(const Scheme& scheme, const NetworkLaw& net, const StateProcess& process,
                        std::uint64_t cell_budget, unsigned workers) {
  check_scheme_network(scheme, net);
  if (process.alphabet_size() != net.state_size())
    throw DimensionError("state process alphabet does not match the network");
  const std::size_t n = scheme.blocklength();
  const std::uint64_t s_seqs = saturating_pow(net.state_size(), n);
  const auto cells = saturating_mul(s_seqs, conditional_cells(scheme.topology(), net.alphabets(), n));
  if (cells > cell_budget) throw InstanceTooLarge("exact error", cells, cell_budget);

  std::vector<double> terms(s_seqs, 0.0);
  parallel_for(s_seqs, workers, [&](std::size_t begin, std::size_t end) {
    Sequence s(n);
    for (std::size_t si = begin; si < end; ++si) {
      index_to_sequence(si, net.state_size(), s);
      const double ps = process.probability(s);
      if (ps > 0.0) terms[si] = ps * exact_given_states_impl(scheme, net, s, cell_budget);
    }
  });
  return std::accumulate(terms.begin(), terms.end(), 0.0);
}

// One trial on its own substream. Returns (error, tag).
template <class Scheme>
std::pair<bool, bool> run_trial(const Scheme& scheme, const NetworkLaw& net, const StateProcess* process,
                                std::span<const Symbol> fixed_states, const StatePredicate* tag, std::uint64_t seed,
                                std::uint64_t t) {
  const auto& topo = scheme.topology();
  const auto& al = net.alphabets();
  const std::size_t n = scheme.blocklength();
  Rng rng = make_rng(seed, t);

  std::vector<std::uint64_t> msgs(topo.message_count());
  for (std::size_t s = 0; s < msgs.size(); ++s) msgs[s] = uniform_below(rng, topo.message_sizes()[s]);
  const MessageIndex m = topo.join(msgs);

  Sequence states = process ? process->sample(n, rng) : Sequence(fixed_states.begin(), fixed_states.end());
  std::vector<std::size_t> inputs(n, 0);
  for (std::size_t a = 0; a < al.transmitters(); ++a) {
    const auto x = scheme.encode(a, topo.encoder_view(m, a), states);
    for (std::size_t i = 0; i < n; ++i) inputs[i] = inputs[i] * al.inputs[a] + x[i];
  }
  std::vector<Sequence> outputs(al.receivers(), Sequence(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto y = sample_categorical(net.output_distribution(inputs[i], states[i]), rng);
    for (std::size_t b = 0; b < al.receivers(); ++b) outputs[b][i] = net.receiver_output(y, b);
  }
  bool error = false;
  for (std::size_t b = 0; b < al.receivers() && !error; ++b)
    error = scheme.decode(b, outputs[b], states) != topo.decoder_view(m, b);
  const bool tagged = tag && (*tag)(states);
  return {error, tagged};
}

template <class Scheme>
McCounts mc_impl(const Scheme& scheme, const NetworkLaw& net, const StateProcess* process,
                 std::span<const Symbol> fixed_states, const McOptions& options, const StatePredicate* tag) {
  check_scheme_network(scheme, net);
  if (process && process->alphabet_size() != net.state_size())
    throw DimensionError("state process alphabet does not match the network");
  if (!process && fixed_states.size() != scheme.blocklength())
    throw LengthMismatch("state sequence length does not match the blocklength");
  if (options.trials == 0) throw PreconditionViolated("Monte Carlo needs at least one trial");

  const unsigned w = std::max(1u, options.workers);
  std::vector<McCounts> partial(w);
  const std::uint64_t trials = options.trials;
  // Chunk c covers a fixed trial range; the totals are integer sums, so the
  // grouping cannot change the result.
  parallel_for(w, w, [&](std::size_t begin, std::size_t end) {
    for (std::size_t c = begin; c < end; ++c) {
      auto& acc = partial[c];
      for (std::uint64_t t = trials * c / w; t < trials * (c + 1) / w; ++t) {
        const auto [err, tagged] = run_trial(scheme, net, process, fixed_states, tag, options.seed, t);
        ++acc.trials;
        acc.errors += err;
        acc.tagged += tagged;
        acc.tagged_errors += err && tagged;
      }
    }
  });
  McCounts total;
  for (const auto& p : partial) {
    total.trials += p.trials;
    total.errors += p.errors;
    total.tagged += p.tagged;
    total.tagged_errors += p.tagged_errors;
  }
  return total;
}

}  // namespace

double exact_error_given_states(const NoncausalScheme& scheme, const NetworkLaw& net,
                                std::span<const Symbol> states, std::uint64_t cell_budget) {
  return exact_given_states_impl(scheme, net, states, cell_budget);
}

double exact_error_given_states(const CausalScheme& scheme, const NetworkLaw& net, std::span<const Symbol> states,
                                std::uint64_t cell_budget) {
  return exact_given_states_impl(scheme, net, states, cell_budget);
}

double exact_error(const NoncausalScheme& scheme, const NetworkLaw& net, const StateProcess& process,
                   std::uint64_t cell_budget, unsigned workers) {
  return exact_error_impl(scheme, net, process, cell_budget, workers);
}

double exact_error(const CausalScheme& scheme, const NetworkLaw& net, const StateProcess& process,
                   std::uint64_t cell_budget, unsigned workers) {
  return exact_error_impl(scheme, net, process, cell_budget, workers);
}

ErrorEstimate mc_error(const NoncausalScheme& scheme, const NetworkLaw& net, const StateProcess& process,
                       const McOptions& options) {
  const auto c = mc_impl(scheme, net, &process, {}, options, nullptr);
  return ErrorEstimate::sampled(c.errors, c.trials, options.seed, options.confidence);
}

ErrorEstimate mc_error(const CausalScheme& scheme, const NetworkLaw& net, const StateProcess& process,
                       const McOptions& options) {
  const auto c = mc_impl(scheme, net, &process, {}, options, nullptr);
  return ErrorEstimate::sampled(c.errors, c.trials, options.seed, options.confidence);
}

ErrorEstimate mc_error_given_states(const NoncausalScheme& scheme, const NetworkLaw& net,
                                    std::span<const Symbol> states, const McOptions& options) {
  const auto c = mc_impl(scheme, net, nullptr, states, options, nullptr);
  return ErrorEstimate::sampled(c.errors, c.trials, options.seed, options.confidence);
}

McCounts mc_counts(const CausalScheme& scheme, const NetworkLaw& net, const StateProcess& process,
                   const McOptions& options, const StatePredicate& tag) {
  return mc_impl(scheme, net, &process, {}, options, tag ? &tag : nullptr);
}

// ---------------------------------------------------------------------------

bool Evaluator::exact_feasible(std::uint64_t cells) const noexcept {
  switch (opts_.mode) {
    case EvalMode::Exact:
      return true;
    case EvalMode::MonteCarlo:
      return false;
    case EvalMode::Auto:
      break;
  }
  return cells <= opts_.cell_budget;
}

McOptions Evaluator::mc_options(std::uint64_t trials, std::uint64_t stream) const {
  return McOptions{trials, stream == 0 ? opts_.seed : mix_seed(opts_.seed, stream), opts_.workers, opts_.confidence};
}

ErrorEstimate Evaluator::conditional_error(const NoncausalScheme& scheme, std::span<const Symbol> states,
                                           std::uint64_t mc_trials, std::uint64_t stream) const {
  const auto cells = conditional_cells(scheme.topology(), net_.alphabets(), scheme.blocklength());
  if (exact_feasible(cells))
    return ErrorEstimate::exact(exact_error_given_states(scheme, net_, states, std::max(cells, opts_.cell_budget)));
  return mc_error_given_states(scheme, net_, states, mc_options(mc_trials, stream));
}

ErrorEstimate Evaluator::overall_error(const NoncausalScheme& scheme, const StateProcess& process,
                                       std::uint64_t stream) const {
  const std::size_t n = scheme.blocklength();
  const auto cells = saturating_mul(saturating_pow(net_.state_size(), n),
                                    conditional_cells(scheme.topology(), net_.alphabets(), n));
  if (exact_feasible(cells))
    return ErrorEstimate::exact(exact_error(scheme, net_, process, std::max(cells, opts_.cell_budget), opts_.workers));
  return mc_error(scheme, net_, process, mc_options(opts_.trials, stream));
}

ErrorEstimate Evaluator::overall_error(const CausalScheme& scheme, const StateProcess& process,
                                       std::uint64_t stream) const {
  const std::size_t n = scheme.blocklength();
  const auto cells = saturating_mul(saturating_pow(net_.state_size(), n),
                                    conditional_cells(scheme.topology(), net_.alphabets(), n));
  if (exact_feasible(cells))
    return ErrorEstimate::exact(exact_error(scheme, net_, process, std::max(cells, opts_.cell_budget), opts_.workers));
  return mc_error(scheme, net_, process, mc_options(opts_.trials, stream));
}

}  // namespace sdnet
