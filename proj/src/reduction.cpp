#include "sdnet/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

namespace sdnet {

void ReductionConfig::validate() const {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw PreconditionViolated("delta must be positive");
  if (!(p > 0.0 && p < 1.0)) throw PreconditionViolated("p must lie strictly between 0 and 1");
}

std::size_t inflated_blocklength(std::size_t n, double delta) {
  const double exact = (1.0 + 2.0 * delta) * static_cast<double>(n);
  return static_cast<std::size_t>(std::ceil(exact - 1e-9));
}

namespace {

std::size_t alphabet_of(std::span<const Symbol> a, std::span<const Symbol> b) {
  Symbol hi = 0;
  for (Symbol s : a) hi = std::max(hi, s);
  for (Symbol s : b) hi = std::max(hi, s);
  return static_cast<std::size_t>(hi) + 1;
}

bool counts_dominate(std::span<const Symbol> realized, std::span<const Symbol> reference) {
  const std::size_t m = alphabet_of(realized, reference);
  const auto have = empirical_counts(realized, m);
  const auto need = empirical_counts(reference, m);
  for (std::size_t s = 0; s < m; ++s)
    if (have.counts[s] < need.counts[s]) return false;
  return true;
}

}  // namespace

MatchingResult kappa_match(std::span<const Symbol> reference, std::span<const Symbol> realized) {
  MatchingResult r;
  r.kappa.assign(realized.size(), 0);
  r.inverse.assign(reference.size(), 0);
  std::vector<char> used(reference.size(), 0);
  for (std::size_t t = 0; t < realized.size(); ++t) {
    for (std::size_t i = 0; i < reference.size(); ++i) {
      if (used[i] || reference[i] != realized[t]) continue;
      used[i] = 1;
      r.kappa[t] = i + 1;
      r.inverse[i] = t + 1;
      break;
    }
  }
  r.complete = std::all_of(used.begin(), used.end(), [](char u) { return u != 0; });
  r.nofail_holds = counts_dominate(realized, reference);
  return r;
}

GroupMapping::GroupMapping(std::span<const Symbol> reference, std::size_t alphabet_size)
    : slots_(alphabet_size) {
  forward_.reserve(reference.size());
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const Symbol s = reference[i];
    if (s >= alphabet_size) throw IndexError("reference symbol " + std::to_string(s) + " outside alphabet");
    slots_[s].push_back(i + 1);
    forward_.emplace_back(s, slots_[s].size());
  }
}

std::pair<Symbol, std::size_t> GroupMapping::forward(std::size_t i) const {
  if (i == 0 || i > forward_.size()) throw IndexError("reference position out of range");
  return forward_[i - 1];
}

std::size_t GroupMapping::inverse(Symbol s, std::size_t j) const noexcept {
  if (s >= slots_.size() || j == 0 || j > slots_[s].size()) return 0;
  return slots_[s][j - 1];
}

GroupMapping group_mapping(std::span<const Symbol> reference, std::size_t alphabet_size) {
  return GroupMapping(reference, alphabet_size);
}

bool event_A_holds(std::span<const Symbol> realized, std::span<const Symbol> reference) {
  return counts_dominate(realized, reference);
}

Sequence reorder_outputs(std::span<const Symbol> outputs, std::span<const Symbol> realized,
                         std::span<const Symbol> reference) {
  if (outputs.size() != realized.size()) throw LengthMismatch("one output per realized slot required");
  const auto match = kappa_match(reference, realized);
  if (!match.complete) throw PreconditionViolated("event A fails: matching does not cover the reference");
  Sequence out(reference.size());
  for (std::size_t j = 0; j < reference.size(); ++j) out[j] = outputs[match.inverse[j] - 1];
  return out;
}

Sequence reorder_outputs_grouped(std::span<const Symbol> outputs, std::span<const Symbol> realized,
                                 const GroupMapping& groups) {
  if (outputs.size() != realized.size()) throw LengthMismatch("one output per realized slot required");
  std::vector<std::size_t> seen(groups.alphabet_size(), 0);
  Sequence out(groups.length());
  std::size_t kept = 0;
  for (std::size_t t = 0; t < realized.size(); ++t) {
    const Symbol s = realized[t];
    if (s >= seen.size()) continue;
    const std::size_t i = groups.inverse(s, ++seen[s]);
    if (i == 0) continue;
    out[i - 1] = outputs[t];
    ++kept;
  }
  if (kept != groups.length()) throw PreconditionViolated("event A fails: some reference slots were never seen");
  return out;
}

namespace {

struct ReductionContext {
  NoncausalScheme noncausal;
  Sequence reference;
  GroupMapping groups;
  FallbackPolicy fallback;
  std::uint64_t seed;
};

}  // namespace

CausalScheme build_causal_scheme(const NoncausalScheme& noncausal, std::span<const Symbol> reference,
                                 const ReductionConfig& config) {
  config.validate();
  const std::size_t n = noncausal.blocklength();
  if (reference.size() != n)
    throw LengthMismatch("reference sequence has length " + std::to_string(reference.size()) +
                         ", noncausal blocklength is " + std::to_string(n));
  const auto& al = noncausal.alphabets();
  auto ctx = std::make_shared<const ReductionContext>(
      ReductionContext{noncausal, Sequence(reference.begin(), reference.end()), GroupMapping(reference, al.states),
                       config.fallback, config.seed});

  std::vector<CausalScheme::EncoderRule> encoders;
  for (std::size_t a = 0; a < al.transmitters(); ++a) {
    encoders.push_back([ctx, a, input_size = al.inputs[a]](MessageIndex m) -> CausalScheme::Step {
      // x~_a: the noncausal codeword the encoder would send had the states been the reference.
      auto codeword = ctx->noncausal.encode(a, m, ctx->reference);
      std::vector<std::size_t> seen(ctx->groups.alphabet_size(), 0);
      return [ctx, a, input_size, codeword = std::move(codeword), seen = std::move(seen),
              t = std::size_t{0}](Symbol s) mutable -> Symbol {
        ++t;
        const std::size_t i = ctx->groups.inverse(s, ++seen[s]);
        if (i != 0) return codeword[i - 1];
        if (ctx->fallback == FallbackPolicy::Canonical) return 0;
        Rng rng = make_rng(mix_seed(ctx->seed, a), t);
        return static_cast<Symbol>(uniform_below(rng, input_size));
      };
    });
  }

  std::vector<DecoderRule> decoders;
  for (std::size_t b = 0; b < al.receivers(); ++b)
    decoders.push_back([ctx, b](std::span<const Symbol> y, std::span<const Symbol> s) -> MessageIndex {
      if (!event_A_holds(s, ctx->reference)) return kDecodeFailure;
      const auto kept = reorder_outputs_grouped(y, s, ctx->groups);
      return ctx->noncausal.decode(b, kept, ctx->reference);
    });

  return CausalScheme(noncausal.topology(), al, inflated_blocklength(n, config.delta), std::move(encoders),
                      std::move(decoders));
}

std::uint64_t hoeffding_trials(double p) {
  const double half_width = p / 2.0;
  return static_cast<std::uint64_t>(std::ceil(std::log(1e3) / (2.0 * half_width * half_width)));
}

ReferenceSelection select_reference_sequence(const NoncausalScheme& noncausal, const StateProcess& process,
                                             double delta, double p, const Evaluator& evaluator,
                                             const SelectionOptions& options) {
  ReductionConfig{delta, p}.validate();
  const std::size_t n = noncausal.blocklength();
  const std::size_t m = noncausal.alphabets().states;
  if (process.alphabet_size() != m) throw DimensionError("state process alphabet does not match the scheme");
  const auto pmf = process.marginal();

  const std::uint64_t trials = hoeffding_trials(p);
  const double slack = std::sqrt(std::log(1e3) / (2.0 * static_cast<double>(trials)));

  std::optional<Sequence> best;
  std::optional<double> best_err;
  std::size_t examined = 0;

  auto try_candidate = [&](const Sequence& s) -> std::optional<ErrorEstimate> {
    std::uint64_t stream = 0x5e1ec7;
    for (Symbol x : s) stream = mix_seed(stream, x);
    auto est = evaluator.conditional_error(noncausal, s, trials, stream);
    ++examined;
    if (!best_err || est.value < *best_err) {
      best = s;
      best_err = est.value;
    }
    const double margin = est.mode == EstimateMode::Exact ? 0.0 : slack;
    if (est.value + margin < 2.0 * p) return est;
    return std::nullopt;
  };

  const std::uint64_t total = saturating_pow(m, n);
  if (total <= options.enumeration_budget) {
    Sequence s(n, 0);
    do {
      if (!is_delta_typical(s, pmf, delta)) continue;
      if (auto est = try_candidate(s)) return {s, *est, true, examined};
    } while (next_sequence(s, m));
  } else {
    Rng rng = make_rng(options.seed, 0x7e1ec7);
    std::vector<Sequence> pool;
    for (std::size_t c = 0; c < options.sampled_candidates; ++c) {
      auto s = process.sample(n, rng);
      if (is_delta_typical(s, pmf, delta)) pool.push_back(std::move(s));
    }
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    for (const auto& s : pool)
      if (auto est = try_candidate(s)) return {s, *est, false, examined};
  }

  std::ostringstream os;
  if (examined == 0) {
    os << "no delta-typical state sequence of length " << n << " (delta=" << delta << ")";
  } else {
    os << "no typical state sequence has conditional error below 2p=" << 2.0 * p << " (best "
       << *best_err << " over " << examined << " candidates)";
  }
  throw NoQualifyingSequence(os.str(), best, best_err);
}

}  // namespace sdnet
