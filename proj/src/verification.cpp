#include "sdnet/verification.hpp"

#include <cmath>
#include <limits>

#include "sdnet/parallel.hpp"

namespace sdnet {
namespace {

bool intervals_overlap(const ErrorEstimate& a, const ErrorEstimate& b) {
  return a.lower() <= b.upper() + kEqualityTolerance && b.lower() <= a.upper() + kEqualityTolerance;
}

}  // namespace

VerificationReport verify_reduction(const NoncausalScheme& noncausal, const NetworkLaw& net,
                                    const StateProcess& process, const ReductionConfig& config,
                                    const EvaluationOptions& options) {
  config.validate();
  process.require_ergodic();
  const Evaluator ev(net, options);

  VerificationReport r;
  r.n = noncausal.blocklength();
  r.delta = config.delta;
  r.p = config.p;

  r.p_measured = ev.overall_error(noncausal, process, 1);
  r.p_precondition_holds = r.p_measured.lower() <= config.p + 1e-12;

  const auto selection = select_reference_sequence(noncausal, process, config.delta, config.p, ev,
                                                   SelectionOptions{options.cell_budget, 4096, options.seed});
  r.reference = selection.sequence;
  r.reference_type = empirical_counts(r.reference, net.state_size()).type();
  r.reference_exhaustive = selection.exhaustive;
  r.reference_candidates = selection.candidates_examined;
  r.conditional_error_at_reference = selection.conditional_error;
  const double cond = r.conditional_error_at_reference.value;

  const auto causal = build_causal_scheme(noncausal, r.reference, config);
  r.n_bar = causal.blocklength();

  const std::size_t m = net.state_size();
  const std::uint64_t s_seqs = saturating_pow(m, r.n_bar);
  const auto cells = saturating_mul(s_seqs, conditional_cells(noncausal.topology(), net.alphabets(), r.n_bar));

  if (ev.exact_feasible(cells)) {
    struct Term {
      double prob = 0.0;
      bool in_A = false;
      double err = 0.0;
    };
    std::vector<Term> terms(s_seqs);
    parallel_for(s_seqs, options.workers, [&](std::size_t begin, std::size_t end) {
      Sequence s(r.n_bar);
      for (std::size_t si = begin; si < end; ++si) {
        index_to_sequence(si, m, s);
        auto& t = terms[si];
        t.prob = process.probability(s);
        t.in_A = event_A_holds(s, r.reference);
        if (t.prob > 0.0 || t.in_A)
          t.err = exact_error_given_states(causal, net, s, std::max(cells, options.cell_budget));
      }
    });

    double pr_a = 0.0, err_total = 0.0, err_in_a = 0.0, max_resid = 0.0;
    for (const auto& t : terms) {
      err_total += t.prob * t.err;
      if (!t.in_A) continue;
      ++r.sequences_in_A;
      pr_a += t.prob;
      err_in_a += t.prob * t.err;
      max_resid = std::max(max_resid, std::abs(t.err - cond));
    }
    r.pr_A = ErrorEstimate::exact(pr_a);
    r.causal_error = ErrorEstimate::exact(err_total);
    if (pr_a > 0.0) r.causal_error_given_A = ErrorEstimate::exact(err_in_a / pr_a);
    r.max_pointwise_residual = max_resid;
  } else {
    const auto mc = ev.mc_options(options.trials, 3);
    const auto counts = mc_counts(causal, net, process, mc,
                                  [&](std::span<const Symbol> s) { return event_A_holds(s, r.reference); });
    r.pr_A = ErrorEstimate::sampled(counts.tagged, counts.trials, mc.seed, mc.confidence);
    r.causal_error = ErrorEstimate::sampled(counts.errors, counts.trials, mc.seed, mc.confidence);
    if (counts.tagged > 0)
      r.causal_error_given_A = ErrorEstimate::sampled(counts.tagged_errors, counts.tagged, mc.seed, mc.confidence);
  }

  const bool all_exact = r.p_measured.mode == EstimateMode::Exact &&
                         r.conditional_error_at_reference.mode == EstimateMode::Exact &&
                         r.causal_error.mode == EstimateMode::Exact;
  const bool all_mc = r.p_measured.mode == EstimateMode::MonteCarlo &&
                      r.conditional_error_at_reference.mode == EstimateMode::MonteCarlo &&
                      r.causal_error.mode == EstimateMode::MonteCarlo;
  r.mode = all_exact ? "exact" : all_mc ? "monte-carlo" : "mixed";

  if (r.causal_error_given_A) {
    r.equality_residual = std::abs(r.causal_error_given_A->value - cond);
    if (r.causal_error_given_A->mode == EstimateMode::Exact &&
        r.conditional_error_at_reference.mode == EstimateMode::Exact)
      r.equality_holds = r.equality_residual <= kEqualityTolerance &&
                         r.max_pointwise_residual.value_or(0.0) <= kEqualityTolerance;
    else
      r.equality_holds = intervals_overlap(*r.causal_error_given_A, r.conditional_error_at_reference);
  } else {
    r.equality_residual = std::numeric_limits<double>::quiet_NaN();
  }

  r.finite_bound_satisfied = r.causal_error.lower() <= r.conditional_error_at_reference.upper() +
                                                           (1.0 - r.pr_A.lower()) + kEqualityTolerance;
  r.bound_3p_satisfied = r.causal_error.upper() <= 3.0 * config.p + kEqualityTolerance;
  return r;
}

}  // namespace sdnet
