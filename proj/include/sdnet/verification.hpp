#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sdnet/evaluation.hpp"
#include "sdnet/reduction.hpp"

namespace sdnet {

/// Outcome of running the noncausal-to-causal construction on one scheme
/// and checking the error decomposition
///   Pr_c{E} <= Pr_c{E|A} + Pr{A^c} = Pr_nc{E | s~} + Pr{A^c} <= 2p + p.
struct VerificationReport {
  std::size_t n = 0;
  std::size_t n_bar = 0;
  double delta = 0.0;
  double p = 0.0;

  Sequence reference;
  std::vector<double> reference_type;
  bool reference_exhaustive = true;
  std::size_t reference_candidates = 0;

  ErrorEstimate p_measured;                      // Pr_nc{E}
  bool p_precondition_holds = false;             // Pr_nc{E} <= p
  ErrorEstimate conditional_error_at_reference;  // Pr_nc{E | S^n = s~}
  ErrorEstimate pr_A;
  std::optional<ErrorEstimate> causal_error_given_A;  // empty when Pr{A} = 0
  ErrorEstimate causal_error;                          // Pr_c{E}

  /// |Pr_c{E|A} - Pr_nc{E|s~}|, NaN when Pr{A} = 0.
  double equality_residual = 0.0;
  /// Exact mode: max over state sequences in A of the pointwise residual.
  std::optional<double> max_pointwise_residual;
  std::size_t sequences_in_A = 0;  // exact mode only
  bool equality_holds = false;
  bool finite_bound_satisfied = false;  // Pr_c{E} <= Pr_nc{E|s~} + Pr{A^c}
  bool bound_3p_satisfied = false;      // Pr_c{E} <= 3p

  std::string mode;  // "exact", "monte-carlo" or "mixed"
};

inline constexpr double kEqualityTolerance = 1e-9;

/// Selects the reference sequence, builds the causal scheme and evaluates
/// it. Exact enumeration is used for every quantity whose cell count fits
/// the budget (unless the options force a mode). Sampled bounds are judged
/// conservatively: the 3p bound holds when the upper confidence limit of
/// Pr_c{E} is at most 3p, the finite bound when it is not refuted by the
/// intervals, and equality when the intervals overlap.
VerificationReport verify_reduction(const NoncausalScheme& noncausal, const NetworkLaw& net,
                                    const StateProcess& process, const ReductionConfig& config,
                                    const EvaluationOptions& options = {});

}  // namespace sdnet
