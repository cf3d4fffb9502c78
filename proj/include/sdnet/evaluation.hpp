#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>

#include "sdnet/codes.hpp"
#include "sdnet/network.hpp"
#include "sdnet/scheme.hpp"
#include "sdnet/state_process.hpp"

namespace sdnet {

enum class EstimateMode { Exact, MonteCarlo };

std::string to_string(EstimateMode mode);

struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 1.0;
  double level = 0.99;
};

/// Two-sided Clopper-Pearson interval for `events` successes in `trials`.
ConfidenceInterval clopper_pearson(std::uint64_t events, std::uint64_t trials, double level = 0.99);

/// An error probability, either computed exactly or estimated by sampling.
struct ErrorEstimate {
  double value = 0.0;
  EstimateMode mode = EstimateMode::Exact;
  std::uint64_t trials = 0;  // Monte Carlo only
  std::uint64_t events = 0;  // Monte Carlo only
  std::optional<ConfidenceInterval> ci;
  std::uint64_t seed = 0;

  static ErrorEstimate exact(double v) { return {v, EstimateMode::Exact, 0, 0, std::nullopt, 0}; }
  static ErrorEstimate sampled(std::uint64_t events, std::uint64_t trials, std::uint64_t seed, double level = 0.99);

  double lower() const noexcept { return ci ? ci->lower : value; }
  double upper() const noexcept { return ci ? ci->upper : value; }
};

struct McOptions {
  std::uint64_t trials = 100'000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  double confidence = 0.99;
};

/// Sufficient statistics of a Monte Carlo run. `tagged` counts the trials
/// whose state sequence satisfied the optional tag predicate.
struct McCounts {
  std::uint64_t trials = 0;
  std::uint64_t errors = 0;
  std::uint64_t tagged = 0;
  std::uint64_t tagged_errors = 0;
};

using StatePredicate = std::function<bool(std::span<const Symbol>)>;

/// Cells enumerated by exact_error_given_states: prod|M_sigma| * (prod|Y_b|)^n.
std::uint64_t conditional_cells(const MessageTopology& topology, const Alphabets& alphabets, std::size_t n);

/// Pr{E | S^n = states}: exact sum over uniform message tuples and joint
/// output sequences. Throws InstanceTooLarge past `cell_budget`.
double exact_error_given_states(const NoncausalScheme& scheme, const NetworkLaw& net,
                                std::span<const Symbol> states, std::uint64_t cell_budget = kDefaultCellBudget);
double exact_error_given_states(const CausalScheme& scheme, const NetworkLaw& net,
                                std::span<const Symbol> states, std::uint64_t cell_budget = kDefaultCellBudget);

/// Pr{E} = sum over s^n of Pr{S^n = s^n} Pr{E | S^n = s^n}. The work is
/// split over state sequences; the sum is taken in sequence order.
double exact_error(const NoncausalScheme& scheme, const NetworkLaw& net, const StateProcess& process,
                   std::uint64_t cell_budget = kDefaultCellBudget, unsigned workers = 1);
double exact_error(const CausalScheme& scheme, const NetworkLaw& net, const StateProcess& process,
                   std::uint64_t cell_budget = kDefaultCellBudget, unsigned workers = 1);

/// Seeded Monte Carlo estimate with a Clopper-Pearson interval. Trial t
/// draws from substream (seed, t), so results do not depend on `workers`.
ErrorEstimate mc_error(const NoncausalScheme& scheme, const NetworkLaw& net, const StateProcess& process,
                       const McOptions& options = {});
ErrorEstimate mc_error(const CausalScheme& scheme, const NetworkLaw& net, const StateProcess& process,
                       const McOptions& options = {});
ErrorEstimate mc_error_given_states(const NoncausalScheme& scheme, const NetworkLaw& net,
                                    std::span<const Symbol> states, const McOptions& options = {});

McCounts mc_counts(const CausalScheme& scheme, const NetworkLaw& net, const StateProcess& process,
                   const McOptions& options, const StatePredicate& tag);

enum class EvalMode { Auto, Exact, MonteCarlo };

struct EvaluationOptions {
  EvalMode mode = EvalMode::Auto;
  std::uint64_t cell_budget = kDefaultCellBudget;
  std::uint64_t trials = 100'000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  double confidence = 0.99;
};

/// Chooses exact enumeration or sampling per the options and budget.
class Evaluator {
 public:
  Evaluator(NetworkLaw net, EvaluationOptions options) : net_(std::move(net)), opts_(options) {}

  const NetworkLaw& network() const noexcept { return net_; }
  const EvaluationOptions& options() const noexcept { return opts_; }

  bool exact_feasible(std::uint64_t cells) const noexcept;

  /// Pr{E | S^n = states}; sampling uses `mc_trials` trials on substream `stream`.
  ErrorEstimate conditional_error(const NoncausalScheme& scheme, std::span<const Symbol> states,
                                  std::uint64_t mc_trials, std::uint64_t stream = 0) const;
  ErrorEstimate overall_error(const NoncausalScheme& scheme, const StateProcess& process,
                              std::uint64_t stream = 0) const;
  ErrorEstimate overall_error(const CausalScheme& scheme, const StateProcess& process,
                              std::uint64_t stream = 0) const;

  McOptions mc_options(std::uint64_t trials, std::uint64_t stream) const;

 private:
  NetworkLaw net_;
  EvaluationOptions opts_;
};

}  // namespace sdnet
