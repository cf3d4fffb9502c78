#pragma once

#include <span>
#include <variant>
#include <vector>

#include "sdnet/common.hpp"
#include "sdnet/errors.hpp"

namespace sdnet {

struct IidStates {
  std::vector<double> pmf;
};

struct MarkovStates {
  std::vector<double> initial;
  std::vector<std::vector<double>> transition;  // row-stochastic
};

/// Autonomous state process: IID or a finite Markov chain. There is no way
/// to feed channel inputs into it.
///
/// Construction only checks that the PMFs and transition rows are
/// stochastic. Ergodicity (irreducibility and full support of the marginal)
/// is checked by `marginal()` and `require_ergodic()`, so that degenerate
/// processes remain usable for sampling and sequence probabilities.
class StateProcess {
 public:
  static StateProcess iid(std::vector<double> pmf);
  static StateProcess markov(std::vector<double> initial, std::vector<std::vector<double>> transition);

  std::size_t alphabet_size() const noexcept;
  bool is_markov() const noexcept { return std::holds_alternative<MarkovStates>(model_); }
  const std::variant<IidStates, MarkovStates>& model() const noexcept { return model_; }

  Sequence sample(std::size_t n, Rng& rng) const;

  /// Exact Pr{S^n = s^n}.
  double probability(std::span<const Symbol> seq) const;

  /// Stationary marginal P_S. Throws ReducibleChainError for reducible chains.
  std::vector<double> marginal() const;

  bool irreducible() const;

  /// Throws unless the process is irreducible with a full-support marginal.
  void require_ergodic() const;

 private:
  explicit StateProcess(std::variant<IidStates, MarkovStates> m) : model_(std::move(m)) {}
  std::variant<IidStates, MarkovStates> model_;
};

}  // namespace sdnet
