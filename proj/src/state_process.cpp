#include "sdnet/state_process.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <type_traits>

namespace sdnet {
namespace {

void check_pmf(const std::vector<double>& pmf, const std::string& what) {
  if (pmf.empty()) throw DimensionError(what + " is empty");
  double sum = 0.0;
  for (double p : pmf) {
    if (!(p >= 0.0) || p > 1.0) throw NormalizationError(what + " has an entry outside [0,1]", 0, p);
    sum += p;
  }
  if (std::abs(sum - 1.0) > kProbabilityTolerance)
    throw NormalizationError(what + " sums to " + std::to_string(sum), 0, sum);
}

}  // namespace

StateProcess StateProcess::iid(std::vector<double> pmf) {
  check_pmf(pmf, "state pmf");
  return StateProcess(IidStates{std::move(pmf)});
}

StateProcess StateProcess::markov(std::vector<double> initial,
                                  std::vector<std::vector<double>> transition) {
  check_pmf(initial, "initial state pmf");
  if (transition.size() != initial.size())
    throw DimensionError("transition matrix has " + std::to_string(transition.size()) +
                         " rows, expected " + std::to_string(initial.size()));
  for (std::size_t r = 0; r < transition.size(); ++r) {
    if (transition[r].size() != initial.size())
      throw DimensionError("transition row " + std::to_string(r) + " has wrong length");
    check_pmf(transition[r], "transition row " + std::to_string(r));
  }
  return StateProcess(MarkovStates{std::move(initial), std::move(transition)});
}

std::size_t StateProcess::alphabet_size() const noexcept {
  return std::visit(
      [](const auto& m) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, IidStates>)
          return m.pmf.size();
        else
          return m.initial.size();
      },
      model_);
}

Sequence StateProcess::sample(std::size_t n, Rng& rng) const {
  Sequence out(n);
  if (const auto* iid_model = std::get_if<IidStates>(&model_)) {
    for (auto& s : out) s = static_cast<Symbol>(sample_categorical(iid_model->pmf, rng));
    return out;
  }
  const auto& mk = std::get<MarkovStates>(model_);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = i == 0 ? mk.initial : mk.transition[out[i - 1]];
    out[i] = static_cast<Symbol>(sample_categorical(row, rng));
  }
  return out;
}

double StateProcess::probability(std::span<const Symbol> seq) const {
  const std::size_t m = alphabet_size();
  for (Symbol s : seq)
    if (s >= m) throw IndexError("state symbol " + std::to_string(s) + " out of range");
  double p = 1.0;
  if (const auto* iid_model = std::get_if<IidStates>(&model_)) {
    for (Symbol s : seq) p *= iid_model->pmf[s];
    return p;
  }
  const auto& mk = std::get<MarkovStates>(model_);
  for (std::size_t i = 0; i < seq.size(); ++i)
    p *= i == 0 ? mk.initial[seq[0]] : mk.transition[seq[i - 1]][seq[i]];
  return p;
}

bool StateProcess::irreducible() const {
  const auto* mk = std::get_if<MarkovStates>(&model_);
  if (!mk) return true;
  const std::size_t m = mk->initial.size();
  // Transitive closure (Warshall) over positive-probability edges.
  std::vector<std::vector<char>> reach(m, std::vector<char>(m, 0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) reach[i][j] = mk->transition[i][j] > 0.0;
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t i = 0; i < m; ++i)
      if (reach[i][k])
        for (std::size_t j = 0; j < m; ++j) reach[i][j] |= reach[k][j];
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (!reach[i][j]) return false;
  return true;
}

std::vector<double> StateProcess::marginal() const {
  if (const auto* iid_model = std::get_if<IidStates>(&model_)) return iid_model->pmf;
  if (!irreducible()) throw ReducibleChainError("Markov state chain is reducible");

  const auto& mk = std::get<MarkovStates>(model_);
  const auto m = static_cast<Eigen::Index>(mk.initial.size());
  // pi (T - I) = 0 with sum(pi) = 1: replace the last balance equation by normalization.
  Eigen::MatrixXd a(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      a(j, i) = mk.transition[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] - (i == j ? 1.0 : 0.0);
  a.row(m - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
  b(m - 1) = 1.0;
  const Eigen::VectorXd pi = a.fullPivLu().solve(b);

  std::vector<double> out(static_cast<std::size_t>(m));
  double sum = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    out[static_cast<std::size_t>(i)] = std::max(0.0, pi(i));
    sum += out[static_cast<std::size_t>(i)];
  }
  for (auto& v : out) v /= sum;
  return out;
}

void StateProcess::require_ergodic() const {
  const auto pmf = marginal();
  for (std::size_t s = 0; s < pmf.size(); ++s)
    if (!(pmf[s] > 0.0))
      throw PreconditionViolated("state marginal has no mass on symbol " + std::to_string(s));
}

}  // namespace sdnet
