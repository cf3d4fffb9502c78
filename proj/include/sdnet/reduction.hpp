#pragma once

#include <span>
#include <utility>
#include <vector>

#include "sdnet/evaluation.hpp"
#include "sdnet/scheme.hpp"
#include "sdnet/state_process.hpp"
#include "sdnet/typicality.hpp"

namespace sdnet {

/// What a causal encoder sends at a slot whose state has already been used
/// up in the reference sequence. Such slots are discarded by every decoder.
enum class FallbackPolicy {
  Canonical,     // symbol 0
  SeededUniform  // uniform over the input alphabet, fixed by (seed, transmitter, time)
};

struct ReductionConfig {
  double delta = 0.1;
  double p = 0.1;
  FallbackPolicy fallback = FallbackPolicy::Canonical;
  std::uint64_t seed = 0;

  /// Throws PreconditionViolated unless delta > 0 and 0 < p < 1.
  void validate() const;
};

/// ceil((1 + 2 delta) n), ignoring floating-point noise below 1e-9.
std::size_t inflated_blocklength(std::size_t n, double delta);

/// Greedy online matching of realized state slots to reference indices.
/// Indices are 1-based; 0 marks "unmatched" / "unused".
struct MatchingResult {
  std::vector<std::size_t> kappa;    // one entry per realized slot t
  std::vector<std::size_t> inverse;  // one entry per reference index j
  bool complete = false;             // every reference index was used
  bool nofail_holds = false;         // N(s|realized) >= N(s|reference) for all s, from counts alone
};

/// kappa(t) = the smallest unused reference index i with reference_i = realized_t,
/// or 0 if there is none. Scans the reference directly for every slot.
MatchingResult kappa_match(std::span<const Symbol> reference, std::span<const Symbol> realized);

/// The bijection i <-> (s, j) between reference positions and
/// (state, occurrence number), with j = N(s | reference^i).
class GroupMapping {
 public:
  GroupMapping(std::span<const Symbol> reference, std::size_t alphabet_size);

  /// (s, j) for the 1-based reference position i.
  std::pair<Symbol, std::size_t> forward(std::size_t i) const;
  /// Reference position of the j-th occurrence of s, or 0 past the last one.
  std::size_t inverse(Symbol s, std::size_t j) const noexcept;
  /// N(s | reference)
  std::size_t count(Symbol s) const noexcept { return s < slots_.size() ? slots_[s].size() : 0; }
  std::size_t length() const noexcept { return forward_.size(); }
  std::size_t alphabet_size() const noexcept { return slots_.size(); }

 private:
  std::vector<std::pair<Symbol, std::size_t>> forward_;
  std::vector<std::vector<std::size_t>> slots_;  // slots_[s][j-1] = i
};

GroupMapping group_mapping(std::span<const Symbol> reference, std::size_t alphabet_size);

/// Every state occurs in `realized` at least as often as in `reference`.
bool event_A_holds(std::span<const Symbol> realized, std::span<const Symbol> reference);

/// (y_{kappa^-1(1)}, ..., y_{kappa^-1(n)}) via kappa_match. Throws
/// PreconditionViolated when the matching is incomplete.
Sequence reorder_outputs(std::span<const Symbol> outputs, std::span<const Symbol> realized,
                         std::span<const Symbol> reference);

/// Same result through the grouping: the t-th slot is kept iff its state
/// count so far does not exceed the reference count, and lands at
/// g^-1(s_t, N(s_t | s^t)).
Sequence reorder_outputs_grouped(std::span<const Symbol> outputs, std::span<const Symbol> realized,
                                 const GroupMapping& groups);

/// Causal scheme of blocklength ceil((1+2 delta) n) that replays the
/// noncausal codewords for `reference` on matched slots and sends the
/// fallback elsewhere. Its decoders return kDecodeFailure unless event A
/// holds, otherwise reorder the kept outputs and call the noncausal
/// decoders with `reference` as the state argument.
CausalScheme build_causal_scheme(const NoncausalScheme& noncausal, std::span<const Symbol> reference,
                                 const ReductionConfig& config);

struct SelectionOptions {
  /// Enumerate all |S|^n sequences when at most this many, otherwise sample.
  std::uint64_t enumeration_budget = kDefaultCellBudget;
  std::size_t sampled_candidates = 4096;
  std::uint64_t seed = 1;
};

struct ReferenceSelection {
  Sequence sequence;
  ErrorEstimate conditional_error;
  bool exhaustive = true;
  std::size_t candidates_examined = 0;  // typical candidates whose error was evaluated
};

/// Sample size for a conditional-error estimate whose Hoeffding half-width
/// at confidence 1 - 1e-3 is p/2.
std::uint64_t hoeffding_trials(double p);

/// Lexicographically smallest typical s^n with Pr_nc{E | S^n = s^n} < 2p.
/// Monte Carlo estimates must clear 2p by their Hoeffding half-width.
/// Throws NoQualifyingSequence with the best candidate seen.
ReferenceSelection select_reference_sequence(const NoncausalScheme& noncausal, const StateProcess& process,
                                             double delta, double p, const Evaluator& evaluator,
                                             const SelectionOptions& options = {});

}  // namespace sdnet
