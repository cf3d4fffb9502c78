#pragma once

#include <optional>
#include <vector>

#include "sdnet/network.hpp"
#include "sdnet/scheme.hpp"
#include "sdnet/state_process.hpp"
#include "sdnet/topology.hpp"

namespace sdnet {

inline constexpr std::uint64_t kDefaultCellBudget = 10'000'000;

struct RandomCodeOptions {
  std::uint64_t cell_budget = kDefaultCellBudget;
  /// Replaces the MAP decoders, one per receiver. Needed past the MAP table budget.
  std::optional<std::vector<DecoderRule>> decoders;
};

/// Symbol i of the random codeword for encoder a, message m and states s^n.
/// IID uniform over the input alphabet, a pure function of (seed, a, m, s^n).
Sequence random_codeword(std::uint64_t seed, std::size_t a, MessageIndex m, std::span<const Symbol> states,
                         std::size_t alphabet_size);

/// Noncausal random code: codeword symbols drawn IID uniform per (message,
/// state sequence) from `seed`, decoded by per-receiver MAP rules. Throws
/// InstanceTooLarge when |S|^n * prod|M| or a MAP table exceeds the budget.
NoncausalScheme random_code(const MessageTopology& topology, const NetworkLaw& net, std::size_t n,
                            std::uint64_t seed, const RandomCodeOptions& options = {});

/// Per-receiver MAP decoder tables (layout as in NoncausalTables) for the
/// given encoders. Uniform messages; ties go to the smallest message index.
std::vector<std::vector<MessageIndex>> map_decoder_tables(const MessageTopology& topology, const NetworkLaw& net,
                                                          std::size_t n,
                                                          const std::vector<NoncausalScheme::EncoderRule>& encoders,
                                                          std::uint64_t cell_budget = kDefaultCellBudget);

/// Exhaustive search for the noncausal code of minimum average error with
/// MAP decoders.
///
/// With state-cognizant receivers both the codebook and the decoder are
/// chosen per state sequence, so the average error is a positively weighted
/// sum of independent per-sequence terms and the search runs slice by slice.
/// Sequences of probability zero keep the all-zero codebook. Among optimal
/// tables the lexicographically smallest flattened table is returned.
/// `search_budget` bounds |S|^n times the number of codebooks per slice.
NoncausalScheme brute_force_optimal(const MessageTopology& topology, const NetworkLaw& net,
                                    const StateProcess& process, std::size_t n,
                                    std::uint64_t search_budget = kDefaultCellBudget);

}  // namespace sdnet
