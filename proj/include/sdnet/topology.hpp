#pragma once

#include <span>
#include <vector>

#include "sdnet/common.hpp"
#include "sdnet/network.hpp"

namespace sdnet {

/// Which messages exist, which transmitters see them and which receivers
/// want them. Message ids are 0-based.
///
/// Message tuples are flattened mixed-radix over ascending message ids, the
/// smallest id being the most significant digit. This holds for the global
/// tuple, for an encoder's view (ids in I_a) and a decoder's view (ids in J_b).
class MessageTopology {
 public:
  /// Throws DimensionError when a message is unused, an index is out of
  /// range, a set has duplicates, or a message set is empty.
  MessageTopology(std::vector<std::uint64_t> message_sizes,
                  std::vector<std::vector<std::size_t>> encoder_inputs,
                  std::vector<std::vector<std::size_t>> decoder_demands);

  std::size_t message_count() const noexcept { return sizes_.size(); }
  std::size_t transmitters() const noexcept { return inputs_.size(); }
  std::size_t receivers() const noexcept { return demands_.size(); }

  const std::vector<std::uint64_t>& message_sizes() const noexcept { return sizes_; }
  const std::vector<std::size_t>& encoder_inputs(std::size_t a) const { return inputs_.at(a); }
  const std::vector<std::size_t>& decoder_demands(std::size_t b) const { return demands_.at(b); }

  /// prod_sigma |M_sigma|
  std::uint64_t tuple_count() const noexcept { return tuple_count_; }
  std::uint64_t encoder_message_count(std::size_t a) const { return encoder_counts_.at(a); }
  std::uint64_t decoder_message_count(std::size_t b) const { return decoder_counts_.at(b); }

  std::vector<std::uint64_t> split(MessageIndex tuple) const;
  MessageIndex join(std::span<const std::uint64_t> messages) const;
  MessageIndex encoder_view(MessageIndex tuple, std::size_t a) const;
  MessageIndex decoder_view(MessageIndex tuple, std::size_t b) const;

  /// Rate log2|M_sigma| / n in bits per channel use.
  double rate(std::size_t sigma, std::size_t blocklength) const;

  /// Throws DimensionError unless transmitter/receiver counts match the network.
  void check_compatible(const NetworkLaw& net) const;

  bool operator==(const MessageTopology&) const = default;

 private:
  MessageIndex project(MessageIndex tuple, const std::vector<std::size_t>& ids) const;

  std::vector<std::uint64_t> sizes_;
  std::vector<std::vector<std::size_t>> inputs_;
  std::vector<std::vector<std::size_t>> demands_;
  std::uint64_t tuple_count_ = 1;
  std::vector<std::uint64_t> encoder_counts_;
  std::vector<std::uint64_t> decoder_counts_;
};

}  // namespace sdnet
