#include "sdnet/topology.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sdnet {
namespace {

void normalize_sets(std::vector<std::vector<std::size_t>>& sets, std::size_t sigma_count,
                    std::vector<char>& seen, const char* what) {
  for (std::size_t a = 0; a < sets.size(); ++a) {
    auto& ids = sets[a];
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
      throw DimensionError(std::string(what) + " " + std::to_string(a) + " lists a message twice");
    for (auto id : ids) {
      if (id >= sigma_count)
        throw DimensionError(std::string(what) + " " + std::to_string(a) + " references message " +
                             std::to_string(id) + " of " + std::to_string(sigma_count));
      seen[id] = 1;
    }
  }
}

}  // namespace

MessageTopology::MessageTopology(std::vector<std::uint64_t> message_sizes,
                                 std::vector<std::vector<std::size_t>> encoder_inputs,
                                 std::vector<std::vector<std::size_t>> decoder_demands)
    : sizes_(std::move(message_sizes)),
      inputs_(std::move(encoder_inputs)),
      demands_(std::move(decoder_demands)) {
  if (sizes_.empty()) throw DimensionError("topology needs at least one message");
  for (std::size_t s = 0; s < sizes_.size(); ++s)
    if (sizes_[s] == 0) throw DimensionError("message " + std::to_string(s) + " has an empty set");

  std::vector<char> sent(sizes_.size(), 0), wanted(sizes_.size(), 0);
  normalize_sets(inputs_, sizes_.size(), sent, "encoder");
  normalize_sets(demands_, sizes_.size(), wanted, "decoder");
  for (std::size_t s = 0; s < sizes_.size(); ++s) {
    if (!sent[s]) throw DimensionError("message " + std::to_string(s) + " is presented to no transmitter");
    if (!wanted[s]) throw DimensionError("message " + std::to_string(s) + " is intended for no receiver");
  }

  for (auto sz : sizes_) tuple_count_ = saturating_mul(tuple_count_, sz);
  if (tuple_count_ == kSaturated) throw DimensionError("message tuple count overflows 64 bits");
  auto count = [&](const std::vector<std::size_t>& ids) {
    std::uint64_t c = 1;
    for (auto id : ids) c *= sizes_[id];
    return c;
  };
  for (const auto& ids : inputs_) encoder_counts_.push_back(count(ids));
  for (const auto& ids : demands_) decoder_counts_.push_back(count(ids));
}

std::vector<std::uint64_t> MessageTopology::split(MessageIndex tuple) const {
  std::vector<std::uint64_t> out(sizes_.size());
  for (std::size_t s = sizes_.size(); s-- > 0;) {
    out[s] = tuple % sizes_[s];
    tuple /= sizes_[s];
  }
  return out;
}

MessageIndex MessageTopology::join(std::span<const std::uint64_t> messages) const {
  if (messages.size() != sizes_.size()) throw DimensionError("message tuple has wrong length");
  MessageIndex idx = 0;
  for (std::size_t s = 0; s < sizes_.size(); ++s) {
    if (messages[s] >= sizes_[s]) throw IndexError("message value out of range");
    idx = idx * sizes_[s] + messages[s];
  }
  return idx;
}

MessageIndex MessageTopology::project(MessageIndex tuple, const std::vector<std::size_t>& ids) const {
  const auto parts = split(tuple);
  MessageIndex idx = 0;
  for (auto id : ids) idx = idx * sizes_[id] + parts[id];
  return idx;
}

MessageIndex MessageTopology::encoder_view(MessageIndex tuple, std::size_t a) const {
  return project(tuple, inputs_.at(a));
}

MessageIndex MessageTopology::decoder_view(MessageIndex tuple, std::size_t b) const {
  return project(tuple, demands_.at(b));
}

double MessageTopology::rate(std::size_t sigma, std::size_t blocklength) const {
  return std::log2(static_cast<double>(sizes_.at(sigma))) / static_cast<double>(blocklength);
}

void MessageTopology::check_compatible(const NetworkLaw& net) const {
  if (transmitters() != net.transmitters() || receivers() != net.receivers())
    throw DimensionError("topology has " + std::to_string(transmitters()) + " encoders / " +
                         std::to_string(receivers()) + " decoders, network has " +
                         std::to_string(net.transmitters()) + " / " + std::to_string(net.receivers()));
}

}  // namespace sdnet
