#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sdnet/common.hpp"
#include "sdnet/errors.hpp"

namespace sdnet {

/// Alphabet sizes of a network: one input alphabet per transmitter, one
/// output alphabet per receiver, and the state alphabet.
struct Alphabets {
  std::vector<std::size_t> inputs;
  std::vector<std::size_t> outputs;
  std::size_t states = 0;

  std::size_t transmitters() const noexcept { return inputs.size(); }
  std::size_t receivers() const noexcept { return outputs.size(); }
  std::uint64_t joint_inputs() const noexcept;
  std::uint64_t joint_outputs() const noexcept;

  bool operator==(const Alphabets&) const = default;
};

/// Unchecked network description as read from a file or built by hand.
///
/// `w` is flat: slice index = row-major over (s, x_1, ..., x_k), and within
/// a slice the joint output PMF is row-major over (y_1, ..., y_l).
struct RawNetwork {
  Alphabets alphabets;
  std::vector<double> w;
};

/// Conditional law W(y_1..y_l | x_1..x_k, s) of a state-dependent bipartite
/// network, memoryless given the states. Immutable once built.
class NetworkLaw {
 public:
  const Alphabets& alphabets() const noexcept { return alpha_; }
  std::size_t transmitters() const noexcept { return alpha_.transmitters(); }
  std::size_t receivers() const noexcept { return alpha_.receivers(); }
  std::size_t state_size() const noexcept { return alpha_.states; }
  std::size_t joint_output_count() const noexcept { return joint_outputs_; }
  std::size_t joint_input_count() const noexcept { return joint_inputs_; }

  /// Row-major index of an input tuple.
  std::size_t input_index(std::span<const Symbol> x) const;

  /// W(. | x, s) over joint output indices. Throws IndexError for out-of-range symbols.
  std::span<const double> output_distribution(std::span<const Symbol> x, Symbol s) const;
  std::span<const double> output_distribution(std::size_t input_index, Symbol s) const noexcept {
    return {w_.data() + slice(input_index, s) * joint_outputs_, joint_outputs_};
  }

  /// Receiver b's component of a joint output index.
  Symbol receiver_output(std::size_t joint_y, std::size_t b) const noexcept {
    return static_cast<Symbol>((joint_y / output_stride_[b]) % alpha_.outputs[b]);
  }

  /// Marginal W_b(. | x, s) seen by a single receiver.
  std::span<const double> receiver_marginal(std::size_t b, std::size_t input_index, Symbol s) const noexcept {
    const std::size_t ny = alpha_.outputs[b];
    return {marginals_[b].data() + slice(input_index, s) * ny, ny};
  }

  const std::vector<double>& tensor() const noexcept { return w_; }

 private:
  friend NetworkLaw validate_network(const RawNetwork& raw);
  std::size_t slice(std::size_t input_index, Symbol s) const noexcept {
    return static_cast<std::size_t>(s) * joint_inputs_ + input_index;
  }

  Alphabets alpha_;
  std::vector<double> w_;
  std::size_t joint_inputs_ = 0;
  std::size_t joint_outputs_ = 0;
  std::vector<std::size_t> output_stride_;
  std::vector<std::vector<double>> marginals_;
};

/// Every problem with `raw`, empty when it describes a valid network.
std::vector<Violation> check_network(const RawNetwork& raw);

/// Throws DimensionError on size mismatches and NormalizationError (carrying
/// the full violation list) on bad slices.
NetworkLaw validate_network(const RawNetwork& raw);

}  // namespace sdnet
