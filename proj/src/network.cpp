#include "sdnet/network.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace sdnet {

std::uint64_t Alphabets::joint_inputs() const noexcept {
  std::uint64_t r = 1;
  for (auto sz : inputs) r = saturating_mul(r, sz);
  return r;
}

std::uint64_t Alphabets::joint_outputs() const noexcept {
  std::uint64_t r = 1;
  for (auto sz : outputs) r = saturating_mul(r, sz);
  return r;
}

std::vector<Violation> check_network(const RawNetwork& raw) {
  std::vector<Violation> out;
  const auto& a = raw.alphabets;
  auto size_problem = [&](std::string msg) {
    out.push_back({Violation::Kind::SizeMismatch, std::move(msg)});
  };
  if (a.inputs.empty()) size_problem("network needs at least one transmitter");
  if (a.outputs.empty()) size_problem("network needs at least one receiver");
  if (a.states == 0) size_problem("state alphabet must be nonempty");
  for (std::size_t i = 0; i < a.inputs.size(); ++i)
    if (a.inputs[i] == 0) size_problem("input alphabet " + std::to_string(i) + " is empty");
  for (std::size_t i = 0; i < a.outputs.size(); ++i)
    if (a.outputs[i] == 0) size_problem("output alphabet " + std::to_string(i) + " is empty");
  if (!out.empty()) return out;

  const std::uint64_t slices = saturating_mul(a.states, a.joint_inputs());
  const std::uint64_t per_slice = a.joint_outputs();
  const std::uint64_t expected = saturating_mul(slices, per_slice);
  if (expected == kSaturated || raw.w.size() != expected) {
    std::ostringstream os;
    os << "transition tensor has " << raw.w.size() << " entries, expected " << expected;
    size_problem(os.str());
    return out;
  }

  for (std::size_t sl = 0; sl < slices; ++sl) {
    double sum = 0.0;
    bool negative = false;
    for (std::size_t y = 0; y < per_slice; ++y) {
      const double v = raw.w[sl * per_slice + y];
      if (!(v >= 0.0) || v > 1.0) negative = true;
      sum += v;
    }
    if (negative) {
      out.push_back({Violation::Kind::NegativeEntry,
                     "slice " + std::to_string(sl) + " has an entry outside [0,1]", sl, sum});
    } else if (std::abs(sum - 1.0) > kProbabilityTolerance) {
      std::ostringstream os;
      os.precision(17);
      os << "slice " << sl << " (s=" << sl / a.joint_inputs() << ", x=" << sl % a.joint_inputs()
         << ") sums to " << sum;
      out.push_back({Violation::Kind::NonNormalizedSlice, os.str(), sl, sum});
    }
  }
  return out;
}

NetworkLaw validate_network(const RawNetwork& raw) {
  auto problems = check_network(raw);
  if (!problems.empty()) {
    const auto& first = problems.front();
    if (first.kind == Violation::Kind::SizeMismatch) throw DimensionError(first.message);
    throw NormalizationError(first.message, first.slice, first.sum, std::move(problems));
  }

  NetworkLaw net;
  net.alpha_ = raw.alphabets;
  net.w_ = raw.w;
  net.joint_inputs_ = raw.alphabets.joint_inputs();
  net.joint_outputs_ = raw.alphabets.joint_outputs();

  const std::size_t l = raw.alphabets.outputs.size();
  net.output_stride_.assign(l, 1);
  for (std::size_t b = l - 1; b-- > 0;)
    net.output_stride_[b] = net.output_stride_[b + 1] * raw.alphabets.outputs[b + 1];

  const std::size_t slices = raw.alphabets.states * net.joint_inputs_;
  net.marginals_.resize(l);
  for (std::size_t b = 0; b < l; ++b) {
    const std::size_t ny = raw.alphabets.outputs[b];
    auto& m = net.marginals_[b];
    m.assign(slices * ny, 0.0);
    for (std::size_t sl = 0; sl < slices; ++sl)
      for (std::size_t y = 0; y < net.joint_outputs_; ++y)
        m[sl * ny + net.receiver_output(y, b)] += net.w_[sl * net.joint_outputs_ + y];
  }
  return net;
}

std::size_t NetworkLaw::input_index(std::span<const Symbol> x) const {
  if (x.size() != alpha_.inputs.size())
    throw IndexError("input tuple has " + std::to_string(x.size()) + " symbols, network has " +
                     std::to_string(alpha_.inputs.size()) + " transmitters");
  std::size_t idx = 0;
  for (std::size_t a = 0; a < x.size(); ++a) {
    if (x[a] >= alpha_.inputs[a])
      throw IndexError("input symbol " + std::to_string(x[a]) + " out of range for transmitter " +
                       std::to_string(a));
    idx = idx * alpha_.inputs[a] + x[a];
  }
  return idx;
}

std::span<const double> NetworkLaw::output_distribution(std::span<const Symbol> x, Symbol s) const {
  if (s >= alpha_.states) throw IndexError("state symbol " + std::to_string(s) + " out of range");
  return output_distribution(input_index(x), s);
}

}  // namespace sdnet
