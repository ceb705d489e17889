#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace tmef {

/// Philox4x32-10 counter-based generator. The key is the user seed; the
/// upper half of the 128-bit counter is the stream id, so independent
/// replicates get disjoint sequences from the same seed without any shared
/// state. Satisfies UniformRandomBitGenerator for the <random> distributions.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// Uniform double in the open interval (0, 1).
  double uniform_open() noexcept;

  /// A generator for a different stream under the same seed.
  CounterRng split(std::uint64_t stream) const noexcept { return CounterRng(seed_, stream); }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

 private:
  void refill() noexcept;

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int next_ = 2;
};

/// Philox4x32-10 block function, exposed for known-answer tests.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key) noexcept;

}  // namespace tmef
