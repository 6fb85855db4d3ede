#pragma once

#include <array>
#include <cstdint>

namespace lnayield {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11). A pure
/// function of (counter, key): no state, so any draw can be reproduced from
/// its coordinates alone.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key) noexcept;
};

/// Stream of standard normal deviates addressed by (seed, stream id). Draw k of
/// stream s under seed is always the same number, whatever else has been drawn.
class CounterNormalStream {
 public:
  CounterNormalStream(std::uint64_t seed, std::uint64_t stream) noexcept;

  double next() noexcept;

 private:
  void refill() noexcept;

  Philox4x32::Key key_;
  Philox4x32::Counter counter_;
  std::array<double, 2> buffer_{};
  int available_ = 0;
};

/// Maps 64 random bits to a double in the open interval (0, 1).
double bits_to_open_unit(std::uint64_t bits) noexcept;

}  // namespace lnayield
