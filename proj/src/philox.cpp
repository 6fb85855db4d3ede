#include "lnayield/philox.hpp"

#include <cmath>
#include <numbers>

namespace lnayield {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline Philox4x32::Counter round(const Philox4x32::Counter& c, const Philox4x32::Key& k) noexcept {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
  return {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
          static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
}

}  // namespace

Philox4x32::Counter Philox4x32::block(Counter ctr, Key key) noexcept {
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    ctr = round(ctr, key);
  }
  return ctr;
}

double bits_to_open_unit(std::uint64_t bits) noexcept {
  // 52 bits plus a half-step offset: the extremes are 2^-53 and 1 - 2^-53,
  // both exactly representable, so neither 0 nor 1 can come out.
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

CounterNormalStream::CounterNormalStream(std::uint64_t seed, std::uint64_t stream) noexcept
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      counter_{static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32), 0u, 0u} {}

void CounterNormalStream::refill() noexcept {
  const auto out = Philox4x32::block(counter_, key_);
  ++counter_[2];
  const double u1 = bits_to_open_unit((static_cast<std::uint64_t>(out[0]) << 32) | out[1]);
  const double u2 = bits_to_open_unit((static_cast<std::uint64_t>(out[2]) << 32) | out[3]);
  // Box-Muller
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  buffer_ = {radius * std::cos(angle), radius * std::sin(angle)};
  available_ = 2;
}

double CounterNormalStream::next() noexcept {
  if (available_ == 0) refill();
  return buffer_[2 - available_--];
}

}  // namespace lnayield
