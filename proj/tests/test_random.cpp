#include <doctest.h>

#include <cmath>
#include <random>

#include "lnayield/error.hpp"
#include "lnayield/normal.hpp"
#include "lnayield/philox.hpp"

using namespace lnayield;

TEST_CASE("inverse normal CDF against high-precision references") {
  // mpmath, 30 digits: sqrt(2) * erfinv(2p - 1).
  CHECK(inverse_normal_cdf(0.975) == doctest::Approx(1.95996398454005424).epsilon(1e-14));
  CHECK(inverse_normal_cdf(0.22) == doctest::Approx(-0.772193214188684699).epsilon(1e-14));
  CHECK(inverse_normal_cdf(0.5) == 0.0);
  CHECK(inverse_normal_cdf(1e-300) == doctest::Approx(-37.0471).epsilon(1e-5));
  CHECK_THROWS_AS(inverse_normal_cdf(0.0), ValidationError);
  CHECK_THROWS_AS(inverse_normal_cdf(1.0), ValidationError);
  CHECK_THROWS_AS(inverse_normal_cdf(NAN), ValidationError);
}

TEST_CASE("CDF and inverse are consistent and monotone") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(1e-12, 1.0 - 1e-12);
  double prev_p = 0.0, prev_z = -INFINITY;
  std::vector<double> ps;
  for (int i = 0; i < 5000; ++i) ps.push_back(u(rng));
  std::sort(ps.begin(), ps.end());
  for (double p : ps) {
    const double z = inverse_normal_cdf(p);
    CHECK(normal_cdf(z) == doctest::Approx(p).epsilon(1e-12));
    CHECK(inverse_normal_cdf(1.0 - p) == doctest::Approx(-z).epsilon(1e-6));
    if (p > prev_p) CHECK(z >= prev_z);
    prev_p = p;
    prev_z = z;
  }
}

TEST_CASE("Philox4x32-10 known-answer vectors") {
  // Published Random123 test vectors.
  using C = Philox4x32::Counter;
  CHECK(Philox4x32::block(C{0, 0, 0, 0}, {0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::block(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::block(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("normal streams are addressable and independent of draw history") {
  CounterNormalStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  std::vector<double> xa, xc, xd;
  for (int i = 0; i < 16; ++i) {
    xa.push_back(a.next());
    xc.push_back(c.next());
    xd.push_back(d.next());
  }
  for (int i = 0; i < 16; ++i) CHECK(b.next() == xa[i]);
  CHECK(xa != xc);
  CHECK(xa != xd);
}

TEST_CASE("normal stream moments") {
  double sum = 0.0, sum2 = 0.0;
  const int n = 200000;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    CounterNormalStream st(9, s);
    for (int i = 0; i < n / 1000; ++i) {
      const double x = st.next();
      sum += x;
      sum2 += x * x;
    }
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean) < 5.0 / std::sqrt(n));
  CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("bits map into the open unit interval") {
  CHECK(bits_to_open_unit(0) > 0.0);
  CHECK(bits_to_open_unit(~std::uint64_t{0}) < 1.0);
  CHECK(bits_to_open_unit(0) == 0x1.0p-53);
  CHECK(bits_to_open_unit(~std::uint64_t{0}) == 1.0 - 0x1.0p-53);
  CHECK(bits_to_open_unit(std::uint64_t{1} << 63) == doctest::Approx(0.5));
}
