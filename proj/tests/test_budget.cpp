#include <doctest.h>

#include <cmath>
#include <random>

#include "lnayield/budget.hpp"
#include "lnayield/error.hpp"

using namespace lnayield;

namespace {

// Reference values from a 30-digit mpmath evaluation of the same formulas.
constexpr double kF2MaxOracle = 335.860766083886662;
constexpr double kNf2DbOracle = 25.2615927425413513;
constexpr double kIip32MwOracle = 1.68123172849789271;
constexpr double kIip32DbmOracle = 2.25627577491815079;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("dB conversions") {
  CHECK(db_to_linear(0.0) == 1.0);
  CHECK(db_to_linear(15.5) == doctest::Approx(35.48133892335755).epsilon(1e-15));
  CHECK(linear_to_db(100.0) == doctest::Approx(20.0).epsilon(1e-15));
  CHECK_THROWS_AS(linear_to_db(0.0), ValidationError);
  CHECK_THROWS_AS(linear_to_db(-1.0), ValidationError);
  CHECK_THROWS_AS(db_to_linear(NAN), ValidationError);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-60.0, 60.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng);
    CHECK(linear_to_db(db_to_linear(x)) == doctest::Approx(x).epsilon(1e-12));
  }
}

TEST_CASE("strong types enforce their domains") {
  CHECK_THROWS_AS(NoiseFactor(0.99), ValidationError);
  CHECK_THROWS_AS(PowerMw(0.0), ValidationError);
  CHECK_THROWS_AS(LinearGain(-1e-3), ValidationError);
  CHECK(to_factor(NoiseFigureDb(3.0)).value() == doctest::Approx(1.9952623149688795));
  CHECK(to_dbm(PowerMw(1.0)).value() == doctest::Approx(0.0));
  CHECK(to_db(LinearGain(10.0)).value() == doctest::Approx(10.0));
}

TEST_CASE("Friis and IIP3 cascades on hand-checked values") {
  CHECK(cascade_noise(NoiseFactor(2.0), LinearGain(10.0), NoiseFactor(11.0)).value() == doctest::Approx(3.0));
  // Exactly 1/(1/0.3981 + 12.589/1.6812); the inputs are 4-5 digit roundings.
  CHECK(rel(cascade_iip3(PowerMw(0.3981), LinearGain(12.589), PowerMw(1.6812)).value(), 0.0999996458923988921) < 1e-12);
  // A stage with unit noise factor adds nothing.
  CHECK(cascade_noise(NoiseFactor(1.7), LinearGain(5.0), NoiseFactor(1.0)).value() == doctest::Approx(1.7));
}

TEST_CASE("stage-2 limits from the spec corners") {
  const auto lim = derive_stage2_limits(LnaSpecCorner{}, ReceiverTargets{});
  CHECK(rel(lim.f2_max.value(), kF2MaxOracle) < 1e-12);
  CHECK(rel(to_db(lim.f2_max).value(), kNf2DbOracle) < 1e-12);
  CHECK(rel(lim.iip3_2_min.value(), kIip32MwOracle) < 1e-12);
  CHECK(rel(to_dbm(lim.iip3_2_min).value(), kIip32DbmOracle) < 1e-12);
}

TEST_CASE("an LNA on its spec corner meets the receiver targets with zero margin") {
  const LnaSpecCorner spec;
  const ReceiverTargets targets;
  const auto lim = derive_stage2_limits(spec, targets);
  RfQuantities nf_corner{spec.gain_min_db, spec.nf_max_db, 10.0, -20.0, -20.0};
  CHECK(receiver_figures(nf_corner, lim).nf_rx_db() == doctest::Approx(targets.nf_rx_max_db).epsilon(1e-12));
  CHECK(classify_receiver(nf_corner, lim, targets).nf_pass);

  RfQuantities iip3_corner{spec.gain_max_db, 1.0, spec.iip3_min_dbm, -20.0, -20.0};
  CHECK(receiver_figures(iip3_corner, lim).iip3_rx_dbm() == doctest::Approx(targets.iip3_rx_min_dbm).epsilon(1e-12));
  CHECK(classify_receiver(iip3_corner, lim, targets).iip3_pass);

  nf_corner.gain_db -= 1e-6;
  CHECK_FALSE(classify_receiver(nf_corner, lim, targets).nf_pass);
  iip3_corner.gain_db += 1e-6;
  CHECK_FALSE(classify_receiver(iip3_corner, lim, targets).iip3_pass);
}

TEST_CASE("cascade monotonicity") {
  const auto lim = derive_stage2_limits(LnaSpecCorner{}, ReceiverTargets{});
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> g(5.0, 15.0), nf(1.0, 5.0), ip(-15.0, 5.0), d(0.01, 1.0);
  for (int i = 0; i < 2000; ++i) {
    RfQuantities q{g(rng), nf(rng), ip(rng), -15.0, -15.0};
    const auto base = receiver_figures(q, lim);
    auto more_gain = q;
    more_gain.gain_db += d(rng);
    const auto hg = receiver_figures(more_gain, lim);
    // More LNA gain: less downstream noise, more downstream distortion.
    CHECK(hg.f_rx.value() <= base.f_rx.value());
    CHECK(hg.iip3_rx.value() <= base.iip3_rx.value());
    auto more_nf = q;
    more_nf.nf_db += d(rng);
    CHECK(receiver_figures(more_nf, lim).f_rx.value() > base.f_rx.value());
    auto more_ip = q;
    more_ip.iip3_dbm += d(rng);
    CHECK(receiver_figures(more_ip, lim).iip3_rx.value() > base.iip3_rx.value());
    // The cascade is never better than the LNA alone.
    CHECK(base.f_rx.value() >= db_to_linear(q.nf_db));
    CHECK(base.iip3_rx.value() <= db_to_linear(q.iip3_dbm));
  }
}

TEST_CASE("infeasible budgets and bad inputs") {
  LnaSpecCorner noisy;
  noisy.nf_max_db = 16.0;
  CHECK_THROWS_AS(derive_stage2_limits(noisy, ReceiverTargets{}), RuntimeError);
  LnaSpecCorner weak;
  weak.iip3_min_dbm = -12.0;
  CHECK_THROWS_AS(derive_stage2_limits(weak, ReceiverTargets{}), RuntimeError);
  LnaSpecCorner inverted;
  inverted.gain_min_db = 12.0;
  CHECK_THROWS_AS(inverted.validate(), ValidationError);
  CHECK_THROWS_AS(validate(RfQuantities{10.0, 2.0, -5.0, 1.0, -10.0}), ValidationError);
  try {
    derive_stage2_limits(noisy, ReceiverTargets{});
  } catch (const Error& e) {
    CHECK(e.module() == "budget");
    CHECK(std::string(e.what()).rfind("budget: ", 0) == 0);
  }
}

TEST_CASE("parameter names round-trip") {
  for (auto p : kAllRfParameters) CHECK(parameter_from_name(parameter_name(p)) == p);
  CHECK_THROWS_AS(parameter_from_name("gain"), ValidationError);
  RfQuantities q;
  for (auto p : kAllRfParameters) q.set(p, static_cast<double>(p) + 0.5);
  for (auto p : kAllRfParameters) CHECK(q.get(p) == static_cast<double>(p) + 0.5);
}
