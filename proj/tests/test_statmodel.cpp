#include <doctest.h>

#include <cmath>
#include <random>

#include "lnayield/error.hpp"
#include "lnayield/normal.hpp"
#include "lnayield/statmodel.hpp"

using namespace lnayield;

namespace {

ModeMarginals marginals(std::string label, double g_sigma, double nf_sigma, double ip_sigma) {
  ModeMarginals m;
  m.label = std::move(label);
  m.marginals[0] = {10.5, g_sigma, std::nullopt, std::nullopt};
  m.marginals[1] = {2.8, nf_sigma, std::nullopt, std::nullopt};
  m.marginals[2] = {0.0, ip_sigma, std::nullopt, std::nullopt};
  m.marginals[3] = {-20.0, 1.0, std::nullopt, std::nullopt};
  m.marginals[4] = {-15.0, 2.0, std::nullopt, std::nullopt};
  return m;
}

LatentDieModel two_mode_model(const CorrelationSettings& c) {
  return build_latent_model({marginals("A", 0.5, 0.1, 3.0), marginals("B", 0.4, 0.12, 3.5)}, c);
}

}  // namespace

TEST_CASE("sigma from one tail quantile") {
  // 0.4 mA design: 14% of dies below -4 dBm around a 0.7 dBm mean (scipy.stats.norm).
  CHECK(fit_sigma_from_quantile(0.7, -4.0, 0.14) == doctest::Approx(4.35056545082).epsilon(1e-10));
  CHECK(fit_sigma_from_quantile(0.0, 1.959963984540054, 0.975) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK_THROWS_AS(fit_sigma_from_quantile(0.0, 1.0, 0.5), ValidationError);
  CHECK_THROWS_AS(fit_sigma_from_quantile(0.0, 1.0, 0.2), ValidationError);  // wrong side
  CHECK_THROWS_AS(fit_sigma_from_quantile(0.0, 1.0, 1.0), ValidationError);
}

TEST_CASE("two-tail fits") {
  const std::array<QuantileConstraint, 2> tails{QuantileConstraint{10.0, 0.22}, QuantileConstraint{11.0, 0.89}};
  const auto ls = fit_location_scale(10.4, 0.05, tails);
  CHECK(ls.mean == doctest::Approx(10.3863436093).epsilon(1e-10));
  CHECK(ls.sigma == doctest::Approx(0.500319870948).epsilon(1e-10));
  CHECK_FALSE(ls.mean_clamped);

  const std::array<QuantileConstraint, 2> wide{QuantileConstraint{10.0, 0.16}, QuantileConstraint{11.0, 0.89}};
  const auto clamped = fit_location_scale(10.5, 0.05, wide);
  CHECK(clamped.mean_clamped);
  CHECK(clamped.mean == doctest::Approx(10.45));
  CHECK(clamped.sigma == doctest::Approx(0.450041528459).epsilon(1e-10));

  const auto per_tail = fit_sigma(10.4, tails);
  REQUIRE(per_tail.solutions.size() == 2);
  CHECK(per_tail.sigma == doctest::Approx(0.5 * (per_tail.solutions[0] + per_tail.solutions[1])));
  CHECK(per_tail.relative_spread >= 0.0);
}

TEST_CASE("tail fits recover the generating Gaussian") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> mu_d(-10.0, 10.0), sd_d(0.05, 5.0), p_d(0.001, 0.45);
  for (int i = 0; i < 500; ++i) {
    const double mu = mu_d(rng), sd = sd_d(rng), p1 = p_d(rng), p2 = 1.0 - p_d(rng);
    const std::array<QuantileConstraint, 2> q{QuantileConstraint{mu + sd * inverse_normal_cdf(p1), p1},
                                              QuantileConstraint{mu + sd * inverse_normal_cdf(p2), p2}};
    const auto f = fit_sigma(mu, q);
    CHECK(f.sigma == doctest::Approx(sd).epsilon(1e-9));
    CHECK(f.relative_spread < 1e-9);
    const auto ls = fit_location_scale(mu, 1.0, q);
    CHECK(ls.mean == doctest::Approx(mu).epsilon(1e-9));
    CHECK(ls.sigma == doctest::Approx(sd).epsilon(1e-9));
  }
}

TEST_CASE("extreme-value and zero-violation helpers") {
  CHECK(expected_extreme_z(1000) == doctest::Approx(3.2272899458366853).epsilon(1e-12));
  CHECK(sigma_from_extreme(11.9, 10.1, 1000) == doctest::Approx(1.8 / 3.2272899458366853));
  CHECK(sigma_bound_for_zero_violations(2.8, 3.0) == doctest::Approx(0.0607805425453334).epsilon(1e-12));
  CHECK_THROWS_AS(expected_extreme_z(0), ValidationError);
  CHECK_THROWS_AS(sigma_from_extreme(1.0, 1.0, 1000), ValidationError);
  // More runs push the expected extreme further out.
  for (std::size_t n = 2; n < 5000; n *= 3) CHECK(expected_extreme_z(n * 3) > expected_extreme_z(n));
}

TEST_CASE("marginal spec resolution") {
  MarginalSpec s;
  s.mean = 0.7;
  s.quantiles = {{-4.0, 0.14}};
  CHECK(resolve_marginal(s).sigma == doctest::Approx(4.35056545082).epsilon(1e-10));
  s.sigma = 2.0;
  CHECK(resolve_marginal(s).sigma == 2.0);
  s.lower_bound = 1.0;
  s.upper_bound = 0.0;
  CHECK_THROWS_AS(resolve_marginal(s), ValidationError);
}

TEST_CASE("latent model variance invariant and implied correlations") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> share(0.0, 1.0), coup(-1.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    CorrelationSettings c;
    c.gain_cross_mode = share(rng);
    c.nf_cross_mode = share(rng);
    c.iip3_cross_mode = share(rng);
    c.gain_linearity = coup(rng);
    c.gain_noise = coup(rng);
    const auto m = two_mode_model(c);
    CHECK_NOTHROW(m.validate());
    for (std::size_t k = 0; k < 2; ++k)
      for (auto p : kAllRfParameters) {
        const auto& r = m.row(k, p);
        CHECK(r.total_variance() == doctest::Approx(r.sigma * r.sigma).epsilon(1e-12));
        CHECK(implied_correlation(m, k, p, k, p) == doctest::Approx(1.0).epsilon(1e-12));
      }
    CHECK(implied_correlation(m, 0, RfParameter::Gain, 1, RfParameter::Gain) ==
          doctest::Approx(c.gain_cross_mode).epsilon(1e-12));
    CHECK(implied_correlation(m, 0, RfParameter::Iip3, 1, RfParameter::Iip3) ==
          doctest::Approx(c.iip3_cross_mode).epsilon(1e-12));
    CHECK(implied_correlation(m, 0, RfParameter::Gain, 0, RfParameter::Iip3) ==
          doctest::Approx(c.gain_linearity * std::sqrt(c.gain_cross_mode * c.iip3_cross_mode)).epsilon(1e-12));
    CHECK(implied_correlation(m, 0, RfParameter::S11, 1, RfParameter::S11) == 0.0);
  }
}

TEST_CASE("latent model rejects broken structure") {
  auto m = two_mode_model(CorrelationSettings{});
  m.row(0, RfParameter::Gain).idio_sigma += 0.01;
  CHECK_THROWS_AS(m.validate(), ValidationError);
  auto bad = CorrelationSettings{};
  bad.gain_cross_mode = 1.2;
  CHECK_THROWS_AS(two_mode_model(bad), ValidationError);
  CHECK_THROWS_AS(bad.set_cross_mode(RfParameter::S11, 0.5), ValidationError);
}

TEST_CASE("sampled dies reproduce the model moments") {
  CorrelationSettings c;
  c.gain_linearity = 0.6;
  const auto m = two_mode_model(c);
  const int n = 60000;
  double sg = 0, sg2 = 0, sgb = 0, sgb2 = 0, sab = 0, sip = 0, sip2 = 0, sgi = 0;
  for (int i = 0; i < n; ++i) {
    const auto d = sample_die(m, 99, static_cast<std::uint64_t>(i));
    const double a = d.modes[0].gain_db - 10.5, b = d.modes[1].gain_db - 10.5, ip = d.modes[0].iip3_dbm;
    sg += a, sg2 += a * a, sgb += b, sgb2 += b * b, sab += a * b, sip += ip, sip2 += ip * ip, sgi += a * ip;
  }
  const double va = sg2 / n - std::pow(sg / n, 2), vb = sgb2 / n - std::pow(sgb / n, 2);
  const double vip = sip2 / n - std::pow(sip / n, 2);
  CHECK(std::sqrt(va) == doctest::Approx(0.5).epsilon(0.02));
  CHECK(std::sqrt(vb) == doctest::Approx(0.4).epsilon(0.02));
  CHECK(std::sqrt(vip) == doctest::Approx(3.0).epsilon(0.02));
  const double rab = (sab / n - sg / n * sgb / n) / std::sqrt(va * vb);
  CHECK(rab == doctest::Approx(c.gain_cross_mode).epsilon(0.01));
  const double rgi = (sgi / n - sg / n * sip / n) / std::sqrt(va * vip);
  CHECK(rgi == doctest::Approx(implied_correlation(m, 0, RfParameter::Gain, 0, RfParameter::Iip3)).epsilon(0.03));
}

TEST_CASE("sample_die is a pure function of (model, seed, index)") {
  const auto m = two_mode_model(CorrelationSettings{});
  CHECK(sample_die(m, 5, 123) == sample_die(m, 5, 123));
  CHECK_FALSE(sample_die(m, 5, 123) == sample_die(m, 5, 124));
  CHECK_FALSE(sample_die(m, 5, 123) == sample_die(m, 6, 123));
}

TEST_CASE("bounds clamp samples") {
  auto mm = marginals("A", 0.5, 0.1, 3.0);
  mm.marginals[0].lower_bound = 10.4;
  mm.marginals[0].upper_bound = 10.6;
  const auto m = build_latent_model({mm}, CorrelationSettings{});
  for (std::uint64_t i = 0; i < 2000; ++i) {
    const double g = sample_die(m, 1, i).modes[0].gain_db;
    CHECK(g >= 10.4);
    CHECK(g <= 10.6);
  }
}

TEST_CASE("model JSON round-trip and error paths") {
  CorrelationSettings c;
  c.gain_noise = -0.3;
  auto m = two_mode_model(c);
  m.row(1, RfParameter::S22).upper_bound = -1.0;
  const auto j = to_json(m);
  const auto back = latent_model_from_json(j);
  CHECK(to_json(back) == j);
  CHECK(back.correlation == m.correlation);
  CHECK(sample_die(back, 3, 3) == sample_die(m, 3, 3));

  auto broken = j;
  broken["modes"][1]["parameters"]["gain_db"]["sigma"] = "wide";
  try {
    latent_model_from_json(broken);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("/modes/1/parameters/gain_db/sigma") != std::string::npos);
  }
  auto version = j;
  version["schema_version"] = 2;
  CHECK_THROWS_AS(latent_model_from_json(version), ValidationError);
  auto variance = j;
  variance["modes"][0]["parameters"]["nf_db"]["idio_sigma"] = 5.0;
  CHECK_THROWS_AS(latent_model_from_json(variance), ValidationError);
}
