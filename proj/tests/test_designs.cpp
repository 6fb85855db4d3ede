#include <doctest.h>

#include <cmath>
#include <random>

#include "lnayield/config.hpp"
#include "lnayield/error.hpp"
#include "lnayield/paper_data.hpp"

using namespace lnayield;

TEST_CASE("mode controls map one-to-one onto modes") {
  for (auto m : kAllPlnaModes) {
    const auto c = controls_of(m);
    CHECK(mode_from_controls(c.phi, c.phi_g) == m);
    CHECK(mode_from_name(mode_name(m)) == m);
  }
  CHECK(mode_from_controls(true, false) == PlnaMode::HG);
  CHECK(mode_from_controls(false, true) == PlnaMode::LG);
  CHECK(mode_from_controls(false, false) == PlnaMode::MG_LP);
  CHECK_THROWS_AS(mode_from_controls(true, true), ValidationError);
  CHECK_THROWS_AS(mode_from_name("MG"), ValidationError);
}

TEST_CASE("equivalent operating point keeps current density") {
  const auto op = equivalent_operating_point(42.0, 0.4, 14.0);
  CHECK(op.w_um == 56.0);
  CHECK(std::abs(op.i_ma - 0.4 * 56.0 / 42.0) < 1e-12);
  CHECK(op.i_ma == doctest::Approx(0.5333333333333333));

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> w(1.0, 200.0), i(0.01, 5.0);
  for (int k = 0; k < 1000; ++k) {
    const double w1 = w(rng), w3 = w(rng), id = i(rng);
    const auto p = equivalent_operating_point(w1, id, w3);
    CHECK(std::abs(p.i_ma / p.w_um - id / w1) <= 1e-12 * (id / w1));
  }
  CHECK(equivalent_operating_point(42.0, 0.4, 0.0).i_ma == 0.4);
  CHECK_THROWS_AS(equivalent_operating_point(0.0, 0.4, 14.0), ValidationError);
  CHECK_THROWS_AS(equivalent_operating_point(42.0, 0.4, -1.0), ValidationError);
}

TEST_CASE("power accounting") {
  const auto designs = builtin_paper_designs();
  const double expected[] = {0.516, 0.636, 0.756, 0.876};
  REQUIRE(designs.traditional.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(designs.traditional[i].power_mw() == doctest::Approx(expected[i]).epsilon(1e-12));
  const auto& p = designs.plna;
  CHECK(p.mode_power_mw(PlnaMode::MG_LP) == doctest::Approx(0.516).epsilon(1e-12));
  CHECK(p.mode_power_mw(PlnaMode::HG) == doctest::Approx(0.672).epsilon(1e-12));
  CHECK(p.mode_power_mw(PlnaMode::LG) == doctest::Approx(0.672).epsilon(1e-12));
}

TEST_CASE("built-in traditional marginals match independent fits") {
  // scipy.stats.norm fits of the published tails.
  struct Row {
    double gain_mean, gain_sigma, nf_sigma, iip3_sigma, s22_mean, s22_sigma;
  };
  const Row oracle[] = {
      {10.3863436093, 0.500319870948, 0.0607805425453, 4.35056545082, -15.4475417916, 2.89640594694},
      {10.3656936393, 0.494951883109, 0.0607805425453, 5.83600168962, -15.1681806741, 2.74787230863},
      {10.45, 0.450041528459, 0.091170813818, 4.04066825297, -16.300159821, 3.06763878893},
      {10.4025739587, 0.40481750458, 0.091170813818, 3.04184251172, -15.6001420631, 2.72679003461},
  };
  const auto designs = builtin_paper_designs();
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& m = designs.traditional[i].variability;
    CAPTURE(i);
    CHECK(m.row(0, RfParameter::Gain).mean == doctest::Approx(oracle[i].gain_mean).epsilon(1e-9));
    CHECK(m.row(0, RfParameter::Gain).sigma == doctest::Approx(oracle[i].gain_sigma).epsilon(1e-9));
    CHECK(m.row(0, RfParameter::NoiseFigure).sigma == doctest::Approx(oracle[i].nf_sigma).epsilon(1e-9));
    CHECK(m.row(0, RfParameter::Iip3).sigma == doctest::Approx(oracle[i].iip3_sigma).epsilon(1e-9));
    CHECK(m.row(0, RfParameter::S22).mean == doctest::Approx(oracle[i].s22_mean).epsilon(1e-9));
    CHECK(m.row(0, RfParameter::S22).sigma == doctest::Approx(oracle[i].s22_sigma).epsilon(1e-9));
    CHECK(m.row(0, RfParameter::NoiseFigure).mean == reference::kTraditional[i].nf_mean_db);
    CHECK(m.row(0, RfParameter::Iip3).mean == reference::kTraditional[i].iip3_mean_dbm);
  }
}

TEST_CASE("PLNA prior marginals from the published extremes") {
  const auto prior = plna_prior_model();
  REQUIRE(prior.mode_count() == 3);
  const double gain_sigma[] = {0.464786252606, 0.529856327971, 0.498870577798};
  const double iip3_sigma[] = {3.47040401946, 2.94364626651, 3.59434702016};
  for (std::size_t m = 0; m < 3; ++m) {
    CHECK(prior.row(m, RfParameter::Gain).mean == reference::kPlnaModes[m].gain_mean_db);
    CHECK(prior.row(m, RfParameter::NoiseFigure).mean == reference::kPlnaModes[m].nf_mean_db);
    CHECK(prior.row(m, RfParameter::Gain).sigma == doctest::Approx(gain_sigma[m]).epsilon(1e-9));
    CHECK(prior.row(m, RfParameter::Iip3).sigma == doctest::Approx(iip3_sigma[m]).epsilon(1e-9));
  }
  CHECK(prior.correlation == CorrelationSettings{});
}

TEST_CASE("built-in PLNA carries the calibrated spread") {
  const auto p = builtin_paper_designs().plna;
  const auto spread = builtin_plna_spread();
  const auto prior = plna_prior_model();
  CHECK(p.variability.correlation == builtin_plna_correlation());
  for (std::size_t m = 0; m < 3; ++m) {
    CHECK(p.variability.row(m, RfParameter::Gain).sigma == spread.gain_sigma_db[m]);
    CHECK(p.variability.row(m, RfParameter::Iip3).sigma ==
          doctest::Approx(prior.row(m, RfParameter::Iip3).sigma * spread.iip3_sigma_scale).epsilon(1e-12));
  }
  CHECK_NOTHROW(p.validate());
}

TEST_CASE("PLNA design invariants") {
  auto p = builtin_paper_designs().plna;
  auto bad = p;
  bad.modes[mode_index(PlnaMode::MG_LP)].supply_current_ma = 0.56;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = p;
  bad.modes[mode_index(PlnaMode::LG)].supply_current_ma = 0.6;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = p;
  std::swap(bad.modes[0], bad.modes[2]);
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = p;
  bad.variability.modes.pop_back();
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("published table data is internally consistent") {
  for (const auto& r : reference::kTraditional) {
    CAPTURE(r.id);
    CHECK(r.gain_min_db < r.gain_mean_db);
    CHECK(r.gain_mean_db < r.gain_max_db);
    CHECK(r.iip3_min_dbm < r.iip3_mean_dbm);
    CHECK(r.rx_both + r.rx_nf_fail <= 1.0 + 1e-12);
  }
  for (const auto& r : reference::kPlnaModes) CHECK(r.gain_min_db < r.gain_mean_db);
  CHECK(reference::kPlnaModes[0].gain_mean_db > reference::kPlnaModes[1].gain_mean_db);
  CHECK(reference::kPlnaModes[1].gain_mean_db > reference::kPlnaModes[2].gain_mean_db);
}

TEST_CASE("config JSON round-trip") {
  for (const auto& name : builtin_dataset_names()) {
    CAPTURE(name);
    const auto d = builtin_dataset(name);
    const auto j = to_json(d);
    const auto back = parse_config(j.dump());
    CHECK(to_json(back) == j);
  }
  auto d = builtin_dataset("paper");
  d.stage2_override = StageTwoLimits{NoiseFactor(300.0), PowerMw(2.0)};
  const auto back = parse_config(to_json(d).dump());
  REQUIRE(back.stage2_override);
  CHECK(back.stage2_limits().f2_max.value() == 300.0);
  CHECK(builtin_dataset("paper-0.6mA").traditional.size() == 1);
  CHECK_FALSE(builtin_dataset("paper-0.6mA").plna);
  CHECK(builtin_dataset("paper-plna").traditional.empty());
}

TEST_CASE("config errors name the offending field") {
  const auto good = to_json(builtin_dataset("paper"));
  auto expect_error = [](const nlohmann::json& j, const std::string& fragment) {
    try {
      parse_config(j.dump());
      FAIL("expected failure mentioning " << fragment);
    } catch (const ValidationError& e) {
      CHECK_MESSAGE(std::string(e.what()).find(fragment) != std::string::npos, e.what());
    }
  };
  auto j = good;
  j["lna_spec"].erase("nf_max_db");
  expect_error(j, "/lna_spec/nf_max_db");
  j = good;
  j["schema_version"] = 9;
  expect_error(j, "/schema_version");
  j = good;
  j["plna"]["modes"][0]["phi_g"] = true;
  expect_error(j, "/plna/modes/0");
  j = good;
  j["traditional_designs"][1]["variability"]["modes"][0]["parameters"]["iip3_dbm"]["mean"] = "x";
  expect_error(j, "/traditional_designs/1/variability/modes/0/parameters/iip3_dbm/mean");
  j = good;
  j["traditional_designs"][1]["id"] = "paper-0.4mA";
  expect_error(j, "duplicate");
  CHECK_THROWS_AS(parse_config("{not json"), ValidationError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), RuntimeError);
  CHECK_THROWS_AS(builtin_dataset("paper-0.8mA"), ValidationError);
}
