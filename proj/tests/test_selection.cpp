#include <doctest.h>

#include <random>
#include <sstream>

#include "lnayield/config.hpp"
#include "lnayield/error.hpp"
#include "lnayield/selection.hpp"

using namespace lnayield;

namespace {

const Dataset& paper() {
  static const Dataset d = builtin_dataset("paper");
  return d;
}

// Three modes with the given gains; NF/IIP3 comfortably inside the budget.
DieSample die_with_gains(double hg, double mg, double lg) {
  DieSample d;
  d.factors = {0.0, 0.0, 0.0};
  d.modes = {{hg, 2.5, 2.0, -20.0, -12.0}, {mg, 2.5, 2.0, -20.0, -12.0}, {lg, 2.5, 2.0, -20.0, -12.0}};
  return d;
}

}  // namespace

TEST_CASE("best gain picks the mode nearest the target") {
  CHECK(select_best_gain(die_with_gains(11.9, 10.5, 9.5), 10.5) == PlnaMode::MG_LP);
  CHECK(select_best_gain(die_with_gains(10.6, 9.2, 8.2), 10.5) == PlnaMode::HG);
  CHECK(select_best_gain(die_with_gains(13.0, 11.6, 10.6), 10.5) == PlnaMode::LG);
}

TEST_CASE("best gain ties go to the lower-power mode, then HG") {
  CHECK(select_best_gain(die_with_gains(11.0, 10.0, 9.0), 10.5) == PlnaMode::MG_LP);  // MG ties HG
  CHECK(select_best_gain(die_with_gains(11.0, 12.0, 10.0), 10.5) == PlnaMode::HG);   // HG ties LG
}

TEST_CASE("best receiver tiers") {
  const auto& d = paper();
  const auto lim = d.stage2_limits();
  // All modes pass: MG-LP for power.
  CHECK(select_best_receiver(die_with_gains(11.9, 10.5, 9.5), lim, d.receiver_targets) == PlnaMode::MG_LP);

  // MG-LP gain too low for the NF budget; HG lifts it.
  auto die = die_with_gains(11.4, 9.9, 8.9);
  die.modes[1].nf_db = 3.0;
  CHECK_FALSE(classify_receiver(die.modes[1], lim, d.receiver_targets).nf_pass);
  CHECK(select_best_receiver(die, lim, d.receiver_targets) == PlnaMode::HG);

  // No mode passes both; NF-only tier wins over the score fallback.
  auto nf_only = die_with_gains(12.5, 11.5, 10.5);
  for (auto& q : nf_only.modes) q.iip3_dbm = -12.0;
  const auto m = select_best_receiver(nf_only, lim, d.receiver_targets);
  CHECK(classify_receiver(nf_only.modes[mode_index(m)], lim, d.receiver_targets).nf_pass);
  CHECK(m == PlnaMode::MG_LP);

  // Nothing passes NF: highest score wins; a custom score is honoured.
  auto hopeless = die_with_gains(9.0, 8.0, 7.0);
  for (auto& q : hopeless.modes) q.nf_db = 4.0;
  const ScoreFn prefer_lg = [](const RfQuantities& q, const StageTwoLimits&, const ReceiverTargets&) {
    return -q.gain_db;
  };
  CHECK(select_best_receiver(hopeless, lim, d.receiver_targets, 10.5, prefer_lg) == PlnaMode::LG);
  const auto dr = select_best_receiver(hopeless, lim, d.receiver_targets);
  for (auto k : kAllPlnaModes)
    CHECK(dynamic_range_score(hopeless.modes[mode_index(dr)], lim, d.receiver_targets) >=
          dynamic_range_score(hopeless.modes[mode_index(k)], lim, d.receiver_targets));
}

TEST_CASE("best receiver dominates every fixed mode, die by die") {
  const auto& d = paper();
  const auto lim = d.stage2_limits();
  const auto& plna = *d.plna;
  // Exaggerated spreads so every tier gets exercised.
  auto model = plna.variability;
  for (auto& mode : model.modes) mode.row(RfParameter::NoiseFigure).sigma = 0.4;
  rebuild_loadings(model);
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    for (const auto& m : {plna.variability, model}) {
      const auto pop = generate_population(m, "p", 20000, seed);
      const auto br = apply_strategy(pop, SelectionStrategy::best_receiver(), lim, d.receiver_targets, plna);
      for (const auto& o : br.outcomes)
        for (const auto& f : o.per_mode)
          if (f.both()) REQUIRE(o.flags.both());
      for (auto fm : kAllPlnaModes) {
        const auto fixed = apply_strategy(pop, SelectionStrategy::fixed(fm), lim, d.receiver_targets, plna);
        CHECK(br.report.compliant >= fixed.report.compliant);
      }
    }
  }
}

TEST_CASE("report fields are consistent with the outcomes") {
  const auto& d = paper();
  const auto& plna = *d.plna;
  const auto pop = generate_population(plna.variability, plna.id, 5000, 12);
  for (const auto& s : {SelectionStrategy::best_gain(), SelectionStrategy::best_receiver(),
                        SelectionStrategy::fixed(PlnaMode::LG)}) {
    const auto run = apply_strategy(pop, s, d.stage2_limits(), d.receiver_targets, plna);
    double occ = 0.0, power = 0.0;
    std::size_t both = 0;
    for (double o : run.report.occupancy) occ += o;
    for (const auto& o : run.outcomes) {
      power += o.power_mw;
      both += o.flags.both();
    }
    CHECK(occ == doctest::Approx(1.0));
    CHECK(run.report.average_power_mw == doctest::Approx(power / 5000.0));
    CHECK(run.report.compliant == doctest::Approx(both / 5000.0));
    CHECK(run.report.average_power_mw >= plna.mode_power_mw(PlnaMode::MG_LP) - 1e-12);
    CHECK(run.report.average_power_mw <= plna.mode_power_mw(PlnaMode::HG) + 1e-12);
  }
  const auto fixed = apply_strategy(pop, SelectionStrategy::fixed(PlnaMode::HG), d.stage2_limits(), d.receiver_targets, plna);
  CHECK(fixed.report.occupancy[mode_index(PlnaMode::HG)] == 1.0);
  CHECK(fixed.report.average_power_mw == doctest::Approx(0.672));
}

TEST_CASE("strategy names and errors") {
  for (const char* n : {"best-gain", "best-receiver", "fixed-HG", "fixed-MG-LP", "fixed-LG"})
    CHECK(strategy_from_name(n).name() == n);
  CHECK_THROWS_AS(strategy_from_name("greedy"), ValidationError);
  CHECK_THROWS_AS(strategy_from_name("fixed-XX"), ValidationError);

  const auto& d = paper();
  const auto single = generate_population(d.traditional[0].variability, "t", 10, 1);
  CHECK_THROWS_AS(apply_strategy(single, SelectionStrategy::best_gain(), d.stage2_limits(), d.receiver_targets, *d.plna),
                  ValidationError);
  CHECK_THROWS_AS(select_best_gain(single.dies[0], 10.5), ValidationError);
}

TEST_CASE("outcome CSV layout") {
  SelectionOutcome o;
  o.die_index = 4;
  o.chosen = PlnaMode::HG;
  o.flags = {true, false};
  o.power_mw = 0.672;
  std::ostringstream ss;
  write_outcomes_csv({o}, ss);
  CHECK(ss.str() == "die_index,chosen_mode,nf_pass,iip3_pass,power_mw\n4,HG,1,0,0.672\n");
}
