#include "lnayield/selection.hpp"

#include <cmath>
#include <optional>

#include "lnayield/error.hpp"
#include "lnayield/format.hpp"

namespace lnayield {
namespace {

constexpr const char* kModule = "selection";

// MG-LP draws the least current; HG and LG share theirs (PlnaDesign invariant).
int power_rank(PlnaMode m) { return m == PlnaMode::MG_LP ? 0 : 1; }

void require_three_modes(const DieSample& die) {
  if (die.modes.size() != kPlnaModeCount) throw ValidationError(kModule, "die must carry three PLNA modes");
}

// True when a is preferred over b on (power, |gain - target|, HG before LG).
bool preferred(PlnaMode a, PlnaMode b, const DieSample& die, double target_db) {
  if (power_rank(a) != power_rank(b)) return power_rank(a) < power_rank(b);
  const double da = std::abs(die.modes[mode_index(a)].gain_db - target_db);
  const double db = std::abs(die.modes[mode_index(b)].gain_db - target_db);
  if (da != db) return da < db;
  return mode_index(a) < mode_index(b);
}

}  // namespace

double dynamic_range_score(const RfQuantities& q, const StageTwoLimits& limits, const ReceiverTargets&) {
  const auto rx = receiver_figures(q, limits);
  return rx.iip3_rx_dbm() - rx.nf_rx_db();
}

SelectionStrategy SelectionStrategy::best_gain(double target_db) {
  return {StrategyKind::BestGain, target_db, PlnaMode::MG_LP, {}};
}

SelectionStrategy SelectionStrategy::best_receiver(double target_db) {
  return {StrategyKind::BestReceiver, target_db, PlnaMode::MG_LP, {}};
}

SelectionStrategy SelectionStrategy::fixed(PlnaMode m) { return {StrategyKind::FixedMode, 10.5, m, {}}; }

std::string SelectionStrategy::name() const {
  switch (kind) {
    case StrategyKind::BestGain: return "best-gain";
    case StrategyKind::BestReceiver: return "best-receiver";
    case StrategyKind::FixedMode: return "fixed-" + std::string(mode_name(fixed_mode));
  }
  return "?";
}

void SelectionStrategy::validate() const {
  if (!std::isfinite(target_gain_db)) throw ValidationError(kModule, "target gain must be finite");
}

SelectionStrategy strategy_from_name(std::string_view name, double target_db) {
  if (name == "best-gain") return SelectionStrategy::best_gain(target_db);
  if (name == "best-receiver") return SelectionStrategy::best_receiver(target_db);
  if (name.starts_with("fixed-")) return SelectionStrategy::fixed(mode_from_name(name.substr(6)));
  throw ValidationError(kModule, "unknown strategy '" + std::string(name) +
                                     "' (expected best-gain, best-receiver, fixed-HG, fixed-MG-LP, fixed-LG)");
}

PlnaMode select_best_gain(const DieSample& die, double target_db) {
  require_three_modes(die);
  // Scanning in power order with a strict comparison keeps the cheaper mode on ties.
  constexpr std::array<PlnaMode, 3> order{PlnaMode::MG_LP, PlnaMode::HG, PlnaMode::LG};
  PlnaMode best = order[0];
  double best_dev = std::abs(die.modes[mode_index(best)].gain_db - target_db);
  for (std::size_t i = 1; i < order.size(); ++i) {
    const double dev = std::abs(die.modes[mode_index(order[i])].gain_db - target_db);
    if (dev < best_dev) {
      best = order[i];
      best_dev = dev;
    }
  }
  return best;
}

PlnaMode select_best_receiver(const DieSample& die, const StageTwoLimits& limits, const ReceiverTargets& targets,
                              double target_db, const ScoreFn& score) {
  require_three_modes(die);
  std::array<ComplianceFlags, kPlnaModeCount> flags;
  for (auto m : kAllPlnaModes) flags[mode_index(m)] = classify_receiver(die.modes[mode_index(m)], limits, targets);

  auto pick = [&](auto qualifies) -> std::optional<PlnaMode> {
    std::optional<PlnaMode> best;
    for (auto m : kAllPlnaModes)
      if (qualifies(m) && (!best || preferred(m, *best, die, target_db))) best = m;
    return best;
  };
  if (auto m = pick([&](PlnaMode m) { return flags[mode_index(m)].both(); })) return *m;
  if (auto m = pick([&](PlnaMode m) { return flags[mode_index(m)].nf_pass; })) return *m;

  const ScoreFn& fn = score ? score : ScoreFn(dynamic_range_score);
  std::optional<PlnaMode> best;
  double best_score = 0.0;
  for (auto m : kAllPlnaModes) {
    const double s = fn(die.modes[mode_index(m)], limits, targets);
    if (!best || s > best_score || (s == best_score && preferred(m, *best, die, target_db))) {
      best = m;
      best_score = s;
    }
  }
  return *best;
}

SelectionRun apply_strategy(const DiePopulation& pop, const SelectionStrategy& strategy, const StageTwoLimits& limits,
                            const ReceiverTargets& targets, const PlnaDesign& design) {
  strategy.validate();
  if (pop.dies.empty()) throw ValidationError(kModule, "population is empty");
  if (pop.mode_count() != kPlnaModeCount || design.variability.mode_count() != kPlnaModeCount)
    throw ValidationError(kModule, "population/design mode-count mismatch: strategies need three PLNA modes");

  SelectionRun run;
  run.outcomes.reserve(pop.size());
  std::array<std::size_t, kPlnaModeCount> occupancy{};
  std::size_t compliant = 0, nf_fail = 0, iip3_fail = 0;
  std::vector<RfQuantities> chosen_values;
  chosen_values.reserve(pop.size());

  for (std::size_t i = 0; i < pop.size(); ++i) {
    const DieSample& die = pop.dies[i];
    if (die.modes.size() != kPlnaModeCount) throw ValidationError(kModule, "die with wrong mode count");
    SelectionOutcome out;
    out.die_index = i;
    for (auto m : kAllPlnaModes)
      out.per_mode[mode_index(m)] = classify_receiver(die.modes[mode_index(m)], limits, targets);
    switch (strategy.kind) {
      case StrategyKind::BestGain: out.chosen = select_best_gain(die, strategy.target_gain_db); break;
      case StrategyKind::BestReceiver:
        out.chosen = select_best_receiver(die, limits, targets, strategy.target_gain_db, strategy.score);
        break;
      case StrategyKind::FixedMode: out.chosen = strategy.fixed_mode; break;
    }
    out.flags = out.per_mode[mode_index(out.chosen)];
    out.power_mw = design.mode_power_mw(out.chosen);
    ++occupancy[mode_index(out.chosen)];
    compliant += out.flags.both();
    nf_fail += !out.flags.nf_pass;
    iip3_fail += !out.flags.iip3_pass;
    chosen_values.push_back(die.modes[mode_index(out.chosen)]);
    run.outcomes.push_back(out);
  }

  auto& r = run.report;
  const double n = static_cast<double>(pop.size());
  r.strategy = strategy.name();
  r.n = pop.size();
  double power_sum = 0.0;
  for (auto m : kAllPlnaModes) {
    r.occupancy[mode_index(m)] = occupancy[mode_index(m)] / n;
    power_sum += occupancy[mode_index(m)] * design.mode_power_mw(m);
  }
  r.compliant = compliant / n;
  r.nf_fail = nf_fail / n;
  r.iip3_fail = iip3_fail / n;
  r.average_power_mw = power_sum / n;
  r.post = summarize_values(chosen_values);
  return run;
}

void write_outcomes_csv(const std::vector<SelectionOutcome>& outcomes, std::ostream& out) {
  out << "die_index,chosen_mode,nf_pass,iip3_pass,power_mw\n";
  for (const auto& o : outcomes)
    out << o.die_index << ',' << mode_name(o.chosen) << ',' << (o.flags.nf_pass ? 1 : 0) << ','
        << (o.flags.iip3_pass ? 1 : 0) << ',' << format_significant(o.power_mw, kCsvDigits) << '\n';
}

}  // namespace lnayield
