#pragma once

#include <array>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "lnayield/budget.hpp"
#include "lnayield/designs.hpp"
#include "lnayield/montecarlo.hpp"

namespace lnayield {

/// Fallback ranking for Best Receiver when no mode meets the NF limit.
using ScoreFn = std::function<double(const RfQuantities&, const StageTwoLimits&, const ReceiverTargets&)>;

/// IIP3_rx (dBm) - NF_rx (dB) through the cascade equations. Bandwidth and SNR
/// terms of a spurious-free dynamic range are the same for every mode and drop
/// out of the argmax.
double dynamic_range_score(const RfQuantities& q, const StageTwoLimits& limits, const ReceiverTargets& targets);

enum class StrategyKind { BestGain, BestReceiver, FixedMode };

struct SelectionStrategy {
  StrategyKind kind = StrategyKind::BestGain;
  double target_gain_db = 10.5;
  PlnaMode fixed_mode = PlnaMode::MG_LP;
  ScoreFn score;  // empty: dynamic_range_score

  static SelectionStrategy best_gain(double target_db = 10.5);
  static SelectionStrategy best_receiver(double target_db = 10.5);
  static SelectionStrategy fixed(PlnaMode m);

  /// "best-gain", "best-receiver", "fixed-HG", "fixed-MG-LP", "fixed-LG".
  std::string name() const;
  void validate() const;
};

SelectionStrategy strategy_from_name(std::string_view name, double target_db = 10.5);

/// Mode with the gain closest to target. Ties go to the lower-power mode,
/// then HG over LG.
PlnaMode select_best_gain(const DieSample& die, double target_db);

/// First tier: modes meeting both receiver limits. Second: modes meeting the
/// NF limit. Otherwise the mode with the highest `score`. Within a tier the
/// lower-power mode wins, then the smaller |gain - target|, then HG over LG.
PlnaMode select_best_receiver(const DieSample& die, const StageTwoLimits& limits, const ReceiverTargets& targets,
                              double target_db = 10.5, const ScoreFn& score = {});

struct SelectionOutcome {
  std::size_t die_index = 0;
  PlnaMode chosen = PlnaMode::MG_LP;
  ComplianceFlags flags;
  double power_mw = 0.0;
  std::array<ComplianceFlags, kPlnaModeCount> per_mode{};
};

struct SelectionReport {
  std::string strategy;
  std::size_t n = 0;
  std::array<double, kPlnaModeCount> occupancy{};  // indexed by PlnaMode
  double compliant = 0.0;
  double nf_fail = 0.0;
  double iip3_fail = 0.0;
  double average_power_mw = 0.0;
  SummaryStats post;  // parameters of the chosen mode of each die
};

struct SelectionRun {
  SelectionReport report;
  std::vector<SelectionOutcome> outcomes;
};

/// Applies `strategy` to every die. Throws ValidationError unless the
/// population has exactly the design's three modes.
SelectionRun apply_strategy(const DiePopulation& pop, const SelectionStrategy& strategy, const StageTwoLimits& limits,
                            const ReceiverTargets& targets, const PlnaDesign& design);

/// Columns: die_index, chosen_mode, nf_pass, iip3_pass, power_mw.
void write_outcomes_csv(const std::vector<SelectionOutcome>& outcomes, std::ostream& out);

}  // namespace lnayield
