#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lnayield/calibrate.hpp"
#include "lnayield/designs.hpp"
#include "lnayield/selection.hpp"

namespace lnayield {

/// A population statistic that calibration can match against a published value.
struct StatisticSpec {
  enum class Kind {
    MarginalMean,          // mean of (mode, parameter)
    FractionBelow,         // P(parameter < threshold) in `mode`
    FractionAbove,         // P(parameter > threshold) in `mode`
    ReceiverCompliant,     // receiver outcome of `mode` used alone
    ReceiverNfFail,
    ReceiverIip3Fail,
    SelectionCompliant,    // receiver outcome after `strategy`
    SelectionNfFail,
    SelectionIip3Fail,
    SelectionAveragePower,
    SelectionGainBlockMin,  // mean over blocks of `block` dies of the minimum selected gain
    SelectionGainBlockMax,
  };

  Kind kind = Kind::MarginalMean;
  std::size_t mode = 0;
  RfParameter parameter = RfParameter::Gain;
  double threshold = 0.0;
  std::string strategy = "best-gain";
  std::size_t block = 1000;

  std::string describe() const;
};

struct StatisticContext {
  StageTwoLimits limits;
  ReceiverTargets targets;
  double selection_target_gain_db = 10.5;
  std::optional<PlnaDesign> plna;  // required by Selection* statistics
};

/// Generates one population from `model` and evaluates every spec on it.
std::vector<double> evaluate_statistics(const LatentDieModel& model, std::size_t n, std::uint64_t seed,
                                        const std::vector<StatisticSpec>& specs, const StatisticContext& ctx);

StatisticsFn make_statistics_fn(std::vector<StatisticSpec> specs, StatisticContext ctx);

struct CalibrationProblem {
  std::vector<FreeParameter> parameters;
  std::vector<StatisticSpec> statistics;
  std::vector<CalibrationTarget> targets;
};

/// Post-selection outcomes of both strategies (compliance, NF-fail,
/// IIP3-fail) plus the 1000-run minimum gain after Best Gain, over the
/// cross-mode correlations, the IIP3 spread, the gain/IIP3 coupling and the
/// per-mode gain spreads.
CalibrationProblem plna_selection_problem();

}  // namespace lnayield
