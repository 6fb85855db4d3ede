#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lnayield/statmodel.hpp"

namespace lnayield {

/// One knob of the latent model that the calibration search may move.
struct FreeParameter {
  enum class Kind {
    Sigma,                 // sigma of (mode, parameter); with no mode: a common scale on all modes
    CrossModeCorrelation,  // CorrelationSettings::*_cross_mode of `parameter`
    GainLinearityCoupling,
    GainNoiseCoupling,
  };

  Kind kind = Kind::Sigma;
  RfParameter parameter = RfParameter::Gain;
  std::optional<std::size_t> mode;
  double lower = 0.0;
  double upper = 1.0;
  double step = 0.05;

  std::string name(const LatentDieModel& model) const;
};

struct CalibrationTarget {
  std::string name;
  double value = 0.0;
  double weight = 1.0;
};

/// Simulated statistics for a candidate model, one per target, same order.
/// Must be a deterministic function of (model, n, seed).
using StatisticsFn = std::function<std::vector<double>(const LatentDieModel&, std::size_t n, std::uint64_t seed)>;

struct CalibrationOptions {
  std::size_t evaluation_n = 20000;  // at least 10^4
  std::uint64_t evaluation_seed = 20140101;
  std::size_t max_evaluations = 400;
  double tolerance = 0.0;       // stop once the objective is at or below this
  double min_step_ratio = 1.0 / 32.0;  // stop when each step shrinks below ratio * initial step
};

struct CalibrationResult {
  LatentDieModel model;
  std::vector<double> parameter_values;
  std::vector<double> simulated;
  std::vector<double> residuals;  // simulated - target
  double initial_objective = 0.0;
  double objective = 0.0;
  std::size_t evaluations = 0;
  bool improved = false;
  std::string diagnostic;
};

/// Current value of a free parameter in `model` (Sigma with no mode reads 1.0,
/// the identity scale).
double read_parameter(const LatentDieModel& model, const FreeParameter& p);

/// Returns `base` with the free parameters set to `values`, loadings rebuilt.
LatentDieModel apply_parameters(const LatentDieModel& base, std::span<const FreeParameter> params,
                                std::span<const double> values);

/// Coordinate descent on the weighted sum of squared (simulated - target),
/// using common random numbers across evaluations. Never throws for lack of
/// progress: a search that cannot improve returns the input model with
/// `improved == false` and a diagnostic.
CalibrationResult calibrate(const LatentDieModel& model, std::span<const FreeParameter> params,
                            std::span<const CalibrationTarget> targets, const StatisticsFn& statistics,
                            const CalibrationOptions& options = {});

}  // namespace lnayield
