#include "lnayield/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lnayield/error.hpp"

namespace lnayield {
namespace {

constexpr const char* kModule = "statmodel";

double objective_of(std::span<const double> simulated, std::span<const CalibrationTarget> targets) {
  double sum = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double d = simulated[i] - targets[i].value;
    sum += targets[i].weight * d * d;
  }
  return sum;
}

}  // namespace

std::string FreeParameter::name(const LatentDieModel& model) const {
  std::string p(parameter_name(parameter));
  switch (kind) {
    case Kind::Sigma:
      return mode ? "sigma[" + model.modes.at(*mode).label + "," + p + "]" : "sigma_scale[" + p + "]";
    case Kind::CrossModeCorrelation: return "cross_mode[" + p + "]";
    case Kind::GainLinearityCoupling: return "gain_linearity";
    case Kind::GainNoiseCoupling: return "gain_noise";
  }
  return "?";
}

double read_parameter(const LatentDieModel& model, const FreeParameter& p) {
  switch (p.kind) {
    case FreeParameter::Kind::Sigma: return p.mode ? model.row(*p.mode, p.parameter).sigma : 1.0;
    case FreeParameter::Kind::CrossModeCorrelation: {
      auto v = model.correlation.cross_mode(p.parameter);
      if (!v) throw ValidationError(kModule, "no cross-mode correlation for " + std::string(parameter_name(p.parameter)));
      return *v;
    }
    case FreeParameter::Kind::GainLinearityCoupling: return model.correlation.gain_linearity;
    case FreeParameter::Kind::GainNoiseCoupling: return model.correlation.gain_noise;
  }
  return 0.0;
}

LatentDieModel apply_parameters(const LatentDieModel& base, std::span<const FreeParameter> params,
                                std::span<const double> values) {
  if (params.size() != values.size()) throw ValidationError(kModule, "parameter/value count mismatch");
  LatentDieModel model = base;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& p = params[i];
    const double v = values[i];
    switch (p.kind) {
      case FreeParameter::Kind::Sigma:
        if (p.mode) {
          model.row(*p.mode, p.parameter).sigma = v;
        } else {
          for (std::size_t m = 0; m < model.mode_count(); ++m)
            model.row(m, p.parameter).sigma = base.row(m, p.parameter).sigma * v;
        }
        break;
      case FreeParameter::Kind::CrossModeCorrelation: model.correlation.set_cross_mode(p.parameter, v); break;
      case FreeParameter::Kind::GainLinearityCoupling: model.correlation.gain_linearity = v; break;
      case FreeParameter::Kind::GainNoiseCoupling: model.correlation.gain_noise = v; break;
    }
  }
  rebuild_loadings(model);
  return model;
}

CalibrationResult calibrate(const LatentDieModel& model, std::span<const FreeParameter> params,
                            std::span<const CalibrationTarget> targets, const StatisticsFn& statistics,
                            const CalibrationOptions& options) {
  if (options.evaluation_n < 10000) throw ValidationError(kModule, "calibration needs evaluation_n >= 10^4");
  if (targets.empty()) throw ValidationError(kModule, "calibration needs at least one target");
  for (const auto& p : params)
    if (!(p.lower <= p.upper) || !(p.step > 0.0)) throw ValidationError(kModule, "bad free-parameter bounds or step");

  std::size_t evaluations = 0;
  auto evaluate = [&](const LatentDieModel& m) {
    ++evaluations;
    auto sim = statistics(m, options.evaluation_n, options.evaluation_seed);
    if (sim.size() != targets.size()) throw ValidationError(kModule, "statistics function returned wrong count");
    return sim;
  };

  std::vector<double> x;
  for (const auto& p : params) x.push_back(std::clamp(read_parameter(model, p), p.lower, p.upper));
  LatentDieModel best_model = apply_parameters(model, params, x);
  std::vector<double> best_sim = evaluate(best_model);
  double best = objective_of(best_sim, targets);

  CalibrationResult result;
  result.initial_objective = best;

  std::vector<double> step;
  for (const auto& p : params) step.push_back(p.step);
  auto converged = [&] {
    for (std::size_t i = 0; i < params.size(); ++i)
      if (step[i] >= params[i].step * options.min_step_ratio) return false;
    return true;
  };

  while (best > options.tolerance && !params.empty() && !converged() && evaluations < options.max_evaluations) {
    bool moved = false;
    for (std::size_t i = 0; i < params.size() && evaluations < options.max_evaluations; ++i) {
      for (double dir : {+1.0, -1.0}) {
        auto trial = x;
        trial[i] = std::clamp(x[i] + dir * step[i], params[i].lower, params[i].upper);
        if (trial[i] == x[i]) continue;
        LatentDieModel candidate = apply_parameters(model, params, trial);
        auto sim = evaluate(candidate);
        const double obj = objective_of(sim, targets);
        if (obj < best) {
          best = obj;
          x = std::move(trial);
          best_model = std::move(candidate);
          best_sim = std::move(sim);
          moved = true;
          break;
        }
      }
    }
    if (!moved)
      for (auto& s : step) s *= 0.5;
  }

  result.model = std::move(best_model);
  result.parameter_values = x;
  result.simulated = best_sim;
  for (std::size_t i = 0; i < targets.size(); ++i) result.residuals.push_back(best_sim[i] - targets[i].value);
  result.objective = best;
  result.evaluations = evaluations;
  result.improved = best < result.initial_objective;

  std::ostringstream diag;
  if (result.initial_objective <= options.tolerance)
    diag << "start point already within tolerance; model unchanged";
  else if (!result.improved)
    diag << "no improving move found from the start point; returning the input model";
  else
    diag << "objective " << result.initial_objective << " -> " << result.objective;
  if (evaluations >= options.max_evaluations) diag << " (evaluation budget exhausted)";
  result.diagnostic = diag.str();
  return result;
}

}  // namespace lnayield
