#include "lnayield/statmodel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lnayield/error.hpp"
#include "lnayield/json_util.hpp"
#include "lnayield/normal.hpp"
#include "lnayield/philox.hpp"

namespace lnayield {
namespace {

constexpr const char* kModule = "statmodel";

void check_probability(double p) {
  if (!(p > 0.0 && p < 1.0)) throw ValidationError(kModule, "quantile probability must lie in (0, 1)");
  if (p == 0.5) throw ValidationError(kModule, "quantile probability 0.5 carries no dispersion information");
}

}  // namespace

void MarginalSpec::validate() const {
  if (!std::isfinite(mean)) throw ValidationError(kModule, "marginal mean must be finite");
  if (sigma && !(*sigma >= 0.0 && std::isfinite(*sigma))) throw ValidationError(kModule, "sigma must be >= 0");
  for (const auto& q : quantiles) check_probability(q.probability);
  if (lower_bound && upper_bound && !(*lower_bound < *upper_bound))
    throw ValidationError(kModule, "marginal bounds must satisfy lower < upper");
}

double fit_sigma_from_quantile(double mean, double q_value, double q_prob) {
  check_probability(q_prob);
  if (!std::isfinite(mean) || !std::isfinite(q_value)) throw ValidationError(kModule, "non-finite quantile input");
  if (q_value == mean) throw ValidationError(kModule, "quantile value equals the mean");
  if ((q_value < mean) != (q_prob < 0.5))
    throw ValidationError(kModule, "quantile value and probability lie on opposite sides of the mean");
  return (q_value - mean) / inverse_normal_cdf(q_prob);
}

SigmaFit fit_sigma(double mean, std::span<const QuantileConstraint> constraints) {
  if (constraints.empty()) throw ValidationError(kModule, "fit_sigma needs at least one quantile constraint");
  SigmaFit fit;
  for (const auto& c : constraints) fit.solutions.push_back(fit_sigma_from_quantile(mean, c.value, c.probability));
  fit.sigma = std::accumulate(fit.solutions.begin(), fit.solutions.end(), 0.0) / fit.solutions.size();
  const auto [lo, hi] = std::minmax_element(fit.solutions.begin(), fit.solutions.end());
  fit.relative_spread = (*hi - *lo) / fit.sigma;
  return fit;
}

LocationScaleFit fit_location_scale(double reported_mean, double half_width,
                                    std::span<const QuantileConstraint> constraints) {
  if (constraints.size() < 2) throw ValidationError(kModule, "location-scale fit needs two or more constraints");
  if (!(half_width >= 0.0)) throw ValidationError(kModule, "rounding half-width must be >= 0");
  std::vector<double> z;
  double z_mean = 0.0, q_mean = 0.0;
  for (const auto& c : constraints) {
    check_probability(c.probability);
    z.push_back(inverse_normal_cdf(c.probability));
    z_mean += z.back();
    q_mean += c.value;
  }
  z_mean /= z.size();
  q_mean /= z.size();
  double szz = 0.0, szq = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    szz += (z[i] - z_mean) * (z[i] - z_mean);
    szq += (z[i] - z_mean) * (constraints[i].value - q_mean);
  }
  if (szz == 0.0) throw ValidationError(kModule, "location-scale fit needs constraints at distinct probabilities");
  LocationScaleFit fit;
  fit.sigma = szq / szz;
  if (!(fit.sigma > 0.0)) throw ValidationError(kModule, "tail constraints imply a non-positive sigma");
  fit.mean = q_mean - fit.sigma * z_mean;

  const double lo = reported_mean - half_width;
  const double hi = reported_mean + half_width;
  if (fit.mean < lo || fit.mean > hi) {
    fit.mean = std::clamp(fit.mean, lo, hi);
    fit.mean_clamped = true;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      num += z[i] * (constraints[i].value - fit.mean);
      den += z[i] * z[i];
    }
    fit.sigma = num / den;
    if (!(fit.sigma > 0.0)) throw ValidationError(kModule, "tail constraints imply a non-positive sigma");
  }
  return fit;
}

Marginal resolve_marginal(const MarginalSpec& spec) {
  spec.validate();
  Marginal m{spec.mean, 0.0, spec.lower_bound, spec.upper_bound};
  if (spec.sigma)
    m.sigma = *spec.sigma;
  else if (!spec.quantiles.empty())
    m.sigma = fit_sigma(spec.mean, spec.quantiles).sigma;
  return m;
}

double expected_extreme_z(std::size_t n) {
  if (n == 0) throw ValidationError(kModule, "extreme statistic needs n >= 1");
  const double nn = static_cast<double>(n);
  return inverse_normal_cdf((nn - 0.375) / (nn + 0.25));
}

double sigma_from_extreme(double mean, double extreme, std::size_t n) {
  if (n < 2) throw ValidationError(kModule, "extreme-value sigma needs n >= 2");
  if (extreme == mean) throw ValidationError(kModule, "extreme value equals the mean");
  return std::abs(extreme - mean) / expected_extreme_z(n);
}

double sigma_bound_for_zero_violations(double mean, double limit, double max_rate) {
  if (limit == mean) throw ValidationError(kModule, "limit equals the mean");
  return std::abs(limit - mean) / -inverse_normal_cdf(max_rate);
}

// ---------------------------------------------------------------------------

double ParameterRow::total_variance() const {
  double v = idio_sigma * idio_sigma;
  for (double l : loadings) v += l * l;
  return v;
}

std::optional<double> CorrelationSettings::cross_mode(RfParameter p) const {
  switch (p) {
    case RfParameter::Gain: return gain_cross_mode;
    case RfParameter::NoiseFigure: return nf_cross_mode;
    case RfParameter::Iip3: return iip3_cross_mode;
    default: return std::nullopt;
  }
}

void CorrelationSettings::set_cross_mode(RfParameter p, double v) {
  switch (p) {
    case RfParameter::Gain: gain_cross_mode = v; break;
    case RfParameter::NoiseFigure: nf_cross_mode = v; break;
    case RfParameter::Iip3: iip3_cross_mode = v; break;
    default: throw ValidationError(kModule, "S11/S22 have no cross-mode factor");
  }
}

void CorrelationSettings::validate() const {
  for (double v : {gain_cross_mode, nf_cross_mode, iip3_cross_mode})
    if (!(v >= 0.0 && v <= 1.0)) throw ValidationError(kModule, "cross-mode correlation must lie in [0, 1]");
  for (double v : {gain_linearity, gain_noise})
    if (!(v >= -1.0 && v <= 1.0)) throw ValidationError(kModule, "factor coupling must lie in [-1, 1]");
}

void LatentDieModel::validate() const {
  correlation.validate();
  if (modes.empty()) throw ValidationError(kModule, "latent model needs at least one mode");
  for (const auto& mode : modes) {
    for (auto p : kAllRfParameters) {
      const auto& r = mode.row(p);
      const std::string where = "mode '" + mode.label + "' " + std::string(parameter_name(p));
      if (!std::isfinite(r.mean)) throw ValidationError(kModule, where + ": non-finite mean");
      if (!(r.sigma >= 0.0) || !std::isfinite(r.sigma)) throw ValidationError(kModule, where + ": sigma must be >= 0");
      if (!(r.idio_sigma >= 0.0)) throw ValidationError(kModule, where + ": idio_sigma must be >= 0");
      if (r.loadings.size() != factor_count)
        throw ValidationError(kModule, where + ": loading count differs from factor_count");
      const double target = r.sigma * r.sigma;
      if (std::abs(r.total_variance() - target) > 1e-9 * std::max(1.0, target))
        throw ValidationError(kModule, where + ": loadings^2 + idio^2 must equal sigma^2");
      if (r.lower_bound && r.upper_bound && !(*r.lower_bound < *r.upper_bound))
        throw ValidationError(kModule, where + ": bounds must satisfy lower < upper");
    }
  }
}

void rebuild_loadings(LatentDieModel& model) {
  model.correlation.validate();
  if (model.factor_count < kDefaultFactorCount)
    throw ValidationError(kModule, "rebuilding loadings needs at least 3 latent factors");
  const auto& c = model.correlation;
  const auto g = static_cast<std::size_t>(LatentFactor::Gain);
  const auto n = static_cast<std::size_t>(LatentFactor::Noise);
  const auto l = static_cast<std::size_t>(LatentFactor::Linearity);
  for (auto& mode : model.modes) {
    for (auto p : kAllRfParameters) {
      auto& r = mode.row(p);
      r.loadings.assign(model.factor_count, 0.0);
      if (auto share = c.cross_mode(p)) {
        const double shared = r.sigma * std::sqrt(*share);
        switch (p) {
          case RfParameter::Gain:
            r.loadings[g] = shared;
            break;
          case RfParameter::NoiseFigure:
            r.loadings[g] = shared * c.gain_noise;
            r.loadings[n] = shared * std::sqrt(1.0 - c.gain_noise * c.gain_noise);
            break;
          case RfParameter::Iip3:
            r.loadings[g] = shared * c.gain_linearity;
            r.loadings[l] = shared * std::sqrt(1.0 - c.gain_linearity * c.gain_linearity);
            break;
          default:
            break;
        }
      }
      double loaded = 0.0;
      for (double w : r.loadings) loaded += w * w;
      r.idio_sigma = std::sqrt(std::max(0.0, r.sigma * r.sigma - loaded));
    }
  }
}

LatentDieModel build_latent_model(const std::vector<ModeMarginals>& modes, const CorrelationSettings& correlation) {
  LatentDieModel model;
  model.correlation = correlation;
  for (const auto& m : modes) {
    ModeRows rows;
    rows.label = m.label;
    for (auto p : kAllRfParameters) {
      const auto& src = m.marginals[static_cast<std::size_t>(p)];
      auto& r = rows.row(p);
      r.mean = src.mean;
      r.sigma = src.sigma;
      r.lower_bound = src.lower_bound;
      r.upper_bound = src.upper_bound;
    }
    model.modes.push_back(std::move(rows));
  }
  rebuild_loadings(model);
  model.validate();
  return model;
}

double implied_correlation(const LatentDieModel& model, std::size_t mode_a, RfParameter a, std::size_t mode_b,
                           RfParameter b) {
  const auto& ra = model.row(mode_a, a);
  const auto& rb = model.row(mode_b, b);
  if (ra.sigma == 0.0 || rb.sigma == 0.0) return 0.0;
  double cov = 0.0;
  for (std::size_t k = 0; k < model.factor_count; ++k) cov += ra.loadings[k] * rb.loadings[k];
  if (mode_a == mode_b && a == b) cov += ra.idio_sigma * rb.idio_sigma;
  return cov / (ra.sigma * rb.sigma);
}

DieSample sample_die(const LatentDieModel& model, std::uint64_t seed, std::uint64_t index) {
  CounterNormalStream stream(seed, index);
  DieSample die;
  die.factors.resize(model.factor_count);
  for (auto& f : die.factors) f = stream.next();
  die.modes.resize(model.mode_count());
  for (std::size_t m = 0; m < model.mode_count(); ++m) {
    for (auto p : kAllRfParameters) {
      const auto& r = model.modes[m].row(p);
      double v = r.mean;
      for (std::size_t k = 0; k < model.factor_count; ++k) v += r.loadings[k] * die.factors[k];
      v += r.idio_sigma * stream.next();
      if (r.lower_bound) v = std::max(v, *r.lower_bound);
      if (r.upper_bound) v = std::min(v, *r.upper_bound);
      die.modes[m].set(p, v);
    }
  }
  return die;
}

// ---------------------------------------------------------------------------
// JSON

nlohmann::json to_json(const CorrelationSettings& c) {
  return {{"gain_cross_mode", c.gain_cross_mode}, {"nf_cross_mode", c.nf_cross_mode},
          {"iip3_cross_mode", c.iip3_cross_mode}, {"gain_linearity", c.gain_linearity},
          {"gain_noise", c.gain_noise}};
}

CorrelationSettings correlation_from_json(const nlohmann::json& j, const std::string& path) {
  namespace ju = json_util;
  CorrelationSettings c;
  c.gain_cross_mode = ju::number(j, "gain_cross_mode", path, kModule);
  c.nf_cross_mode = ju::number(j, "nf_cross_mode", path, kModule);
  c.iip3_cross_mode = ju::number(j, "iip3_cross_mode", path, kModule);
  c.gain_linearity = ju::number(j, "gain_linearity", path, kModule);
  c.gain_noise = ju::number(j, "gain_noise", path, kModule);
  try {
    c.validate();
  } catch (const ValidationError& e) {
    ju::fail(kModule, path, e.what());
  }
  return c;
}

nlohmann::json to_json(const LatentDieModel& model) {
  nlohmann::json modes = nlohmann::json::array();
  for (const auto& mode : model.modes) {
    nlohmann::json params = nlohmann::json::object();
    for (auto p : kAllRfParameters) {
      const auto& r = mode.row(p);
      nlohmann::json row = {{"mean", r.mean}, {"sigma", r.sigma}, {"loadings", r.loadings}, {"idio_sigma", r.idio_sigma}};
      if (r.lower_bound) row["lower_bound"] = *r.lower_bound;
      if (r.upper_bound) row["upper_bound"] = *r.upper_bound;
      params[std::string(parameter_name(p))] = std::move(row);
    }
    modes.push_back({{"label", mode.label}, {"parameters", std::move(params)}});
  }
  return {{"schema_version", kModelSchemaVersion},
          {"factor_count", model.factor_count},
          {"correlation", to_json(model.correlation)},
          {"modes", std::move(modes)}};
}

LatentDieModel latent_model_from_json(const nlohmann::json& j, const std::string& path) {
  namespace ju = json_util;
  ju::check_schema_version(j, kModelSchemaVersion, path, kModule);
  LatentDieModel model;
  const auto& fc = ju::require(j, "factor_count", path, kModule);
  if (!fc.is_number_unsigned()) ju::fail(kModule, ju::child(path, "factor_count"), "expected non-negative integer");
  model.factor_count = fc.get<std::size_t>();
  model.correlation = correlation_from_json(ju::object(j, "correlation", path, kModule), ju::child(path, "correlation"));
  const auto& modes = ju::array(j, "modes", path, kModule);
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const std::string mpath = ju::child(ju::child(path, "modes"), i);
    ModeRows rows;
    rows.label = ju::string(modes[i], "label", mpath, kModule);
    const auto& params = ju::object(modes[i], "parameters", mpath, kModule);
    const std::string ppath = ju::child(mpath, "parameters");
    for (auto p : kAllRfParameters) {
      const std::string key(parameter_name(p));
      const auto& rj = ju::object(params, key, ppath, kModule);
      const std::string rpath = ju::child(ppath, key);
      auto& r = rows.row(p);
      r.mean = ju::number(rj, "mean", rpath, kModule);
      r.sigma = ju::number(rj, "sigma", rpath, kModule);
      if (r.sigma < 0.0) ju::fail(kModule, ju::child(rpath, "sigma"), "sigma must be >= 0");
      r.idio_sigma = ju::number(rj, "idio_sigma", rpath, kModule);
      if (r.idio_sigma < 0.0) ju::fail(kModule, ju::child(rpath, "idio_sigma"), "idio_sigma must be >= 0");
      const auto& lj = ju::array(rj, "loadings", rpath, kModule);
      for (std::size_t k = 0; k < lj.size(); ++k) {
        if (!lj[k].is_number()) ju::fail(kModule, ju::child(ju::child(rpath, "loadings"), k), "expected number");
        r.loadings.push_back(lj[k].get<double>());
      }
      r.lower_bound = ju::optional_number(rj, "lower_bound", rpath, kModule);
      r.upper_bound = ju::optional_number(rj, "upper_bound", rpath, kModule);
    }
    model.modes.push_back(std::move(rows));
  }
  try {
    model.validate();
  } catch (const ValidationError& e) {
    ju::fail(kModule, path, e.what());
  }
  return model;
}

}  // namespace lnayield
