#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "lnayield/budget.hpp"

namespace lnayield {

/// "A fraction `probability` of dies lies below `value`."
struct QuantileConstraint {
  double value = 0.0;
  double probability = 0.5;

  friend bool operator==(const QuantileConstraint&, const QuantileConstraint&) = default;
};

/// Input to marginal fitting: a mean plus either an explicit sigma or the tail
/// constraints it is recovered from. Bounds, when present, clamp samples.
struct MarginalSpec {
  double mean = 0.0;
  std::optional<double> sigma;
  std::vector<QuantileConstraint> quantiles;
  std::optional<double> lower_bound;
  std::optional<double> upper_bound;

  void validate() const;
};

/// A resolved Gaussian marginal in dB/dBm.
struct Marginal {
  double mean = 0.0;
  double sigma = 0.0;
  std::optional<double> lower_bound;
  std::optional<double> upper_bound;
};

/// sigma = (q_value - mean) / z(q_prob). Throws on q_prob == 0.5, on a
/// probability outside (0, 1), or when q_value sits on the wrong side of the
/// mean for its probability.
double fit_sigma_from_quantile(double mean, double q_value, double q_prob);

struct SigmaFit {
  std::vector<double> solutions;  // one per constraint, same order
  double sigma = 0.0;             // mean of solutions
  double relative_spread = 0.0;   // (max - min) / sigma; a Gaussianity diagnostic
};

SigmaFit fit_sigma(double mean, std::span<const QuantileConstraint> constraints);

/// Joint (mean, sigma) from two or more tail constraints by least squares on
/// value = mean + sigma * z. The mean is then clamped into
/// [reported_mean - half_width, reported_mean + half_width] (the rounding
/// interval of a published mean) and sigma is refitted at the clamped mean.
struct LocationScaleFit {
  double mean = 0.0;
  double sigma = 0.0;
  bool mean_clamped = false;
};

LocationScaleFit fit_location_scale(double reported_mean, double half_width,
                                    std::span<const QuantileConstraint> constraints);

/// Resolves a MarginalSpec: explicit sigma, else the mean of the per-tail fits.
Marginal resolve_marginal(const MarginalSpec& spec);

/// Expected standardized extreme of n Gaussian draws (Blom's plotting position).
double expected_extreme_z(std::size_t n);

/// sigma implied by treating `extreme` as the sample min (or max) of n draws.
double sigma_from_extreme(double mean, double extreme, std::size_t n);

/// Largest sigma that keeps P(beyond limit) under max_rate. Used where a
/// published violation count is zero.
double sigma_bound_for_zero_violations(double mean, double limit, double max_rate = 5e-4);

// ---------------------------------------------------------------------------
// Latent-factor die model

/// Die-level factors shared by every mode of a die.
enum class LatentFactor : std::size_t { Gain = 0, Noise = 1, Linearity = 2 };
inline constexpr std::size_t kDefaultFactorCount = 3;

struct ParameterRow {
  double mean = 0.0;
  double sigma = 0.0;
  std::vector<double> loadings;  // one weight per latent factor
  double idio_sigma = 0.0;
  std::optional<double> lower_bound;
  std::optional<double> upper_bound;

  double total_variance() const;
};

struct ModeRows {
  std::string label;
  std::array<ParameterRow, kRfParameterCount> rows;

  ParameterRow& row(RfParameter p) { return rows[static_cast<std::size_t>(p)]; }
  const ParameterRow& row(RfParameter p) const { return rows[static_cast<std::size_t>(p)]; }
};

/// Free parameters of the correlation structure.
///
/// `*_cross_mode` is the share of a parameter's variance carried by the die
/// factors; because every mode loads the same factor, it is also the
/// correlation of that parameter between two modes of one die. For a
/// single-mode design it only scales the within-die coupling below.
///
/// `gain_linearity` / `gain_noise` rotate the IIP3 / NF loading toward the
/// gain factor. Within one mode, corr(G, IIP3) = gain_linearity *
/// sqrt(gain_cross_mode * iip3_cross_mode).
struct CorrelationSettings {
  double gain_cross_mode = 0.95;
  double nf_cross_mode = 0.95;
  double iip3_cross_mode = 0.9;
  double gain_linearity = 0.0;
  double gain_noise = 0.0;

  /// Returns nullopt for S11/S22, which carry no shared factor.
  std::optional<double> cross_mode(RfParameter p) const;
  void set_cross_mode(RfParameter p, double v);
  void validate() const;

  friend bool operator==(const CorrelationSettings&, const CorrelationSettings&) = default;
};

struct LatentDieModel {
  std::size_t factor_count = kDefaultFactorCount;
  CorrelationSettings correlation;
  std::vector<ModeRows> modes;

  std::size_t mode_count() const { return modes.size(); }
  const ParameterRow& row(std::size_t mode, RfParameter p) const { return modes.at(mode).row(p); }
  ParameterRow& row(std::size_t mode, RfParameter p) { return modes.at(mode).row(p); }

  /// Loading sizes, sigma >= 0, and loadings^2 + idio^2 == sigma^2 (1e-9 rel).
  void validate() const;
};

struct ModeMarginals {
  std::string label;
  std::array<Marginal, kRfParameterCount> marginals;
};

LatentDieModel build_latent_model(const std::vector<ModeMarginals>& modes, const CorrelationSettings& correlation);

/// Recomputes every loading from the row sigmas and the correlation settings.
/// The idiosyncratic term is set last, from the remaining variance.
void rebuild_loadings(LatentDieModel& model);

/// Model-implied correlation between two (mode, parameter) entries.
double implied_correlation(const LatentDieModel& model, std::size_t mode_a, RfParameter a, std::size_t mode_b,
                           RfParameter b);

/// One Monte Carlo die.
struct DieSample {
  std::vector<double> factors;
  std::vector<RfQuantities> modes;

  friend bool operator==(const DieSample&, const DieSample&) = default;
};

/// Pure function of (model, seed, index): draws the latent factors then one
/// idiosyncratic deviate per (mode, parameter), in that order, from the
/// counter-based stream keyed by (seed, index).
DieSample sample_die(const LatentDieModel& model, std::uint64_t seed, std::uint64_t index);

inline constexpr int kModelSchemaVersion = 1;

nlohmann::json to_json(const LatentDieModel& model);
nlohmann::json to_json(const CorrelationSettings& c);
/// `path` prefixes error messages (JSON pointer of the object).
LatentDieModel latent_model_from_json(const nlohmann::json& j, const std::string& path = "");
CorrelationSettings correlation_from_json(const nlohmann::json& j, const std::string& path = "");

}  // namespace lnayield
