#include "lnayield/designs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lnayield/error.hpp"
#include "lnayield/normal.hpp"
#include "lnayield/paper_data.hpp"

namespace lnayield {
namespace {

constexpr const char* kModule = "designs";

// Published means are rounded to 0.1 dB.
constexpr double kMeanRoundingHalfWidth = 0.05;
constexpr double kDefaultNfSigmaDb = 0.1;
constexpr double kDefaultS11SigmaDb = 1.0;

Marginal plain(double mean, double sigma) { return Marginal{mean, sigma, std::nullopt, std::nullopt}; }

// Reads a published "worst case" as the expected extreme of the published run
// count and combines it with a tail fraction beyond `limit` to get (mean, sigma).
Marginal upper_tail_with_worst_case(double limit, double tail_fraction, double worst_case) {
  const double z_tail = inverse_normal_cdf(1.0 - tail_fraction);
  const double z_worst = expected_extreme_z(reference::kPublishedRuns);
  const double sigma = (worst_case - limit) / (z_worst - z_tail);
  return plain(limit - z_tail * sigma, sigma);
}

ModeMarginals traditional_marginals(const reference::TraditionalRecord& r, const LnaSpecCorner& spec) {
  ModeMarginals mm;
  mm.label = "LNA";
  const std::array<QuantileConstraint, 2> gain_tails{
      QuantileConstraint{spec.gain_min_db, r.gain_low}, QuantileConstraint{spec.gain_max_db, 1.0 - r.gain_high}};
  const auto gain = fit_location_scale(r.gain_mean_db, kMeanRoundingHalfWidth, gain_tails);
  mm.marginals[0] = plain(gain.mean, gain.sigma);
  mm.marginals[1] = plain(r.nf_mean_db,
                          std::min(kDefaultNfSigmaDb, sigma_bound_for_zero_violations(r.nf_mean_db, spec.nf_max_db)));
  mm.marginals[2] = plain(r.iip3_mean_dbm, fit_sigma_from_quantile(r.iip3_mean_dbm, spec.iip3_min_dbm, r.iip3_low));
  mm.marginals[3] =
      plain(r.s11_db, std::min(kDefaultS11SigmaDb, sigma_bound_for_zero_violations(r.s11_db, spec.s11_max_db)));
  mm.marginals[4] = upper_tail_with_worst_case(spec.s22_max_db, r.s22_high, r.s22_db);
  return mm;
}

SizingMetadata traditional_sizing(const reference::TraditionalRecord& r) {
  return {{"W1_um", r.w1_um}, {"L1_um", r.l1_um}, {"Ls_nH", r.ls_nh}, {"Lg_nH", r.lg_nh},
          {"CX_fF", r.cx_ff}, {"C1_fF", r.c1_ff}, {"CP_pF", r.cp_pf}, {"LD_nH", r.ld_nh}};
}

}  // namespace

std::string_view mode_name(PlnaMode m) {
  switch (m) {
    case PlnaMode::HG: return "HG";
    case PlnaMode::MG_LP: return "MG-LP";
    case PlnaMode::LG: return "LG";
  }
  return "?";
}

PlnaMode mode_from_name(std::string_view name) {
  if (name == "HG" || name == "hg") return PlnaMode::HG;
  if (name == "MG-LP" || name == "MG_LP" || name == "mg-lp" || name == "mg_lp") return PlnaMode::MG_LP;
  if (name == "LG" || name == "lg") return PlnaMode::LG;
  throw ValidationError(kModule, "unknown PLNA mode '" + std::string(name) + "'");
}

ModeControls controls_of(PlnaMode m) {
  switch (m) {
    case PlnaMode::HG: return {true, false};
    case PlnaMode::LG: return {false, true};
    case PlnaMode::MG_LP: return {false, false};
  }
  return {};
}

PlnaMode mode_from_controls(bool phi, bool phi_g) {
  if (phi && phi_g) throw ValidationError(kModule, "control state phi = phi_g = 1 is not a defined PLNA mode");
  if (phi) return PlnaMode::HG;
  if (phi_g) return PlnaMode::LG;
  return PlnaMode::MG_LP;
}

double TraditionalDesign::power_mw() const { return traditional_power(*this); }

void TraditionalDesign::validate() const {
  if (id.empty()) throw ValidationError(kModule, "design id must not be empty");
  if (!(nominal_current_ma > 0.0)) throw ValidationError(kModule, id + ": nominal_current_ma must be > 0");
  if (!(supply_voltage_v > 0.0)) throw ValidationError(kModule, id + ": supply_voltage_v must be > 0");
  if (!(bias_overhead_ma >= 0.0)) throw ValidationError(kModule, id + ": bias_overhead_ma must be >= 0");
  variability.validate();
  if (variability.mode_count() != 1) throw ValidationError(kModule, id + ": traditional model must have one mode");
}

double PlnaDesign::mode_power_mw(PlnaMode m) const { return mode_power(mode(m), supply_voltage_v); }

void PlnaDesign::validate() const {
  if (id.empty()) throw ValidationError(kModule, "design id must not be empty");
  for (auto m : kAllPlnaModes)
    if (modes[mode_index(m)].mode != m) throw ValidationError(kModule, id + ": modes must be listed as HG, MG-LP, LG");
  for (const auto& m : modes)
    if (!(m.supply_current_ma > 0.0)) throw ValidationError(kModule, id + ": mode supply current must be > 0");
  const double hg = mode(PlnaMode::HG).supply_current_ma;
  const double lg = mode(PlnaMode::LG).supply_current_ma;
  const double mg = mode(PlnaMode::MG_LP).supply_current_ma;
  if (hg != lg) throw ValidationError(kModule, id + ": HG and LG must share a supply current");
  if (!(mg < hg)) throw ValidationError(kModule, id + ": MG-LP must draw the lowest supply current");
  if (!(w1_um > 0.0) || !(w3_um >= 0.0) || !(id1_ma > 0.0))
    throw ValidationError(kModule, id + ": need w1_um > 0, w3_um >= 0, id1_ma > 0");
  if (!(supply_voltage_v > 0.0)) throw ValidationError(kModule, id + ": supply_voltage_v must be > 0");
  variability.validate();
  if (variability.mode_count() != kPlnaModeCount)
    throw ValidationError(kModule, id + ": PLNA model must have three modes");
}

OperatingPoint equivalent_operating_point(double w1_um, double id1_ma, double w3_um) {
  if (!(w1_um > 0.0)) throw ValidationError(kModule, "equivalent_operating_point requires w1 > 0");
  if (!(w3_um >= 0.0)) throw ValidationError(kModule, "equivalent_operating_point requires w3 >= 0");
  if (!(id1_ma > 0.0)) throw ValidationError(kModule, "equivalent_operating_point requires id1 > 0");
  const double w_eq = w1_um + w3_um;
  return {w_eq, id1_ma * w_eq / w1_um};
}

double mode_power(const PlnaModeSpec& mode, double vdd) {
  if (!(mode.supply_current_ma > 0.0) || !(vdd > 0.0)) throw ValidationError(kModule, "mode_power needs positive inputs");
  return mode.supply_current_ma * vdd;
}

double traditional_power(const TraditionalDesign& design) {
  if (!(design.supply_voltage_v > 0.0)) throw ValidationError(kModule, "traditional_power needs V_DD > 0");
  return design.supply_current_ma() * design.supply_voltage_v;
}

LatentDieModel plna_prior_model() {
  const LnaSpecCorner spec;
  // S22 entries are worst cases without a tail fraction; borrow the spread
  // fitted for the 0.4 mA design, from which the PLNA is derived.
  const auto& base = reference::kTraditional[0];
  const double s22_sigma = upper_tail_with_worst_case(spec.s22_max_db, base.s22_high, base.s22_db).sigma;
  const double z_worst = expected_extreme_z(reference::kPublishedRuns);

  std::vector<ModeMarginals> modes;
  for (const auto& r : reference::kPlnaModes) {
    ModeMarginals mm;
    mm.label = r.label;
    const double gain_sigma = 0.5 * (sigma_from_extreme(r.gain_mean_db, r.gain_min_db, reference::kPublishedRuns) +
                                     sigma_from_extreme(r.gain_mean_db, r.gain_max_db, reference::kPublishedRuns));
    mm.marginals[0] = plain(r.gain_mean_db, gain_sigma);
    mm.marginals[1] = plain(r.nf_mean_db, kDefaultNfSigmaDb);
    mm.marginals[2] =
        plain(r.iip3_mean_dbm, sigma_from_extreme(r.iip3_mean_dbm, r.iip3_min_dbm, reference::kPublishedRuns));
    mm.marginals[3] =
        plain(r.s11_db, std::min(kDefaultS11SigmaDb, sigma_bound_for_zero_violations(r.s11_db, spec.s11_max_db)));
    mm.marginals[4] = plain(r.s22_db - z_worst * s22_sigma, s22_sigma);
    modes.push_back(mm);
  }
  return build_latent_model(modes, CorrelationSettings{});
}

CorrelationSettings builtin_plna_correlation() {
  CorrelationSettings c;
  c.gain_cross_mode = 0.94;
  c.nf_cross_mode = 0.95;
  c.iip3_cross_mode = 0.84;
  c.gain_linearity = 0.225;
  c.gain_noise = 0.0;
  return c;
}

PlnaSpreadAdjustment builtin_plna_spread() { return {{0.556, 0.449, 0.473}, 1.009}; }

void apply_plna_spread(LatentDieModel& model, const PlnaSpreadAdjustment& adj) {
  if (model.mode_count() != kPlnaModeCount) throw ValidationError(kModule, "PLNA spread needs a three-mode model");
  if (!(adj.iip3_sigma_scale > 0.0)) throw ValidationError(kModule, "iip3_sigma_scale must be > 0");
  for (std::size_t m = 0; m < kPlnaModeCount; ++m) {
    if (!(adj.gain_sigma_db[m] > 0.0)) throw ValidationError(kModule, "gain sigma must be > 0");
    model.row(m, RfParameter::Gain).sigma = adj.gain_sigma_db[m];
    model.row(m, RfParameter::Iip3).sigma *= adj.iip3_sigma_scale;
  }
  rebuild_loadings(model);
}

PaperDesigns builtin_paper_designs() {
  const LnaSpecCorner spec;
  PaperDesigns out;
  CorrelationSettings single_mode;
  single_mode.gain_cross_mode = 1.0;
  single_mode.nf_cross_mode = 1.0;
  single_mode.iip3_cross_mode = 1.0;
  single_mode.gain_linearity = kTraditionalGainLinearityCoupling;
  for (const auto& r : reference::kTraditional) {
    TraditionalDesign d;
    d.id = r.id;
    d.nominal_current_ma = r.nominal_current_ma;
    d.supply_voltage_v = reference::kSupplyVoltageV;
    d.sizing = traditional_sizing(r);
    d.variability = build_latent_model({traditional_marginals(r, spec)}, single_mode);
    d.validate();
    out.traditional.push_back(std::move(d));
  }

  PlnaDesign& p = out.plna;
  p.id = "paper-plna";
  const auto& hg = reference::kPlnaModes[0];
  const auto& mg = reference::kPlnaModes[1];
  const auto& lg = reference::kPlnaModes[2];
  p.modes = {PlnaModeSpec{PlnaMode::HG, hg.idd_ma, reference::kPlnaHgGainStepDb},
             PlnaModeSpec{PlnaMode::MG_LP, mg.idd_ma, 0.0},
             PlnaModeSpec{PlnaMode::LG, lg.idd_ma, reference::kPlnaLgGainStepDb}};
  const auto& s = reference::kPlnaSizing;
  p.w1_um = s.w1_um;
  p.w3_um = s.w3_um;
  p.id1_ma = reference::kPlnaMgCoreCurrentMa;
  p.supply_voltage_v = reference::kSupplyVoltageV;
  p.sizing = {{"W1_um", s.w1_um}, {"L1_um", s.l1_um}, {"W3_um", s.w3_um}, {"L3_um", s.l3_um},
              {"Ls_nH", s.ls_nh}, {"Lg_nH", s.lg_nh}, {"CX_fF", s.cx_ff}, {"C1_fF", s.c1_ff},
              {"CP_pF", s.cp_pf}, {"LD_nH", s.ld_nh}};
  p.variability = plna_prior_model();
  p.variability.correlation = builtin_plna_correlation();
  apply_plna_spread(p.variability, builtin_plna_spread());
  p.validate();
  return out;
}

}  // namespace lnayield
