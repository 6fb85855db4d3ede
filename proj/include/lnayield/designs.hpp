#pragma once

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "lnayield/statmodel.hpp"

namespace lnayield {

enum class PlnaMode { HG = 0, MG_LP = 1, LG = 2 };
inline constexpr std::size_t kPlnaModeCount = 3;
inline constexpr std::array<PlnaMode, kPlnaModeCount> kAllPlnaModes{PlnaMode::HG, PlnaMode::MG_LP, PlnaMode::LG};

std::string_view mode_name(PlnaMode m);  // "HG", "MG-LP", "LG"
PlnaMode mode_from_name(std::string_view name);
inline std::size_t mode_index(PlnaMode m) { return static_cast<std::size_t>(m); }

/// Cascode switch controls: phi routes the auxiliary branch to the load,
/// phi_g dumps it to the supply.
struct ModeControls {
  bool phi = false;
  bool phi_g = false;
};

ModeControls controls_of(PlnaMode m);
/// (1,0) -> HG, (0,1) -> LG, (0,0) -> MG-LP. (1,1) is not a defined mode and
/// throws ValidationError.
PlnaMode mode_from_controls(bool phi, bool phi_g);

/// Passive and device sizes, carried through unchanged (keys such as "W1_um",
/// "Ls_nH"). Nothing in the library computes with these.
using SizingMetadata = std::map<std::string, double>;

struct TraditionalDesign {
  std::string id;
  double nominal_current_ma = 0.4;
  double supply_voltage_v = 1.2;
  double bias_overhead_ma = 0.03;
  SizingMetadata sizing;
  LatentDieModel variability;

  double supply_current_ma() const { return nominal_current_ma + bias_overhead_ma; }
  double power_mw() const;
  void validate() const;
};

struct PlnaModeSpec {
  PlnaMode mode = PlnaMode::MG_LP;
  double supply_current_ma = 0.0;  // includes bias circuitry
  double gain_offset_db = 0.0;     // nominal step relative to MG-LP
};

struct PlnaDesign {
  std::string id = "paper-plna";
  std::array<PlnaModeSpec, kPlnaModeCount> modes{};  // indexed by PlnaMode
  double w1_um = 42.0;
  double w3_um = 14.0;
  double id1_ma = 0.4;
  double supply_voltage_v = 1.2;
  SizingMetadata sizing;
  LatentDieModel variability;  // one mode block per PlnaMode, same order

  const PlnaModeSpec& mode(PlnaMode m) const { return modes[mode_index(m)]; }
  double mode_power_mw(PlnaMode m) const;
  /// Three modes in HG, MG-LP, LG order; MG-LP draws strictly the least
  /// current; HG and LG share a current; W1/W3 > 0; model has three modes.
  void validate() const;
};

struct OperatingPoint {
  double w_um = 0.0;
  double i_ma = 0.0;
};

/// Constant-current-density merge of the main and auxiliary transconductors:
/// (w1 + w3, id1 * (w1 + w3) / w1).
OperatingPoint equivalent_operating_point(double w1_um, double id1_ma, double w3_um);

/// Supply power of one PLNA mode in mW (I_DD * V_DD).
double mode_power(const PlnaModeSpec& mode, double vdd);
/// Traditional analogue: (nominal + bias overhead) * V_DD.
double traditional_power(const TraditionalDesign& design);

/// Gain-to-IIP3 coupling used for the single-mode designs. Engineering
/// default, not a published value.
inline constexpr double kTraditionalGainLinearityCoupling = 0.5;

struct PaperDesigns {
  std::vector<TraditionalDesign> traditional;  // 0.4, 0.5, 0.6, 0.7 mA
  PlnaDesign plna;
};

/// The four traditional designs and the PLNA, with marginals fitted from the
/// published Monte Carlo summaries.
PaperDesigns builtin_paper_designs();

/// Correlation settings shipped with the built-in PLNA (calibrated against the
/// post-selection outcomes; see README).
CorrelationSettings builtin_plna_correlation();

/// Spread settings found by the same calibration: per-mode gain sigma
/// (HG, MG-LP, LG order) and a common scale on the fitted IIP3 sigmas.
struct PlnaSpreadAdjustment {
  std::array<double, 3> gain_sigma_db{};
  double iip3_sigma_scale = 1.0;
};
PlnaSpreadAdjustment builtin_plna_spread();

/// Applies `adj` to a three-mode model and rebuilds its loadings.
void apply_plna_spread(LatentDieModel& model, const PlnaSpreadAdjustment& adj);

/// The PLNA model before calibration: spec defaults for the correlation
/// structure, marginals from the published per-mode summaries.
LatentDieModel plna_prior_model();

}  // namespace lnayield
