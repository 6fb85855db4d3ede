#pragma once

#include <functional>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "lnayield/budget.hpp"

namespace lnayield {

/// Feasibility window for the sizing sweep. Defaults: matching below -15 dB,
/// gain inside [10.3, 10.9] dB, and the LNA NF / IIP3 spec.
struct SweepConstraints {
  double s11_max_db = -15.0;
  double s22_max_db = -15.0;
  double gain_min_db = 10.3;
  double gain_max_db = 10.9;
  double nf_max_db = 3.0;
  double iip3_min_dbm = -4.0;

  void validate() const;
  friend bool operator==(const SweepConstraints&, const SweepConstraints&) = default;
};

struct SweepGrid {
  std::vector<double> currents_ma;
  std::vector<double> widths_um;

  void validate() const;
  friend bool operator==(const SweepGrid&, const SweepGrid&) = default;
};

struct DesignPoint {
  double i_d_ma = 0.0;
  double w1_um = 0.0;
  RfQuantities q;
  bool valid = true;  // false when the performance model failed at this cell
  std::string error;
};

/// (I_D [mA], W1 [um]) -> predicted RF figures. May throw; sweep() records
/// the failure on the point instead of propagating it.
using PerformanceModel = std::function<RfQuantities(double i_d_ma, double w1_um)>;

/// One point per grid cell, row-major (current outer, width inner). The model
/// is called exactly once per cell.
std::vector<DesignPoint> sweep(const SweepGrid& grid, const PerformanceModel& model);

/// Valid point with S11, S22 below their limits, gain inside the window
/// (inclusive), NF below and IIP3 above their limits.
bool is_feasible(const DesignPoint& p, const SweepConstraints& c);

std::vector<DesignPoint> filter_feasible(std::span<const DesignPoint> points, const SweepConstraints& c);

/// Highest-IIP3 point per current; equal IIP3 goes to the smaller width.
/// Currents without a point are absent.
std::map<double, DesignPoint> pick_best_per_current(std::span<const DesignPoint> feasible);

/// Coefficients of the synthetic surrogate. The shapes follow the qualitative
/// picture (an IIP3 peak at a fixed current density, NF falling with bias
/// current, a minimum width set by matching) but the numbers are arbitrary.
struct SurrogateCoefficients {
  double sweet_spot_density_ma_per_um = 0.01;
  double iip3_peak_at_0p3ma_dbm = -4.6;
  double iip3_peak_slope_db_per_ma = 30.0;
  double iip3_curvature_db = 12.0;
  double nf_floor_db = 1.5;
  double nf_current_coeff = 0.3;
  double min_width_at_0p4ma_um = 24.0;
  double min_width_slope_um_per_ma = 80.0;
};

PerformanceModel surrogate_performance_model(SurrogateCoefficients c = {});

/// Columns: i_d_ma, w1_um, gain_db, nf_db, iip3_dbm, s11_db, s22_db, feasible, selected.
void write_sweep_csv(std::span<const DesignPoint> points, const SweepConstraints& c,
                     const std::map<double, DesignPoint>& picks, std::ostream& out);

}  // namespace lnayield
