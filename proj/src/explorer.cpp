#include "lnayield/explorer.hpp"

#include <algorithm>
#include <cmath>

#include "lnayield/error.hpp"
#include "lnayield/format.hpp"

namespace lnayield {
namespace {

constexpr const char* kModule = "explorer";

}  // namespace

void SweepConstraints::validate() const {
  if (!(gain_min_db <= gain_max_db)) throw ValidationError(kModule, "gain window must be non-empty");
}

void SweepGrid::validate() const {
  if (currents_ma.empty() || widths_um.empty()) throw ValidationError(kModule, "sweep grid must be non-empty");
  for (double i : currents_ma)
    if (!(i > 0.0)) throw ValidationError(kModule, "grid currents must be > 0");
  for (double w : widths_um)
    if (!(w > 0.0)) throw ValidationError(kModule, "grid widths must be > 0");
}

std::vector<DesignPoint> sweep(const SweepGrid& grid, const PerformanceModel& model) {
  grid.validate();
  std::vector<DesignPoint> points;
  points.reserve(grid.currents_ma.size() * grid.widths_um.size());
  for (double i_d : grid.currents_ma) {
    for (double w1 : grid.widths_um) {
      DesignPoint p;
      p.i_d_ma = i_d;
      p.w1_um = w1;
      try {
        p.q = model(i_d, w1);
        for (auto param : kAllRfParameters)
          if (!std::isfinite(p.q.get(param))) throw RuntimeError(kModule, "model returned a non-finite value");
      } catch (const std::exception& e) {
        p.valid = false;
        p.error = e.what();
      }
      points.push_back(std::move(p));
    }
  }
  return points;
}

bool is_feasible(const DesignPoint& p, const SweepConstraints& c) {
  return p.valid && p.q.s11_db < c.s11_max_db && p.q.s22_db < c.s22_max_db && p.q.gain_db >= c.gain_min_db &&
         p.q.gain_db <= c.gain_max_db && p.q.nf_db < c.nf_max_db && p.q.iip3_dbm > c.iip3_min_dbm;
}

std::vector<DesignPoint> filter_feasible(std::span<const DesignPoint> points, const SweepConstraints& c) {
  c.validate();
  std::vector<DesignPoint> out;
  std::copy_if(points.begin(), points.end(), std::back_inserter(out),
               [&](const DesignPoint& p) { return is_feasible(p, c); });
  return out;
}

std::map<double, DesignPoint> pick_best_per_current(std::span<const DesignPoint> feasible) {
  std::map<double, DesignPoint> best;
  for (const auto& p : feasible) {
    if (!p.valid) continue;
    auto [it, inserted] = best.try_emplace(p.i_d_ma, p);
    if (inserted) continue;
    const DesignPoint& cur = it->second;
    if (p.q.iip3_dbm > cur.q.iip3_dbm || (p.q.iip3_dbm == cur.q.iip3_dbm && p.w1_um < cur.w1_um)) it->second = p;
  }
  return best;
}

PerformanceModel surrogate_performance_model(SurrogateCoefficients c) {
  return [c](double i_d, double w1) {
    if (!(i_d > 0.0) || !(w1 > 0.0)) throw ValidationError(kModule, "surrogate needs I_D > 0 and W1 > 0");
    RfQuantities q;
    const double w_opt = i_d / c.sweet_spot_density_ma_per_um;
    const double detune = std::log(w1 / w_opt);
    q.iip3_dbm = c.iip3_peak_at_0p3ma_dbm + c.iip3_peak_slope_db_per_ma * (i_d - 0.3) - c.iip3_curvature_db * detune * detune;
    q.nf_db = c.nf_floor_db + c.nf_current_coeff / i_d + 0.002 * std::abs(w1 - w_opt);
    q.gain_db = 10.6 + 0.004 * (w1 - 50.0) - 0.5 * (i_d - 0.5);
    const double w_min = std::max(16.0, c.min_width_at_0p4ma_um + c.min_width_slope_um_per_ma * (0.4 - i_d));
    q.s11_db = -20.0 + 12.0 * std::exp(-(w1 - w_min) / 6.0);
    q.s22_db = -18.0 + 0.03 * std::abs(w1 - 50.0);
    return q;
  };
}

void write_sweep_csv(std::span<const DesignPoint> points, const SweepConstraints& c,
                     const std::map<double, DesignPoint>& picks, std::ostream& out) {
  out << "i_d_ma,w1_um,gain_db,nf_db,iip3_dbm,s11_db,s22_db,feasible,selected\n";
  for (const auto& p : points) {
    const auto it = picks.find(p.i_d_ma);
    const bool selected = it != picks.end() && it->second.w1_um == p.w1_um;
    out << format_significant(p.i_d_ma, kCsvDigits) << ',' << format_significant(p.w1_um, kCsvDigits);
    for (auto param : kAllRfParameters)
      out << ',' << (p.valid ? format_significant(p.q.get(param), kCsvDigits) : std::string("nan"));
    out << ',' << (is_feasible(p, c) ? 1 : 0) << ',' << (selected ? 1 : 0) << '\n';
  }
}

}  // namespace lnayield
