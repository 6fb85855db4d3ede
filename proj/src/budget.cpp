#include "lnayield/budget.hpp"

#include <cmath>
#include <string>

#include "lnayield/error.hpp"

namespace lnayield {

std::string_view parameter_name(RfParameter p) {
  switch (p) {
    case RfParameter::Gain: return "gain_db";
    case RfParameter::NoiseFigure: return "nf_db";
    case RfParameter::Iip3: return "iip3_dbm";
    case RfParameter::S11: return "s11_db";
    case RfParameter::S22: return "s22_db";
  }
  return "?";
}

RfParameter parameter_from_name(std::string_view name) {
  for (auto p : kAllRfParameters)
    if (parameter_name(p) == name) return p;
  throw ValidationError("budget", "unknown RF parameter '" + std::string(name) + "'");
}

double RfQuantities::get(RfParameter p) const noexcept {
  switch (p) {
    case RfParameter::Gain: return gain_db;
    case RfParameter::NoiseFigure: return nf_db;
    case RfParameter::Iip3: return iip3_dbm;
    case RfParameter::S11: return s11_db;
    case RfParameter::S22: return s22_db;
  }
  return 0.0;
}

void RfQuantities::set(RfParameter p, double v) noexcept {
  switch (p) {
    case RfParameter::Gain: gain_db = v; break;
    case RfParameter::NoiseFigure: nf_db = v; break;
    case RfParameter::Iip3: iip3_dbm = v; break;
    case RfParameter::S11: s11_db = v; break;
    case RfParameter::S22: s22_db = v; break;
  }
}

void validate(const RfQuantities& q) {
  for (auto p : kAllRfParameters)
    if (!std::isfinite(q.get(p)))
      throw ValidationError("budget", "non-finite " + std::string(parameter_name(p)));
  if (q.nf_db <= 0.0) throw ValidationError("budget", "nf_db must be > 0");
  if (q.s11_db > 0.0) throw ValidationError("budget", "s11_db must be <= 0");
  if (q.s22_db > 0.0) throw ValidationError("budget", "s22_db must be <= 0");
}

void LnaSpecCorner::validate() const {
  for (double v : {gain_min_db, gain_max_db, nf_max_db, iip3_min_dbm, s11_max_db, s22_max_db})
    if (!std::isfinite(v)) throw ValidationError("budget", "non-finite LNA spec value");
  if (!(gain_min_db < gain_max_db)) throw ValidationError("budget", "LNA spec requires gain_min_db < gain_max_db");
}

void ReceiverTargets::validate() const {
  if (!std::isfinite(nf_rx_max_db) || !std::isfinite(iip3_rx_min_dbm))
    throw ValidationError("budget", "non-finite receiver target");
  if (!(nf_rx_max_db > 0.0)) throw ValidationError("budget", "receiver targets require nf_rx_max_db > 0");
}

NoiseFactor cascade_noise(NoiseFactor f_lna, LinearGain g_lna, NoiseFactor f2) {
  if (g_lna.value() <= 0.0) throw ValidationError("budget", "cascade_noise requires LNA gain > 0");
  return NoiseFactor(f_lna.value() + (f2.value() - 1.0) / g_lna.value());
}

PowerMw cascade_iip3(PowerMw iip3_lna, LinearGain g_lna, PowerMw iip3_2) {
  if (g_lna.value() <= 0.0) throw ValidationError("budget", "cascade_iip3 requires LNA gain > 0");
  return PowerMw(1.0 / (1.0 / iip3_lna.value() + g_lna.value() / iip3_2.value()));
}

StageTwoLimits derive_stage2_limits(const LnaSpecCorner& spec, const ReceiverTargets& targets) {
  spec.validate();
  targets.validate();
  const double f_rx_max = db_to_linear(targets.nf_rx_max_db);
  const double f_lna = db_to_linear(spec.nf_max_db);
  const double iip3_rx_min = db_to_linear(targets.iip3_rx_min_dbm);
  const double iip3_lna = db_to_linear(spec.iip3_min_dbm);
  if (!(f_rx_max > f_lna))
    throw RuntimeError("budget", "infeasible receiver targets: LNA noise corner already exceeds NF_rx budget");
  if (!(iip3_rx_min < iip3_lna))
    throw RuntimeError("budget", "infeasible receiver targets: LNA IIP3 corner already below IIP3_rx budget");

  const double g_min = db_to_linear(spec.gain_min_db);
  const double g_max = db_to_linear(spec.gain_max_db);
  StageTwoLimits limits;
  limits.f2_max = NoiseFactor((f_rx_max - f_lna) * g_min + 1.0);
  limits.iip3_2_min = PowerMw(g_max / (1.0 / iip3_rx_min - 1.0 / iip3_lna));
  return limits;
}

double ReceiverFigures::nf_rx_db() const { return linear_to_db(f_rx.value()); }
double ReceiverFigures::iip3_rx_dbm() const { return linear_to_db(iip3_rx.value()); }

ReceiverFigures receiver_figures(const RfQuantities& q, const StageTwoLimits& limits) {
  const LinearGain g = to_linear(DecibelGain(q.gain_db));
  ReceiverFigures out;
  out.f_rx = cascade_noise(to_factor(NoiseFigureDb(q.nf_db)), g, limits.f2_max);
  out.iip3_rx = cascade_iip3(to_mw(PowerDbm(q.iip3_dbm)), g, limits.iip3_2_min);
  return out;
}

ComplianceFlags classify_receiver(const RfQuantities& q, const StageTwoLimits& limits,
                                  const ReceiverTargets& targets) {
  const ReceiverFigures rx = receiver_figures(q, limits);
  const double f_rx_max = db_to_linear(targets.nf_rx_max_db);
  const double iip3_rx_min = db_to_linear(targets.iip3_rx_min_dbm);
  ComplianceFlags flags;
  flags.nf_pass = rx.f_rx.value() <= f_rx_max * (1.0 + kComplianceRelativeSlack);
  flags.iip3_pass = rx.iip3_rx.value() >= iip3_rx_min * (1.0 - kComplianceRelativeSlack);
  return flags;
}

}  // namespace lnayield
