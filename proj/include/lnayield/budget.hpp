#pragma once

#include <array>
#include <string_view>

#include "lnayield/units.hpp"

namespace lnayield {

enum class RfParameter { Gain = 0, NoiseFigure, Iip3, S11, S22 };
inline constexpr std::size_t kRfParameterCount = 5;
inline constexpr std::array<RfParameter, kRfParameterCount> kAllRfParameters{
    RfParameter::Gain, RfParameter::NoiseFigure, RfParameter::Iip3, RfParameter::S11, RfParameter::S22};

/// Short column-style name: "gain_db", "nf_db", "iip3_dbm", "s11_db", "s22_db".
std::string_view parameter_name(RfParameter p);
RfParameter parameter_from_name(std::string_view name);

/// The five RF figures of one die (or one mode of one die).
struct RfQuantities {
  double gain_db = 0.0;
  double nf_db = 0.0;
  double iip3_dbm = 0.0;
  double s11_db = 0.0;
  double s22_db = 0.0;

  double get(RfParameter p) const noexcept;
  void set(RfParameter p, double v) noexcept;

  friend bool operator==(const RfQuantities&, const RfQuantities&) = default;
};

/// Throws ValidationError unless nf_db > 0, s11_db <= 0, s22_db <= 0 and all finite.
void validate(const RfQuantities& q);

/// LNA-level specification window (defaults: the ZigBee LNA spec).
struct LnaSpecCorner {
  double gain_min_db = 10.0;
  double gain_max_db = 11.0;
  double nf_max_db = 3.0;
  double iip3_min_dbm = -4.0;
  double s11_max_db = -10.0;
  double s22_max_db = -10.0;

  void validate() const;
  friend bool operator==(const LnaSpecCorner&, const LnaSpecCorner&) = default;
};

struct ReceiverTargets {
  double nf_rx_max_db = 15.5;
  double iip3_rx_min_dbm = -10.0;

  void validate() const;
  friend bool operator==(const ReceiverTargets&, const ReceiverTargets&) = default;
};

/// Limits for everything after the LNA: noise factor ceiling and IIP3 floor.
struct StageTwoLimits {
  NoiseFactor f2_max{1.0};
  PowerMw iip3_2_min{1.0};
};

struct ComplianceFlags {
  bool nf_pass = false;
  bool iip3_pass = false;

  bool both() const noexcept { return nf_pass && iip3_pass; }
  friend bool operator==(const ComplianceFlags&, const ComplianceFlags&) = default;
};

/// Friis: F_rx = F_lna + (F2 - 1) / G_lna.
NoiseFactor cascade_noise(NoiseFactor f_lna, LinearGain g_lna, NoiseFactor f2);

/// 1 / IIP3_rx = 1 / IIP3_lna + G_lna / IIP3_2.
PowerMw cascade_iip3(PowerMw iip3_lna, LinearGain g_lna, PowerMw iip3_2);

/// Sizes the rest of the chain against the LNA spec corners. The noise limit
/// is taken at the minimum LNA gain and the linearity limit at the maximum,
/// so an LNA sitting exactly on its spec corner meets the receiver targets
/// with zero margin. Throws RuntimeError when the LNA alone already exceeds
/// the receiver budget.
StageTwoLimits derive_stage2_limits(const LnaSpecCorner& spec, const ReceiverTargets& targets);

/// Receiver noise factor and IIP3 with this LNA in front of a chain at `limits`.
struct ReceiverFigures {
  NoiseFactor f_rx{1.0};
  PowerMw iip3_rx{1.0};

  double nf_rx_db() const;
  double iip3_rx_dbm() const;
};

ReceiverFigures receiver_figures(const RfQuantities& q, const StageTwoLimits& limits);

/// Comparisons against the targets accept a relative slack of this size so a
/// die sitting exactly on the budget corner classifies as passing.
inline constexpr double kComplianceRelativeSlack = 1e-12;

ComplianceFlags classify_receiver(const RfQuantities& q, const StageTwoLimits& limits,
                                  const ReceiverTargets& targets);

}  // namespace lnayield
