#pragma once

#include <array>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "lnayield/budget.hpp"
#include "lnayield/statmodel.hpp"

namespace lnayield {

struct DiePopulation {
  std::string design_id;
  std::uint64_t seed = 0;
  std::vector<std::string> mode_labels;
  std::vector<DieSample> dies;  // dies[i] was drawn with index i

  std::size_t size() const { return dies.size(); }
  std::size_t mode_count() const { return mode_labels.size(); }
};

/// Dies 0..n-1 via sample_die. The result depends only on (model, n, seed);
/// `threads` changes wall time, never content.
DiePopulation generate_population(const LatentDieModel& model, std::string design_id, std::size_t n,
                                  std::uint64_t seed, unsigned threads = 1);

struct ParamStats {
  double min = 0.0;
  double mean = 0.0;
  double max = 0.0;
};

struct SummaryStats {
  std::size_t n = 0;
  std::array<ParamStats, kRfParameterCount> params{};

  const ParamStats& operator[](RfParameter p) const { return params[static_cast<std::size_t>(p)]; }
};

/// Exact sample min / mean / max per parameter for one mode.
SummaryStats summarize(const DiePopulation& pop, std::size_t mode = 0);
SummaryStats summarize_values(std::span<const RfQuantities> values);

enum class SpecClause { GainLow = 0, GainHigh, NfHigh, Iip3Low, S11High, S22High };
inline constexpr std::size_t kSpecClauseCount = 6;
inline constexpr std::array<SpecClause, kSpecClauseCount> kAllSpecClauses{
    SpecClause::GainLow, SpecClause::GainHigh, SpecClause::NfHigh,
    SpecClause::Iip3Low, SpecClause::S11High,  SpecClause::S22High};

std::string_view clause_name(SpecClause c);  // "gain_low", ...
bool violates(const RfQuantities& q, const LnaSpecCorner& spec, SpecClause c);

struct ViolationRates {
  std::size_t n = 0;
  std::array<double, kSpecClauseCount> fraction{};

  double operator[](SpecClause c) const { return fraction[static_cast<std::size_t>(c)]; }
};

/// Each clause evaluated on its own; a die may count toward several.
ViolationRates violation_rates(const DiePopulation& pop, const LnaSpecCorner& spec, std::size_t mode = 0);

/// Receiver-level outcome fractions. Fail categories overlap.
struct ComplianceRates {
  std::size_t n = 0;
  double both = 0.0;
  double nf_fail = 0.0;
  double iip3_fail = 0.0;
};

ComplianceRates receiver_compliance(const DiePopulation& pop, const StageTwoLimits& limits,
                                    const ReceiverTargets& targets, std::size_t mode = 0);

/// Columns: die_index, mode, gain_db, nf_db, iip3_dbm, s11_db, s22_db.
void write_population_csv(const DiePopulation& pop, std::ostream& out);

}  // namespace lnayield
