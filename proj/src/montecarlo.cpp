#include "lnayield/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <thread>

#include "lnayield/error.hpp"
#include "lnayield/format.hpp"

namespace lnayield {
namespace {

constexpr const char* kModule = "montecarlo";

void require_non_empty(const DiePopulation& pop) {
  if (pop.dies.empty()) throw ValidationError(kModule, "population is empty");
}

void require_mode(const DiePopulation& pop, std::size_t mode) {
  if (mode >= pop.mode_count()) throw ValidationError(kModule, "mode index out of range");
}

}  // namespace

std::string format_significant(double v, int digits) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

DiePopulation generate_population(const LatentDieModel& model, std::string design_id, std::size_t n,
                                  std::uint64_t seed, unsigned threads) {
  if (n == 0) throw ValidationError(kModule, "population size must be >= 1");
  model.validate();
  DiePopulation pop;
  pop.design_id = std::move(design_id);
  pop.seed = seed;
  for (const auto& m : model.modes) pop.mode_labels.push_back(m.label);
  pop.dies.resize(n);

  threads = std::clamp<unsigned>(threads, 1u, static_cast<unsigned>(std::min<std::size_t>(n, 64)));
  auto fill = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) pop.dies[i] = sample_die(model, seed, i);
  };
  if (threads == 1) {
    fill(0, n);
  } else {
    std::vector<std::jthread> workers;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(n, begin + chunk);
      if (begin < end) workers.emplace_back(fill, begin, end);
    }
  }
  return pop;
}

SummaryStats summarize_values(std::span<const RfQuantities> values) {
  if (values.empty()) throw ValidationError(kModule, "cannot summarize an empty set of dies");
  SummaryStats s;
  s.n = values.size();
  for (auto p : kAllRfParameters) {
    auto& ps = s.params[static_cast<std::size_t>(p)];
    ps.min = ps.max = values.front().get(p);
    double mean = 0.0;
    std::size_t k = 0;
    for (const auto& q : values) {
      const double v = q.get(p);
      ps.min = std::min(ps.min, v);
      ps.max = std::max(ps.max, v);
      mean += (v - mean) / static_cast<double>(++k);
    }
    ps.mean = mean;
  }
  return s;
}

SummaryStats summarize(const DiePopulation& pop, std::size_t mode) {
  require_non_empty(pop);
  require_mode(pop, mode);
  std::vector<RfQuantities> values;
  values.reserve(pop.size());
  for (const auto& d : pop.dies) values.push_back(d.modes[mode]);
  return summarize_values(values);
}

std::string_view clause_name(SpecClause c) {
  switch (c) {
    case SpecClause::GainLow: return "gain_low";
    case SpecClause::GainHigh: return "gain_high";
    case SpecClause::NfHigh: return "nf_high";
    case SpecClause::Iip3Low: return "iip3_low";
    case SpecClause::S11High: return "s11_high";
    case SpecClause::S22High: return "s22_high";
  }
  return "?";
}

bool violates(const RfQuantities& q, const LnaSpecCorner& spec, SpecClause c) {
  switch (c) {
    case SpecClause::GainLow: return q.gain_db < spec.gain_min_db;
    case SpecClause::GainHigh: return q.gain_db > spec.gain_max_db;
    case SpecClause::NfHigh: return q.nf_db > spec.nf_max_db;
    case SpecClause::Iip3Low: return q.iip3_dbm < spec.iip3_min_dbm;
    case SpecClause::S11High: return q.s11_db > spec.s11_max_db;
    case SpecClause::S22High: return q.s22_db > spec.s22_max_db;
  }
  return false;
}

ViolationRates violation_rates(const DiePopulation& pop, const LnaSpecCorner& spec, std::size_t mode) {
  require_non_empty(pop);
  require_mode(pop, mode);
  spec.validate();
  ViolationRates r;
  r.n = pop.size();
  std::array<std::size_t, kSpecClauseCount> counts{};
  for (const auto& d : pop.dies)
    for (auto c : kAllSpecClauses)
      if (violates(d.modes[mode], spec, c)) ++counts[static_cast<std::size_t>(c)];
  for (std::size_t i = 0; i < kSpecClauseCount; ++i)
    r.fraction[i] = static_cast<double>(counts[i]) / static_cast<double>(r.n);
  return r;
}

ComplianceRates receiver_compliance(const DiePopulation& pop, const StageTwoLimits& limits,
                                    const ReceiverTargets& targets, std::size_t mode) {
  require_non_empty(pop);
  require_mode(pop, mode);
  std::size_t both = 0, nf_fail = 0, iip3_fail = 0;
  for (const auto& d : pop.dies) {
    const auto f = classify_receiver(d.modes[mode], limits, targets);
    both += f.both();
    nf_fail += !f.nf_pass;
    iip3_fail += !f.iip3_pass;
  }
  const double n = static_cast<double>(pop.size());
  return {pop.size(), both / n, nf_fail / n, iip3_fail / n};
}

void write_population_csv(const DiePopulation& pop, std::ostream& out) {
  out << "die_index,mode,gain_db,nf_db,iip3_dbm,s11_db,s22_db\n";
  for (std::size_t i = 0; i < pop.size(); ++i) {
    for (std::size_t m = 0; m < pop.mode_count(); ++m) {
      const auto& q = pop.dies[i].modes[m];
      out << i << ',' << pop.mode_labels[m];
      for (auto p : kAllRfParameters) out << ',' << format_significant(q.get(p), kCsvDigits);
      out << '\n';
    }
  }
}

}  // namespace lnayield
