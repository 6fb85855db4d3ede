#include "lnayield/targets.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "lnayield/error.hpp"
#include "lnayield/paper_data.hpp"

namespace lnayield {
namespace {

constexpr const char* kModule = "statmodel";

using Kind = StatisticSpec::Kind;

bool is_selection(Kind k) {
  return k == Kind::SelectionCompliant || k == Kind::SelectionNfFail || k == Kind::SelectionIip3Fail ||
         k == Kind::SelectionAveragePower || k == Kind::SelectionGainBlockMin || k == Kind::SelectionGainBlockMax;
}

double block_extreme_mean(const std::vector<SelectionOutcome>& outcomes, const DiePopulation& pop, std::size_t block,
                          bool minimum) {
  if (block == 0 || outcomes.size() < block) throw ValidationError(kModule, "population smaller than one block");
  const std::size_t blocks = outcomes.size() / block;
  double sum = 0.0;
  for (std::size_t b = 0; b < blocks; ++b) {
    double ext = minimum ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    for (std::size_t i = b * block; i < (b + 1) * block; ++i) {
      const double g = pop.dies[i].modes[mode_index(outcomes[i].chosen)].gain_db;
      ext = minimum ? std::min(ext, g) : std::max(ext, g);
    }
    sum += ext;
  }
  return sum / blocks;
}

}  // namespace

std::string StatisticSpec::describe() const {
  const std::string p(parameter_name(parameter));
  const std::string m = "mode" + std::to_string(mode);
  switch (kind) {
    case Kind::MarginalMean: return "mean[" + m + "," + p + "]";
    case Kind::FractionBelow: return "P(" + p + "<" + std::to_string(threshold) + ")[" + m + "]";
    case Kind::FractionAbove: return "P(" + p + ">" + std::to_string(threshold) + ")[" + m + "]";
    case Kind::ReceiverCompliant: return "rx_compliant[" + m + "]";
    case Kind::ReceiverNfFail: return "rx_nf_fail[" + m + "]";
    case Kind::ReceiverIip3Fail: return "rx_iip3_fail[" + m + "]";
    case Kind::SelectionCompliant: return strategy + ".compliant";
    case Kind::SelectionNfFail: return strategy + ".nf_fail";
    case Kind::SelectionIip3Fail: return strategy + ".iip3_fail";
    case Kind::SelectionAveragePower: return strategy + ".average_power_mw";
    case Kind::SelectionGainBlockMin: return strategy + ".gain_min@" + std::to_string(block);
    case Kind::SelectionGainBlockMax: return strategy + ".gain_max@" + std::to_string(block);
  }
  return "?";
}

std::vector<double> evaluate_statistics(const LatentDieModel& model, std::size_t n, std::uint64_t seed,
                                        const std::vector<StatisticSpec>& specs, const StatisticContext& ctx) {
  const DiePopulation pop = generate_population(model, "calibration", n, seed);
  std::map<std::string, SelectionRun> runs;
  auto run_for = [&](const std::string& name) -> const SelectionRun& {
    auto it = runs.find(name);
    if (it != runs.end()) return it->second;
    if (!ctx.plna) throw ValidationError(kModule, "selection statistics need a PLNA design");
    PlnaDesign design = *ctx.plna;
    design.variability = model;
    auto run = apply_strategy(pop, strategy_from_name(name, ctx.selection_target_gain_db), ctx.limits, ctx.targets,
                              design);
    return runs.emplace(name, std::move(run)).first->second;
  };

  std::vector<double> out;
  out.reserve(specs.size());
  for (const auto& s : specs) {
    if (!is_selection(s.kind) && s.mode >= pop.mode_count())
      throw ValidationError(kModule, "statistic refers to a missing mode");
    switch (s.kind) {
      case Kind::MarginalMean: out.push_back(summarize(pop, s.mode)[s.parameter].mean); break;
      case Kind::FractionBelow:
      case Kind::FractionAbove: {
        std::size_t count = 0;
        for (const auto& d : pop.dies) {
          const double v = d.modes[s.mode].get(s.parameter);
          count += s.kind == Kind::FractionBelow ? v < s.threshold : v > s.threshold;
        }
        out.push_back(static_cast<double>(count) / pop.size());
        break;
      }
      case Kind::ReceiverCompliant:
      case Kind::ReceiverNfFail:
      case Kind::ReceiverIip3Fail: {
        const auto r = receiver_compliance(pop, ctx.limits, ctx.targets, s.mode);
        out.push_back(s.kind == Kind::ReceiverCompliant ? r.both : s.kind == Kind::ReceiverNfFail ? r.nf_fail : r.iip3_fail);
        break;
      }
      case Kind::SelectionCompliant: out.push_back(run_for(s.strategy).report.compliant); break;
      case Kind::SelectionNfFail: out.push_back(run_for(s.strategy).report.nf_fail); break;
      case Kind::SelectionIip3Fail: out.push_back(run_for(s.strategy).report.iip3_fail); break;
      case Kind::SelectionAveragePower: out.push_back(run_for(s.strategy).report.average_power_mw); break;
      case Kind::SelectionGainBlockMin:
      case Kind::SelectionGainBlockMax:
        out.push_back(block_extreme_mean(run_for(s.strategy).outcomes, pop, s.block, s.kind == Kind::SelectionGainBlockMin));
        break;
    }
  }
  return out;
}

StatisticsFn make_statistics_fn(std::vector<StatisticSpec> specs, StatisticContext ctx) {
  return [specs = std::move(specs), ctx = std::move(ctx)](const LatentDieModel& model, std::size_t n,
                                                         std::uint64_t seed) {
    return evaluate_statistics(model, n, seed, specs, ctx);
  };
}

CalibrationProblem plna_selection_problem() {
  CalibrationProblem p;
  using FK = FreeParameter::Kind;
  p.parameters = {
      {FK::CrossModeCorrelation, RfParameter::Gain, std::nullopt, 0.5, 1.0, 0.05},
      {FK::CrossModeCorrelation, RfParameter::Iip3, std::nullopt, 0.5, 1.0, 0.05},
      {FK::Sigma, RfParameter::Iip3, std::nullopt, 0.5, 2.0, 0.1},
      {FK::GainLinearityCoupling, RfParameter::Gain, std::nullopt, -0.9, 0.9, 0.2},
      {FK::Sigma, RfParameter::Gain, mode_index(PlnaMode::HG), 0.3, 0.8, 0.04},
      {FK::Sigma, RfParameter::Gain, mode_index(PlnaMode::MG_LP), 0.3, 0.8, 0.04},
      {FK::Sigma, RfParameter::Gain, mode_index(PlnaMode::LG), 0.3, 0.8, 0.04},
  };
  for (const auto& rec : reference::kSelection) {
    const std::string s = rec.strategy;
    p.statistics.push_back({Kind::SelectionCompliant, 0, RfParameter::Gain, 0.0, s, 1000});
    p.targets.push_back({s + ".compliant", rec.rx_both, 1.0});
    p.statistics.push_back({Kind::SelectionNfFail, 0, RfParameter::Gain, 0.0, s, 1000});
    p.targets.push_back({s + ".nf_fail", rec.rx_nf_fail, 1.0});
    p.statistics.push_back({Kind::SelectionIip3Fail, 0, RfParameter::Gain, 0.0, s, 1000});
    p.targets.push_back({s + ".iip3_fail", rec.rx_iip3_fail, 1.0});
  }
  // dB-scale target: weight so a 0.05 dB miss costs as much as a 1 pp miss.
  p.statistics.push_back({Kind::SelectionGainBlockMin, 0, RfParameter::Gain, 0.0, "best-gain", reference::kPublishedRuns});
  p.targets.push_back({"best-gain.gain_min@1000", reference::kSelection[0].gain_min_db, 0.04});
  return p;
}

}  // namespace lnayield
