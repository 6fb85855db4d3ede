#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lnayield/budget.hpp"
#include "lnayield/designs.hpp"
#include "lnayield/montecarlo.hpp"
#include "lnayield/selection.hpp"

namespace lnayield {

inline constexpr int kReportSchemaVersion = 1;

/// Monte Carlo results for one single-mode design, or for one PLNA mode used
/// on its own (id "<plna id>/<mode>").
struct DesignReport {
  std::string design_id;
  double power_mw = 0.0;
  SummaryStats summary;
  ViolationRates violations;
  ComplianceRates compliance;
};

DesignReport report_design(const DiePopulation& pop, std::size_t mode, std::string id, double power_mw,
                           const LnaSpecCorner& spec, const StageTwoLimits& limits, const ReceiverTargets& targets);

/// One side of a like-for-like comparison.
struct ComparisonSide {
  std::string label;
  std::size_t n = 0;
  ReceiverTargets targets;
  double compliant = 0.0;
  double power_mw = 0.0;
};

ComparisonSide side_of(const SelectionReport& r, const ReceiverTargets& targets);
ComparisonSide side_of(const DesignReport& r, const ReceiverTargets& targets);

struct ComparisonRow {
  std::string subject;      // e.g. "best-gain"
  std::string baseline_id;  // e.g. "paper-0.4mA"
  double delta_compliance = 0.0;  // subject minus baseline, as a fraction of dies
  double delta_power = 0.0;       // (P_subject - P_baseline) / P_baseline
};

/// Throws ValidationError when any baseline differs from `subject` in
/// population size or receiver targets.
std::vector<ComparisonRow> compare(const ComparisonSide& subject, std::span<const ComparisonSide> baselines);

/// Which knob limits a missed power anchor. Average PLNA power can only move
/// inside [lowest mode power, highest mode power] by changing mode occupancy;
/// a target outside that range needs a different bias overhead.
struct PowerBinding {
  double target_delta = 0.0;
  double achieved_delta = 0.0;
  double required_power_mw = 0.0;
  bool reachable_by_occupancy = false;
  double required_high_power_share = 0.0;  // meaningful when reachable
  std::string binding;                      // "mode-occupancy" or "bias-overhead"
};

PowerBinding diagnose_power_anchor(const PlnaDesign& plna, double baseline_power_mw, double target_delta,
                                   double achieved_delta);

/// A comparison row checked against a published anchor.
struct AnchorCheck {
  std::string subject;
  std::string baseline_id;
  double target_delta_compliance = 0.0;  // NaN when only a bound is quoted
  double compliance_bound = 0.0;         // |dS| < bound; NaN when a value is quoted
  double target_delta_power = 0.0;
  double delta_compliance = 0.0;
  double delta_power = 0.0;
  bool compliance_ok = false;
  bool power_ok = false;
  PowerBinding power;
};

/// Anchor tolerance on both dS and dP, as fractions.
inline constexpr double kAnchorTolerance = 0.05;

/// Checks every row of `rows` that has a published anchor. `baselines` must
/// contain the baseline designs named by those rows.
std::vector<AnchorCheck> check_published_anchors(std::span<const ComparisonRow> rows, const PlnaDesign& plna,
                                                 std::span<const DesignReport> baselines,
                                                 double tolerance = kAnchorTolerance);

/// Everything the table renderer can show. Any part may be empty.
struct ReportSet {
  std::vector<DesignReport> designs;
  std::vector<SelectionReport> selections;
  std::vector<ComparisonRow> comparisons;
  std::vector<AnchorCheck> anchors;
};

enum class OutputFormat { Csv, Json, Text };
OutputFormat output_format_from_name(std::string_view name);

struct Artifact {
  std::string filename;
  std::string content;
};

/// Tables, one artifact each for csv/text, one JSON document for json:
///   summary      design, parameter, min, mean, max
///   violations   clause, then one column per design
///   compliance   design, n, compliant, nf_fail, iip3_fail, power_mw
///   selection    strategy, n, occupancy per mode, compliant, nf_fail,
///                iip3_fail, average_power_mw, gain min/mean/max
///   comparison   subject, baseline, delta_compliance, delta_power
///   anchors      subject, baseline, targets, achieved deltas, pass flags and
///                the binding power knob
std::vector<Artifact> render_tables(const ReportSet& reports, OutputFormat format);

nlohmann::json to_json(const ReportSet& reports);

/// A free-form table (first row is the header) rendered as one artifact
/// "<name>.csv", "<name>.txt" or "<name>.json". In JSON, cells that parse
/// completely as numbers become numbers.
using TableRows = std::vector<std::vector<std::string>>;
Artifact render_table(std::string_view name, const TableRows& rows, OutputFormat format);

/// Digits for numbers in tables of the given format.
std::string format_cell(double v, OutputFormat format);

/// Writes through a temporary file in the same directory, then renames.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
void write_artifacts(const std::filesystem::path& dir, std::span<const Artifact> artifacts);

}  // namespace lnayield
