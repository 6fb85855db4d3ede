#include "lnayield/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <system_error>

#include "lnayield/error.hpp"
#include "lnayield/format.hpp"
#include "lnayield/paper_data.hpp"

namespace lnayield {
namespace {

constexpr const char* kModule = "report";
using nlohmann::json;
using Table = std::vector<std::vector<std::string>>;  // first row is the header

std::string csv_num(double v) { return format_significant(v, kCsvDigits); }
std::string txt_num(double v) { return format_significant(v, kTextDigits); }

Table summary_table(const ReportSet& r, bool text) {
  Table t{{"design", "parameter", "min", "mean", "max"}};
  for (const auto& d : r.designs)
    for (auto p : kAllRfParameters) {
      const auto& s = d.summary[p];
      auto f = text ? txt_num : csv_num;
      t.push_back({d.design_id, std::string(parameter_name(p)), f(s.min), f(s.mean), f(s.max)});
    }
  return t;
}

Table violations_table(const ReportSet& r, bool text) {
  Table t{{"clause"}};
  for (const auto& d : r.designs) t[0].push_back(d.design_id);
  for (auto c : kAllSpecClauses) {
    std::vector<std::string> row{std::string(clause_name(c))};
    for (const auto& d : r.designs) row.push_back(text ? txt_num(d.violations[c]) : csv_num(d.violations[c]));
    t.push_back(std::move(row));
  }
  return t;
}

Table compliance_table(const ReportSet& r, bool text) {
  auto f = text ? txt_num : csv_num;
  Table t{{"design", "n", "compliant", "nf_fail", "iip3_fail", "power_mw"}};
  for (const auto& d : r.designs)
    t.push_back({d.design_id, std::to_string(d.compliance.n), f(d.compliance.both), f(d.compliance.nf_fail),
                 f(d.compliance.iip3_fail), f(d.power_mw)});
  return t;
}

Table selection_table(const ReportSet& r, bool text) {
  auto f = text ? txt_num : csv_num;
  Table t{{"strategy", "n", "occupancy_HG", "occupancy_MG-LP", "occupancy_LG", "compliant", "nf_fail", "iip3_fail",
           "average_power_mw", "gain_min_db", "gain_mean_db", "gain_max_db"}};
  for (const auto& s : r.selections) {
    const auto& g = s.post[RfParameter::Gain];
    t.push_back({s.strategy, std::to_string(s.n), f(s.occupancy[0]), f(s.occupancy[1]), f(s.occupancy[2]),
                 f(s.compliant), f(s.nf_fail), f(s.iip3_fail), f(s.average_power_mw), f(g.min), f(g.mean), f(g.max)});
  }
  return t;
}

Table comparison_table(const ReportSet& r, bool text) {
  auto f = text ? txt_num : csv_num;
  Table t{{"subject", "baseline", "delta_compliance", "delta_power"}};
  for (const auto& c : r.comparisons) t.push_back({c.subject, c.baseline_id, f(c.delta_compliance), f(c.delta_power)});
  return t;
}

Table anchors_table(const ReportSet& r, bool text) {
  auto f = text ? txt_num : csv_num;
  Table t{{"subject", "baseline", "target_delta_compliance", "compliance_bound", "delta_compliance", "compliance_ok",
           "target_delta_power", "delta_power", "power_ok", "binding", "required_high_power_share"}};
  for (const auto& a : r.anchors)
    t.push_back({a.subject, a.baseline_id, f(a.target_delta_compliance), f(a.compliance_bound), f(a.delta_compliance),
                 a.compliance_ok ? "1" : "0", f(a.target_delta_power), f(a.delta_power), a.power_ok ? "1" : "0",
                 a.power.binding, f(a.power.required_high_power_share)});
  return t;
}

std::string render_csv(const Table& t) {
  std::string out;
  for (const auto& row : t) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i];
    }
    out += '\n';
  }
  return out;
}

std::string render_text(const std::string& title, const Table& t) {
  std::vector<std::size_t> width;
  for (const auto& row : t)
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (width.size() <= i) width.push_back(0);
      width[i] = std::max(width[i], row[i].size());
    }
  std::string out = title + "\n";
  for (std::size_t r = 0; r < t.size(); ++r) {
    std::string line;
    for (std::size_t i = 0; i < t[r].size(); ++i) {
      if (i) line += "  ";
      line += t[r][i];
      if (i + 1 < t[r].size()) line.append(width[i] - t[r][i].size(), ' ');
    }
    out += line + "\n";
    if (r == 0) {
      std::size_t total = 0;
      for (std::size_t i = 0; i < width.size(); ++i) total += width[i] + (i ? 2 : 0);
      out += std::string(total, '-') + "\n";
    }
  }
  return out;
}

json stats_json(const SummaryStats& s) {
  json j = {{"n", s.n}};
  for (auto p : kAllRfParameters)
    j["parameters"][std::string(parameter_name(p))] = {{"min", s[p].min}, {"mean", s[p].mean}, {"max", s[p].max}};
  return j;
}

}  // namespace

DesignReport report_design(const DiePopulation& pop, std::size_t mode, std::string id, double power_mw,
                           const LnaSpecCorner& spec, const StageTwoLimits& limits, const ReceiverTargets& targets) {
  DesignReport r;
  r.design_id = std::move(id);
  r.power_mw = power_mw;
  r.summary = summarize(pop, mode);
  r.violations = violation_rates(pop, spec, mode);
  r.compliance = receiver_compliance(pop, limits, targets, mode);
  return r;
}

ComparisonSide side_of(const SelectionReport& r, const ReceiverTargets& targets) {
  return {r.strategy, r.n, targets, r.compliant, r.average_power_mw};
}

ComparisonSide side_of(const DesignReport& r, const ReceiverTargets& targets) {
  return {r.design_id, r.compliance.n, targets, r.compliance.both, r.power_mw};
}

std::vector<ComparisonRow> compare(const ComparisonSide& subject, std::span<const ComparisonSide> baselines) {
  std::vector<ComparisonRow> rows;
  for (const auto& b : baselines) {
    if (b.n != subject.n)
      throw ValidationError(kModule, "cannot compare " + subject.label + " (n=" + std::to_string(subject.n) + ") with " +
                                         b.label + " (n=" + std::to_string(b.n) + ")");
    if (b.targets.nf_rx_max_db != subject.targets.nf_rx_max_db ||
        b.targets.iip3_rx_min_dbm != subject.targets.iip3_rx_min_dbm)
      throw ValidationError(kModule, "cannot compare " + subject.label + " with " + b.label +
                                         ": receiver targets differ");
    if (!(b.power_mw > 0.0)) throw ValidationError(kModule, "baseline " + b.label + " has no positive power");
    rows.push_back({subject.label, b.label, subject.compliant - b.compliant, (subject.power_mw - b.power_mw) / b.power_mw});
  }
  return rows;
}

PowerBinding diagnose_power_anchor(const PlnaDesign& plna, double baseline_power_mw, double target_delta,
                                   double achieved_delta) {
  if (!(baseline_power_mw > 0.0)) throw ValidationError(kModule, "baseline power must be > 0");
  PowerBinding b;
  b.target_delta = target_delta;
  b.achieved_delta = achieved_delta;
  b.required_power_mw = baseline_power_mw * (1.0 + target_delta);
  const double lo = plna.mode_power_mw(PlnaMode::MG_LP);
  const double hi = plna.mode_power_mw(PlnaMode::HG);
  b.reachable_by_occupancy = b.required_power_mw >= lo && b.required_power_mw <= hi;
  b.required_high_power_share = std::clamp((b.required_power_mw - lo) / (hi - lo), 0.0, 1.0);
  b.binding = b.reachable_by_occupancy ? "mode-occupancy" : "bias-overhead";
  return b;
}

std::vector<AnchorCheck> check_published_anchors(std::span<const ComparisonRow> rows, const PlnaDesign& plna,
                                                 std::span<const DesignReport> baselines, double tolerance) {
  std::vector<AnchorCheck> out;
  for (const auto& row : rows)
    for (const auto& a : reference::kComparisonAnchors) {
      if (row.subject != a.strategy || row.baseline_id != a.baseline) continue;
      auto it = std::find_if(baselines.begin(), baselines.end(),
                             [&](const DesignReport& d) { return d.design_id == row.baseline_id; });
      if (it == baselines.end()) throw ValidationError(kModule, "no baseline report for " + row.baseline_id);
      AnchorCheck c;
      c.subject = row.subject;
      c.baseline_id = row.baseline_id;
      c.target_delta_compliance = a.delta_s;
      c.compliance_bound = a.delta_s_bound;
      c.target_delta_power = a.delta_p;
      c.delta_compliance = row.delta_compliance;
      c.delta_power = row.delta_power;
      // A quoted "|dS| < b" allows the bound plus the tolerance.
      c.compliance_ok = std::isnan(a.delta_s) ? std::abs(row.delta_compliance) < a.delta_s_bound + tolerance
                                              : std::abs(row.delta_compliance - a.delta_s) <= tolerance;
      c.power_ok = std::abs(row.delta_power - a.delta_p) <= tolerance;
      c.power = diagnose_power_anchor(plna, it->power_mw, a.delta_p, row.delta_power);
      out.push_back(std::move(c));
    }
  return out;
}

OutputFormat output_format_from_name(std::string_view name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  if (name == "text") return OutputFormat::Text;
  throw ValidationError(kModule, "unknown output format '" + std::string(name) + "' (csv, json, text)");
}

json to_json(const ReportSet& reports) {
  json designs = json::array();
  for (const auto& d : reports.designs) {
    json v = json::object();
    for (auto c : kAllSpecClauses) v[std::string(clause_name(c))] = d.violations[c];
    designs.push_back({{"design_id", d.design_id},
                       {"power_mw", d.power_mw},
                       {"summary", stats_json(d.summary)},
                       {"violations", v},
                       {"compliance",
                        {{"n", d.compliance.n},
                         {"compliant", d.compliance.both},
                         {"nf_fail", d.compliance.nf_fail},
                         {"iip3_fail", d.compliance.iip3_fail}}}});
  }
  json selections = json::array();
  for (const auto& s : reports.selections) {
    json occ = json::object();
    for (auto m : kAllPlnaModes) occ[std::string(mode_name(m))] = s.occupancy[mode_index(m)];
    selections.push_back({{"strategy", s.strategy},
                          {"n", s.n},
                          {"occupancy", occ},
                          {"compliant", s.compliant},
                          {"nf_fail", s.nf_fail},
                          {"iip3_fail", s.iip3_fail},
                          {"average_power_mw", s.average_power_mw},
                          {"post", stats_json(s.post)}});
  }
  json comparisons = json::array();
  for (const auto& c : reports.comparisons)
    comparisons.push_back({{"subject", c.subject},
                           {"baseline", c.baseline_id},
                           {"delta_compliance", c.delta_compliance},
                           {"delta_power", c.delta_power}});
  json anchors = json::array();
  auto num_or_null = [](double v) { return std::isnan(v) ? json(nullptr) : json(v); };
  for (const auto& a : reports.anchors)
    anchors.push_back({{"subject", a.subject},
                       {"baseline", a.baseline_id},
                       {"target_delta_compliance", num_or_null(a.target_delta_compliance)},
                       {"compliance_bound", num_or_null(a.compliance_bound)},
                       {"delta_compliance", a.delta_compliance},
                       {"compliance_ok", a.compliance_ok},
                       {"target_delta_power", a.target_delta_power},
                       {"delta_power", a.delta_power},
                       {"power_ok", a.power_ok},
                       {"binding", a.power.binding},
                       {"required_high_power_share", a.power.required_high_power_share}});
  return {{"schema_version", kReportSchemaVersion},
          {"designs", designs},
          {"selections", selections},
          {"comparisons", comparisons},
          {"anchors", anchors}};
}

std::string format_cell(double v, OutputFormat format) {
  return format == OutputFormat::Text ? txt_num(v) : csv_num(v);
}

Artifact render_table(std::string_view name, const TableRows& rows, OutputFormat format) {
  const std::string base(name);
  if (format == OutputFormat::Csv) return {base + ".csv", render_csv(rows)};
  if (format == OutputFormat::Text) return {base + ".txt", render_text(base, rows)};
  json out = json::array();
  for (std::size_t r = 1; r < rows.size(); ++r) {
    json obj = json::object();
    for (std::size_t c = 0; c < rows[r].size() && c < rows[0].size(); ++c) {
      const std::string& cell = rows[r][c];
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (!cell.empty() && end == cell.c_str() + cell.size() && std::isfinite(v))
        obj[rows[0][c]] = v;
      else
        obj[rows[0][c]] = cell;
    }
    out.push_back(std::move(obj));
  }
  return {base + ".json", json{{"schema_version", kReportSchemaVersion}, {"table", base}, {"rows", out}}.dump(2) + "\n"};
}

std::vector<Artifact> render_tables(const ReportSet& reports, OutputFormat format) {
  if (format == OutputFormat::Json) return {{"report.json", to_json(reports).dump(2) + "\n"}};
  const bool text = format == OutputFormat::Text;
  const std::pair<const char*, Table> tables[] = {
      {"summary", summary_table(reports, text)},         {"violations", violations_table(reports, text)},
      {"compliance", compliance_table(reports, text)},   {"selection", selection_table(reports, text)},
      {"comparison", comparison_table(reports, text)},   {"anchors", anchors_table(reports, text)},
  };
  std::vector<Artifact> out;
  for (const auto& [name, t] : tables) {
    if (text)
      out.push_back({std::string(name) + ".txt", render_text(name, t)});
    else
      out.push_back({std::string(name) + ".csv", render_csv(t)});
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw RuntimeError(kModule, "cannot create " + path.parent_path().string() + ": " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw RuntimeError(kModule, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw RuntimeError(kModule, "write failed for " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw RuntimeError(kModule, "cannot move output into place at " + path.string());
  }
}

void write_artifacts(const std::filesystem::path& dir, std::span<const Artifact> artifacts) {
  for (const auto& a : artifacts) write_file_atomic(dir / a.filename, a.content);
}

}  // namespace lnayield
