#include "lnayield/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lnayield/config.hpp"
#include "lnayield/error.hpp"
#include "lnayield/explorer.hpp"
#include "lnayield/format.hpp"
#include "lnayield/json_util.hpp"
#include "lnayield/manifest.hpp"
#include "lnayield/montecarlo.hpp"
#include "lnayield/report.hpp"
#include "lnayield/selection.hpp"
#include "lnayield/targets.hpp"

namespace lnayield {
namespace {

namespace fs = std::filesystem;
constexpr const char* kModule = "cli";

struct GlobalOptions {
  std::string config = "paper";
  std::uint64_t seed = 1;
  std::size_t n = 100000;
  std::string out_dir = "out";
  std::string format = "csv";
  unsigned threads = 1;
};

struct FitOptions {
  std::string spec_path;
};

struct CalibrateOptions {
  std::size_t eval_n = 20000;
  std::size_t max_evals = 400;
  bool from_prior = false;
};

struct SimulateOptions {
  bool populations = true;
};

struct SelectOptions {
  std::vector<std::string> strategies{"best-gain", "best-receiver"};
  bool outcomes = true;
};

struct CompareOptions {
  std::vector<std::string> strategies{"best-gain", "best-receiver"};
  std::vector<std::string> baselines;  // empty: every traditional design
};

// State shared by one subcommand run.
class Run {
 public:
  Run(const GlobalOptions& g, std::string command, std::ostream& out)
      : g_(g), out_(out), format_(output_format_from_name(g.format)), timer_(manifest_) {
    manifest_.command = std::move(command);
    manifest_.seed = g.seed;
    manifest_.n = g.n;
    dataset_ = timer_.time("load_config", [&] { return load_config(g.config); });
    manifest_.config_name = dataset_.name;
    manifest_.config_digest = config_digest(to_json(dataset_));
  }

  const Dataset& dataset() const { return dataset_; }
  Dataset& dataset() { return dataset_; }
  const GlobalOptions& options() const { return g_; }
  OutputFormat format() const { return format_; }
  StepTimer& timer() { return timer_; }
  RunManifest& manifest() { return manifest_; }
  std::ostream& out() { return out_; }

  const PlnaDesign& plna() const {
    if (!dataset_.plna) throw ValidationError(kModule, "config '" + dataset_.name + "' has no PLNA design");
    return *dataset_.plna;
  }

  void emit(const Artifact& a) {
    write_file_atomic(fs::path(g_.out_dir) / a.filename, a.content);
    manifest_.outputs.push_back(a.filename);
  }

  void emit_all(const std::vector<Artifact>& artifacts) {
    for (const auto& a : artifacts) emit(a);
  }

  // Like render_tables, without tables that have nothing to show.
  void emit_report(const ReportSet& r) {
    for (auto& a : render_tables(r, format_)) {
      const std::string stem = fs::path(a.filename).stem().string();
      const bool empty = (stem == "selection" && r.selections.empty()) ||
                         (stem == "comparison" && r.comparisons.empty()) || (stem == "anchors" && r.anchors.empty()) ||
                         ((stem == "summary" || stem == "violations" || stem == "compliance") && r.designs.empty());
      if (!empty) emit(a);
    }
  }

  void finish() {
    emit({"manifest.json", to_json(manifest_).dump(2) + "\n"});
    out_ << "wrote " << manifest_.outputs.size() << " files to " << g_.out_dir << "\n";
  }

 private:
  GlobalOptions g_;
  std::ostream& out_;
  OutputFormat format_;
  RunManifest manifest_;
  StepTimer timer_;
  Dataset dataset_;
};

std::string csv_of(const std::function<void(std::ostream&)>& writer) {
  std::ostringstream ss;
  writer(ss);
  return ss.str();
}

std::string file_safe(std::string s) {
  std::replace(s.begin(), s.end(), '/', '_');
  return s;
}

std::vector<DesignReport> simulate_traditional(Run& run, const std::vector<const TraditionalDesign*>& designs,
                                               bool write_populations) {
  const auto& d = run.dataset();
  const auto limits = d.stage2_limits();
  const auto& g = run.options();
  std::vector<DesignReport> out;
  for (const auto* t : designs) {
    auto pop = run.timer().time("simulate:" + t->id,
                                [&] { return generate_population(t->variability, t->id, g.n, g.seed, g.threads); });
    out.push_back(report_design(pop, 0, t->id, t->power_mw(), d.lna_spec, limits, d.receiver_targets));
    if (write_populations)
      run.emit({"population_" + file_safe(t->id) + ".csv", csv_of([&](std::ostream& s) { write_population_csv(pop, s); })});
  }
  return out;
}

DiePopulation simulate_plna(Run& run) {
  const auto& p = run.plna();
  const auto& g = run.options();
  return run.timer().time("simulate:" + p.id,
                          [&] { return generate_population(p.variability, p.id, g.n, g.seed, g.threads); });
}

std::vector<DesignReport> plna_mode_reports(Run& run, const DiePopulation& pop) {
  const auto& d = run.dataset();
  const auto& p = run.plna();
  const auto limits = d.stage2_limits();
  std::vector<DesignReport> out;
  for (auto m : kAllPlnaModes)
    out.push_back(report_design(pop, mode_index(m), p.id + "/" + std::string(mode_name(m)), p.mode_power_mw(m),
                                d.lna_spec, limits, d.receiver_targets));
  return out;
}

std::vector<const TraditionalDesign*> all_traditional(const Dataset& d) {
  std::vector<const TraditionalDesign*> out;
  for (const auto& t : d.traditional) out.push_back(&t);
  return out;
}

// "0.4" matches the design with that nominal current, anything else an id.
std::vector<const TraditionalDesign*> resolve_baselines(const Dataset& d, const std::vector<std::string>& tokens) {
  if (tokens.empty()) return all_traditional(d);
  std::vector<const TraditionalDesign*> out;
  for (const auto& tok : tokens) {
    const TraditionalDesign* hit = nullptr;
    for (const auto& t : d.traditional) {
      if (t.id == tok) hit = &t;
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (!hit && end != tok.c_str() && *end == '\0' && std::abs(v - t.nominal_current_ma) < 1e-9) hit = &t;
      if (hit) break;
    }
    if (!hit) throw ValidationError(kModule, "no baseline design matches '" + tok + "'");
    out.push_back(hit);
  }
  return out;
}

std::vector<SelectionRun> run_strategies(Run& run, const DiePopulation& pop, const std::vector<std::string>& names) {
  const auto& d = run.dataset();
  const auto limits = d.stage2_limits();
  std::vector<SelectionRun> out;
  for (const auto& name : names) {
    const auto strategy = strategy_from_name(name, d.selection_target_gain_db);
    out.push_back(run.timer().time("select:" + name, [&] {
      return apply_strategy(pop, strategy, limits, d.receiver_targets, run.plna());
    }));
  }
  return out;
}

void add_comparisons(ReportSet& r, const Dataset& d, const std::vector<SelectionRun>& runs,
                     const std::vector<DesignReport>& baselines) {
  std::vector<ComparisonSide> sides;
  for (const auto& b : baselines) sides.push_back(side_of(b, d.receiver_targets));
  for (const auto& s : runs) {
    auto rows = compare(side_of(s.report, d.receiver_targets), sides);
    r.comparisons.insert(r.comparisons.end(), rows.begin(), rows.end());
  }
  if (d.plna) r.anchors = check_published_anchors(r.comparisons, *d.plna, baselines);
  for (const auto& a : r.anchors)
    if (!a.power_ok)
      std::clog << "note: " << a.subject << " vs " << a.baseline_id << " misses the published power delta; binding knob: "
                << a.power.binding << "\n";
}

// ---------------------------------------------------------------- commands

int cmd_fit(Run& run, const FitOptions& o) {
  const auto& d = run.dataset();
  const auto fmt = run.format();
  TableRows model_rows{{"design", "mode", "parameter", "mean", "sigma", "idio_sigma"}};
  auto add_model = [&](const std::string& id, const LatentDieModel& m) {
    for (const auto& mode : m.modes)
      for (auto p : kAllRfParameters) {
        const auto& row = mode.row(p);
        model_rows.push_back({id, mode.label, std::string(parameter_name(p)), format_cell(row.mean, fmt),
                              format_cell(row.sigma, fmt), format_cell(row.idio_sigma, fmt)});
      }
  };
  for (const auto& t : d.traditional) add_model(t.id, t.variability);
  if (d.plna) add_model(d.plna->id, d.plna->variability);
  run.emit(render_table("fit", model_rows, fmt));
  run.emit({"fitted_config.json", to_json(d).dump(2) + "\n"});

  if (!o.spec_path.empty()) {
    std::ifstream in(o.spec_path);
    if (!in) throw RuntimeError(kModule, "cannot open fit spec '" + o.spec_path + "'");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw ValidationError("statmodel", std::string("malformed fit spec: ") + e.what());
    }
    namespace ju = json_util;
    ju::check_schema_version(j, 1, "", "statmodel");
    const auto& arr = ju::array(j, "marginals", "", "statmodel");
    TableRows rows{{"name", "mean", "sigma", "tail_count", "relative_spread"}};
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string path = ju::child("/marginals", i);
      MarginalSpec spec;
      spec.mean = ju::number(arr[i], "mean", path, "statmodel");
      spec.sigma = ju::optional_number(arr[i], "sigma", path, "statmodel");
      if (arr[i].contains("quantiles")) {
        const auto& qs = ju::array(arr[i], "quantiles", path, "statmodel");
        for (std::size_t k = 0; k < qs.size(); ++k) {
          const std::string qp = ju::child(ju::child(path, "quantiles"), k);
          spec.quantiles.push_back(
              {ju::number(qs[k], "value", qp, "statmodel"), ju::number(qs[k], "probability", qp, "statmodel")});
        }
      }
      const std::string name = arr[i].contains("name") ? ju::string(arr[i], "name", path, "statmodel") : path;
      Marginal m;
      double spread = 0.0;
      try {
        m = resolve_marginal(spec);
        if (!spec.sigma && !spec.quantiles.empty()) spread = fit_sigma(spec.mean, spec.quantiles).relative_spread;
      } catch (const ValidationError& e) {
        ju::fail("statmodel", path, e.what());
      }
      rows.push_back({name, format_cell(m.mean, fmt), format_cell(m.sigma, fmt), std::to_string(spec.quantiles.size()),
                      format_cell(spread, fmt)});
    }
    run.emit(render_table("fit_spec", rows, fmt));
  }
  run.out() << "fitted " << d.traditional.size() + (d.plna ? 1 : 0) << " design models\n";
  return kExitOk;
}

int cmd_calibrate(Run& run, const CalibrateOptions& o) {
  auto& d = run.dataset();
  const auto& plna = run.plna();
  const auto problem = plna_selection_problem();
  const StatisticContext ctx{d.stage2_limits(), d.receiver_targets, d.selection_target_gain_db, plna};
  CalibrationOptions opt;
  opt.evaluation_n = o.eval_n;
  opt.evaluation_seed = run.options().seed;
  opt.max_evaluations = o.max_evals;
  run.manifest().n = o.eval_n;
  const LatentDieModel start = o.from_prior ? plna_prior_model() : plna.variability;
  const auto result = run.timer().time("calibrate", [&] {
    return calibrate(start, problem.parameters, problem.targets, make_statistics_fn(problem.statistics, ctx), opt);
  });

  const auto fmt = run.format();
  TableRows rows{{"kind", "name", "value", "target", "residual"}};
  for (std::size_t i = 0; i < problem.parameters.size(); ++i)
    rows.push_back({"parameter", problem.parameters[i].name(result.model), format_cell(result.parameter_values[i], fmt),
                    "", ""});
  for (std::size_t i = 0; i < problem.targets.size(); ++i)
    rows.push_back({"statistic", problem.targets[i].name, format_cell(result.simulated[i], fmt),
                    format_cell(problem.targets[i].value, fmt), format_cell(result.residuals[i], fmt)});
  rows.push_back({"objective", "initial", format_cell(result.initial_objective, fmt), "", ""});
  rows.push_back({"objective", "final", format_cell(result.objective, fmt), "", ""});
  rows.push_back({"objective", "evaluations", std::to_string(result.evaluations), "", ""});
  run.emit(render_table("calibration", rows, fmt));

  Dataset calibrated = d;
  calibrated.plna->variability = result.model;
  run.emit({"calibrated_config.json", to_json(calibrated).dump(2) + "\n"});
  run.out() << result.diagnostic << "\n";
  return kExitOk;
}

int cmd_simulate(Run& run, const SimulateOptions& o) {
  const auto& d = run.dataset();
  ReportSet r;
  r.designs = simulate_traditional(run, all_traditional(d), o.populations);
  if (d.plna) {
    const auto pop = simulate_plna(run);
    auto modes = plna_mode_reports(run, pop);
    r.designs.insert(r.designs.end(), modes.begin(), modes.end());
    if (o.populations)
      run.emit({"population_" + file_safe(d.plna->id) + ".csv",
                csv_of([&](std::ostream& s) { write_population_csv(pop, s); })});
  }
  run.emit_report(r);
  for (const auto& dr : r.designs)
    run.out() << dr.design_id << ": compliant " << format_significant(dr.compliance.both, kTextDigits) << "\n";
  return kExitOk;
}

int cmd_select(Run& run, const SelectOptions& o) {
  const auto pop = simulate_plna(run);
  const auto runs = run_strategies(run, pop, o.strategies);
  ReportSet r;
  for (const auto& s : runs) {
    r.selections.push_back(s.report);
    if (o.outcomes)
      run.emit({"outcomes_" + s.report.strategy + ".csv",
                csv_of([&](std::ostream& os) { write_outcomes_csv(s.outcomes, os); })});
    run.out() << s.report.strategy << ": compliant " << format_significant(s.report.compliant, kTextDigits)
              << ", average power " << format_significant(s.report.average_power_mw, kTextDigits) << " mW\n";
  }
  run.emit_report(r);
  return kExitOk;
}

int cmd_compare(Run& run, const CompareOptions& o) {
  const auto& d = run.dataset();
  const auto baselines = resolve_baselines(d, o.baselines);
  if (baselines.empty()) throw ValidationError(kModule, "config '" + d.name + "' has no baseline designs");
  ReportSet r;
  r.designs = simulate_traditional(run, baselines, false);
  const auto pop = simulate_plna(run);
  const auto runs = run_strategies(run, pop, o.strategies);
  for (const auto& s : runs) r.selections.push_back(s.report);
  add_comparisons(r, d, runs, r.designs);
  run.emit_report(r);
  for (const auto& c : r.comparisons)
    run.out() << c.subject << " vs " << c.baseline_id << ": dS " << format_significant(c.delta_compliance, kTextDigits)
              << ", dP " << format_significant(c.delta_power, kTextDigits) << "\n";
  return kExitOk;
}

int cmd_explore(Run& run) {
  const auto& d = run.dataset();
  const auto model = surrogate_performance_model();
  const auto points = run.timer().time("sweep", [&] { return sweep(d.sweep.grid, model); });
  const auto feasible = filter_feasible(points, d.sweep.constraints);
  const auto picks = pick_best_per_current(feasible);
  run.emit({"sweep.csv", csv_of([&](std::ostream& s) { write_sweep_csv(points, d.sweep.constraints, picks, s); })});
  const auto fmt = run.format();
  TableRows rows{{"i_d_ma", "w1_um", "gain_db", "nf_db", "iip3_dbm", "s11_db", "s22_db"}};
  for (const auto& [current, p] : picks) {
    std::vector<std::string> row{format_cell(current, fmt), format_cell(p.w1_um, fmt)};
    for (auto param : kAllRfParameters) row.push_back(format_cell(p.q.get(param), fmt));
    rows.push_back(std::move(row));
  }
  run.emit(render_table("explore_best", rows, fmt));
  run.out() << points.size() << " grid points, " << feasible.size() << " feasible, " << picks.size()
            << " currents with a pick\n";
  return kExitOk;
}

int cmd_report(Run& run) {
  const auto& d = run.dataset();
  ReportSet r;
  r.designs = simulate_traditional(run, all_traditional(d), false);
  if (d.plna) {
    const auto pop = simulate_plna(run);
    auto modes = plna_mode_reports(run, pop);
    std::vector<std::string> names{"best-gain", "best-receiver"};
    for (auto m : kAllPlnaModes) names.push_back(SelectionStrategy::fixed(m).name());
    const auto runs = run_strategies(run, pop, names);
    for (const auto& s : runs) r.selections.push_back(s.report);
    const std::vector<DesignReport> baselines = r.designs;
    const std::vector<SelectionRun> adaptive(runs.begin(), runs.begin() + 2);
    add_comparisons(r, d, adaptive, baselines);
    r.designs.insert(r.designs.end(), modes.begin(), modes.end());
  }
  run.emit_all(render_tables(r, run.format()));
  run.out() << "rendered " << r.designs.size() << " designs, " << r.selections.size() << " strategies, "
            << r.comparisons.size() << " comparisons\n";
  return kExitOk;
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Yield analysis for fixed and programmable LNAs", args.empty() ? "lnayield" : args[0]};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--config", g.config, "Config JSON path or built-in name")->capture_default_str();
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--n", g.n, "Dies per population")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--out-dir", g.out_dir, "Output directory")->capture_default_str();
  app.add_option("--format", g.format, "Table format")->capture_default_str()->check(CLI::IsMember({"csv", "json", "text"}));
  app.add_option("--threads", g.threads, "Sampling threads (output does not depend on it)")
      ->capture_default_str()
      ->check(CLI::Range(1u, 256u));

  FitOptions fit_o;
  auto* fit = app.add_subcommand("fit", "Fit Gaussian marginals from published means and tails");
  fit->add_option("--spec", fit_o.spec_path, "Extra marginals to fit (JSON with mean + quantiles)");

  CalibrateOptions cal_o;
  auto* cal = app.add_subcommand("calibrate", "Search the PLNA correlation structure against selection outcomes");
  cal->add_option("--eval-n", cal_o.eval_n, "Dies per objective evaluation")
      ->capture_default_str()
      ->check(CLI::Range(std::size_t{10000}, std::size_t{10000000}));
  cal->add_option("--max-evals", cal_o.max_evals, "Evaluation budget")->capture_default_str()->check(CLI::PositiveNumber);
  cal->add_flag("--from-prior", cal_o.from_prior, "Start from the uncalibrated built-in PLNA model");

  SimulateOptions sim_o;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo populations and per-design summaries");
  bool no_populations = false;
  sim->add_flag("--no-populations", no_populations, "Skip the per-die population CSVs");

  SelectOptions sel_o;
  auto* sel = app.add_subcommand("select", "Apply mode-selection strategies to a PLNA population");
  sel->add_option("--strategy", sel_o.strategies, "best-gain, best-receiver, fixed-HG, fixed-MG-LP, fixed-LG")
      ->delimiter(',');
  bool no_outcomes = false;
  sel->add_flag("--no-outcomes", no_outcomes, "Skip the per-die outcome CSVs");

  CompareOptions cmp_o;
  auto* cmp = app.add_subcommand("compare", "Compliance and power deltas against fixed designs");
  cmp->add_option("--strategy", cmp_o.strategies, "Strategies to compare")->delimiter(',');
  cmp->add_option("--baselines", cmp_o.baselines, "Baseline ids or nominal currents, e.g. 0.4,0.6")->delimiter(',');

  auto* exp = app.add_subcommand("explore", "Sizing sweep on the surrogate performance model");
  auto* rep = app.add_subcommand("report", "Simulate, select and compare, then render every table");

  // CLI11 takes the arguments without the program name, in reverse order.
  std::vector<std::string> rev(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(rev.begin(), rev.end());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }
  sim_o.populations = !no_populations;
  sel_o.outcomes = !no_outcomes;

  try {
    for (const auto& s : sel_o.strategies) (void)strategy_from_name(s);
    for (const auto& s : cmp_o.strategies) (void)strategy_from_name(s);
    const std::string command = app.get_subcommands().front()->get_name();
    Run run(g, command, out);
    int rc = kExitOk;
    if (fit->parsed()) rc = cmd_fit(run, fit_o);
    else if (cal->parsed()) rc = cmd_calibrate(run, cal_o);
    else if (sim->parsed()) rc = cmd_simulate(run, sim_o);
    else if (sel->parsed()) rc = cmd_select(run, sel_o);
    else if (cmp->parsed()) rc = cmd_compare(run, cmp_o);
    else if (exp->parsed()) rc = cmd_explore(run);
    else if (rep->parsed()) rc = cmd_report(run);
    run.finish();
    return rc;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

int cli_dispatch(int argc, char** argv) {
  return cli_dispatch(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}

}  // namespace lnayield
