#include "lnayield/config.hpp"

#include <fstream>
#include <sstream>

#include "lnayield/error.hpp"
#include "lnayield/json_util.hpp"

namespace lnayield {
namespace {

constexpr const char* kModule = "designs";
namespace ju = json_util;
using nlohmann::json;

// Runs `f`, re-raising any ValidationError as one located at `path`.
template <typename F>
void at_path(const std::string& path, F&& f) {
  try {
    f();
  } catch (const ValidationError& e) {
    ju::fail(kModule, path, e.what());
  }
}

json sizing_json(const SizingMetadata& s) {
  json j = json::object();
  for (const auto& [k, v] : s) j[k] = v;
  return j;
}

SizingMetadata sizing_from_json(const json& parent, const std::string& path) {
  SizingMetadata s;
  if (!parent.contains("sizing")) return s;
  const json& j = ju::object(parent, "sizing", path, kModule);
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it->is_number()) ju::fail(kModule, ju::child(ju::child(path, "sizing"), it.key()), "expected number");
    s[it.key()] = it->get<double>();
  }
  return s;
}

std::vector<double> number_array(const json& j, const std::string& key, const std::string& path) {
  const json& a = ju::array(j, key, path, kModule);
  std::vector<double> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_number()) ju::fail(kModule, ju::child(ju::child(path, key), i), "expected number");
    out.push_back(a[i].get<double>());
  }
  return out;
}

json traditional_json(const TraditionalDesign& d) {
  return {{"id", d.id},
          {"nominal_current_ma", d.nominal_current_ma},
          {"supply_voltage_v", d.supply_voltage_v},
          {"bias_overhead_ma", d.bias_overhead_ma},
          {"sizing", sizing_json(d.sizing)},
          {"variability", to_json(d.variability)}};
}

TraditionalDesign traditional_from_json(const json& j, const std::string& path) {
  TraditionalDesign d;
  d.id = ju::string(j, "id", path, kModule);
  d.nominal_current_ma = ju::number(j, "nominal_current_ma", path, kModule);
  d.supply_voltage_v = ju::number_or(j, "supply_voltage_v", 1.2, path, kModule);
  d.bias_overhead_ma = ju::number_or(j, "bias_overhead_ma", 0.03, path, kModule);
  d.sizing = sizing_from_json(j, path);
  d.variability = latent_model_from_json(ju::object(j, "variability", path, kModule), ju::child(path, "variability"));
  at_path(path, [&] { d.validate(); });
  return d;
}

json plna_json(const PlnaDesign& p) {
  json modes = json::array();
  for (const auto& m : p.modes) {
    const auto c = controls_of(m.mode);
    modes.push_back({{"mode", std::string(mode_name(m.mode))},
                     {"phi", c.phi},
                     {"phi_g", c.phi_g},
                     {"supply_current_ma", m.supply_current_ma},
                     {"gain_offset_db", m.gain_offset_db}});
  }
  return {{"id", p.id},
          {"supply_voltage_v", p.supply_voltage_v},
          {"w1_um", p.w1_um},
          {"w3_um", p.w3_um},
          {"id1_ma", p.id1_ma},
          {"modes", std::move(modes)},
          {"sizing", sizing_json(p.sizing)},
          {"variability", to_json(p.variability)}};
}

PlnaDesign plna_from_json(const json& j, const std::string& path) {
  PlnaDesign p;
  p.id = ju::string(j, "id", path, kModule);
  p.supply_voltage_v = ju::number_or(j, "supply_voltage_v", 1.2, path, kModule);
  p.w1_um = ju::number(j, "w1_um", path, kModule);
  p.w3_um = ju::number(j, "w3_um", path, kModule);
  p.id1_ma = ju::number(j, "id1_ma", path, kModule);
  const json& modes = ju::array(j, "modes", path, kModule);
  const std::string mpath = ju::child(path, "modes");
  if (modes.size() != kPlnaModeCount) ju::fail(kModule, mpath, "expected exactly three modes");
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const std::string ep = ju::child(mpath, i);
    PlnaModeSpec spec;
    at_path(ju::child(ep, "mode"), [&] { spec.mode = mode_from_name(ju::string(modes[i], "mode", ep, kModule)); });
    const json& phi = ju::require(modes[i], "phi", ep, kModule);
    const json& phi_g = ju::require(modes[i], "phi_g", ep, kModule);
    if (!phi.is_boolean() || !phi_g.is_boolean()) ju::fail(kModule, ep, "phi and phi_g must be booleans");
    at_path(ep, [&] {
      if (mode_from_controls(phi.get<bool>(), phi_g.get<bool>()) != spec.mode)
        throw ValidationError(kModule, "control bits do not select mode " + std::string(mode_name(spec.mode)));
    });
    spec.supply_current_ma = ju::number(modes[i], "supply_current_ma", ep, kModule);
    spec.gain_offset_db = ju::number_or(modes[i], "gain_offset_db", 0.0, ep, kModule);
    if (mode_index(spec.mode) != i) ju::fail(kModule, ep, "modes must be listed as HG, MG-LP, LG");
    p.modes[i] = spec;
  }
  p.sizing = sizing_from_json(j, path);
  p.variability = latent_model_from_json(ju::object(j, "variability", path, kModule), ju::child(path, "variability"));
  at_path(path, [&] { p.validate(); });
  return p;
}

}  // namespace

SweepGrid default_sweep_grid() {
  SweepGrid g;
  g.currents_ma = {0.3, 0.4, 0.5, 0.6, 0.7};
  for (double w = 16.0; w <= 96.0; w += 4.0) g.widths_um.push_back(w);
  return g;
}

StageTwoLimits Dataset::stage2_limits() const {
  return stage2_override ? *stage2_override : derive_stage2_limits(lna_spec, receiver_targets);
}

const TraditionalDesign& Dataset::traditional_design(std::string_view id) const {
  for (const auto& d : traditional)
    if (d.id == id) return d;
  throw ValidationError(kModule, "no traditional design with id '" + std::string(id) + "'");
}

void Dataset::validate() const {
  lna_spec.validate();
  receiver_targets.validate();
  if (!std::isfinite(selection_target_gain_db)) throw ValidationError(kModule, "selection target gain must be finite");
  for (std::size_t i = 0; i < traditional.size(); ++i) {
    traditional[i].validate();
    for (std::size_t k = 0; k < i; ++k)
      if (traditional[k].id == traditional[i].id) throw ValidationError(kModule, "duplicate design id " + traditional[i].id);
  }
  if (plna) plna->validate();
  sweep.grid.validate();
  sweep.constraints.validate();
}

std::vector<std::string> builtin_dataset_names() {
  return {"paper", "paper-0.4mA", "paper-0.5mA", "paper-0.6mA", "paper-0.7mA", "paper-plna"};
}

Dataset builtin_dataset(std::string_view name) {
  const auto names = builtin_dataset_names();
  if (std::find(names.begin(), names.end(), name) == names.end())
    throw ValidationError(kModule, "unknown built-in dataset '" + std::string(name) + "'");
  auto designs = builtin_paper_designs();
  Dataset d;
  d.name = std::string(name);
  d.sweep.grid = default_sweep_grid();
  if (name == "paper" || name == "paper-plna") d.plna = std::move(designs.plna);
  for (auto& t : designs.traditional)
    if (name == "paper" || name == t.id) d.traditional.push_back(std::move(t));
  return d;
}

json to_json(const Dataset& d) {
  json trad = json::array();
  for (const auto& t : d.traditional) trad.push_back(traditional_json(t));
  const auto& s = d.lna_spec;
  const auto& c = d.sweep.constraints;
  json j = {
      {"schema_version", kConfigSchemaVersion},
      {"name", d.name},
      {"lna_spec",
       {{"gain_min_db", s.gain_min_db},
        {"gain_max_db", s.gain_max_db},
        {"nf_max_db", s.nf_max_db},
        {"iip3_min_dbm", s.iip3_min_dbm},
        {"s11_max_db", s.s11_max_db},
        {"s22_max_db", s.s22_max_db}}},
      {"receiver_targets",
       {{"nf_rx_max_db", d.receiver_targets.nf_rx_max_db}, {"iip3_rx_min_dbm", d.receiver_targets.iip3_rx_min_dbm}}},
      {"stage2_limits", nullptr},
      {"selection_target_gain_db", d.selection_target_gain_db},
      {"traditional_designs", std::move(trad)},
      {"plna", d.plna ? plna_json(*d.plna) : json(nullptr)},
      {"sweep",
       {{"grid", {{"currents_ma", d.sweep.grid.currents_ma}, {"widths_um", d.sweep.grid.widths_um}}},
        {"constraints",
         {{"s11_max_db", c.s11_max_db},
          {"s22_max_db", c.s22_max_db},
          {"gain_min_db", c.gain_min_db},
          {"gain_max_db", c.gain_max_db},
          {"nf_max_db", c.nf_max_db},
          {"iip3_min_dbm", c.iip3_min_dbm}}}}},
  };
  if (d.stage2_override)
    j["stage2_limits"] = {{"f2_max", d.stage2_override->f2_max.value()},
                          {"iip3_2_min_mw", d.stage2_override->iip3_2_min.value()}};
  return j;
}

Dataset parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(kModule, std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) ju::fail(kModule, "", "config must be a JSON object");
  ju::check_schema_version(j, kConfigSchemaVersion, "", kModule);

  Dataset d;
  d.name = j.contains("name") ? ju::string(j, "name", "", kModule) : std::string("config");

  const json& spec = ju::object(j, "lna_spec", "", kModule);
  d.lna_spec.gain_min_db = ju::number(spec, "gain_min_db", "/lna_spec", kModule);
  d.lna_spec.gain_max_db = ju::number(spec, "gain_max_db", "/lna_spec", kModule);
  d.lna_spec.nf_max_db = ju::number(spec, "nf_max_db", "/lna_spec", kModule);
  d.lna_spec.iip3_min_dbm = ju::number(spec, "iip3_min_dbm", "/lna_spec", kModule);
  d.lna_spec.s11_max_db = ju::number(spec, "s11_max_db", "/lna_spec", kModule);
  d.lna_spec.s22_max_db = ju::number(spec, "s22_max_db", "/lna_spec", kModule);
  at_path("/lna_spec", [&] { d.lna_spec.validate(); });

  const json& rt = ju::object(j, "receiver_targets", "", kModule);
  d.receiver_targets.nf_rx_max_db = ju::number(rt, "nf_rx_max_db", "/receiver_targets", kModule);
  d.receiver_targets.iip3_rx_min_dbm = ju::number(rt, "iip3_rx_min_dbm", "/receiver_targets", kModule);
  at_path("/receiver_targets", [&] { d.receiver_targets.validate(); });

  if (j.contains("stage2_limits") && !j.at("stage2_limits").is_null()) {
    const json& s2 = ju::object(j, "stage2_limits", "", kModule);
    at_path("/stage2_limits", [&] {
      d.stage2_override = StageTwoLimits{NoiseFactor(ju::number(s2, "f2_max", "/stage2_limits", kModule)),
                                         PowerMw(ju::number(s2, "iip3_2_min_mw", "/stage2_limits", kModule))};
    });
  }
  d.selection_target_gain_db = ju::number_or(j, "selection_target_gain_db", 10.5, "", kModule);

  if (j.contains("traditional_designs")) {
    const json& arr = ju::array(j, "traditional_designs", "", kModule);
    for (std::size_t i = 0; i < arr.size(); ++i)
      d.traditional.push_back(traditional_from_json(arr[i], ju::child("/traditional_designs", i)));
  }
  if (j.contains("plna") && !j.at("plna").is_null()) d.plna = plna_from_json(ju::object(j, "plna", "", kModule), "/plna");

  if (j.contains("sweep")) {
    const json& sw = ju::object(j, "sweep", "", kModule);
    const json& grid = ju::object(sw, "grid", "/sweep", kModule);
    d.sweep.grid.currents_ma = number_array(grid, "currents_ma", "/sweep/grid");
    d.sweep.grid.widths_um = number_array(grid, "widths_um", "/sweep/grid");
    at_path("/sweep/grid", [&] { d.sweep.grid.validate(); });
    if (sw.contains("constraints")) {
      const json& c = ju::object(sw, "constraints", "/sweep", kModule);
      const std::string p = "/sweep/constraints";
      auto& sc = d.sweep.constraints;
      sc.s11_max_db = ju::number_or(c, "s11_max_db", sc.s11_max_db, p, kModule);
      sc.s22_max_db = ju::number_or(c, "s22_max_db", sc.s22_max_db, p, kModule);
      sc.gain_min_db = ju::number_or(c, "gain_min_db", sc.gain_min_db, p, kModule);
      sc.gain_max_db = ju::number_or(c, "gain_max_db", sc.gain_max_db, p, kModule);
      sc.nf_max_db = ju::number_or(c, "nf_max_db", sc.nf_max_db, p, kModule);
      sc.iip3_min_dbm = ju::number_or(c, "iip3_min_dbm", sc.iip3_min_dbm, p, kModule);
      at_path(p, [&] { sc.validate(); });
    }
  } else {
    d.sweep.grid = default_sweep_grid();
  }
  d.validate();
  return d;
}

Dataset load_config(const std::string& path_or_name) {
  const auto names = builtin_dataset_names();
  if (std::find(names.begin(), names.end(), path_or_name) != names.end()) return builtin_dataset(path_or_name);
  std::ifstream in(path_or_name);
  if (!in) throw RuntimeError(kModule, "cannot open config '" + path_or_name + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace lnayield
