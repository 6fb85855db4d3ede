#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lnayield/budget.hpp"
#include "lnayield/designs.hpp"
#include "lnayield/explorer.hpp"

namespace lnayield {

inline constexpr int kConfigSchemaVersion = 1;

struct SweepSettings {
  SweepGrid grid;
  SweepConstraints constraints;
};

/// Everything a run needs: specs, receiver targets, designs with their
/// variability models, and the sizing-sweep setup.
struct Dataset {
  std::string name;
  LnaSpecCorner lna_spec;
  ReceiverTargets receiver_targets;
  std::optional<StageTwoLimits> stage2_override;
  double selection_target_gain_db = 10.5;
  std::vector<TraditionalDesign> traditional;
  std::optional<PlnaDesign> plna;
  SweepSettings sweep;

  /// The override when present, otherwise derived from lna_spec and targets.
  StageTwoLimits stage2_limits() const;
  const TraditionalDesign& traditional_design(std::string_view id) const;
  void validate() const;
};

/// "paper", "paper-0.4mA", "paper-0.5mA", "paper-0.6mA", "paper-0.7mA", "paper-plna".
std::vector<std::string> builtin_dataset_names();
Dataset builtin_dataset(std::string_view name);

/// Parses and validates a JSON config. Errors name the JSON pointer of the
/// offending field or the violated invariant.
Dataset parse_config(std::string_view text);
nlohmann::json to_json(const Dataset& d);

/// A built-in dataset name, or a path to a JSON config.
Dataset load_config(const std::string& path_or_name);

SweepGrid default_sweep_grid();

}  // namespace lnayield
