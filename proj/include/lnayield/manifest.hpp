#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace lnayield {

inline constexpr std::string_view kToolVersion = "1.0.0";
inline constexpr int kManifestSchemaVersion = 1;

/// Written next to every run's outputs.
struct RunManifest {
  std::string command;
  std::string config_name;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::string config_digest;  // hex SHA-256 of the canonical config JSON
  std::string tool_version{kToolVersion};
  std::vector<std::string> outputs;
  std::vector<std::pair<std::string, double>> timings_s;  // step name, wall seconds
};

/// Hex SHA-256 of `j.dump()`. nlohmann::json keeps object keys sorted, so the
/// digest does not depend on the key order of the source text.
std::string config_digest(const nlohmann::json& j);
std::string sha256_hex(std::string_view bytes);

nlohmann::json to_json(const RunManifest& m);

/// Accumulates named wall-clock timings.
class StepTimer {
 public:
  explicit StepTimer(RunManifest& m) : manifest_(m) {}
  template <typename F>
  decltype(auto) time(std::string name, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    struct Record {
      RunManifest& m;
      std::string name;
      std::chrono::steady_clock::time_point t0;
      ~Record() { m.timings_s.emplace_back(name, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()); }
    } rec{manifest_, std::move(name), t0};
    return f();
  }

 private:
  RunManifest& manifest_;
};

}  // namespace lnayield
