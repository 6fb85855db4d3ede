#include "lnayield/manifest.hpp"

#include <array>
#include <cstdio>

#include <openssl/evp.h>

#include "lnayield/error.hpp"

namespace lnayield {

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
    throw RuntimeError("report", "SHA-256 digest failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

std::string config_digest(const nlohmann::json& j) { return sha256_hex(j.dump()); }

nlohmann::json to_json(const RunManifest& m) {
  nlohmann::json timings = nlohmann::json::array();
  for (const auto& [name, s] : m.timings_s) timings.push_back({{"step", name}, {"seconds", s}});
  return {{"schema_version", kManifestSchemaVersion},
          {"command", m.command},
          {"config", m.config_name},
          {"config_digest", m.config_digest},
          {"seed", m.seed},
          {"n", m.n},
          {"tool_version", m.tool_version},
          {"outputs", m.outputs},
          {"timings", timings}};
}

}  // namespace lnayield
