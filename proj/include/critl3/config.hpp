#pragma once

#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace critl3 {

// Duhamel boundedness constant from calibrate_duhamel_constant at N = 32,
// 128 steps, frozen so horizons do not drift between runs.
inline constexpr double frozen_c_est = 0.12093115578692012;

struct ExperimentConfig {
  std::string preset = "bump";
  int resolution = 32;
  double box_length = 6.283185307179586;
  std::optional<double> horizon;  // empty selects T automatically
  double dt = 1e-3;
  double rho = 0.0;
  double tol = 1e-8;
  int kmax = 30;
  int steps = 256;
  double target_l3 = 1.0;
  std::uint64_t seed = 1;
  int threads = 1;
  double c_est = frozen_c_est;
  // "section.key" -> value for every flag applied over the file
  std::map<std::string, std::string> overridden;

  double threshold() const { return 1.0 / (16.0 * c_est); }
  nlohmann::json to_json() const;
};

// Keys accepted in the INI file, as "section.key".
std::vector<std::string> config_keys();

// Reads an INI file (empty path: defaults only), applies overrides keyed by
// "section.key" and validates. Throws ConfigError with every violation.
ExperimentConfig load_config(const std::filesystem::path& path,
                             const std::map<std::string, std::string>& overrides = {});

}  // namespace critl3
