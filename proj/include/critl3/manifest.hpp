#pragma once

#include <filesystem>
#include <json.hpp>
#include <string>
#include <vector>

namespace critl3 {

inline constexpr const char* artifact_version = "0.1.0";
inline constexpr const char* manifest_name = "manifest.json";

struct ManifestEntry {
  std::string path;  // relative to the output directory
  std::uintmax_t bytes = 0;
  std::string sha256;
};

struct RunManifest {
  std::string command;
  nlohmann::json config;
  std::string version = artifact_version;
  std::string platform;
  double wall_clock_seconds = 0.0;
  std::vector<ManifestEntry> outputs;
};

std::string sha256_file(const std::filesystem::path& path);
std::string platform_fingerprint();

// Indexes every regular file under dir except the manifest itself and writes
// dir/manifest.json, replacing any previous one.
RunManifest write_manifest(const std::filesystem::path& dir, RunManifest m);
RunManifest read_manifest(const std::filesystem::path& dir);
// names of files whose checksum or size no longer matches, plus missing and
// unlisted files
std::vector<std::string> verify_manifest(const std::filesystem::path& dir);

}  // namespace critl3
