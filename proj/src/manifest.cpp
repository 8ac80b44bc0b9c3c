#include "critl3/manifest.hpp"

#include <openssl/evp.h>
#include <sys/utsname.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <memory>
#include <set>

#include "critl3/error.hpp"

namespace critl3 {

namespace fs = std::filesystem;

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw OutputError("cannot read " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), std::streamsize(buf.size()));
    EVP_DigestUpdate(ctx.get(), buf.data(), std::size_t(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  std::string hex;
  char b[3];
  for (unsigned i = 0; i < len; ++i) {
    std::snprintf(b, sizeof b, "%02x", md[i]);
    hex += b;
  }
  return hex;
}

std::string platform_fingerprint() {
  utsname u{};
  std::string s;
  if (uname(&u) == 0) s = std::string(u.sysname) + " " + u.release + " " + u.machine;
#if defined(__clang__)
  s += "; clang " __clang_version__;
#elif defined(__GNUC__)
  s += "; gcc " __VERSION__;
#endif
  return s;
}

namespace {

std::vector<std::string> listed_files(const fs::path& dir) {
  std::vector<std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::string rel = fs::relative(e.path(), dir).generic_string();
    if (rel == manifest_name) continue;
    files.push_back(rel);
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

RunManifest write_manifest(const fs::path& dir, RunManifest m) {
  if (!fs::is_directory(dir)) throw OutputError("output directory " + dir.string() + " does not exist");
  m.outputs.clear();
  for (const auto& rel : listed_files(dir)) {
    fs::path p = dir / rel;
    m.outputs.push_back({rel, fs::file_size(p), sha256_file(p)});
  }
  nlohmann::json j;
  j["command"] = m.command;
  j["config"] = m.config;
  j["version"] = m.version;
  j["platform"] = m.platform;
  j["wall_clock_seconds"] = m.wall_clock_seconds;
  j["outputs"] = nlohmann::json::array();
  for (const auto& o : m.outputs) j["outputs"].push_back({{"path", o.path}, {"bytes", o.bytes}, {"sha256", o.sha256}});
  std::ofstream out(dir / manifest_name);
  if (!out) throw OutputError("cannot write manifest in " + dir.string());
  out << j.dump(2) << "\n";
  if (!out) throw OutputError("cannot write manifest in " + dir.string());
  return m;
}

RunManifest read_manifest(const fs::path& dir) {
  std::ifstream in(dir / manifest_name);
  if (!in) throw OutputError("no manifest in " + dir.string());
  nlohmann::json j = nlohmann::json::parse(in);
  RunManifest m;
  m.command = j.at("command");
  m.config = j.at("config");
  m.version = j.at("version");
  m.platform = j.at("platform");
  m.wall_clock_seconds = j.at("wall_clock_seconds");
  for (const auto& o : j.at("outputs")) m.outputs.push_back({o.at("path"), o.at("bytes"), o.at("sha256")});
  return m;
}

std::vector<std::string> verify_manifest(const fs::path& dir) {
  RunManifest m = read_manifest(dir);
  std::vector<std::string> bad;
  std::set<std::string> listed;
  for (const auto& o : m.outputs) {
    listed.insert(o.path);
    fs::path p = dir / o.path;
    if (!fs::exists(p) || fs::file_size(p) != o.bytes || sha256_file(p) != o.sha256) bad.push_back(o.path);
  }
  for (const auto& f : listed_files(dir))
    if (!listed.count(f)) bad.push_back(f);
  return bad;
}

}  // namespace critl3
