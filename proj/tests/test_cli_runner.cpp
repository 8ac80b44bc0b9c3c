#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "critl3/config.hpp"
#include "critl3/error.hpp"
#include "critl3/manifest.hpp"
#include "critl3/norms.hpp"
#include "critl3/presets.hpp"
#include "helpers.hpp"

using namespace critl3;
using namespace testing;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("critl3_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

struct Run {
  int code;
  std::string err;
};

Run cli(const std::string& args, const fs::path& dir) {
  fs::path err = dir.parent_path() / (dir.filename().string() + ".stderr");
  std::string cmd = std::string(CRITL3_CLI) + " " + args + " 2> " + err.string() + " > /dev/null";
  int status = std::system(cmd.c_str());
  std::ifstream in(err);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WEXITSTATUS(status), ss.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config defaults, overrides and validation") {
  fs::path dir = scratch("config");
  fs::path empty = dir / "empty.ini";
  std::ofstream(empty).close();
  ExperimentConfig d = load_config(empty);
  CHECK(d.resolution == 32);
  CHECK(d.c_est == frozen_c_est);
  CHECK(d.threshold() == doctest::Approx(1 / (16 * frozen_c_est)));
  CHECK(!d.horizon);

  fs::path file = dir / "a.ini";
  std::ofstream(file) << "[grid]\nresolution = 16\n[run]\ndt = 0.01\nhorizon = 0.5\n";
  ExperimentConfig c = load_config(file, {{"grid.resolution", "48"}});
  CHECK(c.resolution == 48);
  CHECK(c.dt == 0.01);
  CHECK(*c.horizon == 0.5);
  CHECK(c.overridden.at("grid.resolution") == "48");
  CHECK(c.to_json()["overridden"]["grid.resolution"] == "48");

  std::ofstream(file) << "[run]\ndt = -1\nrho = 5\nfoo = 1\n";
  try {
    load_config(file);
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    REQUIRE(e.violations.size() == 3);
    std::string all;
    for (const auto& v : e.violations) all += v + "\n";
    CHECK(all.find("run.dt") != std::string::npos);
    CHECK(all.find("run.rho") != std::string::npos);
    CHECK(all.find("unknown key 'run.foo'") != std::string::npos);
  }
  CHECK_THROWS_AS(load_config("", {{"run.preset", "nonsense"}}), ConfigError);
  CHECK_THROWS_AS(load_config("", {{"grid.resolution", "abc"}}), ConfigError);
  CHECK(load_config("", {{"run.horizon", "auto"}}).horizon.has_value() == false);
}

TEST_CASE("manifest round trip and tamper detection") {
  fs::path dir = scratch("manifest");
  std::ofstream(dir / "a.csv") << "x\n1\n";
  fs::create_directories(dir / "sub");
  std::ofstream(dir / "sub" / "b.json") << "{}";
  RunManifest m;
  m.command = "test";
  m.platform = platform_fingerprint();
  RunManifest w = write_manifest(dir, m);
  CHECK(w.outputs.size() == 2);
  CHECK(verify_manifest(dir).empty());
  write_manifest(dir, m);
  int count = 0;
  for (const auto& e : fs::directory_iterator(dir)) count += e.path().filename() == manifest_name;
  CHECK(count == 1);
  std::ofstream(dir / "a.csv", std::ios::app) << "2\n";
  std::ofstream(dir / "extra.txt") << "x";
  auto bad = verify_manifest(dir);
  CHECK(bad.size() == 2);
  CHECK_THROWS_AS(write_manifest(dir / "missing", m), OutputError);
}

TEST_CASE("SHA-256 of a known string") {
  fs::path dir = scratch("sha");
  std::ofstream(dir / "abc.txt") << "abc";
  CHECK(sha256_file(dir / "abc.txt") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("presets") {
  Grid g(two_pi, 32);
  CHECK(max_abs(preset_initial_data("bump", g, 0.0)) == 0.0);
  CHECK_THROWS_AS(preset_initial_data("nope", g, 1.0), UnknownPreset);
  CHECK_THROWS_AS(preset_initial_data("bump(3)", g, 1.0), UnknownPreset);
  VectorField bump = preset_initial_data("bump", g, 1.0);
  for (const std::string name : {"bump", "taylor_green_localized", "two_bump", "oscillatory(4)", "translated(2)",
                                 "bump_family(3)", "oscillatory:8"}) {
    VectorField v = preset_initial_data(name, g, 1.0);
    CHECK(lp_norm(v, 3) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(max_abs(div(v)) <= 1e-10 * std::max(1.0, max_abs(v)) * 10);
  }
  // the potential is supported in the ball of radius L/8 around the centre;
  // the spectral curl leaks outside only at the truncation level
  auto leak = [](const Grid& gg) {
    VectorField v = preset_initial_data("bump", gg, 1.0);
    double L = gg.box_length(), h = gg.spacing(), outside = 0;
    int n = gg.resolution();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          Eigen::Vector3d x(i * h - L / 2, j * h - L / 2, k * h - L / 2);
          if (x.norm() <= L / 8 + h) continue;
          std::size_t idx = gg.index(i, j, k);
          for (int c = 0; c < 3; ++c) outside = std::max(outside, std::abs(v.real(c)[idx]));
        }
    return outside / max_abs(v);
  };
  double l32 = leak(g), l64 = leak(Grid(two_pi, 64));
  CHECK(l32 <= 1e-2);
  CHECK(l64 <= 1e-3);
  CHECK(l64 < l32 / 10);
  // correlation of oscillatory data with a fixed asymmetric member decays in m
  Grid g64(two_pi, 64);
  VectorField ref = preset_initial_data("bump_family(1)", g64, 1.0);
  double prev = inf;
  for (int m : {2, 4, 8, 16}) {
    double ip = std::abs(inner_product(ref, preset_initial_data("oscillatory(" + std::to_string(m) + ")", g64, 1.0)));
    CHECK(ip < prev);
    prev = ip;
  }
  auto names = preset_names();
  CHECK(std::find(names.begin(), names.end(), "bump") != names.end());
}

TEST_CASE("command line: outputs, manifest, determinism and exit codes") {
  fs::path a = scratch("run_a"), b = scratch("run_b");
  Run ra = cli("kernel --samples 60 --seed 3 --out " + a.string(), a);
  Run rb = cli("kernel --samples 60 --seed 3 --out " + b.string(), b);
  CHECK(ra.code == 0);
  CHECK(rb.code == 0);
  CHECK(verify_manifest(a).empty());
  CHECK(slurp(a / "kernel_samples.csv") == slurp(b / "kernel_samples.csv"));
  CHECK(slurp(a / "kernel_bound.json") == slurp(b / "kernel_bound.json"));
  RunManifest ma = read_manifest(a), mb = read_manifest(b);
  REQUIRE(ma.outputs.size() == mb.outputs.size());
  for (std::size_t i = 0; i < ma.outputs.size(); ++i) CHECK(ma.outputs[i].sha256 == mb.outputs[i].sha256);

  fs::path f = scratch("run_fail");
  Run rf = cli("mild --grid 16 --init bump --T 1 --kmax 1 --steps 16 --out " + f.string(), f);
  CHECK(rf.code == 1);
  CHECK(rf.err.find("picard_contraction") != std::string::npos);

  fs::path e = scratch("run_err");
  Run re = cli("perturb --grid 16 --T 0.01 --dt 0.005 --audit nonsense --out " + e.string(), e);
  CHECK(re.code == 2);
  CHECK(re.err.find("unknown audit") != std::string::npos);
  Run rc = cli("perturb --grid 16 --dt -1 --out " + e.string(), e);
  CHECK(rc.code == 2);
  CHECK(rc.err.find("run.dt") != std::string::npos);

  fs::path cfgdir = scratch("run_cfg");
  std::ofstream(cfgdir / "c.ini") << "[grid]\nresolution = 8\n";
  fs::path o = cfgdir / "out";
  Run rl = cli("--config " + (cfgdir / "c.ini").string() + " verify-linear --grid 16 --out " + o.string(), cfgdir);
  CHECK(rl.code == 0);
  RunManifest ml = read_manifest(o);
  CHECK(ml.config["grid"]["resolution"] == 16);
  CHECK(ml.config["overridden"]["grid.resolution"] == "16");

  fs::path p = scratch("run_perturb");
  Run rp = cli("perturb --grid 16 --init bump --T 0.01 --dt 0.001 --audit global --out " + p.string(), p);
  CHECK(rp.code == 0);
  std::string ledger = slurp(p / "energy_ledger.csv");
  CHECK(ledger.rfind("t,kinetic,dissipation,work,residual\n", 0) == 0);
  CHECK(fs::exists(p / "v2_final.json"));
  CHECK(verify_manifest(p).empty());
}
