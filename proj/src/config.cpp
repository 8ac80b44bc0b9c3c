#include "critl3/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <functional>

#include "critl3/error.hpp"
#include "critl3/grid.hpp"
#include "critl3/presets.hpp"
#include "critl3/report.hpp"

namespace critl3 {
namespace {

template <class T>
bool parse_number(const std::string& s, T& out) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, std::vector<std::string>&)>;

template <class T>
Setter number(T ExperimentConfig::*field) {
  return [field](ExperimentConfig& c, const std::string& v, std::vector<std::string>& errs) {
    T x{};
    if (!parse_number(v, x)) errs.push_back("cannot parse '" + v + "'");
    else c.*field = x;
  };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"grid.resolution", number(&ExperimentConfig::resolution)},
      {"grid.box_length", number(&ExperimentConfig::box_length)},
      {"run.preset", [](ExperimentConfig& c, const std::string& v, std::vector<std::string>&) { c.preset = v; }},
      {"run.target_l3", number(&ExperimentConfig::target_l3)},
      {"run.horizon",
       [](ExperimentConfig& c, const std::string& v, std::vector<std::string>& errs) {
         if (v == "auto") {
           c.horizon.reset();
           return;
         }
         double x;
         if (!parse_number(v, x)) errs.push_back("cannot parse '" + v + "'");
         else c.horizon = x;
       }},
      {"run.dt", number(&ExperimentConfig::dt)},
      {"run.rho", number(&ExperimentConfig::rho)},
      {"run.tol", number(&ExperimentConfig::tol)},
      {"run.kmax", number(&ExperimentConfig::kmax)},
      {"run.steps", number(&ExperimentConfig::steps)},
      {"run.seed", number(&ExperimentConfig::seed)},
      {"run.threads", number(&ExperimentConfig::threads)},
      {"calibration.c_est", number(&ExperimentConfig::c_est)},
  };
  return table;
}

std::string valid_keys() {
  std::string s;
  for (const auto& k : config_keys()) s += (s.empty() ? "" : ", ") + k;
  return s;
}

void apply(ExperimentConfig& c, const std::string& key, const std::string& value, std::vector<std::string>& errs) {
  auto it = setters().find(key);
  if (it == setters().end()) {
    errs.push_back("unknown key '" + key + "'; valid keys: " + valid_keys());
    return;
  }
  std::vector<std::string> local;
  it->second(c, value, local);
  for (auto& e : local) errs.push_back(key + ": " + e);
}

void validate(const ExperimentConfig& c, std::vector<std::string>& errs) {
  if (c.resolution < 8 || c.resolution % 2 != 0)
    errs.push_back("grid.resolution: must be even and >= 8");
  if (!(c.box_length > 0)) errs.push_back("grid.box_length: must be positive");
  if (!(c.dt > 0)) errs.push_back("run.dt: must be positive");
  if (!(c.rho >= 0)) errs.push_back("run.rho: must be >= 0");
  else if (c.box_length > 0 && !(c.rho < c.box_length / 4)) errs.push_back("run.rho: must be below box_length / 4");
  if (!(c.tol > 0)) errs.push_back("run.tol: must be positive");
  if (c.kmax < 1) errs.push_back("run.kmax: must be >= 1");
  if (c.steps < 4) errs.push_back("run.steps: must be >= 4");
  if (!(c.target_l3 >= 0)) errs.push_back("run.target_l3: must be >= 0");
  if (c.horizon && !(*c.horizon > 0)) errs.push_back("run.horizon: must be positive or auto");
  if (c.threads < 1) errs.push_back("run.threads: must be >= 1");
  if (!(c.c_est > 0)) errs.push_back("calibration.c_est: must be positive");
  if (c.box_length > 0) {
    try {
      preset_initial_data(c.preset, Grid(c.box_length, 8), 0.0);
    } catch (const Error& e) {
      errs.push_back(std::string("run.preset: ") + e.what());
    }
  }
}

}  // namespace

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, v] : setters()) keys.push_back(k);
  return keys;
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["grid"] = {{"resolution", resolution}, {"box_length", box_length}};
  j["run"] = {{"preset", preset},
              {"target_l3", target_l3},
              {"horizon", horizon ? nlohmann::json(*horizon) : nlohmann::json("auto")},
              {"dt", dt},
              {"rho", rho},
              {"tol", tol},
              {"kmax", kmax},
              {"steps", steps},
              {"seed", seed},
              {"threads", threads}};
  j["calibration"] = {{"c_est", c_est}};
  j["overridden"] = overridden;
  return j;
}

ExperimentConfig load_config(const std::filesystem::path& path, const std::map<std::string, std::string>& overrides) {
  ExperimentConfig c;
  std::vector<std::string> errs;
  if (!path.empty()) {
    boost::property_tree::ptree tree;
    try {
      boost::property_tree::read_ini(path.string(), tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
      throw ConfigError({std::string("cannot read config: ") + e.what()});
    }
    for (const auto& [section, body] : tree) {
      if (body.empty()) {
        errs.push_back("unknown key '" + section + "' outside a section; valid keys: " + valid_keys());
        continue;
      }
      for (const auto& [key, val] : body) {
        std::string full = section + "." + key;
        apply(c, full, val.data(), errs);
      }
    }
  }
  for (const auto& [key, value] : overrides) {
    apply(c, key, value, errs);
    c.overridden[key] = value;
  }
  validate(c, errs);
  if (!errs.empty()) throw ConfigError(errs);
  return c;
}

}  // namespace critl3
