#include "critl3/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

#include "critl3/error.hpp"

namespace critl3 {
namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

nlohmann::json number_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double from_json_number(const nlohmann::json& j) {
  if (j.is_null()) return nan;
  if (j.is_string()) return j.get<std::string>() == "inf" ? INFINITY : -INFINITY;
  return j.get<double>();
}

}  // namespace

EstimateReport::EstimateReport() : fitted_exponent(nan), reference_exponent(nan) {}

nlohmann::json to_json(const EstimateReport& r) {
  nlohmann::json j = {{"name", r.name},
                      {"lhs", number_or_null(r.lhs)},
                      {"rhs", number_or_null(r.rhs)},
                      {"ratio", number_or_null(r.ratio)},
                      {"fitted_exponent", number_or_null(r.fitted_exponent)},
                      {"reference_exponent", number_or_null(r.reference_exponent)},
                      {"pass", r.pass}};
  if (!r.notes.empty()) j["notes"] = r.notes;
  return j;
}

EstimateReport report_from_json(const nlohmann::json& j) {
  EstimateReport r;
  r.name = j.at("name").get<std::string>();
  r.lhs = from_json_number(j.at("lhs"));
  r.rhs = from_json_number(j.at("rhs"));
  r.ratio = from_json_number(j.at("ratio"));
  r.fitted_exponent = from_json_number(j.at("fitted_exponent"));
  r.reference_exponent = from_json_number(j.at("reference_exponent"));
  r.pass = j.at("pass").get<bool>();
  if (j.contains("notes")) r.notes = j.at("notes").get<std::string>();
  return r;
}

void write_report(const EstimateReport& r, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw OutputError("cannot write " + path.string());
  os << to_json(r).dump(2) << "\n";
}

ConvergenceTrace::ConvergenceTrace() : fitted_rate(nan) {}

void ConvergenceTrace::validate() const {
  for (std::size_t i = 1; i < parameters.size(); ++i) {
    bool up = parameters[1] > parameters[0];
    if (up ? !(parameters[i] > parameters[i - 1]) : !(parameters[i] < parameters[i - 1]))
      throw InvalidArgument("trace parameters must be strictly monotone");
  }
  for (const auto& m : metrics)
    if (m.second.size() != parameters.size()) throw InvalidArgument("metric length mismatch");
}

const std::vector<double>& ConvergenceTrace::metric(const std::string& name) const {
  for (const auto& m : metrics)
    if (m.first == name) return m.second;
  throw InvalidArgument("trace has no metric '" + name + "'");
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream os(path);
  if (!os) throw OutputError("cannot write " + path.string());
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_double(row[i]);
    os << "\n";
  }
}

void write_trace_csv(const ConvergenceTrace& t, const std::filesystem::path& path) {
  t.validate();
  std::vector<std::string> header{t.parameter_name};
  for (const auto& m : t.metrics) header.push_back(m.first);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < t.parameters.size(); ++i) {
    std::vector<double> row{t.parameters[i]};
    for (const auto& m : t.metrics) row.push_back(m.second[i]);
    rows.push_back(row);
  }
  write_csv(path, header, rows);
}

}  // namespace critl3
