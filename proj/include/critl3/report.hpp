#pragma once

#include <filesystem>
#include <json.hpp>
#include <string>
#include <utility>
#include <vector>

namespace critl3 {

// A checked inequality lhs <= rhs (or an exponent claim) with its verdict.
// fitted_exponent and reference_exponent are NaN when not applicable and
// serialize as null.
struct EstimateReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double fitted_exponent;
  double reference_exponent;
  bool pass = false;
  std::string notes;

  EstimateReport();
};

nlohmann::json to_json(const EstimateReport& r);
EstimateReport report_from_json(const nlohmann::json& j);
void write_report(const EstimateReport& r, const std::filesystem::path& path);

// Sequence of metric values over a strictly monotone parameter.
struct ConvergenceTrace {
  std::string parameter_name;
  std::vector<double> parameters;
  std::vector<std::pair<std::string, std::vector<double>>> metrics;
  double fitted_rate;

  ConvergenceTrace();
  void validate() const;
  const std::vector<double>& metric(const std::string& name) const;
};

void write_trace_csv(const ConvergenceTrace& t, const std::filesystem::path& path);

// shortest round-trip decimal
std::string format_double(double v);

// Writes rows of doubles with a header line.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace critl3
