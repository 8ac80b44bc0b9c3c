#pragma once

#include <vector>

namespace critl3 {

struct LineFit {
  double slope;
  double intercept;
  double r2;
};

// Least-squares line through (x, y).
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);
// Least-squares slope of log y against log x. Requires positive data.
LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

// Pairwise observed orders log(e_i/e_{i+1}) / log(h_i/h_{i+1}).
std::vector<double> observed_orders(const std::vector<double>& h, const std::vector<double>& e);

}  // namespace critl3
