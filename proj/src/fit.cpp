#include "critl3/fit.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "critl3/error.hpp"

namespace critl3 {

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("line fit needs >= 2 paired points");
  int n = int(x.size());
  Eigen::MatrixXd A(n, 2);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) {
    A(i, 0) = x[i];
    A(i, 1) = 1.0;
    b(i) = y[i];
  }
  Eigen::Vector2d c = A.colPivHouseholderQr().solve(b);
  Eigen::VectorXd r = b - A * c;
  double mean = b.mean();
  double ss = (b.array() - mean).square().sum();
  return {c(0), c(1), ss > 0 ? 1.0 - r.squaredNorm() / ss : 1.0};
}

LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) throw InvalidArgument("log-log fit needs positive data");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  return fit_line(lx, ly);
}

std::vector<double> observed_orders(const std::vector<double>& h, const std::vector<double>& e) {
  if (h.size() != e.size()) throw InvalidArgument("order estimate needs paired data");
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < h.size(); ++i)
    out.push_back(std::log(e[i] / e[i + 1]) / std::log(h[i] / h[i + 1]));
  return out;
}

}  // namespace critl3
