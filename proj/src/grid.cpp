#include "critl3/grid.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <utility>

#include "critl3/error.hpp"

namespace critl3 {

ConfigError::ConfigError(std::vector<std::string> v)
    : Error([&] {
        std::string s = "invalid configuration:";
        for (const auto& x : v) s += "\n  " + x;
        return s;
      }()),
      violations(std::move(v)) {}

Grid::Grid(double box_length, int resolution) : box_length_(box_length), n_(resolution) {
  if (!(box_length > 0) || !std::isfinite(box_length))
    throw InvalidArgument("grid box length must be positive");
  if (resolution < 8 || resolution % 2 != 0)
    throw InvalidArgument("grid resolution must be even and >= 8");
}

double Grid::cell_volume() const {
  double h = spacing();
  return h * h * h;
}

double Grid::k0() const { return 2.0 * std::numbers::pi / box_length_; }

SpectralTables::SpectralTables(const Grid& g) {
  int n = g.resolution();
  int cut = g.dealias_cutoff();
  kd.resize(n);
  k2.resize(n);
  keep.resize(n);
  for (int i = 0; i < n; ++i) {
    int m = g.mode(i);
    double k = g.k0() * m;
    kd[i] = (2 * i == n) ? 0.0 : k;
    k2[i] = k * k;
    keep[i] = std::abs(m) <= cut;
  }
}

const SpectralTables& tables(const Grid& g) {
  static std::mutex mu;
  static std::map<std::pair<double, int>, std::unique_ptr<SpectralTables>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{g.box_length(), g.resolution()}];
  if (!slot) slot = std::make_unique<SpectralTables>(g);
  return *slot;
}

}  // namespace critl3
