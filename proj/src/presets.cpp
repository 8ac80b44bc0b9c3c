#include "critl3/presets.hpp"

#include <Eigen/Geometry>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <regex>

#include "critl3/error.hpp"
#include "critl3/norms.hpp"
#include "critl3/operators.hpp"

namespace critl3 {
namespace {

using Vec = Eigen::Vector3d;

double profile(double r2, double R) {
  double s = 1.0 - r2 / (R * R);
  if (s <= 0.0) return 0.0;
  double s2 = s * s;
  return s2 * s2 * s2;
}

// minimum-image displacement x - c on the torus
Vec displacement(const Vec& x, const Vec& c, double L) {
  Vec d = x - c;
  for (int i = 0; i < 3; ++i) d[i] -= L * std::round(d[i] / L);
  return d;
}

// samples a vector potential A(d) with d the displacement from the box centre
VectorField sample_potential(const Grid& g, const std::function<Vec(const Vec&)>& A) {
  VectorField f(g, 3, Representation::physical);
  int n = g.resolution();
  double h = g.spacing(), L = g.box_length();
  Vec c = Vec::Constant(L / 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Vec a = A(displacement(Vec(i * h, j * h, k * h), c, L));
        std::size_t idx = g.index(i, j, k);
        for (int d = 0; d < 3; ++d) f.real(d)[idx] = a[d];
      }
  return f;
}

Vec family_direction(int i) {
  std::mt19937_64 rng(1000 + i);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec d(gauss(rng), gauss(rng), gauss(rng));
  return d.normalized();
}

// offsets keep the support inside the radius-L/8 ball
Vec family_offset(int i, double scale) {
  std::mt19937_64 rng(2000 + i);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  return scale * Vec(uni(rng), uni(rng), uni(rng));
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"bump", "taylor_green_localized", "two_bump", "oscillatory(m)", "translated(m)", "bump_family(i)"};
}

VectorField preset_initial_data(const std::string& name, const Grid& g, double target_l3) {
  static const std::regex pattern(R"(^([a-z_]+)(?:\((\d+)\)|:(\d+))?$)");
  std::smatch m;
  if (!std::regex_match(name, m, pattern)) throw UnknownPreset("unknown preset '" + name + "'");
  std::string base = m[1];
  bool has_arg = m[2].matched || m[3].matched;
  int arg = has_arg ? std::stoi(m[2].matched ? m[2].str() : m[3].str()) : 0;
  if (!(target_l3 >= 0.0)) throw InvalidArgument("target L3 norm must be >= 0");

  double L = g.box_length();
  double R = L / 8;
  const Vec e3(0, 0, 1);
  std::function<Vec(const Vec&)> A;
  if (base == "bump" && !has_arg) {
    A = [=](const Vec& d) -> Vec { return profile(d.squaredNorm(), R) * e3; };
  } else if (base == "taylor_green_localized" && !has_arg) {
    double k = 2 * std::numbers::pi * 4 / L;
    A = [=](const Vec& d) -> Vec {
      return profile(d.squaredNorm(), R) * std::sin(k * d[0]) * std::sin(k * d[1]) * std::cos(k * d[2]) * e3;
    };
  } else if (base == "two_bump" && !has_arg) {
    Vec s(R / 2, 0, 0);
    A = [=](const Vec& d) -> Vec {
      return (profile((d - s).squaredNorm(), R / 2) - profile((d + s).squaredNorm(), R / 2)) * e3;
    };
  } else if (base == "oscillatory" && has_arg && arg >= 1) {
    double k = 2 * std::numbers::pi * arg / L;
    A = [=](const Vec& d) -> Vec { return profile(d.squaredNorm(), R) * std::sin(k * d[0]) / k * e3; };
  } else if (base == "translated" && has_arg) {
    Vec s = Vec::Constant(L / 2 * (1.0 - std::ldexp(1.0, -arg)));
    A = [=](const Vec& d) -> Vec {
      Vec e = d - s;
      for (int i = 0; i < 3; ++i) e[i] -= L * std::round(e[i] / L);
      return profile(e.squaredNorm(), L / 16) * e3;
    };
  } else if (base == "bump_family" && has_arg && arg < 10) {
    double Ri = R * (0.75 + 0.25 * arg / 9.0);
    Vec dir = family_direction(arg);
    Vec off = family_offset(arg, (R - Ri) / std::sqrt(3.0));
    A = [=](const Vec& d) -> Vec { return profile((d - off).squaredNorm(), Ri) * dir; };
  } else {
    throw UnknownPreset("unknown preset '" + name + "'; valid: bump, taylor_green_localized, two_bump, "
                        "oscillatory(m), translated(m), bump_family(i)");
  }

  if (target_l3 == 0.0) return VectorField::zeros(g, 3);
  VectorField v = to_physical(leray_project(curl(sample_potential(g, A))));
  double n3 = lp_norm(v, 3.0);
  v *= target_l3 / n3;
  return v;
}

}  // namespace critl3
