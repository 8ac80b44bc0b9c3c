#pragma once

#include <Eigen/Core>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "critl3/field.hpp"
#include "critl3/operators.hpp"

namespace testing {

using critl3::Grid;
using critl3::VectorField;

constexpr double two_pi = 2 * std::numbers::pi;

inline VectorField sample(const Grid& g, int comps, const std::function<Eigen::VectorXd(double, double, double)>& f) {
  VectorField v(g, comps, critl3::Representation::physical);
  int n = g.resolution();
  double h = g.spacing();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Eigen::VectorXd a = f(i * h, j * h, k * h);
        for (int c = 0; c < comps; ++c) v.real(c)[g.index(i, j, k)] = a[c];
      }
  return v;
}

// random solenoidal field built from Fourier modes with |m_i| <= mmax
inline VectorField random_solenoidal(const Grid& g, std::uint64_t seed, int mmax = 3, int terms = 6) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> md(-mmax, mmax);
  std::normal_distribution<double> nd;
  VectorField v = VectorField::zeros(g, 3);
  double k0 = g.k0();
  for (int t = 0; t < terms; ++t) {
    Eigen::Vector3d m;
    do m = Eigen::Vector3d(md(rng), md(rng), md(rng));
    while (m.squaredNorm() == 0);
    Eigen::Vector3d k = k0 * m, a(nd(rng), nd(rng), nd(rng)), b(nd(rng), nd(rng), nd(rng));
    a -= k * k.dot(a) / k.squaredNorm();
    b -= k * k.dot(b) / k.squaredNorm();
    v += sample(g, 3, [&](double x, double y, double z) {
      double ph = k[0] * x + k[1] * y + k[2] * z;
      Eigen::VectorXd r = a * std::cos(ph) + b * std::sin(ph);
      return r;
    });
  }
  return v;
}

inline double max_abs_diff(const VectorField& a, const VectorField& b) {
  VectorField pa = critl3::to_physical(a), pb = critl3::to_physical(b);
  double m = 0;
  for (int c = 0; c < pa.components(); ++c) m = std::max(m, (pa.real(c) - pb.real(c)).abs().maxCoeff());
  return m;
}

inline double max_abs(const VectorField& a) {
  VectorField pa = critl3::to_physical(a);
  double m = 0;
  for (int c = 0; c < pa.components(); ++c) m = std::max(m, pa.real(c).abs().maxCoeff());
  return m;
}

}  // namespace testing
