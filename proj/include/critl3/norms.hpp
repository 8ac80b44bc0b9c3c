#pragma once

#include <array>
#include <limits>
#include <vector>

#include "critl3/field.hpp"

namespace critl3 {

constexpr double inf = std::numeric_limits<double>::infinity();

// Axis-aligned sub-box [lo, hi) of the periodic cell.
struct Region {
  std::array<double, 3> lo;
  std::array<double, 3> hi;
  bool contains(double x, double y, double z) const;
};

// centered sub-box with half the box edge
Region central_region(const Grid& g);

// Volume-weighted Riemann sum of the pointwise Euclidean (or Frobenius)
// magnitude; grid max for p = inf.
double lp_norm(const VectorField& u, double p);
double lp_norm(const VectorField& u, double p, const Region& region);

// sum over modes of |u_k|^2 scaled to match lp_norm(u, 2)^2
double spectral_energy(const VectorField& u);

struct MixedNormSpec {
  MixedNormSpec(double s, double l);
  double s;
  double l;
};

// (int_0^T f(t)^l dt)^(1/l) by the trapezoid rule, max for l = inf.
double time_norm(const std::vector<double>& times, const std::vector<double>& values, double l);

std::vector<double> slice_norms(const FieldHistory& h, double s);
std::vector<double> slice_norms(const FieldHistory& h, double s, const Region& region);

double mixed_norm(const FieldHistory& h, const MixedNormSpec& spec);
double mixed_norm(const FieldHistory& h, const MixedNormSpec& spec, const Region& region);

}  // namespace critl3
