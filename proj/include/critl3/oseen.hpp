#pragma once

#include <Eigen/Core>
#include <cmath>
#include <numbers>
#include <random>
#include <unsupported/Eigen/CXX11/Tensor>
#include <vector>

#include "critl3/report.hpp"

namespace critl3 {

template <class S>
using Vec3 = Eigen::Matrix<S, 3, 1>;
template <class S>
using Tensor3 = Eigen::TensorFixedSize<S, Eigen::Sizes<3, 3, 3>>;

// Heat kernel (4 pi t)^{-3/2} exp(-r^2 / 4t).
template <class S>
S heat_kernel(S r, S t) {
  using std::exp;
  using std::pow;
  const S pi = std::numbers::pi_v<S>;
  return pow(4 * pi * t, S(-1.5)) * exp(-r * r / (4 * t));
}

// Radial profile of Phi with lap Phi = Gamma, Phi -> 0 at infinity, as a
// function of s = r^2 / 2. It is entire in s, so small and negative s are
// handled by the series of erf(a)/a in a^2 = s / (2t).
template <class S>
S oseen_phi_profile(S s, S t) {
  using std::erf;
  using std::sqrt;
  const S pi = std::numbers::pi_v<S>;
  S u = s / (2 * t);
  S pref = -1 / (4 * pi * sqrt(pi * t));  // Phi(0, t)
  if (std::abs(u) < S(0.25)) {
    // erf(a)/a = 2/sqrt(pi) sum (-1)^n a^{2n} / (n! (2n+1))
    S term = 1, sum = 1;
    for (int n = 1; n < 40; ++n) {
      term *= -u / n;
      S add = term / (2 * n + 1);
      sum += add;
      if (std::abs(add) < std::numeric_limits<S>::epsilon() * std::abs(sum)) break;
    }
    return pref * sum;
  }
  S r = sqrt(2 * s);
  return -erf(r / (2 * sqrt(t))) / (4 * pi * r);
}

template <class S>
S oseen_phi(const Vec3<S>& x, S t) {
  return oseen_phi_profile<S>(x.squaredNorm() / 2, t);
}

double oseen_phi(const Eigen::Vector3d& x, double t);

// Third x-derivatives of Phi(x, t): d_a d_b d_c Phi = F'' (d_ab x_c + d_ac x_b
// + d_bc x_a) + F''' x_a x_b x_c with F(s) = Phi at s = |x|^2/2. F'' and F'''
// come from central differences of the profile with step 1e-3 max(|x|^2, t).
template <class S>
Tensor3<S> phi_third_derivatives(const Vec3<S>& x, S t) {
  S s = x.squaredNorm() / 2;
  S h = S(1e-3) * std::max(x.squaredNorm(), t);
  S f[7];
  for (int i = -3; i <= 3; ++i) f[i + 3] = oseen_phi_profile<S>(s + i * h, t);
  S f2 = (-f[5] + 16 * f[4] - 30 * f[3] + 16 * f[2] - f[1]) / (12 * h * h);
  S f3 = (-f[6] + 8 * f[5] - 13 * f[4] + 13 * f[2] - 8 * f[1] + f[0]) / (8 * h * h * h);
  Tensor3<S> d;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        S v = f3 * x[a] * x[b] * x[c];
        if (a == b) v += f2 * x[c];
        if (a == c) v += f2 * x[b];
        if (b == c) v += f2 * x[a];
        d(a, b, c) = v;
      }
  return d;
}

// K_mjs = delta_mj d_i d_i d_s Phi - d_m d_j d_s Phi with derivatives taken in
// the source variable y at relative position x = x_obs - y.
template <class S>
Tensor3<S> oseen_kernel_tensor(const Vec3<S>& x, S t) {
  Tensor3<S> dx = phi_third_derivatives<S>(x, t);
  Tensor3<S> k;
  for (int s = 0; s < 3; ++s) {
    S trace = dx(0, 0, s) + dx(1, 1, s) + dx(2, 2, s);
    for (int m = 0; m < 3; ++m)
      for (int j = 0; j < 3; ++j) k(m, j, s) = -((m == j ? trace : S(0)) - dx(m, j, s));
  }
  return k;
}

struct OseenKernelSample {
  Eigen::Vector3d x;
  double t;
  double phi_value;
  Tensor3<double> K_tensor;
  double K0_bound;  // 1 / (|x|^2 + t)^2

  double frobenius() const;
  double max_component() const;
};

OseenKernelSample oseen_kernel(const Eigen::Vector3d& x, double t);

struct KernelPoint {
  Eigen::Vector3d x;
  double t;
};

// |x| and t log-uniform over the given ranges, uniform random directions
std::vector<KernelPoint> kernel_samples(int count, std::uint64_t seed, double r_min = 0.01,
                                        double r_max = 10.0, double t_min = 1e-4, double t_max = 10.0);

// sup of |K|_F (|x|^2+t)^2; pass iff the sup over the outer half of dyadic
// shells in sqrt(|x|^2+t) stays within 1.1 of the inner half
EstimateReport verify_kernel_bound(const std::vector<KernelPoint>& samples);

}  // namespace critl3
