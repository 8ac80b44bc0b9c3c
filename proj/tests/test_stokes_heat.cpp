#include <doctest.h>

#include "critl3/error.hpp"
#include "critl3/fit.hpp"
#include "critl3/norms.hpp"
#include "critl3/oseen.hpp"
#include "critl3/presets.hpp"
#include "critl3/stokes_heat.hpp"
#include "helpers.hpp"

using namespace critl3;
using namespace testing;

TEST_CASE("heat flow of a single mode decays by exp(-k^2 t)") {
  Grid g(two_pi, 16);
  VectorField u = sample(g, 3, [](double x, double y, double) { return Eigen::Vector3d(0, 0, std::sin(2 * x + y)); });
  double t = 0.3;
  CHECK(max_abs_diff(heat_propagate(u, t), std::exp(-5 * t) * u) < 1e-13);
  CHECK(max_abs_diff(heat_propagate(u, 0.0), u) < 1e-15);
  CHECK_THROWS_AS(heat_propagate(u, -1.0), InvalidArgument);
}

TEST_CASE("heat semigroup and contraction properties") {
  Grid g(two_pi, 16);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    VectorField u = random_solenoidal(g, seed, 4);
    VectorField a = heat_propagate(heat_propagate(u, 0.1), 0.2);
    VectorField b = heat_propagate(u, 0.3);
    CHECK(max_abs_diff(a, b) < 1e-13);
    for (double p : {2.0, inf}) CHECK(lp_norm(to_physical(b), p) <= lp_norm(u, p) + 1e-12);
  }
}

TEST_CASE("time grids") {
  auto gt = graded_times(1.0, 4);
  CHECK(gt.size() == 5);
  CHECK(gt[1] == doctest::Approx(1.0 / 16));
  CHECK(uniform_times(2.0, 4)[2] == doctest::Approx(1.0));
  CHECK_THROWS_AS(uniform_times(0.0, 4), InvalidArgument);
}

TEST_CASE("first linear estimate") {
  Grid g(two_pi, 16);
  CHECK_THROWS_AS(verify_first_stokes_estimate(VectorField::zeros(g), 1.0, 8), UndefinedRatio);
  VectorField v0 = preset_initial_data("bump", g, 1.0);
  EstimateReport r = verify_first_stokes_estimate(v0, 1.0, 16);
  CHECK(r.pass);
  // sup_t |v1|_3 is |v0|_3 itself on the grid
  CHECK(r.ratio >= 1.0);
  EstimateReport r2 = verify_first_stokes_estimate(2.0 * v0, 1.0, 16);
  CHECK(r2.ratio == doctest::Approx(r.ratio).epsilon(1e-12));
}

TEST_CASE("gradient decay reference and preconditions") {
  CHECK(gradient_decay_reference(3) == doctest::Approx(-0.5));
  CHECK(gradient_decay_reference(4) == doctest::Approx(-0.625));
  Grid g(two_pi, 16);
  VectorField v0 = preset_initial_data("bump", g, 1.0);
  CHECK_THROWS_AS(verify_gradient_decay(v0, 2.5, {0.01, 0.1, 1}), InvalidArgument);
  CHECK_THROWS_AS(verify_gradient_decay(v0, 3, {0.01, 1}), InvalidArgument);
  CHECK_THROWS_AS(verify_gradient_decay(v0, 3, {0.1, 0.2, 0.4}), InvalidArgument);
  CHECK_THROWS_AS(verify_gradient_decay(v0, 3, {0.1, 0.01, 1}), InvalidArgument);
}

TEST_CASE("gradient decay of a single mode follows exp(-t)") {
  Grid g(two_pi, 16);
  VectorField u = sample(g, 3, [](double x, double, double) { return Eigen::Vector3d(0, std::sin(x), 0); });
  std::vector<double> ts{0.02, 0.1, 0.5, 1.0, 4.0}, e;
  for (double t : ts) e.push_back(std::exp(-t));
  EstimateReport r = verify_gradient_decay(u, 3, ts);
  CHECK(r.fitted_exponent == doctest::Approx(fit_loglog(ts, e).slope).epsilon(1e-10));
  CHECK(r.reference_exponent == doctest::Approx(-0.5));
  CHECK(r.pass == (r.fitted_exponent <= -0.5 + 0.07));
}

TEST_CASE("Oseen profile") {
  using V = Eigen::Vector3d;
  CHECK_THROWS_AS(oseen_phi(V(1, 0, 0), 0.0), InvalidArgument);
  double t = 0.7;
  CHECK(oseen_phi(V(0, 0, 0), t) == doctest::Approx(-1 / (4 * std::numbers::pi * std::sqrt(std::numbers::pi * t))));
  // far field is the Newtonian potential
  CHECK(oseen_phi(V(30, 0, 0), 1e-3) == doctest::Approx(-1 / (4 * std::numbers::pi * 30)).epsilon(1e-12));
  // series and erf branches meet continuously
  double s_edge = 0.25 * 2 * t;
  double a = oseen_phi_profile(s_edge * (1 - 1e-12), t), b = oseen_phi_profile(s_edge * (1 + 1e-12), t);
  CHECK(a == doctest::Approx(b).epsilon(1e-10));
  // lap Phi = Gamma, radial Laplacian by long double differences
  for (double r : {0.3, 1.0, 2.5}) {
    long double h = 1e-3L, R = r, T = t;
    auto F = [&](long double x) { return oseen_phi_profile<long double>(x * x / 2, T); };
    long double d2 = (F(R + h) - 2 * F(R) + F(R - h)) / (h * h);
    long double d1 = (F(R + h) - F(R - h)) / (2 * h);
    double lap = double(d2 + 2 * d1 / R);
    CHECK(lap == doctest::Approx(heat_kernel(r, t)).epsilon(1e-5));
  }
}

TEST_CASE("Oseen kernel against direct differences and parabolic scaling") {
  using V = Eigen::Vector3d;
  auto pts = kernel_samples(20, 99, 0.1, 3.0, 0.01, 3.0);
  for (const auto& p : pts) {
    OseenKernelSample s = oseen_kernel(p.x, p.t);
    // symmetric in the first two slots
    for (int m = 0; m < 3; ++m)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) CHECK(s.K_tensor(m, j, k) == doctest::Approx(s.K_tensor(j, m, k)).epsilon(1e-9));
    // K(l x, l^2 t) = l^-4 K(x, t)
    OseenKernelSample s2 = oseen_kernel(2.0 * p.x, 4.0 * p.t);
    CHECK(s2.frobenius() * 16 == doctest::Approx(s.frobenius()).epsilon(1e-6));
    // third derivative d_1 d_1 d_1 Phi by central differences of the exact profile in x
    long double h = 1e-4L * std::sqrt(p.x.squaredNorm() + p.t);
    auto P = [&](long double dx) {
      Vec3<long double> y(p.x[0] + dx, p.x[1], p.x[2]);
      return oseen_phi<long double>(y, p.t);
    };
    long double d3 = (P(2 * h) - 2 * P(h) + 2 * P(-h) - P(-2 * h)) / (2 * h * h * h);
    Tensor3<long double> D = phi_third_derivatives<long double>(p.x.cast<long double>(), p.t);
    CHECK(double(D(0, 0, 0)) == doctest::Approx(double(d3)).epsilon(1e-5));
  }
  CHECK_THROWS_AS(oseen_kernel(V(1, 0, 0), -1.0), InvalidArgument);
}

TEST_CASE("kernel bound over samples") {
  auto a = kernel_samples(200, 7), b = kernel_samples(200, 7);
  CHECK(a.size() == 200);
  CHECK(a[17].x == b[17].x);
  EstimateReport r = verify_kernel_bound(a);
  CHECK(r.pass);
  CHECK_THROWS_AS(verify_kernel_bound({}), InvalidArgument);
}
