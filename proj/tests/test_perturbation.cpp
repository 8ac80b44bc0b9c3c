#include <doctest.h>

#include "critl3/error.hpp"
#include "critl3/fit.hpp"
#include "critl3/mild_solver.hpp"
#include "critl3/norms.hpp"
#include "critl3/perturbation.hpp"
#include "critl3/presets.hpp"
#include "critl3/stokes_heat.hpp"
#include "helpers.hpp"

using namespace critl3;
using namespace testing;

namespace {

PerturbationOptions opts(double T, double dt, int stride = 1) {
  PerturbationOptions o;
  o.T = T;
  o.dt = dt;
  o.record_stride = stride;
  return o;
}

VectorField bump16() { return preset_initial_data("bump", Grid(two_pi, 16), 1.0); }

}  // namespace

TEST_CASE("zero data and self-advection-free data give v2 = 0") {
  Grid g(two_pi, 16);
  PerturbationRun z = perturb_solve(VectorField::zeros(g), opts(0.05, 0.01));
  CHECK(max_abs(z.v2.back()) == 0.0);
  for (const auto& r : z.energy_ledger) CHECK((r.kinetic == 0 && r.work == 0 && r.residual == 0));
  EstimateReport a = global_energy_audit(z, 0.05);
  CHECK(a.pass);
  CHECK(a.lhs == 0.0);
  VectorField v0 = sample(g, 3, [](double x, double, double) { return Eigen::Vector3d(0, std::sin(x), 0); });
  PerturbationRun s = perturb_solve(v0, opts(0.05, 0.01));
  CHECK(max_abs(s.v2.back()) < 1e-14);
}

TEST_CASE("v2 starts at zero and stays divergence-free") {
  PerturbationRun run = perturb_solve(bump16(), opts(0.04, 0.004));
  CHECK(max_abs(run.v2[0]) == 0.0);
  CHECK(run.v2.size() == 11);
  for (const auto& s : run.v2) CHECK(max_abs(div(s)) < 1e-10);
  for (const auto& r : run.energy_ledger)
    CHECK((std::isfinite(r.kinetic) && std::isfinite(r.dissipation) && std::isfinite(r.work)));
  CHECK(run.energy_ledger.size() == run.steps() + 1);
}

TEST_CASE("second-order self-convergence in dt") {
  VectorField v0 = bump16();
  double T = 0.05;
  VectorField ref = perturb_solve(v0, opts(T, T / 160, 0)).v2_slice(160);
  std::vector<double> h, e;
  for (int n : {10, 20, 40}) {
    VectorField u = perturb_solve(v0, opts(T, T / n, 0)).v2_slice(n);
    h.push_back(T / n);
    e.push_back(lp_norm(u - ref, 2));
  }
  for (double o : observed_orders(h, e)) CHECK(o >= 1.8);
}

TEST_CASE("|v2(dt)|_2 vanishes like dt^{1/2} or faster") {
  VectorField v0 = bump16();
  double prev = inf;
  for (double dt : {4e-3, 2e-3, 1e-3}) {
    PerturbationRun r = perturb_solve(v0, opts(dt, dt));
    double n = lp_norm(r.v2.back(), 2);
    CHECK(n <= prev / std::sqrt(2.0));
    prev = n;
  }
}

TEST_CASE("CFL rejection suggests a usable step") {
  VectorField v0 = 50.0 * bump16();
  PerturbationOptions o = opts(1.0, 0.5);
  PerturbationRun run(v0, o);
  double suggested = 0;
  try {
    step_v2(run, 0.5);
  } catch (const StepRejected& e) {
    suggested = e.suggested_dt;
  }
  REQUIRE(suggested > 0);
  CHECK(suggested < 0.5);
  CHECK_NOTHROW(step_v2(run, suggested));
  CHECK_THROWS_AS(step_v2(run, -1.0), InvalidArgument);
}

TEST_CASE("pressure q2") {
  Grid g(two_pi, 16);
  VectorField zero = VectorField::zeros(g);
  CHECK(max_abs(recover_q2(zero, zero)) == 0.0);
  VectorField tg = sample(g, 3, [](double x, double y, double z) {
    return Eigen::Vector3d(std::sin(x) * std::cos(y) * std::cos(z), -std::cos(x) * std::sin(y) * std::cos(z), 0);
  });
  VectorField expect = sample(g, 1, [](double x, double y, double z) {
    return Eigen::VectorXd::Constant(1, (std::cos(2 * x) + std::cos(2 * y)) * (std::cos(2 * z) + 2) / 16);
  });
  CHECK(max_abs_diff(recover_q2(tg, zero), expect) < 1e-12);
  VectorField a = random_solenoidal(g, 3), b = random_solenoidal(g, 4);
  CHECK(max_abs_diff(recover_q2(3.0 * a, 3.0 * b), 9.0 * recover_q2(a, b)) < 1e-10);
}

TEST_CASE("mollifier radius limits and rho -> 0 consistency") {
  VectorField v0 = bump16();
  PerturbationOptions o = opts(0.02, 0.002, 0);
  o.rho = two_pi / 4;
  CHECK_THROWS_AS(PerturbationRun(v0, o), RadiusTooLarge);
  o.rho = -1;
  CHECK_THROWS_AS(PerturbationRun(v0, o), InvalidArgument);
  o.rho = 0;
  o.record_stride = 1;
  PerturbationRun base = perturb_solve(v0, o);
  Region K = central_region(v0.grid());
  double prev = inf;
  std::vector<double> rhos{0.2, 0.1, 0.05}, dist;
  for (double rho : rhos) {
    o.rho = rho;
    PerturbationRun r = perturb_solve(v0, o);
    double d2 = lp_norm(r.v2.back() - base.v2.back(), 2);
    CHECK(d2 < prev);
    prev = d2;
    std::vector<double> l3;
    for (std::size_t n = 0; n < r.v2.size(); ++n) l3.push_back(lp_norm(r.v2[n] - base.v2[n], 3, K));
    dist.push_back(time_norm(r.v2.times(), l3, 3));
  }
  for (double q : observed_orders(rhos, dist)) CHECK(q >= 1.0);
}

TEST_CASE("force split sums to the total forcing") {
  PerturbationOptions o = opts(0.02, 0.005);
  for (double rho : {0.0, 0.2}) {
    o.rho = rho;
    PerturbationRun run = perturb_solve(bump16(), o);
    ForceSplit fs = force_split(run, {0.01, 0.015, 0.02});
    CHECK(fs.f1.size() == run.v2.size());
    CHECK(fs.mixed_norm_reports.size() == 4);
    for (std::size_t n = 0; n < run.v2.size(); ++n) {
      VectorField sum = fs.f1[n] + fs.f2[n] + fs.f3[n] + fs.f4[n];
      CHECK(max_abs_diff(sum, total_forcing(run, n)) < 1e-10);
    }
    CHECK_THROWS_AS(force_split(run, {0.0123}), InvalidArgument);
  }
}

TEST_CASE("total velocity solves the momentum equation") {
  PerturbationOptions o = opts(0.01, 0.0005, 1);
  o.record_pressure = true;
  PerturbationRun run = perturb_solve(bump16(), o);
  FieldHistory v = reconstruct_total(run);
  CHECK(v.size() == run.v2.size());
  for (std::size_t n = 0; n < v.size(); n += 4)
    CHECK(momentum_residual(v, run.q2, n) <= 1e-4 * lp_norm(v[n], 2));
}

TEST_CASE("energy audits") {
  CHECK(energy_tolerance(64) == doctest::Approx(1e-6));
  CHECK(energy_tolerance(32) == doctest::Approx(1e-5));
  PerturbationRun run = perturb_solve(bump16(), opts(0.02, 0.001));
  CHECK_THROWS_AS(global_energy_audit(run, 0.5), InvalidArgument);
  EstimateReport g = global_energy_audit(run, 0.02);
  CHECK(g.pass);
  TestFunction never;
  never.ramp_up_start = 1.0;
  never.ramp_up_end = 2.0;
  never.center = Eigen::Vector3d::Constant(two_pi / 2);
  EstimateReport z = local_energy_audit(run, never, 0.02);
  CHECK(z.lhs == 0.0);
  CHECK(z.rhs == 0.0);
  CHECK(z.pass);
  TestFunction whole;
  whole.spatially_constant = true;
  auto t = local_energy_terms(run, {whole}, 0.02).front();
  const auto& last = run.energy_ledger.back();
  CHECK(t.lhs == doctest::Approx(2 * (last.kinetic + last.dissipation)).epsilon(1e-12));
  CHECK(t.rhs == doctest::Approx(2 * last.work).epsilon(1e-12));
  TestFunction huge;
  huge.radius = two_pi;
  CHECK_THROWS_AS(local_energy_audit(run, huge, 0.02), InvalidArgument);
  auto phis = random_test_functions(run.grid(), 3, 5, 0.02);
  auto again = random_test_functions(run.grid(), 3, 5, 0.02);
  CHECK(phis[2].center == again[2].center);
  for (const auto& p : phis) {
    CHECK(p.window(0.0) == 0.0);
    double h = 1e-7, t0 = 0.013;
    CHECK(p.window_dt(t0) == doctest::Approx((p.window(t0 + h) - p.window(t0 - h)) / (2 * h)).epsilon(1e-5));
  }
}

TEST_CASE("weak form of the v2 equation") {
  PerturbationRun run = perturb_solve(bump16(), opts(0.05, 0.00025, 0));
  auto res = weak_form_residuals(run, 10, 3);
  CHECK(res.size() == 10);
  for (double r : res) CHECK(r <= 1e-4);
}

TEST_CASE("energy bound sweep preconditions") {
  std::vector<VectorField> fam{bump16()};
  CHECK_THROWS_AS(energy_bound_sweep(fam, {0.01, 0.1}, 0.001), InvalidArgument);
  CHECK_THROWS_AS(energy_bound_sweep({}, {0.01, 0.03, 0.1}, 0.001), InvalidArgument);
}
