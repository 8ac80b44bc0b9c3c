#include <doctest.h>

#include "critl3/error.hpp"
#include "critl3/estimate_lab.hpp"
#include "critl3/mild_solver.hpp"
#include "critl3/norms.hpp"
#include "critl3/presets.hpp"
#include "critl3/stokes_heat.hpp"
#include "helpers.hpp"

using namespace critl3;
using namespace testing;

namespace {

VectorField shear(const Grid& g, double a = 1.0) {
  return sample(g, 3, [a](double x, double, double) { return Eigen::Vector3d(0, a * std::sin(x), 0); });
}

FieldHistory pressure_zero(const FieldHistory& v) {
  FieldHistory q;
  for (const auto& s : v) {
    VectorField z = VectorField::zeros(s.grid(), 1);
    z.set_time(s.time());
    q.push_back(z);
  }
  return q;
}

}  // namespace

TEST_CASE("rescaling of histories") {
  Grid g(two_pi, 16);
  FieldHistory h = heat_history(shear(g), uniform_times(0.4, 4));
  FieldHistory r = rescale_history(h, 2.0, 1.0);
  CHECK(r[0].grid().box_length() == doctest::Approx(two_pi / 2));
  CHECK(r.times()[4] == doctest::Approx(0.1));
  CHECK((r[2].real(1) == 2.0 * h[2].real(1)).all());
  CHECK_THROWS_AS(rescale_history(h, 3.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(scaling_check(h, pressure_zero(h), 1.5), InvalidArgument);
}

TEST_CASE("scaling check on an exact shear flow") {
  Grid g(two_pi, 16);
  FieldHistory h = heat_history(shear(g), uniform_times(0.4, 8));
  FieldHistory q = pressure_zero(h);
  EstimateReport one = scaling_check(h, q, 1.0);
  CHECK(one.pass);
  CHECK(one.lhs == 0.0);
  EstimateReport two = scaling_check(h, q, 2.0);
  CHECK(two.pass);
  CHECK(two.lhs <= 1e-10);
}

TEST_CASE("scaling check on a converged mild solution") {
  Grid g(two_pi, 16);
  VectorField v0 = preset_initial_data("bump", g, 1.0);
  PicardOptions po;
  po.steps = 32;
  po.record_pressure = true;
  MildSolution s = picard_solve(v0, 0.25, 1e-10, 30, po);
  for (double lambda : {2.0, 4.0}) {
    EstimateReport r = scaling_check(s.velocity, s.pressure, lambda);
    CHECK(r.pass);
    CHECK(r.lhs <= 1e-8);
  }
}

TEST_CASE("embedding chain") {
  Grid g(two_pi, 16);
  FieldHistory z = heat_history(VectorField::zeros(g), uniform_times(1.0, 4));
  EmbeddingNorms e0 = embedding_norms(z);
  CHECK(e0.n2_4 == 0.0);
  CHECK(embedding_chain_check(z).pass);
  VectorField v0 = preset_initial_data("bump", g, 1.0);
  FieldHistory h = heat_history(v0, uniform_times(1.0, 32));
  EstimateReport r = embedding_chain_check(h);
  CHECK(r.pass);
  CHECK(r.ratio <= 1.0);
  // F = v (x) v scales as l^2 F(l x, l^2 t): |F|_{s,l} picks up l^{2 - 3/s - 2/l}
  EmbeddingNorms a = embedding_norms(h), b = embedding_norms(rescale_history(h, 2.0, 1.0));
  CHECK(b.n32_inf == doctest::Approx(a.n32_inf).epsilon(1e-12));
  CHECK(b.n52 == doctest::Approx(a.n52).epsilon(1e-12));
  CHECK(b.n2_4 == doctest::Approx(a.n2_4).epsilon(1e-12));
  CHECK(b.n2_2 == doctest::Approx(a.n2_2 / std::sqrt(2.0)).epsilon(1e-12));
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    FieldHistory hr = heat_history(random_solenoidal(g, seed), uniform_times(0.5, 8));
    EmbeddingNorms n = embedding_norms(hr);
    CHECK(n.n2_4 <= n.bound * (1 + 1e-12));
  }
}

TEST_CASE("solver agreement") {
  Grid g(two_pi, 16);
  auto [z5, z3] = solver_disagreement(VectorField::zeros(g), 0.5, 16, 1e-10, 10);
  CHECK(z5 == 0.0);
  CHECK(z3 == 0.0);
  VectorField tg = sample(g, 3, [](double x, double y, double z) {
    return Eigen::Vector3d(std::sin(x) * std::cos(y) * std::cos(z), -std::cos(x) * std::sin(y) * std::cos(z), 0);
  });
  auto [d5, d3] = solver_disagreement(0.01 * tg, 0.5, 32, 1e-12, 20);
  CHECK(d5 <= 1e-6);
  CHECK(d3 <= 1e-6);
  UniquenessOptions uo;
  uo.threshold = 0.5;
  uo.base_steps = 32;
  uo.base_resolution = 16;
  EstimateReport r = uniqueness_experiment(0.01 * tg, uo);
  CHECK(r.pass);
  uo.threshold = 1e-9;
  CHECK_THROWS_AS(uniqueness_experiment(preset_initial_data("bump", g, 1.0), uo), ExperimentIncomplete);
}

TEST_CASE("weak convergence harness") {
  Grid g(two_pi, 32);
  VectorField v0 = preset_initial_data("bump", g, 1.0);
  WeakConvergenceOptions wo;
  wo.T = 0.05;
  wo.steps = 8;
  TraceResult c = weak_convergence_harness([&](int) { return v0; }, {1, 2}, v0, wo);
  CHECK(c.trace.metric("local_l3")[1] == 0.0);
  CHECK(!c.report.pass);
  auto osc = [&](int m) { return v0 + preset_initial_data("oscillatory(" + std::to_string(m) + ")", g, 1.0); };
  TraceResult r = weak_convergence_harness(osc, {2, 4, 8}, v0, wo);
  CHECK(r.report.pass);
  const auto& data = r.trace.metric("data_l3");
  for (double d : data) CHECK(d == doctest::Approx(1.0).epsilon(1e-10));
  auto strong = [&](int m) { return v0 + (1.0 / m) * preset_initial_data("two_bump", g, 1.0); };
  CHECK_THROWS_AS(weak_convergence_harness(strong, {1, 2, 4}, v0, wo), MisconfiguredFamily);
  CHECK_THROWS_AS(weak_convergence_harness(osc, {4, 2}, v0, wo), InvalidArgument);
}

TEST_CASE("modulus of continuity") {
  Grid g(two_pi, 16);
  TraceResult z = modulus_of_continuity(VectorField::zeros(g), {0.5, 0.25}, 16);
  for (double v : z.trace.metric("l3_distance")) CHECK(v == 0.0);
  VectorField v0 = preset_initial_data("bump", g, 1.0);
  std::vector<double> ts;
  for (int j = 0; j <= 5; ++j) ts.push_back(0.25 * std::ldexp(1.0, -j));
  TraceResult r = modulus_of_continuity(v0, ts, 64);
  CHECK(r.report.pass);
  const auto& d = r.trace.metric("l3_distance");
  for (std::size_t i = 1; i < d.size(); ++i) CHECK(d[i] < d[i - 1]);
  CHECK_THROWS_AS(modulus_of_continuity(v0, {0.25, 0.1}, 64), InvalidArgument);
  CHECK_THROWS_AS(modulus_of_continuity(v0, {0.1, 0.25}, 64), InvalidArgument);
}
