#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "critl3/error.hpp"
#include "critl3/norms.hpp"
#include "critl3/operators.hpp"
#include "critl3/snapshot_io.hpp"
#include "helpers.hpp"

using namespace critl3;
using namespace testing;

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(Grid(0.0, 16), InvalidArgument);
  CHECK_THROWS_AS(Grid(1.0, 15), InvalidArgument);
  CHECK_THROWS_AS(Grid(1.0, 4), InvalidArgument);
  Grid g(two_pi, 48);
  CHECK(g.dealias_cutoff() == 15);
  CHECK(g.spectral_points() == std::size_t(48 * 48 * 25));
}

TEST_CASE("transform round trip") {
  Grid g(two_pi, 16);
  VectorField v = random_solenoidal(g, 1, 5);
  VectorField back = to_physical(to_spectral(v));
  CHECK(max_abs_diff(v, back) < 1e-12);
  VectorField bad = v;
  bad.real(0).resize(3);
  CHECK_THROWS_AS(bad.validate(), MalformedField);
}

TEST_CASE("derivatives of a single mode are exact") {
  Grid g(two_pi, 16);
  // u = (sin y, 0, 0): grad_12 = cos y, lap u = -u, curl u = (0, 0, -cos y)
  VectorField u = sample(g, 3, [](double, double y, double) { return Eigen::Vector3d(std::sin(y), 0, 0); });
  VectorField G = to_physical(grad(u));
  VectorField cosy = sample(g, 1, [](double, double y, double) { return Eigen::VectorXd::Constant(1, std::cos(y)); });
  CHECK((G.real(1) - cosy.real(0)).abs().maxCoeff() < 1e-12);
  CHECK(G.real(0).abs().maxCoeff() < 1e-12);
  CHECK(max_abs_diff(laplacian(u), -1.0 * u) < 1e-12);
  VectorField c = to_physical(curl(u));
  CHECK((c.real(2) + cosy.real(0)).abs().maxCoeff() < 1e-12);
  CHECK(max_abs(div(u)) < 1e-12);
}

TEST_CASE("Leray projection") {
  Grid g(two_pi, 16);
  VectorField phi = sample(g, 1, [](double x, double y, double z) {
    return Eigen::VectorXd::Constant(1, std::sin(x) * std::cos(2 * y) + std::cos(z));
  });
  CHECK(max_abs(leray_project(grad(phi))) < 1e-12);
  VectorField w = random_solenoidal(g, 2);
  CHECK(max_abs_diff(leray_project(w), w) < 1e-12);
  VectorField mixed = w + to_physical(grad(phi));
  VectorField p = leray_project(mixed);
  CHECK(max_abs(div(p)) < 1e-10);
  CHECK(max_abs_diff(leray_project(p), p) < 1e-12);
}

TEST_CASE("advection of a shear by a uniform-direction field") {
  Grid g(two_pi, 16);
  // w = (0, 1 + 0 cos, 0) constant, u = (sin y, 0, 0): w.grad u = (cos y, 0, 0)
  VectorField w = sample(g, 3, [](double, double, double) { return Eigen::Vector3d(0, 1, 0); });
  VectorField u = sample(g, 3, [](double, double y, double) { return Eigen::Vector3d(std::sin(y), 0, 0); });
  VectorField expect = sample(g, 3, [](double, double y, double) { return Eigen::Vector3d(std::cos(y), 0, 0); });
  CHECK(max_abs_diff(advect(w, u), expect) < 1e-12);
}

TEST_CASE("tensor product and dealiasing") {
  Grid g(two_pi, 16);
  VectorField a = random_solenoidal(g, 3, 2), b = random_solenoidal(g, 4, 2);
  VectorField t = tensor_product(a, b);
  CHECK(t.components() == 9);
  VectorField pa = to_physical(a), pb = to_physical(b);
  // band fields with |m| <= 2 have products inside the 2/3 band
  double err = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) err = std::max(err, (t.real(i * 3 + j) - pa.real(i) * pb.real(j)).abs().maxCoeff());
  CHECK(err < 1e-12);
  VectorField hi = sample(g, 3, [](double x, double, double) { return Eigen::Vector3d(std::cos(7 * x), 0, 0); });
  CHECK(max_abs(dealias(hi)) < 1e-14);
}

TEST_CASE("mollifier") {
  Grid g(two_pi, 16);
  VectorField u = random_solenoidal(g, 5);
  CHECK_THROWS_AS(mollify(u, {two_pi / 4, MollifierKind::gaussian}), RadiusTooLarge);
  CHECK_THROWS_AS(mollify(u, {0.0, MollifierKind::gaussian}), InvalidArgument);
  VectorField s = sample(g, 3, [](double x, double, double) { return Eigen::Vector3d(0, std::sin(2 * x), 0); });
  double rho = 0.3;
  VectorField m = mollify(s, {rho, MollifierKind::gaussian});
  CHECK(max_abs_diff(m, std::exp(-4 * rho * rho / 2) * s) < 1e-12);
  // mollification preserves divergence-freeness and does not increase L2
  VectorField mu = mollify(u, {rho, MollifierKind::gaussian});
  CHECK(max_abs(div(mu)) < 1e-10);
  CHECK(lp_norm(mu, 2) <= lp_norm(u, 2) + 1e-12);
  CHECK(mollifier_sup_constant(g, {rho, MollifierKind::gaussian}) > 0);
}

TEST_CASE("Lebesgue norms") {
  Grid g(2.0, 8);
  VectorField c = sample(g, 3, [](double, double, double) { return Eigen::Vector3d(3, 0, 4); });
  CHECK(lp_norm(c, 2) == doctest::Approx(5 * std::sqrt(8.0)));
  CHECK(lp_norm(c, 3) == doctest::Approx(5 * 2.0));
  CHECK(lp_norm(c, inf) == doctest::Approx(5));
  CHECK_THROWS_AS(lp_norm(c, 0.5), InvalidArgument);
  Region half = central_region(g);
  CHECK(lp_norm(c, 3, half) == doctest::Approx(5 * 1.0));
  VectorField u = random_solenoidal(Grid(two_pi, 16), 6);
  CHECK(spectral_energy(to_spectral(u)) == doctest::Approx(std::pow(lp_norm(u, 2), 2)).epsilon(1e-12));
}

TEST_CASE("Lebesgue norm properties on random fields") {
  Grid g(two_pi, 16);
  for (std::uint64_t seed = 10; seed < 20; ++seed) {
    VectorField a = random_solenoidal(g, seed), b = random_solenoidal(g, seed + 100);
    for (double p : {1.0, 1.5, 2.0, 3.0, 5.0, inf}) {
      CHECK(lp_norm(a + b, p) <= lp_norm(a, p) + lp_norm(b, p) + 1e-12);
      CHECK(lp_norm(2.5 * a, p) == doctest::Approx(2.5 * lp_norm(a, p)).epsilon(1e-12));
    }
    // Hoelder interpolation |a|_3 <= |a|_2^{1/3} |a|_4^{2/3} on the Riemann sum
    CHECK(lp_norm(a, 3) <= std::pow(lp_norm(a, 2), 1.0 / 3) * std::pow(lp_norm(a, 4), 2.0 / 3) * (1 + 1e-12));
    CHECK(lp_norm(leray_project(a + to_physical(grad(div(b)))), 2) <= lp_norm(a + to_physical(grad(div(b))), 2) + 1e-12);
  }
}

TEST_CASE("mixed norms") {
  CHECK_THROWS_AS(MixedNormSpec(0.5, 2), InvalidArgument);
  Grid g(2.0, 8);
  FieldHistory h;
  for (int n = 0; n <= 4; ++n) {
    VectorField c = sample(g, 3, [](double, double, double) { return Eigen::Vector3d(1, 0, 0); });
    c.set_time(0.25 * n);
    h.push_back(c);
  }
  // |1|_{s} = 8^{1/s}, constant in time over [0, 1]
  CHECK(mixed_norm(h, {2, 2}) == doctest::Approx(std::sqrt(8.0)));
  CHECK(mixed_norm(h, {3, inf}) == doctest::Approx(2.0));
  CHECK(time_norm({0, 1}, {1, 1}, 4) == doctest::Approx(1));
  CHECK_THROWS_AS(time_norm({0}, {1}, 2), EmptyHistory);
  VectorField late = h[0];
  late.set_time(0.5);
  CHECK_THROWS_AS(h.push_back(late), MalformedField);
  VectorField other = VectorField::zeros(Grid(2.0, 16));
  other.set_time(5);
  CHECK_THROWS_AS(h.push_back(other), GridMismatch);
}

TEST_CASE("snapshot round trip") {
  auto dir = std::filesystem::temp_directory_path() / "critl3_snapshot_test";
  std::filesystem::remove_all(dir);
  Grid g(3.0, 8);
  VectorField u = random_solenoidal(g, 7, 2);
  u.set_time(0.125);
  write_snapshot(u, dir, "u");
  VectorField r = read_snapshot(dir, "u");
  CHECK(r.grid() == g);
  CHECK(r.time() == 0.125);
  for (int c = 0; c < 3; ++c) CHECK((r.real(c) == u.real(c)).all());
  VectorField s = to_spectral(u);
  write_snapshot(s, dir, "s");
  VectorField rs = read_snapshot(dir, "s");
  CHECK(rs.is_spectral());
  for (int c = 0; c < 3; ++c) CHECK((rs.spec(c) == s.spec(c)).all());
  std::ifstream side(dir / "u.json");
  auto j = nlohmann::json::parse(side);
  CHECK(j["resolution"] == 8);
  CHECK(j["representation"] == "physical");
  CHECK(j["component_names"].size() == 3);
  std::filesystem::resize_file(dir / "u.x.bin", 16);
  CHECK_THROWS_AS(read_snapshot(dir, "u"), MalformedField);
  std::filesystem::remove_all(dir);
}
