#include "critl3/operators.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "critl3/error.hpp"
#include "critl3/spectral_loop.hpp"

namespace critl3 {
namespace {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

VectorField like(const VectorField& src, int components) {
  return VectorField(src.grid(), components, Representation::spectral, src.time());
}

VectorField back_to(VectorField f, Representation rep) { return transform(f, rep); }

}  // namespace

VectorField grad(const VectorField& u) {
  VectorField s = to_spectral(u);
  int nc = s.components();
  if (nc != 1 && nc != 3) throw MalformedField("grad needs a scalar or vector field");
  VectorField out = like(s, nc * 3);
  const auto& t = tables(s.grid());
  for_each_mode(s.grid(), [&](std::size_t idx, int i, int j, int k) {
    double kv[3] = {t.kd[i], t.kd[j], t.kd[k]};
    for (int c = 0; c < nc; ++c) {
      cd v = s.spec(c)[idx];
      for (int d = 0; d < 3; ++d) out.spec(c * 3 + d)[idx] = I * kv[d] * v;
    }
  });
  return back_to(std::move(out), u.representation());
}

VectorField div(const VectorField& u) {
  VectorField s = to_spectral(u);
  int nc = s.components();
  if (nc != 3 && nc != 9) throw MalformedField("div needs a vector or tensor field");
  int rows = nc / 3;
  VectorField out = like(s, rows);
  const auto& t = tables(s.grid());
  for_each_mode(s.grid(), [&](std::size_t idx, int i, int j, int k) {
    double kv[3] = {t.kd[i], t.kd[j], t.kd[k]};
    for (int r = 0; r < rows; ++r) {
      cd acc = 0.0;
      for (int d = 0; d < 3; ++d) acc += kv[d] * s.spec(r * 3 + d)[idx];
      out.spec(r)[idx] = I * acc;
    }
  });
  return back_to(std::move(out), u.representation());
}

VectorField laplacian(const VectorField& u) {
  return apply_symbol(u, [](double k2) { return -k2; });
}

VectorField curl(const VectorField& u) {
  VectorField s = to_spectral(u);
  if (s.components() != 3) throw MalformedField("curl needs a vector field");
  VectorField out = like(s, 3);
  const auto& t = tables(s.grid());
  for_each_mode(s.grid(), [&](std::size_t idx, int i, int j, int k) {
    double kx = t.kd[i], ky = t.kd[j], kz = t.kd[k];
    cd ux = s.spec(0)[idx], uy = s.spec(1)[idx], uz = s.spec(2)[idx];
    out.spec(0)[idx] = I * (ky * uz - kz * uy);
    out.spec(1)[idx] = I * (kz * ux - kx * uz);
    out.spec(2)[idx] = I * (kx * uy - ky * ux);
  });
  return back_to(std::move(out), u.representation());
}

VectorField leray_project(const VectorField& u) {
  VectorField s = to_spectral(u);
  if (s.components() != 3) throw MalformedField("leray_project needs a vector field");
  const auto& t = tables(s.grid());
  for_each_mode(s.grid(), [&](std::size_t idx, int i, int j, int k) {
    double kv[3] = {t.kd[i], t.kd[j], t.kd[k]};
    double kk = kv[0] * kv[0] + kv[1] * kv[1] + kv[2] * kv[2];
    if (kk == 0.0) return;
    cd dot = kv[0] * s.spec(0)[idx] + kv[1] * s.spec(1)[idx] + kv[2] * s.spec(2)[idx];
    for (int d = 0; d < 3; ++d) s.spec(d)[idx] -= kv[d] * dot / kk;
  });
  return back_to(std::move(s), u.representation());
}

VectorField dealias(const VectorField& u) {
  VectorField s = to_spectral(u);
  const auto& t = tables(s.grid());
  for_each_mode(s.grid(), [&](std::size_t idx, int i, int j, int k) {
    if (t.keep[i] && t.keep[j] && t.keep[k]) return;
    for (int c = 0; c < s.components(); ++c) s.spec(c)[idx] = 0.0;
  });
  return back_to(std::move(s), u.representation());
}

VectorField apply_symbol(const VectorField& u, const std::function<double(double)>& symbol) {
  VectorField s = to_spectral(u);
  const auto& t = tables(s.grid());
  for_each_mode(s.grid(), [&](std::size_t idx, int i, int j, int k) {
    double m = symbol(t.k2[i] + t.k2[j] + t.k2[k]);
    for (int c = 0; c < s.components(); ++c) s.spec(c)[idx] *= m;
  });
  return back_to(std::move(s), u.representation());
}

VectorField solve_poisson(const VectorField& f) {
  return apply_symbol(f, [](double k2) { return k2 > 0.0 ? 1.0 / k2 : 0.0; });
}

VectorField tensor_product(const VectorField& a, const VectorField& b, bool dealiased) {
  if (a.grid() != b.grid()) throw GridMismatch("tensor_product grid mismatch");
  if (a.components() != 3 || b.components() != 3)
    throw MalformedField("tensor_product needs two vector fields");
  VectorField pa = to_physical(dealiased ? dealias(a) : a);
  VectorField pb = to_physical(dealiased ? dealias(b) : b);
  VectorField out(a.grid(), 9, Representation::physical, a.time());
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out.real(i * 3 + j) = pa.real(i) * pb.real(j);
  return dealiased ? to_physical(dealias(out)) : out;
}

VectorField advect(const VectorField& w, const VectorField& u) {
  if (w.grid() != u.grid()) throw GridMismatch("advect grid mismatch");
  if (w.components() != 3) throw MalformedField("advecting field must be a vector");
  VectorField pw = to_physical(dealias(w));
  VectorField gu = to_physical(grad(dealias(u)));
  int nc = u.components();
  VectorField out(u.grid(), nc, Representation::physical, u.time());
  for (int c = 0; c < nc; ++c)
    for (int d = 0; d < 3; ++d) out.real(c) += pw.real(d) * gu.real(c * 3 + d);
  return to_physical(dealias(out));
}

double Mollifier::symbol(double k2) const {
  if (kind == MollifierKind::gaussian) return std::exp(-0.5 * k2 * radius * radius);
  double kc = std::numbers::pi / radius;
  return k2 <= kc * kc ? 1.0 : 0.0;
}

VectorField mollify(const VectorField& u, const Mollifier& m) {
  if (!(m.radius > 0.0)) throw InvalidArgument("mollifier radius must be positive");
  if (!(m.radius < u.grid().box_length() / 4)) throw RadiusTooLarge("mollifier radius must be below box/4");
  return apply_symbol(u, [&](double k2) { return m.symbol(k2); });
}

double mollifier_sup_constant(const Grid& g, const Mollifier& m) {
  const auto& t = tables(g);
  double acc = 0.0;
  for_each_mode(g, [&](std::size_t, int i, int j, int k) {
    double s = m.symbol(t.k2[i] + t.k2[j] + t.k2[k]);
    acc += hermitian_weight(g, k) * s * s;
  });
  return std::sqrt(acc / g.volume());
}

double inner_product(const VectorField& a, const VectorField& b) {
  if (a.grid() != b.grid()) throw GridMismatch("inner_product grid mismatch");
  if (a.components() != b.components()) throw MalformedField("inner_product shape mismatch");
  VectorField pa = to_physical(a), pb = to_physical(b);
  double acc = 0.0;
  for (int c = 0; c < a.components(); ++c) acc += (pa.real(c) * pb.real(c)).sum();
  return acc * a.grid().cell_volume();
}

double divergence_defect(const VectorField& u) {
  VectorField s = to_spectral(u);
  VectorField d = to_physical(div(s));
  VectorField g = to_physical(grad(s));
  double dmax = d.real(0).abs().maxCoeff();
  Eigen::ArrayXd mag = Eigen::ArrayXd::Zero(g.grid().points());
  for (int c = 0; c < g.components(); ++c) mag += g.real(c).square();
  double gmax = std::sqrt(mag.maxCoeff());
  return gmax > 0.0 ? dmax / gmax : 0.0;
}

}  // namespace critl3
