#include "critl3/norms.hpp"

#include <cmath>

#include "critl3/error.hpp"
#include "critl3/spectral_loop.hpp"

namespace critl3 {
namespace {

Eigen::ArrayXd magnitude(const VectorField& u) {
  VectorField p = to_physical(u);
  Eigen::ArrayXd m = Eigen::ArrayXd::Zero(u.grid().points());
  for (int c = 0; c < p.components(); ++c) m += p.real(c).square();
  return m.sqrt();
}

double reduce(const Eigen::ArrayXd& m, double p, double dv) {
  if (!(p >= 1.0)) throw InvalidArgument("Lebesgue exponent must be >= 1");
  if (std::isinf(p)) return m.size() ? m.maxCoeff() : 0.0;
  if (p == 2.0) return std::sqrt(m.square().sum() * dv);
  if (p == 1.0) return m.sum() * dv;
  return std::pow(m.pow(p).sum() * dv, 1.0 / p);
}

}  // namespace

bool Region::contains(double x, double y, double z) const {
  return x >= lo[0] && x < hi[0] && y >= lo[1] && y < hi[1] && z >= lo[2] && z < hi[2];
}

Region central_region(const Grid& g) {
  double a = g.box_length() / 4, b = 3 * g.box_length() / 4;
  return Region{{a, a, a}, {b, b, b}};
}

double lp_norm(const VectorField& u, double p) {
  if (!(p >= 1.0)) throw InvalidArgument("Lebesgue exponent must be >= 1");
  return reduce(magnitude(u), p, u.grid().cell_volume());
}

double lp_norm(const VectorField& u, double p, const Region& region) {
  if (!(p >= 1.0)) throw InvalidArgument("Lebesgue exponent must be >= 1");
  Eigen::ArrayXd m = magnitude(u);
  const Grid& g = u.grid();
  int n = g.resolution();
  double h = g.spacing();
  std::vector<double> kept;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (region.contains(i * h, j * h, k * h)) kept.push_back(m[g.index(i, j, k)]);
  return reduce(Eigen::Map<Eigen::ArrayXd>(kept.data(), kept.size()), p, g.cell_volume());
}

double spectral_energy(const VectorField& u) {
  VectorField s = to_spectral(u);
  const Grid& g = s.grid();
  double acc = 0.0;
  for_each_mode(g, [&](std::size_t idx, int, int, int k) {
    double w = hermitian_weight(g, k);
    for (int c = 0; c < s.components(); ++c) acc += w * std::norm(s.spec(c)[idx]);
  });
  double np = double(g.points());
  return acc * g.volume() / (np * np);
}

MixedNormSpec::MixedNormSpec(double s_, double l_) : s(s_), l(l_) {
  if (!(s >= 1.0) || !(l >= 1.0)) throw InvalidArgument("mixed-norm exponents must be >= 1");
}

double time_norm(const std::vector<double>& times, const std::vector<double>& values, double l) {
  if (values.empty()) throw EmptyHistory("no time samples");
  if (times.size() != values.size()) throw InvalidArgument("times and values differ in length");
  if (!(l >= 1.0)) throw InvalidArgument("temporal exponent must be >= 1");
  if (std::isinf(l)) {
    double m = 0.0;
    for (double v : values) m = std::max(m, v);
    return m;
  }
  if (values.size() < 2) throw EmptyHistory("finite temporal exponent needs at least two slices");
  double acc = 0.0;
  for (std::size_t i = 1; i < values.size(); ++i)
    acc += 0.5 * (times[i] - times[i - 1]) * (std::pow(values[i], l) + std::pow(values[i - 1], l));
  return std::pow(acc, 1.0 / l);
}

std::vector<double> slice_norms(const FieldHistory& h, double s) {
  if (h.empty()) throw EmptyHistory("history is empty");
  std::vector<double> out;
  out.reserve(h.size());
  for (const auto& f : h) out.push_back(lp_norm(f, s));
  return out;
}

std::vector<double> slice_norms(const FieldHistory& h, double s, const Region& region) {
  if (h.empty()) throw EmptyHistory("history is empty");
  std::vector<double> out;
  out.reserve(h.size());
  for (const auto& f : h) out.push_back(lp_norm(f, s, region));
  return out;
}

double mixed_norm(const FieldHistory& h, const MixedNormSpec& spec) {
  return time_norm(h.times(), slice_norms(h, spec.s), spec.l);
}

double mixed_norm(const FieldHistory& h, const MixedNormSpec& spec, const Region& region) {
  return time_norm(h.times(), slice_norms(h, spec.s, region), spec.l);
}

}  // namespace critl3
