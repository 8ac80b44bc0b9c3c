#include "critl3/stokes_heat.hpp"

#include <algorithm>
#include <cmath>

#include "critl3/error.hpp"
#include "critl3/fit.hpp"
#include "critl3/norms.hpp"
#include "critl3/operators.hpp"
#include "critl3/spectral_loop.hpp"

namespace critl3 {

const Eigen::ArrayXd& HeatPropagator::symbol(double t) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = cache_.find(t);
  if (it != cache_.end()) return it->second;
  if (cache_.size() > 64) cache_.clear();
  Eigen::ArrayXd s(grid_.spectral_points());
  const auto& tb = tables(grid_);
  for_each_mode(grid_, [&](std::size_t idx, int i, int j, int k) {
    s[idx] = std::exp(-t * (tb.k2[i] + tb.k2[j] + tb.k2[k]));
  });
  return cache_.emplace(t, std::move(s)).first->second;
}

VectorField HeatPropagator::propagate(const VectorField& v0, double t) const {
  if (!(t >= 0.0)) throw InvalidArgument("heat propagation time must be >= 0");
  if (v0.grid() != grid_) throw GridMismatch("propagator grid mismatch");
  if (t == 0.0) return v0;
  VectorField s = to_spectral(v0);
  const Eigen::ArrayXd& e = symbol(t);
  for (int c = 0; c < s.components(); ++c) s.spec(c) *= e;
  s.set_time(v0.time() + t);
  return transform(s, v0.representation());
}

VectorField heat_propagate(const VectorField& v0, double t) {
  if (!(t >= 0.0)) throw InvalidArgument("heat propagation time must be >= 0");
  return HeatPropagator(v0.grid()).propagate(v0, t);
}

FieldHistory heat_history(const VectorField& v0, const std::vector<double>& times) {
  VectorField s = to_spectral(v0);
  s.set_time(0.0);
  HeatPropagator hp(v0.grid());
  FieldHistory h;
  h.reserve(times.size());
  for (double t : times) h.push_back(to_physical(hp.propagate(s, t)));
  return h;
}

std::vector<double> graded_times(double T, int n) {
  if (n < 1 || !(T > 0)) throw InvalidArgument("graded grid needs T > 0 and n >= 1");
  std::vector<double> t(n + 1);
  for (int i = 0; i <= n; ++i) t[i] = T * (double(i) / n) * (double(i) / n);
  return t;
}

std::vector<double> uniform_times(double T, int n) {
  if (n < 1 || !(T > 0)) throw InvalidArgument("uniform grid needs T > 0 and n >= 1");
  std::vector<double> t(n + 1);
  for (int i = 0; i <= n; ++i) t[i] = T * double(i) / n;
  return t;
}

EstimateReport verify_first_stokes_estimate(const VectorField& v0, double T, int n_slices) {
  double n3 = lp_norm(v0, 3);
  if (!(n3 > 0)) throw UndefinedRatio("zero initial data leaves the linear ratio undefined");
  auto times = graded_times(T, n_slices);
  VectorField s = to_spectral(v0);
  HeatPropagator hp(v0.grid());
  std::vector<double> l3, l5;
  for (double t : times) {
    VectorField v = to_physical(hp.propagate(s, t));
    l3.push_back(lp_norm(v, 3));
    l5.push_back(lp_norm(v, 5));
  }
  double lhs = time_norm(times, l3, inf) + time_norm(times, l5, 5.0);
  EstimateReport r;
  r.name = "first_stokes_estimate";
  r.lhs = lhs;
  r.rhs = n3;
  r.ratio = lhs / n3;
  r.pass = std::isfinite(r.ratio);
  r.notes = "lhs = |v1|_{3,inf,Q_T} + |v1|_{5,Q_T}, T = " + format_double(T) +
            ", graded grid with " + std::to_string(n_slices) + " steps";
  return r;
}

double gradient_decay_reference(double s) {
  double inv_r = 1.5 * (1.0 / 3.0 - 1.0 / s);
  return -(inv_r + 0.5);
}

EstimateReport verify_gradient_decay(const VectorField& v0, double s, const std::vector<double>& times,
                                     double slack) {
  if (!(s >= 3.0)) throw InvalidArgument("gradient decay needs s >= 3");
  if (times.size() < 3) throw InvalidArgument("gradient decay needs at least three times");
  for (std::size_t i = 0; i < times.size(); ++i)
    if (!(times[i] > 0) || (i && !(times[i] > times[i - 1])))
      throw InvalidArgument("gradient decay times must be positive and increasing");
  if (times.back() / times.front() < std::pow(10.0, 1.5))
    throw InvalidArgument("gradient decay times must span at least 1.5 decades");
  VectorField sp = to_spectral(v0);
  VectorField g0 = grad(sp);
  HeatPropagator hp(v0.grid());
  std::vector<double> norms;
  for (double t : times) norms.push_back(lp_norm(to_physical(hp.propagate(g0, t)), s));
  double n3 = lp_norm(v0, 3);
  EstimateReport r;
  r.name = "gradient_decay_s" + format_double(s);
  r.reference_exponent = gradient_decay_reference(s);
  // an identically zero gradient decays faster than any power
  bool zero = *std::max_element(norms.begin(), norms.end()) == 0.0;
  r.fitted_exponent = zero ? -inf : fit_loglog(times, norms).slope;
  r.lhs = norms.back() * std::pow(times.back(), -r.reference_exponent);
  r.rhs = n3;
  r.ratio = n3 > 0 ? r.lhs / n3 : 0.0;
  r.pass = r.fitted_exponent <= r.reference_exponent + slack;
  r.notes = "one-sided: decay at least as fast as the reference power passes; lhs = |grad v1(T)|_s T^{-ref}";
  return r;
}

}  // namespace critl3
