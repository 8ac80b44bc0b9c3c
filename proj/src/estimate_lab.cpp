#include "critl3/estimate_lab.hpp"

#include <algorithm>
#include <cmath>

#include "critl3/error.hpp"
#include "critl3/fit.hpp"
#include "critl3/mild_solver.hpp"
#include "critl3/norms.hpp"
#include "critl3/operators.hpp"
#include "critl3/perturbation.hpp"
#include "critl3/stokes_heat.hpp"

namespace critl3 {
namespace {

using cd = std::complex<double>;

bool power_of_two(double lambda) {
  if (!(lambda >= 1)) return false;
  int e;
  return std::frexp(lambda, &e) == 0.5;
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

// physical field from a band-limited difference a(n) - b(m)
VectorField band_difference(const CompactHistory& a, std::size_t n, const CompactHistory& b, std::size_t m,
                            double t) {
  VectorField x = a.scatter(n, t);
  VectorField y = b.scatter(m, t);
  x -= y;
  return to_physical(x);
}

}  // namespace

FieldHistory rescale_history(const FieldHistory& h, double lambda, double amplitude_power) {
  if (!power_of_two(lambda)) throw InvalidArgument("scale factor must be a power of two, got " + format_double(lambda));
  FieldHistory out;
  out.reserve(h.size());
  double amp = std::pow(lambda, amplitude_power);
  for (const auto& s : h) {
    Grid g(s.grid().box_length() / lambda, s.grid().resolution());
    VectorField p = to_physical(s);
    VectorField r(g, s.components(), Representation::physical, s.time() / (lambda * lambda));
    r.set_component_names(s.component_names());
    for (int c = 0; c < s.components(); ++c) r.real(c) = amp * p.real(c);
    out.push_back(std::move(r));
  }
  return out;
}

EstimateReport scaling_check(const FieldHistory& v, const FieldHistory& q, double lambda) {
  if (v.empty()) throw EmptyHistory("scaling check needs a velocity history");
  if (!power_of_two(lambda)) throw InvalidArgument("scale factor must be a power of two, got " + format_double(lambda));
  FieldHistory vl = rescale_history(v, lambda, 1.0);
  double l3 = lp_norm(v[0], 3.0), l3l = lp_norm(vl[0], 3.0);
  double n5 = mixed_norm(v, {5.0, 5.0}), n5l = mixed_norm(vl, {5.0, 5.0});
  double inv = std::max(rel_diff(l3, l3l), rel_diff(n5, n5l));
  EstimateReport r;
  r.name = "scaling";
  r.lhs = inv;
  r.rhs = 1e-8;
  bool ok_inv = inv <= 1e-8;
  bool ok_res = true;
  std::string res_note;
  if (v.size() >= 5 && v.uniform()) {
    FieldHistory qq = q.empty() ? recover_pressure(v) : q;
    FieldHistory ql = rescale_history(qq, lambda, 2.0);
    double res = 0.0, resl = 0.0;
    for (std::size_t n = 0; n < v.size(); ++n) {
      res = std::max(res, momentum_residual_max(v, qq, n));
      resl = std::max(resl, momentum_residual_max(vl, ql, n));
    }
    double l3c = lambda * lambda * lambda;
    double tol = 1e-9 * l3c * std::max(res, 1.0);
    ok_res = resl <= l3c * res + tol;
    res_note = "; momentum residual max " + format_double(res) + ", rescaled " + format_double(resl) +
               ", bound lambda^3 res + " + format_double(tol);
  } else {
    res_note = "; residual not checked (needs >= 5 uniform slices)";
  }
  r.ratio = l3 > 0 ? l3l / l3 : 1.0;
  r.pass = ok_inv && ok_res;
  r.notes = "lambda " + format_double(lambda) + ": |v(0)|_3 " + format_double(l3) + " -> " + format_double(l3l) +
            ", |v|_5,Q " + format_double(n5) + " -> " + format_double(n5l) + res_note;
  return r;
}

EmbeddingNorms embedding_norms(const FieldHistory& v1) {
  if (v1.size() < 2) throw EmptyHistory("embedding check needs at least two slices");
  FieldHistory F;
  F.reserve(v1.size());
  for (const auto& s : v1) {
    VectorField t = tensor_product(to_physical(s), to_physical(s), false);
    t.set_time(s.time());
    F.push_back(std::move(t));
  }
  EmbeddingNorms e;
  e.n32_inf = mixed_norm(F, {1.5, inf});
  e.n52 = mixed_norm(F, {2.5, 2.5});
  e.n2_4 = mixed_norm(F, {2.0, 4.0});
  e.n2_2 = mixed_norm(F, {2.0, 2.0});
  e.bound = std::pow(e.n32_inf, embedding_theta) * std::pow(e.n52, 1 - embedding_theta);
  return e;
}

EstimateReport embedding_chain_check(const FieldHistory& v1) {
  EmbeddingNorms e = embedding_norms(v1);
  EstimateReport r;
  r.name = "embedding_chain";
  r.lhs = e.n2_4;
  r.rhs = e.bound;
  r.ratio = e.bound > 0 ? e.n2_4 / e.bound : (e.n2_4 == 0 ? 0.0 : inf);
  bool finite = std::isfinite(e.n32_inf) && std::isfinite(e.n52) && std::isfinite(e.n2_4) && std::isfinite(e.n2_2);
  r.pass = finite && e.n2_4 <= e.bound * (1 + 1e-12);
  r.notes = "|F|_{3/2,inf} " + format_double(e.n32_inf) + ", |F|_{5/2} " + format_double(e.n52) + ", |F|_{2,4} " +
            format_double(e.n2_4) + ", |F|_{2,2} " + format_double(e.n2_2) + ", theta 3/8";
  return r;
}

std::pair<double, double> solver_disagreement(const VectorField& v0, double T, int steps, double tol, int k_max) {
  PicardOptions po;
  po.steps = steps;
  po.record_stride = 0;
  MildSolution mild = [&] {
    try {
      MildSolution s = picard_solve(v0, T, tol, k_max, po);
      if (!s.converged) throw ExperimentIncomplete("Picard iteration did not reach tolerance", "mild");
      return s;
    } catch (const ExperimentIncomplete&) {
      throw;
    } catch (const Error& e) {
      throw ExperimentIncomplete(e.what(), "mild");
    }
  }();
  PerturbationOptions pe;
  pe.T = T;
  pe.dt = T / steps;
  pe.record_stride = 0;
  pe.cfl = inf;
  PerturbationRun pert = [&] {
    try {
      return perturb_solve(v0, pe);
    } catch (const Error& e) {
      throw ExperimentIncomplete(e.what(), "perturbation");
    }
  }();
  if (pert.times().size() != mild.times.size())
    throw ExperimentIncomplete("solver time grids differ", "comparison");
  std::vector<double> l5, l3;
  for (std::size_t n = 0; n < mild.times.size(); ++n) {
    VectorField d = band_difference(*mild.correction, n, pert.v2_modes(), n, mild.times[n]);
    l5.push_back(lp_norm(d, 5.0));
    l3.push_back(lp_norm(d, 3.0));
  }
  return {time_norm(mild.times, l5, 5.0), time_norm(mild.times, l3, inf)};
}

UniquenessResult uniqueness_experiment(const std::function<VectorField(const Grid&)>& data, double box_length,
                                       const UniquenessOptions& opts) {
  if (opts.resolutions.size() < 2) throw InvalidArgument("uniqueness experiment needs two resolutions");
  UniquenessResult res;
  Grid base(box_length, opts.base_resolution);
  VectorField v0b = data(base);
  try {
    res.T0 = select_horizon(v0b, opts.threshold);
  } catch (const Error& e) {
    throw ExperimentIncomplete(e.what(), "select_horizon");
  }
  std::vector<double> d5, d3, hs;
  double base5 = inf, base3 = inf;
  for (int N : opts.resolutions) {
    Grid g(box_length, N);
    int steps = int(std::lround(double(opts.base_steps) * N / opts.base_resolution));
    auto [a, b] = solver_disagreement(data(g), res.T0, steps, opts.tol, opts.k_max);
    d5.push_back(a);
    d3.push_back(b);
    hs.push_back(1.0 / N);
    if (N == opts.base_resolution) {
      base5 = a;
      base3 = b;
    }
  }
  res.trace.parameter_name = "resolution";
  for (int N : opts.resolutions) res.trace.parameters.push_back(N);
  res.trace.metrics = {{"diff_5_5", d5}, {"diff_3_inf", d3}};
  std::size_t k = d5.size();
  double order = (d5[k - 2] > 0 && d5[k - 1] > 0) ? observed_orders({hs[k - 2], hs[k - 1]}, {d5[k - 2], d5[k - 1]})[0]
                                                    : std::numeric_limits<double>::quiet_NaN();
  res.trace.fitted_rate = order;
  EstimateReport& r = res.report;
  r.name = "uniqueness";
  r.lhs = std::max(base5, base3);
  r.rhs = opts.agreement;
  r.ratio = r.lhs / r.rhs;
  r.fitted_exponent = order;
  r.reference_exponent = opts.min_order;
  bool zero = d5[k - 1] == 0 && d5[k - 2] == 0;
  r.pass = r.lhs <= opts.agreement && (zero || order >= opts.min_order);
  r.notes = "T0 " + format_double(res.T0) + " from the base resolution; (5,5) at base " + format_double(base5) +
            ", (3,inf) at base " + format_double(base3) + "; order from the two finest resolutions";
  return res;
}

EstimateReport uniqueness_experiment(const VectorField& v0, const UniquenessOptions& opts) {
  double T0;
  try {
    T0 = select_horizon(v0, opts.threshold);
  } catch (const Error& e) {
    throw ExperimentIncomplete(e.what(), "select_horizon");
  }
  int N = v0.grid().resolution();
  int steps = int(std::lround(double(opts.base_steps) * N / opts.base_resolution));
  auto [a, b] = solver_disagreement(v0, T0, std::max(steps, 4), opts.tol, opts.k_max);
  EstimateReport r;
  r.name = "uniqueness";
  r.lhs = std::max(a, b);
  r.rhs = opts.agreement;
  r.ratio = r.lhs / r.rhs;
  r.pass = a <= opts.agreement && b <= opts.agreement;
  r.notes = "T0 " + format_double(T0) + ", (5,5) " + format_double(a) + ", (3,inf) " + format_double(b);
  return r;
}

TraceResult weak_convergence_harness(const std::function<VectorField(int)>& family, const std::vector<int>& ms,
                                     const VectorField& v0_limit, const WeakConvergenceOptions& opts) {
  if (ms.size() < 2) throw InvalidArgument("weak convergence needs at least two family members");
  for (std::size_t i = 1; i < ms.size(); ++i)
    if (ms[i] <= ms[i - 1]) throw InvalidArgument("family parameters must increase");
  const Grid& g = v0_limit.grid();
  Region K = central_region(g);
  PerturbationOptions po;
  po.T = opts.T;
  po.dt = opts.T / opts.steps;
  po.record_stride = 0;
  po.cfl = inf;
  PerturbationRun lim = perturb_solve(v0_limit, po);
  const auto& times = lim.times();
  std::vector<double> local, global, data;
  for (int m : ms) {
    VectorField vm = family(m);
    if (vm.grid() != g) throw GridMismatch("family member on a different grid");
    VectorField dv = to_physical(vm) - to_physical(v0_limit);
    data.push_back(lp_norm(dv, 3.0));
    PerturbationRun run = perturb_solve(vm, po);
    VectorField dv_s = to_spectral(dv);
    std::vector<double> l3, l2;
    for (std::size_t n = 0; n < times.size(); ++n) {
      VectorField d = band_difference(run.v2_modes(), n, lim.v2_modes(), n, times[n]);
      d += to_physical(heat_propagate(dv_s, times[n]));
      l3.push_back(lp_norm(d, 3.0, K));
      l2.push_back(lp_norm(d, 2.0));
    }
    local.push_back(time_norm(times, l3, 3.0));
    global.push_back(time_norm(times, l2, 2.0));
  }
  TraceResult res;
  res.trace.parameter_name = "m";
  for (int m : ms) res.trace.parameters.push_back(m);
  res.trace.metrics = {{"local_l3", local}, {"global_l2", global}, {"data_l3", data}};
  bool positive = std::all_of(local.begin(), local.end(), [](double x) { return x > 0; });
  std::vector<double> mp(res.trace.parameters);
  res.trace.fitted_rate = positive ? fit_loglog(mp, local).slope : std::numeric_limits<double>::quiet_NaN();
  double dmin = *std::min_element(data.begin(), data.end());
  double dmax = *std::max_element(data.begin(), data.end());
  EstimateReport& r = res.report;
  r.name = "weak_convergence";
  if (dmax == 0) {
    r.notes = "constant family: data and solutions coincide";
    return res;
  }
  if (dmin < 0.5 * data.front())
    throw MisconfiguredFamily("initial-data distance decays from " + format_double(data.front()) + " to " +
                              format_double(dmin) + "; family converges strongly");
  bool decreasing = true;
  for (std::size_t i = 1; i < local.size(); ++i) decreasing = decreasing && local[i] < local[i - 1];
  r.lhs = local.back();
  r.rhs = local.front();
  r.ratio = local.front() > 0 ? local.back() / local.front() : 0.0;
  r.fitted_exponent = res.trace.fitted_rate;
  r.pass = decreasing;
  r.notes = "local L3 distance on the central sub-box over [0, " + format_double(opts.T) +
            "]; data distance min/first " + format_double(dmin / data.front());
  return res;
}

TraceResult modulus_of_continuity(const VectorField& v0, const std::vector<double>& t_list, int steps, double tol,
                                  int k_max, double floor) {
  if (t_list.empty()) throw InvalidArgument("modulus of continuity needs times");
  for (std::size_t i = 1; i < t_list.size(); ++i)
    if (!(t_list[i] < t_list[i - 1])) throw InvalidArgument("t_list must decrease");
  if (!(t_list.back() > 0)) throw InvalidArgument("times must be positive");
  double T = t_list.front();
  PicardOptions po;
  po.steps = steps;
  po.record_stride = 0;
  MildSolution sol = picard_solve(v0, T, tol, k_max, po);
  double h = T / steps;
  VectorField v0p = to_physical(v0);
  std::vector<double> vals;
  for (double t : t_list) {
    double idx = t / h;
    auto n = std::size_t(std::llround(idx));
    if (std::abs(idx - double(n)) > 1e-6) throw InvalidArgument("time " + format_double(t) + " is off the grid");
    VectorField d = sol.slice(n) - v0p;
    vals.push_back(lp_norm(d, 3.0));
  }
  TraceResult res;
  res.trace.parameter_name = "t";
  res.trace.parameters = t_list;
  res.trace.metrics = {{"l3_distance", vals}};
  bool positive = std::all_of(vals.begin(), vals.end(), [](double x) { return x > 0; });
  res.trace.fitted_rate = positive && vals.size() >= 2 ? fit_loglog(t_list, vals).slope
                                                       : std::numeric_limits<double>::quiet_NaN();
  bool trend = true;
  for (std::size_t i = 1; i < vals.size(); ++i) trend = trend && (vals[i] <= vals[i - 1] || vals[i] <= floor);
  EstimateReport& r = res.report;
  r.name = "modulus_of_continuity";
  r.lhs = vals.back();
  r.rhs = vals.front();
  r.ratio = vals.front() > 0 ? vals.back() / vals.front() : 0.0;
  r.fitted_exponent = res.trace.fitted_rate;
  r.pass = trend && sol.converged;
  r.notes = "|v(t) - v0|_3 along the mild solution; floor " + format_double(floor);
  return res;
}

}  // namespace critl3
