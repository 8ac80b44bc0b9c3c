#include <algorithm>
#include <cmath>
#include <array>
#include <limits>
#include <optional>
#include <random>

#include "critl3/error.hpp"
#include "critl3/fit.hpp"
#include "critl3/norms.hpp"
#include "critl3/perturbation.hpp"
#include "perturbation_internal.hpp"

namespace critl3 {
namespace {

using cd = std::complex<double>;

double smootherstep(double s) {
  if (s <= 0) return 0.0;
  if (s >= 1) return 1.0;
  return s * s * s * (s * (6 * s - 15) + 10);
}

double smootherstep_dt(double s) {
  if (s <= 0 || s >= 1) return 0.0;
  return 30 * s * s * (s - 1) * (s - 1);
}

// value of a ledger column at time t by linear interpolation between steps
double ledger_at(const std::vector<EnergyLedgerRow>& L, double t, double EnergyLedgerRow::*col) {
  if (t < 0 || t > L.back().t * (1 + 1e-12)) throw InvalidArgument("audit time beyond run horizon");
  auto it = std::lower_bound(L.begin(), L.end(), t, [](const EnergyLedgerRow& r, double x) { return r.t < x; });
  if (it == L.end()) return L.back().*col;
  if (it == L.begin() || it->t == t) return (*it).*col;
  const auto& a = *(it - 1);
  const auto& b = *it;
  double w = (t - a.t) / (b.t - a.t);
  return (1 - w) * (a.*col) + w * (b.*col);
}

struct SpatialPhi {
  Eigen::ArrayXd phi, gx, gy, gz, lap;
};

SpatialPhi sample_phi(const Grid& g, const TestFunction& f) {
  std::size_t np = g.points();
  SpatialPhi s;
  s.phi.setZero(np);
  s.gx.setZero(np);
  s.gy.setZero(np);
  s.gz.setZero(np);
  s.lap.setZero(np);
  if (f.spatially_constant) {
    s.phi.setOnes();
    return s;
  }
  double L = g.box_length(), h = g.spacing(), R = f.radius;
  int n = g.resolution();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double d[3] = {i * h - f.center[0], j * h - f.center[1], k * h - f.center[2]};
        for (double& x : d) x -= L * std::round(x / L);
        double r2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
        double q = r2 / (R * R);
        if (q >= 1) continue;
        double om = 1 - q;
        double F = std::exp(1 - 1 / om);
        double F1 = -F / (om * om);
        double F2 = F * (2 * q - 1) / (om * om * om * om);
        std::size_t idx = g.index(i, j, k);
        s.phi[idx] = F;
        s.gx[idx] = 2 * F1 * d[0] / (R * R);
        s.gy[idx] = 2 * F1 * d[1] / (R * R);
        s.gz[idx] = 2 * F1 * d[2] / (R * R);
        s.lap[idx] = 4 * F2 * r2 / (R * R * R * R) + 6 * F1 / (R * R);
      }
  return s;
}

}  // namespace

double energy_tolerance(int resolution) { return 1e-6 * std::pow(64.0 / resolution, std::log2(10.0)); }

EstimateReport global_energy_audit(const PerturbationRun& run, double t) {
  const auto& L = run.energy_ledger;
  double kin = ledger_at(L, t, &EnergyLedgerRow::kinetic);
  double dis = ledger_at(L, t, &EnergyLedgerRow::dissipation);
  double work = ledger_at(L, t, &EnergyLedgerRow::work);
  EstimateReport r;
  r.name = "global_energy";
  r.lhs = kin + dis;
  r.rhs = work;
  r.ratio = work != 0 ? r.lhs / work : (r.lhs == 0 ? 1.0 : inf);
  double eps = energy_tolerance(run.grid().resolution());
  r.pass = r.lhs - r.rhs <= eps * std::max(r.lhs, 1.0);
  r.notes = "lhs = 1/2|v2(t)|^2 + int |grad v2|^2, rhs = int v1(x)v : grad v2; |lhs - rhs| = " +
            format_double(std::abs(r.lhs - r.rhs)) + ", tolerance " + format_double(eps) + " max(lhs, 1)";
  return r;
}

double TestFunction::window(double t) const {
  double up = ramp_up_end > ramp_up_start ? smootherstep((t - ramp_up_start) / (ramp_up_end - ramp_up_start))
                                          : (t >= ramp_up_start ? 1.0 : 0.0);
  double down = ramp_down_end > ramp_down_start
                    ? 1.0 - smootherstep((t - ramp_down_start) / (ramp_down_end - ramp_down_start))
                    : (t < ramp_down_start ? 1.0 : 0.0);
  return up * down;
}

double TestFunction::window_dt(double t) const {
  double up = 1.0, dup = 0.0, down = 1.0, ddown = 0.0;
  if (ramp_up_end > ramp_up_start) {
    double w = ramp_up_end - ramp_up_start;
    up = smootherstep((t - ramp_up_start) / w);
    dup = smootherstep_dt((t - ramp_up_start) / w) / w;
  } else {
    up = t >= ramp_up_start ? 1.0 : 0.0;
  }
  if (ramp_down_end > ramp_down_start) {
    double w = ramp_down_end - ramp_down_start;
    down = 1.0 - smootherstep((t - ramp_down_start) / w);
    ddown = -smootherstep_dt((t - ramp_down_start) / w) / w;
  } else {
    down = t < ramp_down_start ? 1.0 : 0.0;
  }
  return dup * down + up * ddown;
}

std::vector<LocalAuditTerms> local_energy_terms(const PerturbationRun& run, const std::vector<TestFunction>& phis,
                                                double t) {
  const Grid& g = run.grid();
  for (const auto& f : phis)
    if (!f.spatially_constant && !(f.radius > 0 && f.radius < g.box_length() / 2))
      throw InvalidArgument("test function support exceeds the box");
  if (t < 0 || t > run.time() * (1 + 1e-12)) throw InvalidArgument("audit time beyond run horizon");
  std::vector<SpatialPhi> sp;
  for (const auto& f : phis) sp.push_back(sample_phi(g, f));
  NonlinearEvaluator ev(g, run.v0(), run.rho(), run.options().mollifier);
  std::size_t B = ev.band().size();
  std::vector<cd> gbuf(3 * B);
  double dv = g.cell_volume();
  std::size_t P = phis.size();
  std::vector<double> lhs_int(P, 0.0), rhs_int(P, 0.0), prevB(P, 0.0), prevC(P, 0.0), lastA(P, 0.0);
  double scale = 0.0;
  const auto& times = run.times();
  EvalFields F;
  for (std::size_t n = 0; n < times.size() && times[n] <= t * (1 + 1e-12); ++n) {
    double tn = times[n];
    ev.evaluate(run.v2_modes().data(n, 0), tn, gbuf.data(), true, &F);
    Eigen::ArrayXd u2 = F.u[0].square() + F.u[1].square() + F.u[2].square();
    scale = std::max(scale, u2.sum() * dv);
    Eigen::ArrayXd g2 = Eigen::ArrayXd::Zero(g.points());
    Eigen::ArrayXd work = Eigen::ArrayXd::Zero(g.points());
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        g2 += F.gu[i * 3 + j].square();
        work += F.V1[i] * F.b[j] * F.gu[i * 3 + j];
      }
    Eigen::ArrayXd V1u = F.V1[0] * F.u[0] + F.V1[1] * F.u[1] + F.V1[2] * F.u[2];
    for (std::size_t q = 0; q < P; ++q) {
      double w = phis[q].window(tn), wt = phis[q].window_dt(tn);
      const SpatialPhi& s = sp[q];
      double A = w * (s.phi * u2).sum() * dv;
      double Bv = w * (s.phi * g2).sum() * dv;
      double C = 0.0;
      if (wt != 0.0) C += wt * (s.phi * u2).sum() * dv;
      if (w != 0.0 && !phis[q].spatially_constant) {
        Eigen::ArrayXd adg = F.a[0] * s.gx + F.a[1] * s.gy + F.a[2] * s.gz;
        Eigen::ArrayXd bdg = F.b[0] * s.gx + F.b[1] * s.gy + F.b[2] * s.gz;
        Eigen::ArrayXd udg = F.u[0] * s.gx + F.u[1] * s.gy + F.u[2] * s.gz;
        C += w * (u2 * (s.lap + adg) + 2 * F.p * udg + 2 * V1u * bdg).sum() * dv;
      }
      if (w != 0.0) C += 2 * w * (s.phi * work).sum() * dv;
      if (n > 0) {
        double h = tn - times[n - 1];
        lhs_int[q] += 0.5 * h * (prevB[q] + Bv);
        rhs_int[q] += 0.5 * h * (prevC[q] + C);
      }
      prevB[q] = Bv;
      prevC[q] = C;
      lastA[q] = A;
    }
  }
  std::vector<LocalAuditTerms> out;
  for (std::size_t q = 0; q < P; ++q) {
    double lhs = lastA[q] + 2 * lhs_int[q];
    out.push_back({lhs, rhs_int[q], lhs - rhs_int[q], scale});
  }
  return out;
}

std::vector<EstimateReport> local_energy_audits(const PerturbationRun& run, const std::vector<TestFunction>& phis,
                                               double t) {
  std::vector<EstimateReport> out;
  for (const auto& terms : local_energy_terms(run, phis, t)) {
    EstimateReport r;
    r.name = "local_energy";
    r.lhs = terms.lhs;
    r.rhs = terms.rhs;
    r.ratio = terms.rhs != 0 ? terms.lhs / terms.rhs : (terms.lhs == 0 ? 1.0 : inf);
    double tol = 1e-4 * terms.kinetic_scale;
    r.pass = terms.residual <= tol;
    r.notes = "residual lhs - rhs = " + format_double(terms.residual) + ", kinetic scale max|v2|_2^2 = " +
              format_double(terms.kinetic_scale) + ", tolerance 1e-4 kinetic scale";
    out.push_back(r);
  }
  return out;
}

EstimateReport local_energy_audit(const PerturbationRun& run, const TestFunction& phi, double t) {
  return local_energy_audits(run, {phi}, t).front();
}

std::vector<TestFunction> random_test_functions(const Grid& g, int count, std::uint64_t seed, double T) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double L = g.box_length();
  std::vector<TestFunction> out;
  for (int i = 0; i < count; ++i) {
    TestFunction f;
    f.center = Eigen::Vector3d(L / 4 + L / 2 * uni(rng), L / 4 + L / 2 * uni(rng), L / 4 + L / 2 * uni(rng));
    f.radius = L / 6 + L / 6 * uni(rng);
    f.ramp_up_start = 0.0;
    f.ramp_up_end = T * (0.1 + 0.3 * uni(rng));
    f.ramp_down_start = T * (0.5 + 0.2 * uni(rng));
    f.ramp_down_end = T * (0.8 + 0.4 * uni(rng));
    out.push_back(f);
  }
  return out;
}

EnergyBoundResult energy_bound_sweep(const std::vector<VectorField>& family, const std::vector<double>& T_list,
                                     double dt) {
  if (T_list.size() < 3) throw InvalidArgument("energy bound sweep needs at least three horizons");
  if (family.empty()) throw InvalidArgument("energy bound sweep needs a family");
  EnergyBoundResult res;
  double T_max = *std::max_element(T_list.begin(), T_list.end());
  double min_exp = inf, prefactor = 0.0, M = 0.0;
  for (const auto& v0 : family) {
    M = std::max(M, lp_norm(v0, 3.0));
    PerturbationOptions opts;
    opts.T = T_max;
    opts.dt = dt;
    opts.record_stride = 0;
    PerturbationRun run = perturb_solve(v0, opts);
    std::vector<double> e;
    for (double T : T_list) {
      double kmax = 0.0;
      for (const auto& row : run.energy_ledger)
        if (row.t <= T * (1 + 1e-12)) kmax = std::max(kmax, row.kinetic);
      double val = 2 * kmax + ledger_at(run.energy_ledger, T, &EnergyLedgerRow::dissipation);
      e.push_back(val);
      prefactor = std::max(prefactor, val / std::sqrt(T));
    }
    double slope = fit_loglog(T_list, e).slope;
    res.exponents.push_back(slope);
    res.energy.push_back(e);
    min_exp = std::min(min_exp, slope);
  }
  EstimateReport& r = res.report;
  r.name = "energy_bound";
  r.lhs = prefactor;
  r.rhs = M;
  r.ratio = prefactor;
  r.fitted_exponent = min_exp;
  r.reference_exponent = 0.5;
  r.pass = min_exp >= 0.5 - 0.1 && std::isfinite(prefactor);
  r.notes = "fitted exponent is the minimum over the family; lhs = max |v2|^2_{2,Q_T} / sqrt(T), rhs = max |v0|_3";
  return res;
}

VectorField total_forcing(const PerturbationRun& run, std::size_t n) {
  const Grid& g = run.grid();
  NonlinearEvaluator ev(g, run.v0(), run.rho(), run.options().mollifier);
  EvalFields F;
  std::vector<cd> gbuf(3 * ev.band().size());
  ev.evaluate(run.v2_modes().data(n, 0), run.times().at(n), gbuf.data(), true, &F);
  VectorField M = VectorField::zeros(g, 9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) M.real(i * 3 + j) = F.u[i] * F.a[j] + F.V1[i] * F.b[j];
  VectorField f = to_physical(dealias(div(M)));
  f *= -1.0;
  f.set_time(run.times()[n]);
  return f;
}

ForceSplit force_split(const PerturbationRun& run, const std::vector<double>& T_list) {
  if (run.v2.empty()) throw EmptyHistory("force split needs recorded slices");
  ForceSplit fs;
  std::optional<Mollifier> mol;
  if (run.rho() > 0) mol = Mollifier{run.rho(), run.options().mollifier};
  auto moll = [&](const VectorField& x) { return mol ? mollify(x, *mol) : x; };
  for (std::size_t n = 0; n < run.v2.size(); ++n) {
    const VectorField& u = run.v2[n];
    VectorField V1 = to_physical(dealias(moll(run.v1[n])));
    VectorField ur = to_physical(dealias(moll(u)));
    double t = u.time();
    auto put = [&](FieldHistory& h, VectorField f) {
      f *= -1.0;
      f.set_time(t);
      h.push_back(std::move(f));
    };
    put(fs.f1, advect(ur, u));
    put(fs.f2, advect(u, V1));
    put(fs.f3, advect(V1, u));
    put(fs.f4, advect(V1, V1));
  }
  std::vector<double> Ts = T_list;
  const auto& times = fs.f1.times();
  if (Ts.empty())
    for (std::size_t n = 2; n < times.size(); n *= 2) Ts.push_back(times[n]);
  std::vector<std::size_t> ends;
  for (double T : Ts) {
    auto it = std::find_if(times.begin(), times.end(),
                           [&](double x) { return std::abs(x - T) <= 1e-9 * std::max(1.0, T); });
    if (it == times.end()) throw InvalidArgument("force split horizon is not a recorded slice time");
    if (it - times.begin() < 1) throw InvalidArgument("force split horizon must exceed the first slice");
    ends.push_back(std::size_t(it - times.begin()));
  }
  struct Spec {
    const FieldHistory* h;
    const char* name;
    double s, l, ref;
  };
  const Spec specs[] = {{&fs.f1, "f1", 9.0 / 8, 1.5, 0.5},
                        {&fs.f2, "f2", 4.0 / 3, 1.5, 7.0 / 24},
                        {&fs.f3, "f3", 6.0 / 5, 1.5, 5.0 / 12},
                        {&fs.f4, "f4", 1.5, 1.5, 1.0 / 6}};
  for (const auto& sp : specs) {
    std::vector<double> sn = slice_norms(*sp.h, sp.s), vals, Tv;
    for (std::size_t e : ends) {
      std::vector<double> tt(times.begin(), times.begin() + e + 1), vv(sn.begin(), sn.begin() + e + 1);
      vals.push_back(time_norm(tt, vv, sp.l));
      Tv.push_back(times[e]);
    }
    EstimateReport r;
    r.name = std::string("force_split_") + sp.name;
    r.lhs = vals.empty() ? 0.0 : vals.back();
    r.rhs = std::pow(lp_norm(run.v0(), 3.0), 2);
    r.ratio = r.rhs > 0 ? r.lhs / r.rhs : 0.0;
    r.reference_exponent = sp.ref;
    bool positive = vals.size() >= 2 && std::all_of(vals.begin(), vals.end(), [](double v) { return v > 0; });
    r.fitted_exponent = positive ? fit_loglog(Tv, vals).slope : std::numeric_limits<double>::quiet_NaN();
    r.pass = positive && r.fitted_exponent >= sp.ref - 0.1;
    r.notes = "norm (" + format_double(sp.s) + ", " + format_double(sp.l) +
              ") on Q_T against T; lhs at the largest horizon, rhs = |v0|_3^2; one-sided exponent check";
    fs.mixed_norm_reports.push_back(r);
  }
  return fs;
}

FieldHistory reconstruct_total(const PerturbationRun& run) {
  if (run.v1.size() != run.v2.size()) throw GridMismatch("v1 and v2 histories differ in length");
  FieldHistory out;
  out.reserve(run.v2.size());
  for (std::size_t n = 0; n < run.v2.size(); ++n) {
    if (run.v1[n].grid() != run.v2[n].grid() || run.v1[n].time() != run.v2[n].time())
      throw GridMismatch("v1 and v2 slices do not match");
    VectorField v = run.v1[n] + run.v2[n];
    v.set_time(run.v2[n].time());
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<double> weak_form_residuals(const PerturbationRun& run, int count, std::uint64_t seed) {
  const Grid& g = run.grid();
  NonlinearEvaluator ev(g, run.v0(), run.rho(), run.options().mollifier);
  const BandIndex& band = ev.band();
  std::size_t B = band.size();
  double k0 = g.k0();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  // W = sum of a few solenoidal Fourier modes with |m| <= 3 per axis
  std::vector<std::vector<cd>> W;
  std::uniform_int_distribution<int> md(-3, 3);
  for (int q = 0; q < count; ++q) {
    VectorField w = VectorField::zeros(g, 3);
    for (int term = 0; term < 4; ++term) {
      Eigen::Vector3d m;
      do m = Eigen::Vector3d(md(rng), md(rng), md(rng));
      while (m.squaredNorm() == 0);
      Eigen::Vector3d k = k0 * m;
      Eigen::Vector3d a(nd(rng), nd(rng), nd(rng)), b(nd(rng), nd(rng), nd(rng));
      a -= k * (k.dot(a) / k.squaredNorm());
      b -= k * (k.dot(b) / k.squaredNorm());
      int n = g.resolution();
      double h = g.spacing();
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int kk = 0; kk < n; ++kk) {
            double ph = k[0] * i * h + k[1] * j * h + k[2] * kk * h;
            double c = std::cos(ph), s = std::sin(ph);
            std::size_t idx = g.index(i, j, kk);
            for (int d = 0; d < 3; ++d) w.real(d)[idx] += a[d] * c + b[d] * s;
          }
    }
    VectorField ws = to_spectral(w);
    std::vector<cd> coef(3 * B);
    for (int c = 0; c < 3; ++c)
      for (std::size_t m = 0; m < B; ++m) coef[c * B + m] = ws.spec(c)[band.flat[m]];
    W.push_back(std::move(coef));
  }
  double ps = ev.parseval_scale();
  const auto& times = run.times();
  double T = times.back();
  std::vector<cd> gbuf(3 * B);
  std::size_t Q = W.size();
  std::vector<double> res(Q, 0.0), mag(Q, 0.0);
  std::vector<std::array<double, 3>> prev(Q);
  for (std::size_t n = 0; n < times.size(); ++n) {
    double t = times[n];
    const cd* u = run.v2_modes().data(n, 0);
    ev.evaluate(u, t, gbuf.data(), false);
    double psi = std::pow(std::cos(M_PI * t / (2 * T)), 2);
    double dpsi = -(M_PI / (2 * T)) * std::sin(M_PI * t / T);
    for (std::size_t q = 0; q < Q; ++q) {
      double uw = 0, guw = 0, gw = 0;
      for (int c = 0; c < 3; ++c)
        for (std::size_t m = 0; m < B; ++m) {
          double wt = ev.band_weight(m);
          double re = std::real(u[c * B + m] * std::conj(W[q][c * B + m]));
          uw += wt * re;
          guw += wt * band.k2[m] * re;
          gw += wt * std::real(gbuf[c * B + m] * std::conj(W[q][c * B + m]));
        }
      std::array<double, 3> cur = {-dpsi * uw * ps, psi * guw * ps, -psi * gw * ps};
      if (n > 0) {
        double h = t - times[n - 1];
        for (int k = 0; k < 3; ++k) {
          double inc = 0.5 * h * (prev[q][k] + cur[k]);
          res[q] += inc;
          mag[q] += std::abs(inc);
        }
      }
      prev[q] = cur;
    }
  }
  std::vector<double> out;
  for (std::size_t q = 0; q < Q; ++q) out.push_back(mag[q] > 0 ? std::abs(res[q]) / mag[q] : 0.0);
  return out;
}

}  // namespace critl3
