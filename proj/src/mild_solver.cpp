#include "critl3/mild_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "critl3/error.hpp"
#include "critl3/etd.hpp"
#include "critl3/fft.hpp"
#include "critl3/norms.hpp"
#include "critl3/operators.hpp"
#include "critl3/presets.hpp"
#include "critl3/spectral_loop.hpp"
#include "critl3/stokes_heat.hpp"

namespace critl3 {
namespace {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};
constexpr int sym_pairs[6][2] = {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}};
constexpr int sym_slot[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};

// pointwise |v|^p summed over the grid, times the cell volume, to the 1/p
double vector_lp(const Eigen::ArrayXd* c, double p, double dv) {
  Eigen::ArrayXd m2 = c[0].square() + c[1].square() + c[2].square();
  if (p == 5.0) return std::pow((m2.square() * m2.sqrt()).sum() * dv, 0.2);
  if (p == 3.0) return std::cbrt((m2 * m2.sqrt()).sum() * dv);
  return std::pow(m2.pow(p / 2).sum() * dv, 1.0 / p);
}

// Heat-flow reference plus band-limited correction, swept in time.
class PicardEngine {
 public:
  PicardEngine(const VectorField& v0, double T, int steps)
      : grid_(v0.grid()),
        band_(band_index(grid_)),
        v0_(to_spectral(v0)),
        h_(T / steps),
        steps_(steps),
        w_(std::make_shared<CompactHistory>(grid_, 3, std::size_t(steps) + 1)) {
    v0_.set_time(0.0);
    for (int n = 0; n <= steps; ++n) times_.push_back(n == steps ? T : n * h_);
    const auto& t = tables(grid_);
    k2full_.resize(grid_.spectral_points());
    for_each_mode(grid_, [&](std::size_t idx, int i, int j, int k) { k2full_[idx] = t.k2[i] + t.k2[j] + t.k2[k]; });
    std::size_t B = band_.size();
    eb_.resize(B);
    ab_.resize(B);
    bb_.resize(B);
    for (std::size_t m = 0; m < B; ++m) {
      double z = -band_.k2[m] * h_;
      eb_[m] = std::exp(z);
      double p1 = etd_phi1(z), p2 = etd_phi2(z);
      ab_[m] = h_ * (p1 - p2);
      bb_[m] = h_ * p2;
    }
    std::size_t ns = grid_.spectral_points(), np = grid_.points();
    for (int c = 0; c < 3; ++c) {
      vhat_[c].assign(ns, 0.0);
      mhat_[c].assign(ns, 0.0);
      dhat_[c].assign(ns, 0.0);
      vphys_[c].resize(np);
      mphys_[c].resize(np);
      dphys_[c].resize(np);
    }
    for (int p = 0; p < 6; ++p) {
      prod_[p].resize(np);
      fhat_[p].assign(ns, 0.0);
    }
  }

  struct SweepResult {
    double norm_v5;
    double diff5;
  };

  SweepResult sweep(bool update) {
    std::size_t B = band_.size();
    int n_res = grid_.resolution();
    double dv = grid_.cell_volume();
    std::vector<cd> g_prev(3 * B), g_cur(3 * B), w_prev(3 * B), w_new(3 * B);
    std::vector<double> nv(times_.size()), nd(times_.size());
    for (std::size_t n = 0; n < times_.size(); ++n) {
      double t = times_[n];
      for (int c = 0; c < 3; ++c) {
        const cd* src = v0_.spec(c).data();
        for (std::size_t idx = 0; idx < k2full_.size(); ++idx)
          vhat_[c][idx] = std::exp(-k2full_[idx] * t) * src[idx];
        const cd* w = w_->data(n, c);
        for (std::size_t m = 0; m < B; ++m) {
          vhat_[c][band_.flat[m]] += w[m];
          mhat_[c][band_.flat[m]] = vhat_[c][band_.flat[m]];
        }
        fft_backward(n_res, vhat_[c].data(), vphys_[c].data());
        fft_backward(n_res, mhat_[c].data(), mphys_[c].data());
      }
      nv[n] = vector_lp(vphys_, 5.0, dv);
      for (int p = 0; p < 6; ++p) {
        prod_[p] = mphys_[sym_pairs[p][0]] * mphys_[sym_pairs[p][1]];
        fft_forward(n_res, prod_[p].data(), fhat_[p].data());
      }
      forcing(g_cur);
      if (n == 0) {
        std::fill(w_new.begin(), w_new.end(), cd(0.0));
      } else {
        for (int c = 0; c < 3; ++c)
          for (std::size_t m = 0; m < B; ++m) {
            std::size_t q = c * B + m;
            w_new[q] = eb_[m] * w_prev[q] + ab_[m] * g_prev[q] + bb_[m] * g_cur[q];
          }
      }
      for (int c = 0; c < 3; ++c) {
        cd* w = w_->data(n, c);
        for (std::size_t m = 0; m < B; ++m) dhat_[c][band_.flat[m]] = w_new[c * B + m] - w[m];
        fft_backward(n_res, dhat_[c].data(), dphys_[c].data());
        if (update) std::copy(w_new.begin() + c * B, w_new.begin() + (c + 1) * B, w);
      }
      nd[n] = vector_lp(dphys_, 5.0, dv);
      std::swap(w_prev, w_new);
      std::swap(g_prev, g_cur);
    }
    return {time_norm(times_, nv, 5.0), time_norm(times_, nd, 5.0)};
  }

  const std::vector<double>& times() const { return times_; }
  const VectorField& v0() const { return v0_; }
  std::shared_ptr<CompactHistory> correction() const { return w_; }

 private:
  // g = P(-div F) on the band from the symmetric product spectra
  void forcing(std::vector<cd>& g) const {
    std::size_t B = band_.size();
    for (std::size_t m = 0; m < B; ++m) {
      std::size_t idx = band_.flat[m];
      double k[3] = {band_.kx[m], band_.ky[m], band_.kz[m]};
      cd d[3];
      for (int i = 0; i < 3; ++i) {
        cd acc = 0.0;
        for (int j = 0; j < 3; ++j) acc += k[j] * fhat_[sym_slot[i][j]][idx];
        d[i] = -I * acc;
      }
      double kk = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
      cd dot = k[0] * d[0] + k[1] * d[1] + k[2] * d[2];
      for (int i = 0; i < 3; ++i) g[i * B + m] = kk > 0 ? d[i] - k[i] * dot / kk : d[i];
    }
  }

  Grid grid_;
  const BandIndex& band_;
  VectorField v0_;
  double h_;
  int steps_;
  std::shared_ptr<CompactHistory> w_;
  std::vector<double> times_;
  std::vector<double> k2full_;
  std::vector<double> eb_, ab_, bb_;
  std::vector<cd> vhat_[3], mhat_[3], dhat_[3], fhat_[6];
  Eigen::ArrayXd vphys_[3], mphys_[3], dphys_[3], prod_[6];
};

VectorField time_derivative(const FieldHistory& v, std::size_t n) {
  std::size_t M = v.size();
  if (M < 5) throw InvalidArgument("momentum residual needs at least five slices");
  if (!v.uniform(1e-6)) throw NonUniformTimeGrid("momentum residual needs a uniform time grid");
  double h = (v.times().back() - v.times().front()) / double(M - 1);
  static const double c0[5] = {-25, 48, -36, 16, -3};
  static const double c1[5] = {-3, -10, 18, -6, 1};
  static const double cc[5] = {1, -8, 0, 8, -1};
  VectorField out = VectorField::zeros(v.grid(), v[n].components(), Representation::physical, v[n].time());
  for (int k = 0; k < 5; ++k) {
    std::size_t idx;
    double coef;
    if (n >= 2 && n + 2 < M) {
      idx = n - 2 + k;
      coef = cc[k];
    } else if (n < 2) {
      idx = k;
      coef = (n == 0 ? c0 : c1)[k];
    } else {
      // mirrored one-sided stencils at the end
      idx = M - 1 - k;
      coef = -(n == M - 1 ? c0 : c1)[k];
    }
    if (coef != 0.0) out += (coef / (12.0 * h)) * to_physical(v[idx]);
  }
  return out;
}

VectorField residual_field(const FieldHistory& v, const FieldHistory& q, std::size_t n) {
  if (v.size() != q.size()) throw InvalidArgument("velocity and pressure histories differ in length");
  VectorField dt = time_derivative(v, n);
  VectorField s = to_spectral(v[n]);
  VectorField r = dt - to_physical(laplacian(s));
  r += to_physical(div(tensor_product(s, s)));
  r += to_physical(grad(to_spectral(q[n])));
  return r;
}

}  // namespace

FieldHistory duhamel_G(const FieldHistory& F, double T) {
  if (F.empty()) throw EmptyHistory("duhamel_G needs a forcing history");
  if (F.size() < 2 || !F.uniform(1e-9)) throw NonUniformTimeGrid("duhamel_G needs a uniform time grid");
  if (F.times().front() != 0.0 || std::abs(F.horizon() - T) > 1e-9 * T)
    throw NonUniformTimeGrid("forcing history must cover [0, T]");
  if (F[0].components() != 9) throw MalformedField("duhamel_G needs a tensor history");
  const Grid& g = F.grid();
  double h = T / double(F.size() - 1);
  std::size_t ns = g.spectral_points();
  const auto& t = tables(g);
  std::vector<double> e(ns), a(ns), b(ns);
  for_each_mode(g, [&](std::size_t idx, int i, int j, int k) {
    double z = -(t.k2[i] + t.k2[j] + t.k2[k]) * h;
    e[idx] = std::exp(z);
    double p1 = etd_phi1(z), p2 = etd_phi2(z);
    a[idx] = h * (p1 - p2);
    b[idx] = h * p2;
  });
  FieldHistory out;
  out.reserve(F.size());
  VectorField w = VectorField::zeros(g, 3, Representation::spectral, 0.0);
  VectorField g_prev = leray_project(-1.0 * div(to_spectral(F[0])));
  out.push_back(to_physical(w));
  for (std::size_t n = 1; n < F.size(); ++n) {
    VectorField g_cur = leray_project(-1.0 * div(to_spectral(F[n])));
    for (int c = 0; c < 3; ++c)
      for (std::size_t idx = 0; idx < ns; ++idx)
        w.spec(c)[idx] = e[idx] * w.spec(c)[idx] + a[idx] * g_prev.spec(c)[idx] + b[idx] * g_cur.spec(c)[idx];
    w.set_time(F.times()[n]);
    out.push_back(to_physical(w));
    g_prev = std::move(g_cur);
  }
  return out;
}

double kappa(const VectorField& v0, double T, int steps) {
  if (!(T > 0)) throw InvalidArgument("kappa needs T > 0");
  auto times = uniform_times(T, steps);
  VectorField s = to_spectral(v0);
  s.set_time(0.0);
  HeatPropagator hp(v0.grid());
  std::vector<double> l5;
  for (double t : times) l5.push_back(lp_norm(hp.propagate(s, t), 5.0));
  return time_norm(times, l5, 5.0);
}

double select_horizon(const VectorField& v0, double threshold, double t_max, double t_min, int steps) {
  if (!(threshold > 0)) throw InvalidArgument("horizon threshold must be positive");
  for (double T = t_max; T >= t_min; T *= 0.5)
    if (kappa(v0, T, steps) <= threshold) return T;
  throw HorizonNotFound("kappa(T) exceeds " + format_double(threshold) + " for every dyadic T >= " +
                        format_double(t_min));
}

MildSolution::MildSolution(const VectorField& v0, double T_, int steps)
    : T(T_), v0_spectral(to_spectral(v0)), correction(std::make_shared<CompactHistory>(v0.grid(), 3, steps + 1)) {}

VectorField MildSolution::slice(std::size_t n) const {
  VectorField v = correction->scatter(n, times[n]);
  VectorField V = heat_propagate(v0_spectral, times[n]);
  v += V;
  v.set_time(times[n]);
  return to_physical(v);
}

MildSolution picard_solve(const VectorField& v0, double T, double tol, int k_max, const PicardOptions& opts) {
  if (!(T > 0)) throw InvalidArgument("Picard horizon must be positive");
  if (opts.steps < 4) throw InvalidArgument("Picard needs at least four time steps");
  if (k_max < 1) throw InvalidArgument("k_max must be >= 1");
  PicardEngine eng(v0, T, opts.steps);
  MildSolution sol(v0, T, opts.steps);
  sol.times = eng.times();
  sol.v0_spectral = eng.v0();
  sol.correction = eng.correction();

  // v^(1) = V, so the first difference is kappa itself
  auto first = eng.sweep(false);
  sol.kappa = first.norm_v5;
  double diff = sol.kappa;
  sol.trace.push_back({1, diff, sol.kappa, sol.kappa});
  sol.iterations = 1;
  sol.converged = diff <= tol;
  while (!sol.converged && sol.iterations < k_max) {
    auto r = eng.sweep(true);
    if (r.norm_v5 > opts.blowup_factor * sol.kappa)
      throw IterationBlowUp("Picard iterate norm " + format_double(r.norm_v5) + " exceeds " +
                            format_double(opts.blowup_factor) + " kappa; horizon too large");
    sol.contraction_ratios.push_back(diff > 0 ? r.diff5 / diff : 0.0);
    diff = r.diff5;
    ++sol.iterations;
    sol.trace.push_back({sol.iterations, diff, sol.kappa, 0.0});
    sol.trace[sol.trace.size() - 2].norm_5 = r.norm_v5;
    sol.converged = diff <= tol;
    if (!std::isfinite(diff)) throw IterationBlowUp("Picard difference is not finite");
  }
  auto res = eng.sweep(false);
  sol.trace.back().norm_5 = res.norm_v5;
  sol.final_residual = res.diff5;

  if (opts.record_stride > 0) {
    for (std::size_t n = 0; n < sol.times.size(); ++n) {
      if (n % opts.record_stride != 0 && n + 1 != sol.times.size()) continue;
      VectorField v = sol.slice(n);
      if (opts.record_pressure) sol.pressure.push_back(pressure_of(v));
      sol.velocity.push_back(std::move(v));
    }
  }
  return sol;
}

VectorField pressure_of(const VectorField& v) {
  VectorField s = to_spectral(v);
  VectorField F = to_spectral(tensor_product(s, s));
  VectorField dd = div(div(F));
  VectorField r = to_physical(solve_poisson(dd));
  r.set_component_names({"p"});
  return r;
}

FieldHistory recover_pressure(const FieldHistory& v) {
  FieldHistory out;
  out.reserve(v.size());
  for (const auto& s : v) out.push_back(pressure_of(s));
  return out;
}

Calibration calibrate_duhamel_constant(int resolution, double box_length, int steps) {
  if (box_length <= 0) box_length = 2 * std::numbers::pi;
  Grid g(box_length, resolution);
  const double horizons[4] = {0.005, 0.02, 0.08, 0.3};
  Calibration cal{0.0, {}};
  for (int i = 0; i < 8; ++i) {
    VectorField v0 = preset_initial_data("bump_family(" + std::to_string(i) + ")", g, 1.0);
    double T = horizons[i % 4];
    FieldHistory V = heat_history(v0, uniform_times(T, steps));
    FieldHistory F;
    for (const auto& s : V) F.push_back(tensor_product(s, s));
    FieldHistory w = duhamel_G(F, T);
    double num = mixed_norm(w, {3.0, inf}) + mixed_norm(w, {5.0, 5.0});
    double den = mixed_norm(F, {2.5, 2.5});
    cal.ratios.push_back(num / den);
    cal.c_est = std::max(cal.c_est, num / den);
  }
  return cal;
}

double momentum_residual(const FieldHistory& v, const FieldHistory& q, std::size_t n) {
  return lp_norm(residual_field(v, q, n), 2.0);
}

double momentum_residual_max(const FieldHistory& v, const FieldHistory& q, std::size_t n) {
  return lp_norm(residual_field(v, q, n), inf);
}

}  // namespace critl3
