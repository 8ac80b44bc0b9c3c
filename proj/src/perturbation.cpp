#include "critl3/perturbation.hpp"

#include <cmath>

#include "critl3/error.hpp"
#include "critl3/etd.hpp"
#include "critl3/fft.hpp"
#include "critl3/mild_solver.hpp"
#include "critl3/stokes_heat.hpp"
#include "perturbation_internal.hpp"

namespace critl3 {
namespace {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

}  // namespace

NonlinearEvaluator::NonlinearEvaluator(const Grid& g, const VectorField& v0, double rho, MollifierKind kind)
    : grid_(g), band_(band_index(g)), rho_(rho) {
  std::size_t B = band_.size(), ns = g.spectral_points(), np = g.points();
  Mollifier mol{rho > 0 ? rho : 1.0, kind};
  msym_.resize(B);
  for (std::size_t m = 0; m < B; ++m) msym_[m] = rho > 0 ? mol.symbol(band_.k2[m]) : 1.0;
  v0b_.resize(3 * B);
  for (int c = 0; c < 3; ++c)
    for (std::size_t m = 0; m < B; ++m) v0b_[c * B + m] = v0.spec(c)[band_.flat[m]];
  for (int c = 0; c < 3; ++c) hat_[c].assign(ns, 0.0);
  for (int c = 0; c < 9; ++c) mhat_[c].assign(ns, 0.0);
  scratch_.assign(ns, 0.0);
  for (int c = 0; c < 3; ++c) {
    u_[c].resize(np);
    V1_[c].resize(np);
    ur_[c].resize(np);
    a_[c].resize(np);
    b_[c].resize(np);
  }
  prod_.resize(np);
}

double NonlinearEvaluator::parseval_scale() const {
  double np = double(grid_.points());
  return grid_.volume() / (np * np);
}

NonlinearEvaluator::Result NonlinearEvaluator::evaluate(const cd* u, double t, cd* g, bool ledger,
                                                        EvalFields* fields) {
  std::size_t B = band_.size();
  int n = grid_.resolution();
  Result res;
  // physical u, V1 = mask (v1)_rho and, when mollified, (u)_rho
  auto to_phys = [&](auto coef, Eigen::ArrayXd* out) {
    for (int c = 0; c < 3; ++c) {
      for (std::size_t m = 0; m < B; ++m) hat_[c][band_.flat[m]] = coef(c, m);
      fft_backward(n, hat_[c].data(), out[c].data());
    }
  };
  to_phys([&](int c, std::size_t m) { return u[c * B + m]; }, u_);
  to_phys([&](int c, std::size_t m) { return std::exp(-band_.k2[m] * t) * msym_[m] * v0b_[c * B + m]; }, V1_);
  bool mollified = rho_ > 0;
  if (mollified) to_phys([&](int c, std::size_t m) { return msym_[m] * u[c * B + m]; }, ur_);
  for (int c = 0; c < 3; ++c) {
    b_[c] = u_[c] + V1_[c];
    a_[c] = mollified ? ur_[c] + V1_[c] : b_[c];
  }
  Eigen::ArrayXd sp = a_[0].square() + a_[1].square() + a_[2].square();
  res.vmax = std::sqrt(sp.maxCoeff());
  if (mollified) {
    sp = b_[0].square() + b_[1].square() + b_[2].square();
    res.vmax = std::max(res.vmax, std::sqrt(sp.maxCoeff()));
  }
  // M_ij = u_i a_j + V1_i b_j, which is b_i b_j when a = b
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      int slot = i * 3 + j;
      if (!mollified && j < i) continue;
      if (mollified) prod_ = u_[i] * a_[j] + V1_[i] * b_[j];
      else prod_ = b_[i] * b_[j];
      fft_forward(n, prod_.data(), mhat_[slot].data());
    }
  auto M = [&](int i, int j, std::size_t idx) {
    if (!mollified && j < i) return mhat_[j * 3 + i][idx];
    return mhat_[i * 3 + j][idx];
  };
  for (std::size_t m = 0; m < B; ++m) {
    std::size_t idx = band_.flat[m];
    double k[3] = {band_.kx[m], band_.ky[m], band_.kz[m]};
    cd d[3];
    for (int i = 0; i < 3; ++i) {
      cd acc = 0.0;
      for (int j = 0; j < 3; ++j) acc += k[j] * M(i, j, idx);
      d[i] = -I * acc;
    }
    double kk = band_.k2[m];
    cd dot = k[0] * d[0] + k[1] * d[1] + k[2] * d[2];
    for (int i = 0; i < 3; ++i) g[i * B + m] = kk > 0 ? d[i] - k[i] * dot / kk : d[i];
  }
  if (!ledger && !fields) return res;

  double ps = parseval_scale();
  double kin = 0.0, dis = 0.0;
  for (std::size_t m = 0; m < B; ++m) {
    double w = band_weight(m);
    double e = std::norm(u[m]) + std::norm(u[B + m]) + std::norm(u[2 * B + m]);
    kin += w * e;
    dis += w * band_.k2[m] * e;
  }
  res.kinetic = 0.5 * kin * ps;
  res.dissipation_rate = dis * ps;
  // work = int V1_i b_j d_j u_i, a triple product of band fields, exact on the grid
  double work = 0.0;
  Eigen::ArrayXd gu;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double kj[3];
      for (std::size_t m = 0; m < B; ++m) {
        kj[0] = band_.kx[m];
        kj[1] = band_.ky[m];
        kj[2] = band_.kz[m];
        scratch_[band_.flat[m]] = I * kj[j] * u[i * B + m];
      }
      gu.resize(grid_.points());
      fft_backward(n, scratch_.data(), gu.data());
      work += (V1_[i] * b_[j] * gu).sum();
      if (fields) fields->gu[i * 3 + j] = gu;
    }
  res.work_rate = work * grid_.cell_volume();
  if (fields) {
    for (int c = 0; c < 3; ++c) {
      fields->u[c] = u_[c];
      fields->V1[c] = V1_[c];
      fields->a[c] = a_[c];
      fields->b[c] = b_[c];
    }
    // -lap p = div div M on the band
    for (std::size_t m = 0; m < B; ++m) {
      std::size_t idx = band_.flat[m];
      double k[3] = {band_.kx[m], band_.ky[m], band_.kz[m]};
      cd acc = 0.0;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) acc += k[i] * k[j] * M(i, j, idx);
      scratch_[idx] = band_.k2[m] > 0 ? -acc / band_.k2[m] : cd(0.0);
    }
    fields->p.resize(grid_.points());
    fft_backward(n, scratch_.data(), fields->p.data());
  }
  return res;
}

std::unique_ptr<NonlinearEvaluator> make_evaluator(const PerturbationRun& run) {
  return std::make_unique<NonlinearEvaluator>(run.grid_, run.v0_, run.opts_.rho, run.opts_.mollifier);
}

PerturbationRun::PerturbationRun(const VectorField& v0, const PerturbationOptions& opts)
    : grid_(v0.grid()), opts_(opts), v0_(to_spectral(v0)) {
  if (!(opts.dt > 0)) throw InvalidArgument("time step must be positive");
  if (opts.rho < 0) throw InvalidArgument("mollifier radius must be >= 0");
  if (opts.rho > 0 && !(opts.rho < grid_.box_length() / 4))
    throw RadiusTooLarge("mollifier radius must be below box/4");
  if (v0.components() != 3) throw MalformedField("initial data must be a vector field");
  v0_.set_time(0.0);
  times_.push_back(0.0);
  modes_ = std::make_shared<CompactHistory>(grid_, 3, 0);
  if (opts.T > 0 && opts.dt > 0) modes_->reserve(std::size_t(std::ceil(opts.T / opts.dt)) + 2);
  std::size_t n0 = modes_->append();
  if (opts.initial_correction) {
    VectorField a = dealias(leray_project(*opts.initial_correction));
    modes_->gather(n0, a);
  }
  eval_ = make_evaluator(*this);
  std::size_t B = band_index(grid_).size();
  pending_g_.assign(3 * B, 0.0);
  auto r = eval_->evaluate(modes_->data(0, 0), 0.0, pending_g_.data(), true);
  pending_vmax_ = r.vmax;
  energy_ledger.push_back({0.0, r.kinetic, 0.0, 0.0, r.kinetic, r.dissipation_rate, r.work_rate});
  if (opts.record_stride > 0) record(0);
}

PerturbationRun::~PerturbationRun() = default;
PerturbationRun::PerturbationRun(PerturbationRun&&) noexcept = default;
PerturbationRun& PerturbationRun::operator=(PerturbationRun&&) noexcept = default;

VectorField PerturbationRun::v1_at(double t) const { return to_physical(heat_propagate(v0_, t)); }

VectorField PerturbationRun::v2_spectral(std::size_t n) const { return modes_->scatter(n, times_.at(n)); }

VectorField PerturbationRun::v2_slice(std::size_t n) const { return to_physical(v2_spectral(n)); }

void PerturbationRun::record(std::size_t n) {
  if (!v2.empty() && v2.times().back() >= times_[n]) return;
  VectorField a = v1_at(times_[n]);
  VectorField b = v2_slice(n);
  if (opts_.record_pressure) q2.push_back(recover_q2(a, b));
  v1.push_back(std::move(a));
  v2.push_back(std::move(b));
}

void step_v2(PerturbationRun& run, double dt) {
  if (!(dt > 0)) throw InvalidArgument("time step must be positive");
  double h = run.grid_.spacing();
  double courant = dt * run.pending_vmax_ / h;
  if (courant > run.opts_.cfl)
    throw StepRejected("CFL number " + format_double(courant) + " exceeds " + format_double(run.opts_.cfl),
                       0.9 * run.opts_.cfl * h / run.pending_vmax_);
  const BandIndex& band = band_index(run.grid_);
  std::size_t B = band.size();
  std::size_t n = run.steps();
  double t = run.times_.back();
  const cd* un = run.modes_->data(n, 0);
  std::vector<cd> half(3 * B), g_half(3 * B);
  for (std::size_t m = 0; m < B; ++m) {
    double z = -band.k2[m] * dt / 2;
    double e = std::exp(z), f = dt / 2 * etd_phi1(z);
    for (int c = 0; c < 3; ++c) half[c * B + m] = e * un[c * B + m] + f * run.pending_g_[c * B + m];
  }
  run.eval_->evaluate(half.data(), t + dt / 2, g_half.data(), false);
  std::size_t next = run.modes_->append();
  un = run.modes_->data(n, 0);
  cd* u1 = run.modes_->data(next, 0);
  for (std::size_t m = 0; m < B; ++m) {
    double z = -band.k2[m] * dt;
    double e = std::exp(z), f = dt * etd_phi1(z);
    for (int c = 0; c < 3; ++c) u1[c * B + m] = e * un[c * B + m] + f * g_half[c * B + m];
  }
  double t1 = t + dt;
  run.times_.push_back(t1);
  auto r = run.eval_->evaluate(u1, t1, run.pending_g_.data(), true);
  run.pending_vmax_ = r.vmax;
  const EnergyLedgerRow& prev = run.energy_ledger.back();
  EnergyLedgerRow row;
  row.t = t1;
  row.kinetic = r.kinetic;
  row.dissipation_rate = r.dissipation_rate;
  row.work_rate = r.work_rate;
  row.dissipation = prev.dissipation + 0.5 * dt * (prev.dissipation_rate + r.dissipation_rate);
  row.work = prev.work + 0.5 * dt * (prev.work_rate + r.work_rate);
  row.residual = row.kinetic + row.dissipation - row.work;
  run.energy_ledger.push_back(row);
  if (run.opts_.record_stride > 0 && next % run.opts_.record_stride == 0) run.record(next);
}

PerturbationRun perturb_solve(const VectorField& v0, const PerturbationOptions& opts) {
  if (!(opts.T > 0)) throw InvalidArgument("horizon must be positive");
  PerturbationRun run(v0, opts);
  auto steps = std::size_t(std::ceil(opts.T / opts.dt - 1e-9));
  double dt = opts.T / double(steps);
  for (std::size_t i = 0; i < steps; ++i) step_v2(run, i + 1 == steps ? opts.T - run.time() : dt);
  if (opts.record_stride > 0) run.record(run.steps());
  return run;
}

VectorField recover_q2(const VectorField& v1, const VectorField& v2) {
  VectorField q = pressure_of(v1 + v2);
  q.set_time(v2.time());
  return q;
}

}  // namespace critl3
