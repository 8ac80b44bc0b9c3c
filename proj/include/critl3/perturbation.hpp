#pragma once

#include <Eigen/Core>
#include <memory>
#include <optional>
#include <vector>

#include "critl3/compact.hpp"
#include "critl3/field.hpp"
#include "critl3/operators.hpp"
#include "critl3/report.hpp"

namespace critl3 {

struct PerturbationOptions {
  double T = 0.1;
  double dt = 1e-3;
  // radius of the mollifier applied to the advecting velocity; 0 disables it
  double rho = 0.0;
  MollifierKind mollifier = MollifierKind::gaussian;
  // keep every record_stride-th step in the v1/v2/q2 histories; 0 keeps none
  int record_stride = 1;
  bool record_pressure = false;
  // largest accepted dt max|v| / spacing
  double cfl = 1.0;
  // nonzero initial correction, only meant for linearized-system tests
  std::optional<VectorField> initial_correction;
};

struct EnergyLedgerRow {
  double t;
  double kinetic;      // 1/2 |v2|_2^2
  double dissipation;  // int_0^t |grad v2|_2^2
  double work;         // int_0^t int v1 (x) v : grad v2
  double residual;     // kinetic + dissipation - work
  double dissipation_rate;
  double work_rate;
};

class NonlinearEvaluator;

// Energy correction v2 of v = v1 + v2 with v1 = e^{t lap} v0 and
// d_t v2 - lap v2 = -P div M, M = v2 (x) a + V1 (x) b, V1 = (v1)_rho,
// a = (v2)_rho + V1, b = v2 + V1. Without mollification M = v (x) v.
class PerturbationRun {
 public:
  PerturbationRun(const VectorField& v0, const PerturbationOptions& opts);
  ~PerturbationRun();
  PerturbationRun(PerturbationRun&&) noexcept;
  PerturbationRun& operator=(PerturbationRun&&) noexcept;

  const Grid& grid() const { return grid_; }
  double rho() const { return opts_.rho; }
  double dt() const { return opts_.dt; }
  const PerturbationOptions& options() const { return opts_; }
  double time() const { return times_.back(); }
  std::size_t steps() const { return times_.size() - 1; }
  const std::vector<double>& times() const { return times_; }
  const VectorField& v0() const { return v0_; }

  FieldHistory v1;
  FieldHistory v2;
  FieldHistory q2;
  std::vector<EnergyLedgerRow> energy_ledger;

  // physical slices at step n, rebuilt from stored modes
  VectorField v1_at(double t) const;
  VectorField v2_slice(std::size_t n) const;
  VectorField v2_spectral(std::size_t n) const;
  const CompactHistory& v2_modes() const { return *modes_; }

  void record(std::size_t n);

 private:
  friend void step_v2(PerturbationRun& run, double dt);
  friend class NonlinearEvaluator;
  friend std::unique_ptr<NonlinearEvaluator> make_evaluator(const PerturbationRun& run);

  Grid grid_;
  PerturbationOptions opts_;
  VectorField v0_;
  std::vector<double> times_;
  std::shared_ptr<CompactHistory> modes_;
  std::unique_ptr<NonlinearEvaluator> eval_;
  std::vector<std::complex<double>> pending_g_;
  double pending_vmax_ = 0.0;
};

// advances by dt with the exponential midpoint rule; throws StepRejected
// when dt max|v| / spacing exceeds the CFL bound
void step_v2(PerturbationRun& run, double dt);

PerturbationRun perturb_solve(const VectorField& v0, const PerturbationOptions& opts);

// -lap q2 = div(v . grad v), v = v1 + v2, zero mean
VectorField recover_q2(const VectorField& v1, const VectorField& v2);

// 1e-6 at N = 64, relaxed tenfold per halving
double energy_tolerance(int resolution);

EstimateReport global_energy_audit(const PerturbationRun& run, double t);

// phi(x, t) = bump(|x - center| / radius) * window(t) with bump
// exp(1 - 1/(1 - q^2)) and quintic smoothstep ramps; spatially_constant gives
// phi = window(t) everywhere
struct TestFunction {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  double radius = 1.0;
  double ramp_up_start = 0.0;
  double ramp_up_end = 0.0;
  double ramp_down_start = 1e300;
  double ramp_down_end = 1e300;
  bool spatially_constant = false;

  double window(double t) const;
  double window_dt(double t) const;
};

struct LocalAuditTerms {
  double lhs;
  double rhs;
  double residual;  // lhs - rhs
  double kinetic_scale;
};

std::vector<LocalAuditTerms> local_energy_terms(const PerturbationRun& run, const std::vector<TestFunction>& phis,
                                                double t);
EstimateReport local_energy_audit(const PerturbationRun& run, const TestFunction& phi, double t);
// one pass over the run for several test functions
std::vector<EstimateReport> local_energy_audits(const PerturbationRun& run, const std::vector<TestFunction>& phis,
                                               double t);

std::vector<TestFunction> random_test_functions(const Grid& g, int count, std::uint64_t seed, double T);

struct EnergyBoundResult {
  EstimateReport report;
  std::vector<std::vector<double>> energy;  // per member, per T
  std::vector<double> exponents;
};

// |v2|^2_{2,Q_T} = |v2|^2_{2,inf,Q_T} + |grad v2|^2_{2,Q_T} against T
EnergyBoundResult energy_bound_sweep(const std::vector<VectorField>& family, const std::vector<double>& T_list,
                                     double dt);

struct ForceSplit {
  FieldHistory f1, f2, f3, f4;
  std::vector<EstimateReport> mixed_norm_reports;
};

// f1 = -(u)_rho . grad u, f2 = -u . grad (v1)_rho, f3 = -(v1)_rho . grad u,
// f4 = -(v1)_rho . grad (v1)_rho on the recorded slices; exponents fitted from
// prefix horizons T_list (all must be recorded slice times)
ForceSplit force_split(const PerturbationRun& run, const std::vector<double>& T_list = {});
// -div M of the run at step n in physical space
VectorField total_forcing(const PerturbationRun& run, std::size_t n);

FieldHistory reconstruct_total(const PerturbationRun& run);

// integrated weak form of the v2 equation against w(x,t) = psi(t) W(x), W a
// random band-limited solenoidal field and psi vanishing at the horizon;
// returns |residual| / sum |terms| per test field
std::vector<double> weak_form_residuals(const PerturbationRun& run, int count, std::uint64_t seed);

}  // namespace critl3
