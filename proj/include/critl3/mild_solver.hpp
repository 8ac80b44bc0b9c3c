#pragma once

#include <memory>
#include <vector>

#include "critl3/compact.hpp"
#include "critl3/field.hpp"
#include "critl3/report.hpp"

namespace critl3 {

// w(t) = int_0^t e^{(t-s) lap} P(-div F(s)) ds for a tensor history F on a
// uniform grid starting at 0. Each step integrates the linear interpolant of
// the forcing exactly (exponential trapezoid).
FieldHistory duhamel_G(const FieldHistory& F, double T);

// |V|_{5,Q_T} for V = e^{t lap} v0 on a uniform grid with the given steps
double kappa(const VectorField& v0, double T, int steps = 256);

// Largest T = t_max 2^{-j} >= t_min with kappa(T) <= threshold.
double select_horizon(const VectorField& v0, double threshold, double t_max = 1.0, double t_min = 1e-6,
                      int steps = 256);

struct PicardOptions {
  int steps = 256;
  // keep every record_stride-th slice in MildSolution::velocity; 0 keeps none
  int record_stride = 1;
  bool record_pressure = false;
  double blowup_factor = 10.0;
};

struct PicardState {
  int iterate_index = 0;
  double diff_norm_5 = 0.0;
  double kappa = 0.0;
  double norm_5 = 0.0;  // |v^(k)|_{5,Q_T}
};

struct MildSolution {
  MildSolution(const VectorField& v0, double T, int steps);

  FieldHistory velocity;
  FieldHistory pressure;
  double T;
  bool converged = false;
  int iterations = 0;
  double final_residual = 0.0;
  double kappa = 0.0;
  std::vector<PicardState> trace;
  std::vector<double> contraction_ratios;

  // every time level of the iteration grid and v - V in band-limited form
  std::vector<double> times;
  VectorField v0_spectral;
  std::shared_ptr<CompactHistory> correction;

  std::size_t slices() const { return times.size(); }
  // physical velocity at times[n]
  VectorField slice(std::size_t n) const;
};

// v^(k+1) = V + G(v^(k) (x) v^(k)) from v^(0) = 0 until the (5,5) step
// difference is <= tol. One more sweep measures the fixed-point residual.
MildSolution picard_solve(const VectorField& v0, double T, double tol, int k_max,
                          const PicardOptions& opts = {});

// -lap r = div div (v (x) v) per slice, zero mean
VectorField pressure_of(const VectorField& v);
FieldHistory recover_pressure(const FieldHistory& v);

// max ratio (|w|_{3,inf} + |w|_{5}) / |F|_{5/2} over a fixed family of
// tensor histories F = V (x) V built from preset heat flows
struct Calibration {
  double c_est;
  std::vector<double> ratios;
};
Calibration calibrate_duhamel_constant(int resolution = 32, double box_length = 0.0, int steps = 128);

// L2 norm of d_t v - lap v + div(v (x) v) + grad q at slice n, with d_t v from
// fourth-order differences in time when the history is uniform
double momentum_residual(const FieldHistory& v, const FieldHistory& q, std::size_t n);
// same residual in the max norm
double momentum_residual_max(const FieldHistory& v, const FieldHistory& q, std::size_t n);

}  // namespace critl3
