#pragma once

#include <map>
#include <mutex>
#include <vector>

#include "critl3/field.hpp"
#include "critl3/report.hpp"

namespace critl3 {

// Spectral heat semigroup e^{t lap} with symbols cached per t.
class HeatPropagator {
 public:
  explicit HeatPropagator(const Grid& grid) : grid_(grid) {}

  const Grid& grid() const { return grid_; }
  // result keeps the representation of v0, time stamp v0.time() + t
  VectorField propagate(const VectorField& v0, double t) const;
  const Eigen::ArrayXd& symbol(double t) const;

 private:
  Grid grid_;
  mutable std::mutex mu_;
  mutable std::map<double, Eigen::ArrayXd> cache_;
};

VectorField heat_propagate(const VectorField& v0, double t);

// physical slices e^{t lap} v0 at the given increasing times
FieldHistory heat_history(const VectorField& v0, const std::vector<double>& times);

// times T (i/n)^2, i = 0..n
std::vector<double> graded_times(double T, int n);
std::vector<double> uniform_times(double T, int n);

// (|v1|_{3,inf,Q_T} + |v1|_{5,Q_T}) / |v0|_3 on a graded time grid
EstimateReport verify_first_stokes_estimate(const VectorField& v0, double T, int n_slices);

// slope of log |grad v1(t)|_s against log t; reference -(1/r + 1/2) with
// 1/r = 3/2 (1/3 - 1/s); pass iff slope <= reference + slack
EstimateReport verify_gradient_decay(const VectorField& v0, double s, const std::vector<double>& times,
                                     double slack = 0.07);

double gradient_decay_reference(double s);

}  // namespace critl3
