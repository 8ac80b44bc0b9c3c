#pragma once

#include <complex>
#include <vector>

#include "critl3/compact.hpp"
#include "critl3/perturbation.hpp"

namespace critl3 {

// Physical fields produced alongside the forcing, for energy bookkeeping.
struct EvalFields {
  Eigen::ArrayXd u[3], V1[3], a[3], b[3], gu[9], p;
};

// Evaluates g = P(-div M) on the 2/3 band for a band-limited state u.
class NonlinearEvaluator {
 public:
  NonlinearEvaluator(const Grid& g, const VectorField& v0_spectral, double rho, MollifierKind kind);

  struct Result {
    double vmax = 0.0;
    double kinetic = 0.0;
    double dissipation_rate = 0.0;
    double work_rate = 0.0;
  };

  // u and g hold 3 consecutive band blocks. With ledger set, the energy rates
  // are filled; with fields set, the physical fields are kept.
  Result evaluate(const std::complex<double>* u, double t, std::complex<double>* g, bool ledger,
                  EvalFields* fields = nullptr);

  const BandIndex& band() const { return band_; }
  double band_weight(std::size_t m) const { return band_.kz[m] == 0.0 ? 1.0 : 2.0; }
  // scale turning band coefficient sums into integrals
  double parseval_scale() const;

 private:
  Grid grid_;
  const BandIndex& band_;
  double rho_;
  std::vector<double> msym_;
  std::vector<std::complex<double>> v0b_;
  std::vector<std::complex<double>> hat_[3], mhat_[9], scratch_;
  Eigen::ArrayXd u_[3], V1_[3], ur_[3], a_[3], b_[3], prod_;
};

}  // namespace critl3
