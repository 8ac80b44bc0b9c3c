#pragma once

#include <functional>
#include <vector>

#include "critl3/field.hpp"
#include "critl3/report.hpp"

namespace critl3 {

// v_l(x, t) = l v(l x, l^2 t), q_l = l^2 q(l x, l^2 t) sampled on the box
// shrunk by l with the same resolution, so every sample is exact.
// lambda must be a power of two.
FieldHistory rescale_history(const FieldHistory& h, double lambda, double amplitude_power);

// Critical norms |v(0)|_3 and |v|_{5,Q} before and after rescaling, plus the
// momentum residual bound res_l <= l^3 res + tol in the max norm.
EstimateReport scaling_check(const FieldHistory& v, const FieldHistory& q, double lambda);

// norms of v1 (x) v1 in (3/2,inf), (5/2,5/2), (2,4), (2,2); pass iff the
// (2,4) norm obeys the interpolation bound with theta = 3/8
struct EmbeddingNorms {
  double n32_inf, n52, n2_4, n2_2, bound;
};
EmbeddingNorms embedding_norms(const FieldHistory& v1);
EstimateReport embedding_chain_check(const FieldHistory& v1);
constexpr double embedding_theta = 3.0 / 8.0;

struct UniquenessOptions {
  double threshold = 0.05;  // kappa bound used by select_horizon
  double tol = 1e-8;
  int k_max = 30;
  int base_steps = 256;     // steps at base_resolution, scaled with N
  int base_resolution = 48;
  std::vector<int> resolutions{32, 48, 64};
  double agreement = 1e-3;
  double min_order = 1.0;
};

struct UniquenessResult {
  EstimateReport report;
  ConvergenceTrace trace;  // parameter: resolution; metrics diff_5_5, diff_3_inf
  double T0 = 0.0;
};

// mild and perturbation solutions on [0, T] with the same time grid;
// returns the (5,5) and (3,inf) norms of their difference
std::pair<double, double> solver_disagreement(const VectorField& v0, double T, int steps, double tol, int k_max);

// data(grid) builds v0 at each resolution; T0 is selected once at the base
// resolution and reused. Pass iff the base-resolution disagreement is within
// the agreement bound and the observed order between the two finest
// resolutions is at least min_order.
UniquenessResult uniqueness_experiment(const std::function<VectorField(const Grid&)>& data, double box_length,
                                       const UniquenessOptions& opts = {});
// single-resolution variant on v0's grid
EstimateReport uniqueness_experiment(const VectorField& v0, const UniquenessOptions& opts = {});

struct WeakConvergenceOptions {
  double T = 0.05;
  int steps = 16;
};

struct TraceResult {
  EstimateReport report;
  ConvergenceTrace trace;
};

// family(m) is v0^(m); metrics local_l3 (on the central half-edge sub-box
// over [0, T]), global_l2 (Q_T) and data_l3 = |v0^(m) - v0|_3. Pass iff the
// local distance strictly decreases in m while the data distance stays at
// least half its first value; a family whose data distance falls below that
// throws MisconfiguredFamily. A constant family yields zeros and no pass.
TraceResult weak_convergence_harness(const std::function<VectorField(int)>& family, const std::vector<int>& ms,
                                     const VectorField& v0_limit, const WeakConvergenceOptions& opts = {});

// |v(t) - v0|_3 along the mild solution for decreasing t_list; every t must
// be a multiple of max(t_list) / steps
TraceResult modulus_of_continuity(const VectorField& v0, const std::vector<double>& t_list, int steps = 256,
                                  double tol = 1e-8, int k_max = 30, double floor = 1e-4);

}  // namespace critl3
