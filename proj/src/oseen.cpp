#include "critl3/oseen.hpp"

#include <algorithm>
#include <map>

#include "critl3/error.hpp"

namespace critl3 {

double oseen_phi(const Eigen::Vector3d& x, double t) {
  if (!(t > 0)) throw InvalidArgument("Oseen kernel needs t > 0");
  return double(oseen_phi<long double>(x.cast<long double>(), (long double)t));
}

double OseenKernelSample::frobenius() const {
  Eigen::Tensor<double, 0> s = K_tensor.square().sum();
  return std::sqrt(s());
}

double OseenKernelSample::max_component() const {
  Eigen::Tensor<double, 0> m = K_tensor.abs().maximum();
  return m();
}

OseenKernelSample oseen_kernel(const Eigen::Vector3d& x, double t) {
  if (!(t > 0)) throw InvalidArgument("Oseen kernel needs t > 0");
  OseenKernelSample out;
  out.x = x;
  out.t = t;
  out.phi_value = oseen_phi(x, t);
  Tensor3<long double> k = oseen_kernel_tensor<long double>(x.cast<long double>(), (long double)t);
  out.K_tensor = k.cast<double>();
  double d = x.squaredNorm() + t;
  out.K0_bound = 1.0 / (d * d);
  return out;
}

std::vector<KernelPoint> kernel_samples(int count, std::uint64_t seed, double r_min, double r_max,
                                        double t_min, double t_max) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<KernelPoint> out;
  for (int i = 0; i < count; ++i) {
    double r = r_min * std::pow(r_max / r_min, uni(rng));
    double t = t_min * std::pow(t_max / t_min, uni(rng));
    Eigen::Vector3d d(gauss(rng), gauss(rng), gauss(rng));
    out.push_back({r * d.normalized(), t});
  }
  return out;
}

EstimateReport verify_kernel_bound(const std::vector<KernelPoint>& samples) {
  if (samples.empty()) throw InvalidArgument("kernel bound needs samples");
  std::map<int, double> shell_sup;
  double sup = 0.0, sup_max = 0.0;
  for (const auto& p : samples) {
    OseenKernelSample k = oseen_kernel(p.x, p.t);
    double w = 1.0 / k.K0_bound;
    // rotation invariant, so shell sups do not depend on sampled directions
    double v = k.frobenius() * w;
    sup = std::max(sup, v);
    sup_max = std::max(sup_max, k.max_component() * w);
    int shell = int(std::floor(std::log2(std::sqrt(p.x.squaredNorm() + p.t))));
    shell_sup[shell] = std::max(shell_sup[shell], v);
  }
  std::size_t half = shell_sup.size() / 2;
  double inner = 0.0, outer = 0.0;
  std::size_t i = 0;
  for (const auto& [shell, v] : shell_sup) {
    if (i++ < half) inner = std::max(inner, v);
    else outer = std::max(outer, v);
  }
  if (half == 0) inner = outer;
  EstimateReport r;
  r.name = "kernel_bound";
  r.lhs = sup;
  r.rhs = 1.1 * inner;
  r.ratio = inner > 0 ? outer / inner : 0.0;
  r.pass = outer <= 1.1 * inner;
  r.notes = "|K| is the Frobenius norm of the 3-tensor; max-component sup = " + format_double(sup_max) +
            "; inner-shell sup = " + format_double(inner) + ", outer-shell sup = " + format_double(outer) +
            ", shells = " + std::to_string(shell_sup.size());
  return r;
}

}  // namespace critl3
