#pragma once

#include <functional>

#include "critl3/field.hpp"

namespace critl3 {

// Spectral derivatives. Results keep the representation of the input.
// grad maps scalar -> vector and vector -> tensor with (grad u)_ij = d_j u_i.
VectorField grad(const VectorField& u);
// div maps vector -> scalar and tensor -> vector with (div A)_i = d_j A_ij.
VectorField div(const VectorField& u);
VectorField laplacian(const VectorField& u);
VectorField curl(const VectorField& u);

VectorField leray_project(const VectorField& u);
// 2/3-rule truncation
VectorField dealias(const VectorField& u);

// Multiplies every mode by symbol(|k|^2).
VectorField apply_symbol(const VectorField& u, const std::function<double(double)>& symbol);

// Solves -lap r = f with zero mean.
VectorField solve_poisson(const VectorField& f);

// (a (x) b)_ij = a_i b_j, physical output. With dealiasing the inputs and the
// product are truncated to the 2/3 band.
VectorField tensor_product(const VectorField& a, const VectorField& b, bool dealiased = true);

// w . grad u, dealiased, physical output.
VectorField advect(const VectorField& w, const VectorField& u);

enum class MollifierKind { gaussian, spectral_cutoff };

struct Mollifier {
  double radius;
  MollifierKind kind = MollifierKind::gaussian;
  double symbol(double k2) const;
};

VectorField mollify(const VectorField& u, const Mollifier& m);
// c(rho) in sup|(u)_rho| <= c(rho) |u|_2
double mollifier_sup_constant(const Grid& g, const Mollifier& m);

double inner_product(const VectorField& a, const VectorField& b);
// max|div u| / max|grad u|, zero for constant fields
double divergence_defect(const VectorField& u);

}  // namespace critl3
