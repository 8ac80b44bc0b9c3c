#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "critl3/grid.hpp"

namespace critl3 {

enum class Representation { physical, spectral };

std::string to_string(Representation r);
Representation representation_from_string(const std::string& s);

// One time slice of a scalar (1), vector (3) or tensor (9, row-major) field.
// Spectral data are unnormalized r2c coefficients on N x N x (N/2+1).
class VectorField {
 public:
  VectorField(const Grid& grid, int components, Representation rep, double time = 0.0);

  static VectorField zeros(const Grid& grid, int components = 3,
                           Representation rep = Representation::physical, double time = 0.0);

  const Grid& grid() const { return grid_; }
  int components() const { return int(names_.size()); }
  Representation representation() const { return rep_; }
  bool is_physical() const { return rep_ == Representation::physical; }
  bool is_spectral() const { return rep_ == Representation::spectral; }

  double time() const { return time_; }
  void set_time(double t);

  const std::vector<std::string>& component_names() const { return names_; }
  void set_component_names(std::vector<std::string> names);

  Eigen::ArrayXd& real(int c) { return real_[c]; }
  const Eigen::ArrayXd& real(int c) const { return real_[c]; }
  Eigen::ArrayXcd& spec(int c) { return spec_[c]; }
  const Eigen::ArrayXcd& spec(int c) const { return spec_[c]; }

  // throws MalformedField when array sizes disagree with the grid
  void validate() const;

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(double s);

 private:
  Grid grid_;
  Representation rep_;
  double time_;
  std::vector<std::string> names_;
  std::vector<Eigen::ArrayXd> real_;
  std::vector<Eigen::ArrayXcd> spec_;
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double s, VectorField a);
VectorField operator*(VectorField a, double s);

VectorField transform(const VectorField& f, Representation target);
inline VectorField to_spectral(const VectorField& f) { return transform(f, Representation::spectral); }
inline VectorField to_physical(const VectorField& f) { return transform(f, Representation::physical); }

// Time-ordered slices on one grid.
class FieldHistory {
 public:
  FieldHistory() = default;

  void push_back(VectorField slice);
  void reserve(std::size_t n) { slices_.reserve(n); times_.reserve(n); }

  std::size_t size() const { return slices_.size(); }
  bool empty() const { return slices_.empty(); }
  const VectorField& operator[](std::size_t i) const { return slices_[i]; }
  VectorField& operator[](std::size_t i) { return slices_[i]; }
  const VectorField& back() const { return slices_.back(); }
  const std::vector<double>& times() const { return times_; }
  const Grid& grid() const;
  double horizon() const;
  bool uniform(double rel_tol = 1e-9) const;

  auto begin() const { return slices_.begin(); }
  auto end() const { return slices_.end(); }

 private:
  std::vector<VectorField> slices_;
  std::vector<double> times_;
};

}  // namespace critl3
