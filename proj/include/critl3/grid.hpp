#pragma once

#include <cstddef>
#include <vector>

namespace critl3 {

// Periodic box [0, L)^3 sampled with N points per axis.
class Grid {
 public:
  Grid(double box_length, int resolution);

  double box_length() const { return box_length_; }
  int resolution() const { return n_; }
  double spacing() const { return box_length_ / n_; }
  double cell_volume() const;
  double volume() const { return box_length_ * box_length_ * box_length_; }

  std::size_t points() const { return std::size_t(n_) * n_ * n_; }
  int spectral_nz() const { return n_ / 2 + 1; }
  std::size_t spectral_points() const { return std::size_t(n_) * n_ * spectral_nz(); }

  // signed integer mode carried by FFT index i
  int mode(int i) const { return i <= n_ / 2 ? i : i - n_; }
  double k0() const;
  // largest retained |mode| under the 2/3 rule
  int dealias_cutoff() const { return (n_ - 1) / 3; }

  std::size_t index(int i, int j, int k) const { return (std::size_t(i) * n_ + j) * n_ + k; }
  std::size_t spectral_index(int i, int j, int k) const {
    return (std::size_t(i) * n_ + j) * spectral_nz() + k;
  }

  bool operator==(const Grid& o) const { return box_length_ == o.box_length_ && n_ == o.n_; }
  bool operator!=(const Grid& o) const { return !(*this == o); }

 private:
  double box_length_;
  int n_;
};

// Per-axis wavenumber tables. Derivatives use kd (Nyquist zeroed), the
// Laplacian uses the true k^2.
struct SpectralTables {
  explicit SpectralTables(const Grid& g);
  std::vector<double> kd;
  std::vector<double> k2;
  std::vector<char> keep;  // 2/3-rule mask
};

const SpectralTables& tables(const Grid& g);

}  // namespace critl3
