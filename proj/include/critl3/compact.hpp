#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "critl3/field.hpp"

namespace critl3 {

// Flat spectral indices of the modes kept by the 2/3 rule, with the wave
// vector used for derivatives and the true |k|^2.
struct BandIndex {
  explicit BandIndex(const Grid& g);
  std::vector<std::uint32_t> flat;
  std::vector<double> kx, ky, kz, k2;
  std::size_t size() const { return flat.size(); }
};

const BandIndex& band_index(const Grid& g);

// Time slices of band-limited fields stored as their retained modes only.
class CompactHistory {
 public:
  CompactHistory(const Grid& g, int components, std::size_t slices);

  const Grid& grid() const { return grid_; }
  int components() const { return components_; }
  std::size_t slices() const { return slices_; }

  std::complex<double>* data(std::size_t n, int c) { return buf_.data() + (n * components_ + c) * band_; }
  const std::complex<double>* data(std::size_t n, int c) const {
    return buf_.data() + (n * components_ + c) * band_;
  }

  void gather(std::size_t n, const VectorField& spectral);
  // grows by one zero slice and returns its index
  std::size_t append();
  void reserve(std::size_t slices) { buf_.reserve(slices * components_ * band_); }
  VectorField scatter(std::size_t n, double time) const;

 private:
  Grid grid_;
  int components_;
  std::size_t slices_;
  std::size_t band_;
  std::vector<std::complex<double>> buf_;
};

}  // namespace critl3
