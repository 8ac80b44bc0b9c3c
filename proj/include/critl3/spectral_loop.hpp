#pragma once

#include "critl3/grid.hpp"

namespace critl3 {

// Visits every stored r2c mode as f(flat_index, i, j, k).
template <class F>
void for_each_mode(const Grid& g, F&& f) {
  int n = g.resolution();
  int nz = g.spectral_nz();
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < nz; ++k, ++idx) f(idx, i, j, k);
}

// Weight of a stored r2c mode in sums over the full spectrum.
inline double hermitian_weight(const Grid& g, int k) {
  return (k == 0 || 2 * k == g.resolution()) ? 1.0 : 2.0;
}

}  // namespace critl3
