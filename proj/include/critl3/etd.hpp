#pragma once

#include <cmath>

namespace critl3 {

// (e^z - 1) / z
inline double etd_phi1(double z) {
  if (std::abs(z) < 1e-5) return 1.0 + z * (0.5 + z * (1.0 / 6 + z / 24));
  return std::expm1(z) / z;
}

// (e^z - 1 - z) / z^2
inline double etd_phi2(double z) {
  if (std::abs(z) < 1e-2)
    return 0.5 + z * (1.0 / 6 + z * (1.0 / 24 + z * (1.0 / 120 + z * (1.0 / 720 + z / 5040))));
  return (std::expm1(z) - z) / (z * z);
}

}  // namespace critl3
