#pragma once

#include <string>
#include <vector>

#include "critl3/field.hpp"

namespace critl3 {

// Divergence-free initial data as the spectral curl of a compactly supported
// potential centred in the box, scaled so |v0|_3 = target_l3. Names:
// bump, taylor_green_localized, two_bump, oscillatory(m), translated(m),
// bump_family(i) with i in 0..9.
VectorField preset_initial_data(const std::string& name, const Grid& grid, double target_l3);

std::vector<std::string> preset_names();

}  // namespace critl3
