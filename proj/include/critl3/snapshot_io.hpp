#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "critl3/field.hpp"

namespace critl3 {

// Writes <stem>.<component>.bin (little-endian float64; spectral data as
// interleaved re/im) and <stem>.json. Returns the written paths.
std::vector<std::filesystem::path> write_snapshot(const VectorField& f,
                                                  const std::filesystem::path& dir,
                                                  const std::string& stem);

VectorField read_snapshot(const std::filesystem::path& dir, const std::string& stem);

}  // namespace critl3
