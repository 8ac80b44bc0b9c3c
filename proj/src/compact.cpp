#include "critl3/compact.hpp"

#include <map>
#include <memory>
#include <mutex>

#include "critl3/error.hpp"
#include "critl3/spectral_loop.hpp"

namespace critl3 {

BandIndex::BandIndex(const Grid& g) {
  const auto& t = tables(g);
  for_each_mode(g, [&](std::size_t idx, int i, int j, int k) {
    if (!(t.keep[i] && t.keep[j] && t.keep[k])) return;
    flat.push_back(std::uint32_t(idx));
    kx.push_back(t.kd[i]);
    ky.push_back(t.kd[j]);
    kz.push_back(t.kd[k]);
    k2.push_back(t.k2[i] + t.k2[j] + t.k2[k]);
  });
}

const BandIndex& band_index(const Grid& g) {
  static std::mutex mu;
  static std::map<std::pair<double, int>, std::unique_ptr<BandIndex>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{g.box_length(), g.resolution()}];
  if (!slot) slot = std::make_unique<BandIndex>(g);
  return *slot;
}

CompactHistory::CompactHistory(const Grid& g, int components, std::size_t slices)
    : grid_(g), components_(components), slices_(slices), band_(band_index(g).size()) {
  buf_.assign(slices_ * components_ * band_, 0.0);
}

void CompactHistory::gather(std::size_t n, const VectorField& f) {
  if (!f.is_spectral() || f.components() != components_ || f.grid() != grid_)
    throw MalformedField("compact gather needs a matching spectral field");
  const auto& b = band_index(grid_);
  for (int c = 0; c < components_; ++c) {
    auto* dst = data(n, c);
    for (std::size_t m = 0; m < band_; ++m) dst[m] = f.spec(c)[b.flat[m]];
  }
}

std::size_t CompactHistory::append() {
  buf_.resize(buf_.size() + components_ * band_, 0.0);
  return slices_++;
}

VectorField CompactHistory::scatter(std::size_t n, double time) const {
  VectorField f(grid_, components_, Representation::spectral, time);
  const auto& b = band_index(grid_);
  for (int c = 0; c < components_; ++c) {
    const auto* src = data(n, c);
    for (std::size_t m = 0; m < band_; ++m) f.spec(c)[b.flat[m]] = src[m];
  }
  return f;
}

}  // namespace critl3
