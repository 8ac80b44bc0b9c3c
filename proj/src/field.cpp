#include "critl3/field.hpp"

#include <cmath>

#include "critl3/error.hpp"
#include "critl3/fft.hpp"

namespace critl3 {
namespace {

std::vector<std::string> default_names(int components) {
  switch (components) {
    case 1:
      return {"s"};
    case 3:
      return {"x", "y", "z"};
    case 9:
      return {"xx", "xy", "xz", "yx", "yy", "yz", "zx", "zy", "zz"};
    default:
      throw MalformedField("fields carry 1, 3 or 9 components");
  }
}

void check_compatible(const VectorField& a, const VectorField& b) {
  if (a.grid() != b.grid()) throw GridMismatch("fields live on different grids");
  if (a.components() != b.components() || a.representation() != b.representation())
    throw MalformedField("field shapes or representations differ");
}

}  // namespace

std::string to_string(Representation r) {
  return r == Representation::physical ? "physical" : "spectral";
}

Representation representation_from_string(const std::string& s) {
  if (s == "physical") return Representation::physical;
  if (s == "spectral") return Representation::spectral;
  throw MalformedField("unknown representation '" + s + "'");
}

VectorField::VectorField(const Grid& grid, int components, Representation rep, double time)
    : grid_(grid), rep_(rep), time_(0.0), names_(default_names(components)) {
  set_time(time);
  if (rep == Representation::physical) {
    real_.assign(components, Eigen::ArrayXd::Zero(grid.points()));
  } else {
    spec_.assign(components, Eigen::ArrayXcd::Zero(grid.spectral_points()));
  }
}

VectorField VectorField::zeros(const Grid& grid, int components, Representation rep, double time) {
  return VectorField(grid, components, rep, time);
}

void VectorField::set_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw MalformedField("time stamp must be finite and >= 0");
  time_ = t;
}

void VectorField::set_component_names(std::vector<std::string> names) {
  if (int(names.size()) != components()) throw MalformedField("component name count mismatch");
  names_ = std::move(names);
}

void VectorField::validate() const {
  if (is_physical()) {
    if (int(real_.size()) != components() || !spec_.empty())
      throw MalformedField("physical field has wrong storage");
    for (const auto& a : real_)
      if (std::size_t(a.size()) != grid_.points()) throw MalformedField("component size mismatch");
  } else {
    if (int(spec_.size()) != components() || !real_.empty())
      throw MalformedField("spectral field has wrong storage");
    for (const auto& a : spec_)
      if (std::size_t(a.size()) != grid_.spectral_points())
        throw MalformedField("component size mismatch");
  }
}

VectorField& VectorField::operator+=(const VectorField& o) {
  check_compatible(*this, o);
  for (int c = 0; c < components(); ++c) {
    if (is_physical()) real_[c] += o.real_[c];
    else spec_[c] += o.spec_[c];
  }
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
  check_compatible(*this, o);
  for (int c = 0; c < components(); ++c) {
    if (is_physical()) real_[c] -= o.real_[c];
    else spec_[c] -= o.spec_[c];
  }
  return *this;
}

VectorField& VectorField::operator*=(double s) {
  for (auto& a : real_) a *= s;
  for (auto& a : spec_) a *= s;
  return *this;
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double s, VectorField a) { return a *= s; }
VectorField operator*(VectorField a, double s) { return a *= s; }

VectorField transform(const VectorField& f, Representation target) {
  f.validate();
  if (f.representation() == target) return f;
  VectorField out(f.grid(), f.components(), target, f.time());
  out.set_component_names(f.component_names());
  int n = f.grid().resolution();
  for (int c = 0; c < f.components(); ++c) {
    if (target == Representation::spectral)
      fft_forward(n, f.real(c).data(), out.spec(c).data());
    else
      fft_backward(n, f.spec(c).data(), out.real(c).data());
  }
  return out;
}

void FieldHistory::push_back(VectorField slice) {
  slice.validate();
  if (!slices_.empty()) {
    if (slice.grid() != slices_.front().grid()) throw GridMismatch("history slices must share a grid");
    if (!(slice.time() > times_.back())) throw MalformedField("history times must increase strictly");
  }
  times_.push_back(slice.time());
  slices_.push_back(std::move(slice));
}

const Grid& FieldHistory::grid() const {
  if (slices_.empty()) throw EmptyHistory("history is empty");
  return slices_.front().grid();
}

double FieldHistory::horizon() const {
  if (slices_.empty()) throw EmptyHistory("history is empty");
  return times_.back();
}

bool FieldHistory::uniform(double rel_tol) const {
  if (times_.size() < 2) return true;
  double dt = (times_.back() - times_.front()) / double(times_.size() - 1);
  for (std::size_t i = 1; i < times_.size(); ++i)
    if (std::abs(times_[i] - times_[i - 1] - dt) > rel_tol * dt) return false;
  return true;
}

}  // namespace critl3
