#include "pwlab/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pwlab/error.hpp"

namespace pwlab {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

GridSpec::GridSpec(std::vector<int> points, std::vector<double> lo,
                   std::vector<double> hi) {
  const auto d = points.size();
  if (d < 1 || d > kMaxDim)
    throw Error(ErrorKind::InvalidArgument, "grid dimension must be 1, 2 or 3");
  if (lo.size() != d || hi.size() != d)
    throw Error(ErrorKind::InvalidArgument, "grid lo/hi must have one entry per axis");
  dim_ = static_cast<int>(d);
  for (int a = 0; a < dim_; ++a) {
    if (points[a] < 16 || !is_power_of_two(points[a]))
      throw Error(ErrorKind::InvalidArgument,
                  "points per axis must be a power of two >= 16 (axis " +
                      std::to_string(a) + ")");
    if (!(hi[a] > lo[a]) || !std::isfinite(lo[a]) || !std::isfinite(hi[a]))
      throw Error(ErrorKind::InvalidArgument,
                  "grid extent needs hi > lo (axis " + std::to_string(a) + ")");
    points_[a] = points[a];
    lo_[a] = lo[a];
    hi_[a] = hi[a];
  }
  size_ = 1;
  for (int a = dim_ - 1; a >= 0; --a) {
    stride_[a] = size_;
    size_ *= static_cast<std::size_t>(points_[a]);
  }
}

GridSpec GridSpec::line(int points, double lo, double hi) {
  return GridSpec({points}, {lo}, {hi});
}

double GridSpec::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim_; ++a) v *= spacing(a);
  return v;
}

double GridSpec::volume() const {
  double v = 1.0;
  for (int a = 0; a < dim_; ++a) v *= length(a);
  return v;
}

std::array<int, kMaxDim> GridSpec::unflatten(std::size_t flat) const {
  std::array<int, kMaxDim> idx{};
  for (int a = 0; a < dim_; ++a) {
    idx[a] = static_cast<int>(flat / stride_[a]);
    flat %= stride_[a];
  }
  return idx;
}

Point GridSpec::node(std::size_t flat) const {
  const auto idx = unflatten(flat);
  Point p{};
  for (int a = 0; a < dim_; ++a) p[a] = coordinate(a, idx[a]);
  return p;
}

double GridSpec::wavenumber(int axis, int index) const {
  const int n = points_[axis];
  const int j = index < n / 2 ? index : index - n;
  return 2.0 * std::numbers::pi * j / length(axis);
}

double GridSpec::wrap(int axis, double x) const {
  const double len = length(axis);
  double r = std::fmod(x - lo_[axis], len);
  if (r < 0) r += len;
  if (r >= len) r = 0.0;
  return lo_[axis] + r;
}

std::vector<int> GridSpec::shape() const {
  return std::vector<int>(points_.begin(), points_.begin() + dim_);
}

bool GridSpec::operator==(const GridSpec& other) const {
  if (dim_ != other.dim_) return false;
  for (int a = 0; a < dim_; ++a)
    if (points_[a] != other.points_[a] || lo_[a] != other.lo_[a] ||
        hi_[a] != other.hi_[a])
      return false;
  return true;
}

}  // namespace pwlab
