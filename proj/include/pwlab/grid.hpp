#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace pwlab {

inline constexpr int kMaxDim = 3;

/// A configuration point. Only the first `dim` entries are meaningful.
using Point = std::array<double, kMaxDim>;

/// Uniform periodic grid over a box [lo, hi) in configuration space.
///
/// Nodes sit at lo + j * spacing, j = 0 .. points - 1. Storage is row-major
/// with the last axis varying fastest, matching FFTW's multi-dimensional
/// layout.
class GridSpec {
 public:
  GridSpec() = default;
  GridSpec(std::vector<int> points, std::vector<double> lo,
           std::vector<double> hi);

  static GridSpec line(int points, double lo, double hi);

  int dim() const { return dim_; }
  int points(int axis) const { return points_[axis]; }
  double lo(int axis) const { return lo_[axis]; }
  double hi(int axis) const { return hi_[axis]; }
  double length(int axis) const { return hi_[axis] - lo_[axis]; }
  double spacing(int axis) const { return length(axis) / points_[axis]; }
  std::size_t stride(int axis) const { return stride_[axis]; }
  std::size_t size() const { return size_; }
  double cell_volume() const;
  double volume() const;

  double coordinate(int axis, int index) const {
    return lo_[axis] + index * spacing(axis);
  }
  std::array<int, kMaxDim> unflatten(std::size_t flat) const;
  Point node(std::size_t flat) const;

  /// Angular wavenumber of FFT bin `index` along `axis` (FFTW ordering,
  /// Nyquist bin reported as negative).
  double wavenumber(int axis, int index) const;

  /// Wrap a coordinate into [lo, hi) along `axis`.
  double wrap(int axis, double x) const;

  std::vector<int> shape() const;
  bool operator==(const GridSpec& other) const;

 private:
  int dim_ = 0;
  std::array<int, kMaxDim> points_{1, 1, 1};
  std::array<double, kMaxDim> lo_{};
  std::array<double, kMaxDim> hi_{};
  std::array<std::size_t, kMaxDim> stride_{1, 1, 1};
  std::size_t size_ = 0;
};

}  // namespace pwlab
