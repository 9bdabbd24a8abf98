#pragma once

#include <span>
#include <vector>

#include "pwlab/fields.hpp"

namespace pwlab {

namespace detail {
struct FftPlans;
}

/// FFT-based differentiation and resampling on one periodic grid.
///
/// Plans are created once per shape (FFTW planning is serialized behind a
/// mutex) and executed with the new-array interface, so a Spectral instance
/// may be used concurrently from several threads.
class Spectral {
 public:
  explicit Spectral(const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }

  void forward(std::span<Complex> data) const;
  /// Inverse transform including the 1/N normalization.
  void inverse(std::span<Complex> data) const;

  /// d^order f / dx_axis^order for periodic f. The Nyquist bin is dropped for
  /// odd orders.
  std::vector<Complex> derivative(std::span<const Complex> f, int axis,
                                  int order) const;
  /// Same, starting from an already transformed spectrum.
  std::vector<Complex> derivative_from_spectrum(std::span<const Complex> spectrum,
                                                int axis, int order) const;
  std::vector<Complex> mixed_derivative_from_spectrum(
      std::span<const Complex> spectrum, const std::array<int, kMaxDim>& orders) const;

  /// f(x) -> f(x + shift), exact for band-limited periodic f.
  void translate(std::vector<Complex>& f, const Point& shift) const;

  /// Shear resampling: every line along `axis` is translated by
  /// factor * x_other, where x_other is the node coordinate along `other`.
  /// Realizes f(x) -> f(x + factor * x_other * e_axis).
  void shear(std::vector<Complex>& f, int axis, int other, double factor) const;

 private:
  GridSpec grid_;
  void transform_line(std::span<Complex> line, int axis, double shift) const;

  const detail::FftPlans* plans_ = nullptr;
  std::array<const detail::FftPlans*, kMaxDim> line_plans_{};
};

}  // namespace pwlab
