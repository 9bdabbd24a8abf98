#include "pwlab/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "pwlab/error.hpp"

namespace pwlab {

namespace detail {

struct FftPlans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  std::size_t size = 0;

  ~FftPlans() {
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

}  // namespace detail

namespace {

using detail::FftPlans;

// In-place plans keyed by shape. FFTW's planner is not thread safe, execution
// with fftw_execute_dft is.
const FftPlans* plans_for(const std::vector<int>& shape) {
  static std::mutex mutex;
  static std::map<std::vector<int>, std::unique_ptr<FftPlans>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[shape];
  if (!slot) {
    std::size_t n = 1;
    for (int s : shape) n *= static_cast<std::size_t>(s);
    auto* buf = fftw_alloc_complex(n);
    auto plans = std::make_unique<FftPlans>();
    plans->size = n;
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    plans->forward = fftw_plan_dft(static_cast<int>(shape.size()), shape.data(), buf,
                                   buf, FFTW_FORWARD, flags);
    plans->backward = fftw_plan_dft(static_cast<int>(shape.size()), shape.data(), buf,
                                    buf, FFTW_BACKWARD, flags);
    fftw_free(buf);
    if (!plans->forward || !plans->backward)
      throw Error(ErrorKind::InvalidArgument, "FFTW could not plan transform");
    slot = std::move(plans);
  }
  return slot.get();
}

fftw_complex* as_fftw(std::span<Complex> data) {
  return reinterpret_cast<fftw_complex*>(data.data());
}

}  // namespace

Spectral::Spectral(const GridSpec& grid) : grid_(grid) {
  plans_ = plans_for(grid.shape());
  for (int a = 0; a < grid.dim(); ++a) line_plans_[a] = plans_for({grid.points(a)});
}

void Spectral::forward(std::span<Complex> data) const {
  fftw_execute_dft(plans_->forward, as_fftw(data), as_fftw(data));
}

void Spectral::inverse(std::span<Complex> data) const {
  fftw_execute_dft(plans_->backward, as_fftw(data), as_fftw(data));
  const double s = 1.0 / static_cast<double>(data.size());
  for (auto& z : data) z *= s;
}

std::vector<Complex> Spectral::derivative(std::span<const Complex> f, int axis,
                                          int order) const {
  std::vector<Complex> spectrum(f.begin(), f.end());
  forward(spectrum);
  return derivative_from_spectrum(spectrum, axis, order);
}

std::vector<Complex> Spectral::derivative_from_spectrum(std::span<const Complex> spectrum,
                                                        int axis, int order) const {
  std::array<int, kMaxDim> orders{};
  orders[axis] = order;
  return mixed_derivative_from_spectrum(spectrum, orders);
}

std::vector<Complex> Spectral::mixed_derivative_from_spectrum(
    std::span<const Complex> spectrum, const std::array<int, kMaxDim>& orders) const {
  const int d = grid_.dim();
  // Per-axis multipliers (i k)^order, Nyquist dropped for odd orders.
  std::array<std::vector<Complex>, kMaxDim> factor;
  for (int a = 0; a < d; ++a) {
    const int n = grid_.points(a);
    factor[a].assign(n, Complex(1.0, 0.0));
    if (orders[a] == 0) continue;
    for (int j = 0; j < n; ++j) {
      if (j == n / 2 && orders[a] % 2 == 1) {
        factor[a][j] = 0.0;
        continue;
      }
      const Complex ik(0.0, grid_.wavenumber(a, j));
      Complex m(1.0, 0.0);
      for (int p = 0; p < orders[a]; ++p) m *= ik;
      factor[a][j] = m;
    }
  }
  std::vector<Complex> out(spectrum.begin(), spectrum.end());
  const std::size_t total = grid_.size();
  for (std::size_t flat = 0; flat < total; ++flat) {
    const auto idx = grid_.unflatten(flat);
    Complex m = factor[0][idx[0]];
    for (int a = 1; a < d; ++a) m *= factor[a][idx[a]];
    out[flat] *= m;
  }
  inverse(out);
  return out;
}

void Spectral::translate(std::vector<Complex>& f, const Point& shift) const {
  bool any = false;
  for (int a = 0; a < grid_.dim(); ++a) any = any || shift[a] != 0.0;
  if (!any) return;
  forward(f);
  const int d = grid_.dim();
  std::array<std::vector<Complex>, kMaxDim> phase;
  for (int a = 0; a < d; ++a) {
    const int n = grid_.points(a);
    phase[a].resize(n);
    for (int j = 0; j < n; ++j) phase[a][j] = std::polar(1.0, grid_.wavenumber(a, j) * shift[a]);
  }
  for (std::size_t flat = 0; flat < f.size(); ++flat) {
    const auto idx = grid_.unflatten(flat);
    Complex m = phase[0][idx[0]];
    for (int a = 1; a < d; ++a) m *= phase[a][idx[a]];
    f[flat] *= m;
  }
  inverse(f);
}

void Spectral::transform_line(std::span<Complex> line, int axis, double shift) const {
  const auto* plans = line_plans_[axis];
  fftw_execute_dft(plans->forward, as_fftw(line), as_fftw(line));
  const int n = grid_.points(axis);
  const double s = 1.0 / n;
  for (int j = 0; j < n; ++j) line[j] *= std::polar(s, grid_.wavenumber(axis, j) * shift);
  fftw_execute_dft(plans->backward, as_fftw(line), as_fftw(line));
}

void Spectral::shear(std::vector<Complex>& f, int axis, int other, double factor) const {
  if (factor == 0.0) return;
  const int n = grid_.points(axis);
  const std::size_t stride = grid_.stride(axis);
  std::vector<Complex> line(static_cast<std::size_t>(n));
  for (std::size_t flat = 0; flat < f.size(); ++flat) {
    const auto idx = grid_.unflatten(flat);
    if (idx[axis] != 0) continue;  // one visit per line
    const double shift = factor * grid_.coordinate(other, idx[other]);
    for (int j = 0; j < n; ++j) line[j] = f[flat + j * stride];
    transform_line(line, axis, shift);
    for (int j = 0; j < n; ++j) f[flat + j * stride] = line[j];
  }
}

}  // namespace pwlab
