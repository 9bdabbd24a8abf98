#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "pwlab/fields.hpp"

namespace pwlab {

/// Selects the reference loop or the OpenMP loop for the data-parallel
/// kernels. Both produce bit-identical results.
enum class Execution { serial, parallel };

namespace kernels {

// The serial namespace is the reference implementation; parallel mirrors it
// with OpenMP worksharing over nodes.
#define PWLAB_KERNEL_DECLS                                                     \
  void multiply(std::span<Complex> data, std::span<const Complex> factors);   \
  void potential_phase(std::span<Complex> psi, std::span<const double> v,     \
                       double h);                                             \
  void modulus_squared(std::span<const Complex> psi, std::span<double> out);  \
  void modulus(std::span<const Complex> psi, std::span<double> out);          \
  void floor_mask(std::span<const double> density, double floor,              \
                  std::span<std::uint8_t> valid);                             \
  void guidance_velocity(std::span<const Complex> psi,                        \
                         std::span<const Complex> dpsi, double twist,         \
                         double mass, std::span<const std::uint8_t> valid,    \
                         std::span<double> out);                              \
  void probability_current(std::span<const Complex> psi,                      \
                           std::span<const Complex> dpsi, double twist,       \
                           double mass, std::span<Complex> out);

namespace serial {
PWLAB_KERNEL_DECLS
}
namespace parallel {
PWLAB_KERNEL_DECLS
}

#undef PWLAB_KERNEL_DECLS

/// Runs body(i) for i in [0, n). Parallel execution uses dynamic scheduling;
/// callers write results into slot i so output order never depends on
/// completion order.
template <class Body>
void for_each_index(Execution exec, std::size_t n, Body&& body) {
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (std::size_t i = 0; i < n; ++i) body(i);
  } else {
    for (std::size_t i = 0; i < n; ++i) body(i);
  }
}

}  // namespace kernels

/// Dispatch helpers used by the modules.
namespace kernels {

inline void multiply(Execution e, std::span<Complex> d, std::span<const Complex> f) {
  e == Execution::parallel ? parallel::multiply(d, f) : serial::multiply(d, f);
}
inline void potential_phase(Execution e, std::span<Complex> psi,
                            std::span<const double> v, double h) {
  e == Execution::parallel ? parallel::potential_phase(psi, v, h)
                           : serial::potential_phase(psi, v, h);
}
inline void modulus_squared(Execution e, std::span<const Complex> psi,
                            std::span<double> out) {
  e == Execution::parallel ? parallel::modulus_squared(psi, out)
                           : serial::modulus_squared(psi, out);
}
inline void modulus(Execution e, std::span<const Complex> psi, std::span<double> out) {
  e == Execution::parallel ? parallel::modulus(psi, out) : serial::modulus(psi, out);
}
inline void floor_mask(Execution e, std::span<const double> density, double floor,
                       std::span<std::uint8_t> valid) {
  e == Execution::parallel ? parallel::floor_mask(density, floor, valid)
                           : serial::floor_mask(density, floor, valid);
}
inline void guidance_velocity(Execution e, std::span<const Complex> psi,
                              std::span<const Complex> dpsi, double twist,
                              double mass, std::span<const std::uint8_t> valid,
                              std::span<double> out) {
  e == Execution::parallel
      ? parallel::guidance_velocity(psi, dpsi, twist, mass, valid, out)
      : serial::guidance_velocity(psi, dpsi, twist, mass, valid, out);
}
inline void probability_current(Execution e, std::span<const Complex> psi,
                                std::span<const Complex> dpsi, double twist,
                                double mass, std::span<Complex> out) {
  e == Execution::parallel
      ? parallel::probability_current(psi, dpsi, twist, mass, out)
      : serial::probability_current(psi, dpsi, twist, mass, out);
}

}  // namespace kernels
}  // namespace pwlab
