#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "pwlab/fields.hpp"
#include "json.hpp"

namespace pwlab {

/// V = 1/2 sum_a k_a x_a^2, centred on the origin.
struct HarmonicTerm {
  std::vector<double> k;
};

/// V = height * exp(-|x - center|^2 / (2 width^2)).
struct GaussianBarrierTerm {
  double height = 0.0;
  double width = 1.0;
  std::vector<double> center;
};

/// V = (g + g_rate * t) . x
struct UniformGradientTerm {
  std::vector<double> g;
  std::vector<double> g_rate;
};

/// Nodal table on its own grid, interpolated multilinearly.
struct TableTerm {
  std::shared_ptr<const DensityField> table;
};

using PotentialTerm =
    std::variant<HarmonicTerm, GaussianBarrierTerm, UniformGradientTerm, TableTerm>;

/// Sum of potential terms. An empty sum is the free particle.
///
/// Terms that carry no gradient (pure functions of time) are never
/// discretized; they are kept as text in `notes` for manifests.
class Potential {
 public:
  Potential() = default;

  static Potential free();
  static Potential harmonic(std::vector<double> k);
  static Potential gaussian_barrier(double height, double width,
                                    std::vector<double> center);
  static Potential uniform_gradient(std::vector<double> g,
                                    std::vector<double> g_rate = {});
  static Potential table(DensityField values);

  Potential& add(PotentialTerm term);
  Potential& note(std::string text);

  const std::vector<PotentialTerm>& terms() const { return terms_; }
  const std::vector<std::string>& notes() const { return notes_; }

  bool is_free() const { return terms_.empty(); }
  bool time_dependent() const;
  /// True when V is invariant under rotations about the origin (it depends
  /// only on distances). Consumed by the Euclidean frame checks.
  bool distance_only() const;

  double value(const Point& x, int dim, double t) const;
  Point gradient(const Point& x, int dim, double t) const;
  std::vector<double> sample(const GridSpec& grid, double t) const;

  void validate(int dim) const;
  nlohmann::json descriptor() const;

 private:
  std::vector<PotentialTerm> terms_;
  std::vector<std::string> notes_;
};

}  // namespace pwlab
