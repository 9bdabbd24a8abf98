#include "pwlab/potential.hpp"

#include <cmath>

#include "pwlab/core.hpp"
#include "pwlab/error.hpp"

namespace pwlab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double at(const std::vector<double>& v, int a) {
  return a < static_cast<int>(v.size()) ? v[a] : 0.0;
}

void check_size(const std::vector<double>& v, int dim, const char* what, bool optional) {
  if (optional && v.empty()) return;
  if (static_cast<int>(v.size()) != dim)
    throw Error(ErrorKind::InvalidArgument,
                std::string(what) + " needs one entry per grid axis");
  for (double x : v)
    if (!std::isfinite(x))
      throw Error(ErrorKind::InvalidArgument, std::string(what) + " must be finite");
}

}  // namespace

Potential Potential::free() { return {}; }

Potential Potential::harmonic(std::vector<double> k) {
  Potential p;
  p.add(HarmonicTerm{std::move(k)});
  return p;
}

Potential Potential::gaussian_barrier(double height, double width,
                                      std::vector<double> center) {
  Potential p;
  p.add(GaussianBarrierTerm{height, width, std::move(center)});
  return p;
}

Potential Potential::uniform_gradient(std::vector<double> g, std::vector<double> g_rate) {
  Potential p;
  p.add(UniformGradientTerm{std::move(g), std::move(g_rate)});
  return p;
}

Potential Potential::table(DensityField values) {
  Potential p;
  p.add(TableTerm{std::make_shared<const DensityField>(std::move(values))});
  return p;
}

Potential& Potential::add(PotentialTerm term) {
  terms_.push_back(std::move(term));
  return *this;
}

Potential& Potential::note(std::string text) {
  notes_.push_back(std::move(text));
  return *this;
}

bool Potential::time_dependent() const {
  for (const auto& t : terms_)
    if (const auto* u = std::get_if<UniformGradientTerm>(&t))
      for (double r : u->g_rate)
        if (r != 0.0) return true;
  return false;
}

bool Potential::distance_only() const {
  for (const auto& term : terms_) {
    const bool ok = std::visit(
        overloaded{
            [](const HarmonicTerm& h) {
              for (double k : h.k)
                if (k != h.k.front()) return false;
              return true;
            },
            [](const GaussianBarrierTerm& g) {
              for (double c : g.center)
                if (c != 0.0) return false;
              return true;
            },
            [](const UniformGradientTerm& u) {
              for (double x : u.g)
                if (x != 0.0) return false;
              for (double x : u.g_rate)
                if (x != 0.0) return false;
              return true;
            },
            [](const TableTerm&) { return false; },
        },
        term);
    if (!ok) return false;
  }
  return true;
}

double Potential::value(const Point& x, int dim, double t) const {
  double v = 0.0;
  for (const auto& term : terms_) {
    v += std::visit(
        overloaded{
            [&](const HarmonicTerm& h) {
              double s = 0.0;
              for (int a = 0; a < dim; ++a) s += 0.5 * at(h.k, a) * x[a] * x[a];
              return s;
            },
            [&](const GaussianBarrierTerm& g) {
              double r2 = 0.0;
              for (int a = 0; a < dim; ++a) {
                const double dx = x[a] - at(g.center, a);
                r2 += dx * dx;
              }
              return g.height * std::exp(-r2 / (2.0 * g.width * g.width));
            },
            [&](const UniformGradientTerm& u) {
              double s = 0.0;
              for (int a = 0; a < dim; ++a) s += (at(u.g, a) + at(u.g_rate, a) * t) * x[a];
              return s;
            },
            [&](const TableTerm& tb) { return interpolate(*tb.table, x); },
        },
        term);
  }
  return v;
}

Point Potential::gradient(const Point& x, int dim, double t) const {
  Point g{};
  for (const auto& term : terms_) {
    std::visit(overloaded{
                   [&](const HarmonicTerm& h) {
                     for (int a = 0; a < dim; ++a) g[a] += at(h.k, a) * x[a];
                   },
                   [&](const GaussianBarrierTerm& b) {
                     double r2 = 0.0;
                     for (int a = 0; a < dim; ++a) {
                       const double dx = x[a] - at(b.center, a);
                       r2 += dx * dx;
                     }
                     const double w2 = b.width * b.width;
                     const double e = b.height * std::exp(-r2 / (2.0 * w2));
                     for (int a = 0; a < dim; ++a) g[a] += -e * (x[a] - at(b.center, a)) / w2;
                   },
                   [&](const UniformGradientTerm& u) {
                     for (int a = 0; a < dim; ++a) g[a] += at(u.g, a) + at(u.g_rate, a) * t;
                   },
                   [&](const TableTerm& tb) {
                     const Point tg =
                         interpolate_gradient(tb.table->grid, tb.table->values, x);
                     for (int a = 0; a < dim; ++a) g[a] += tg[a];
                   },
               },
               term);
  }
  return g;
}

std::vector<double> Potential::sample(const GridSpec& grid, double t) const {
  std::vector<double> out(grid.size(), 0.0);
  if (terms_.empty()) return out;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = value(grid.node(i), grid.dim(), t);
    if (!std::isfinite(out[i]))
      throw Error(ErrorKind::NonFinite, "potential is not finite at a grid node");
  }
  return out;
}

void Potential::validate(int dim) const {
  for (const auto& term : terms_) {
    std::visit(overloaded{
                   [&](const HarmonicTerm& h) { check_size(h.k, dim, "harmonic k", false); },
                   [&](const GaussianBarrierTerm& b) {
                     check_size(b.center, dim, "barrier center", false);
                     if (!(b.width > 0.0) || !std::isfinite(b.height))
                       throw Error(ErrorKind::InvalidArgument,
                                   "barrier needs finite height and width > 0");
                   },
                   [&](const UniformGradientTerm& u) {
                     check_size(u.g, dim, "gradient g", false);
                     check_size(u.g_rate, dim, "gradient g_rate", true);
                   },
                   [&](const TableTerm& tb) {
                     if (!tb.table || tb.table->grid.dim() != dim)
                       throw Error(ErrorKind::InvalidArgument,
                                   "potential table must live on a grid of the same dim");
                     for (double v : tb.table->values)
                       if (!std::isfinite(v))
                         throw Error(ErrorKind::InvalidArgument,
                                     "potential table must be finite");
                   },
               },
               term);
  }
}

nlohmann::json Potential::descriptor() const {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& term : terms_) {
    terms.push_back(std::visit(
        overloaded{
            [](const HarmonicTerm& h) {
              return nlohmann::json{{"kind", "harmonic"}, {"k", h.k}};
            },
            [](const GaussianBarrierTerm& b) {
              return nlohmann::json{{"kind", "gaussian_barrier"},
                                    {"height", b.height},
                                    {"width", b.width},
                                    {"center", b.center}};
            },
            [](const UniformGradientTerm& u) {
              return nlohmann::json{{"kind", "uniform_gradient"}, {"g", u.g}, {"g_rate", u.g_rate}};
            },
            [](const TableTerm& tb) {
              return nlohmann::json{{"kind", "table"}, {"points", tb.table->grid.shape()}};
            },
        },
        term));
  }
  return {{"kind", terms_.empty() ? "free" : "sum"},
          {"terms", terms},
          {"distance_only", distance_only()},
          {"time_dependent", time_dependent()},
          {"notes", notes_}};
}

}  // namespace pwlab
