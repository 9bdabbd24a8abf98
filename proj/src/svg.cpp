#include "pwlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "pwlab/error.hpp"

namespace pwlab::svg {

namespace {

constexpr double kMargin = 56.0;
const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void settle() {
    if (!(lo <= hi)) lo = 0.0, hi = 1.0;
    if (hi == lo) lo -= 0.5, hi += 0.5;
  }
};

void open_document(std::ostringstream& out, const PlotOptions& opts) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width << "\" height=\""
      << opts.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  if (!opts.stamp.empty()) out << "<!-- " << escape(opts.stamp) << " -->\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!opts.title.empty())
    out << "<text x=\"" << opts.width / 2 << "\" y=\"20\" text-anchor=\"middle\">"
        << escape(opts.title) << "</text>\n";
}

void axes(std::ostringstream& out, const PlotOptions& opts, const Range& xr, const Range& yr) {
  const double w = opts.width, h = opts.height;
  out << "<rect x=\"" << kMargin << "\" y=\"" << kMargin / 2 << "\" width=\"" << w - 1.5 * kMargin
      << "\" height=\"" << h - 1.5 * kMargin << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<text x=\"" << kMargin << "\" y=\"" << h - kMargin + 16 << "\">" << num(xr.lo)
      << "</text>\n";
  out << "<text x=\"" << w - kMargin / 2 << "\" y=\"" << h - kMargin + 16
      << "\" text-anchor=\"end\">" << num(xr.hi) << "</text>\n";
  out << "<text x=\"" << kMargin - 4 << "\" y=\"" << h - kMargin
      << "\" text-anchor=\"end\">" << num(yr.lo) << "</text>\n";
  out << "<text x=\"" << kMargin - 4 << "\" y=\"" << kMargin / 2 + 10
      << "\" text-anchor=\"end\">" << num(yr.hi) << "</text>\n";
  out << "<text x=\"" << w / 2 << "\" y=\"" << h - 8 << "\" text-anchor=\"middle\">"
      << escape(opts.x_label) << "</text>\n";
  out << "<text x=\"14\" y=\"" << h / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
      << h / 2 << ")\">" << escape(opts.y_label) << "</text>\n";
}

}  // namespace

std::string line_plot(const std::vector<Series>& series, const PlotOptions& opts) {
  Range xr, yr;
  for (const auto& s : series) {
    for (double v : s.x) xr.add(v);
    for (double v : s.y) yr.add(v);
  }
  xr.settle();
  yr.settle();
  const double pw = opts.width - 1.5 * kMargin, ph = opts.height - 1.5 * kMargin;
  auto px = [&](double x) { return kMargin + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double y) { return kMargin / 2 + (1.0 - (y - yr.lo) / (yr.hi - yr.lo)) * ph; };

  std::ostringstream out;
  open_document(out, opts);
  axes(out, opts, xr, yr);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* colour = kPalette[k % std::size(kPalette)];
    out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.2\" points=\"";
    const std::size_t n = std::min(s.x.size(), s.y.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      out << num(px(s.x[i])) << ',' << num(py(s.y[i])) << ' ';
    }
    out << "\"/>\n";
    if (!s.label.empty())
      out << "<text x=\"" << opts.width - kMargin << "\" y=\"" << kMargin / 2 + 16 + 14 * k
          << "\" text-anchor=\"end\" fill=\"" << colour << "\">" << escape(s.label) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string heatmap(const std::vector<double>& values, int rows, int cols, double x_lo,
                    double x_hi, double y_lo, double y_hi, const PlotOptions& opts) {
  if (rows <= 0 || cols <= 0 || values.size() != static_cast<std::size_t>(rows) * cols)
    throw Error(ErrorKind::InvalidArgument, "heatmap table does not match its shape");
  Range vr;
  for (double v : values) vr.add(v);
  vr.settle();
  Range xr{x_lo, x_hi}, yr{y_lo, y_hi};
  const double pw = opts.width - 1.5 * kMargin, ph = opts.height - 1.5 * kMargin;
  const double cw = pw / cols, ch = ph / rows;

  std::ostringstream out;
  open_document(out, opts);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const double v = values[static_cast<std::size_t>(r) * cols + c];
      const double s = std::isfinite(v) ? (v - vr.lo) / (vr.hi - vr.lo) : 0.0;
      const int shade = static_cast<int>(std::lround(255.0 * (1.0 - s)));
      // Row 0 is y_lo, drawn at the bottom.
      out << "<rect x=\"" << num(kMargin + c * cw) << "\" y=\""
          << num(kMargin / 2 + (rows - 1 - r) * ch) << "\" width=\"" << num(cw + 0.05)
          << "\" height=\"" << num(ch + 0.05) << "\" fill=\"rgb(" << shade << ',' << shade
          << ",255)\"/>\n";
    }
  }
  axes(out, opts, xr, yr);
  out << "</svg>\n";
  return out.str();
}

void write(const std::string& path, const std::string& document) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  out << document;
}

}  // namespace pwlab::svg
