#include "rovib/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "rovib/errors.hpp"

namespace rovib::io {

namespace {

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

Range padded_range(double lo, double hi) {
  if (!(lo <= hi)) return {0.0, 1.0};
  if (lo == hi) {
    const double pad = (lo == 0.0) ? 1.0 : std::abs(lo) * 0.1;
    return {lo - pad, hi + pad};
  }
  const double pad = (hi - lo) * 0.05;
  return {lo - pad, hi + pad};
}

// Round tick spacing to 1/2/5 times a power of ten.
double nice_step(double span, int target_ticks) {
  const double raw = span / target_ticks;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double r = raw / mag;
  double step = 10.0;
  if (r <= 1.0)
    step = 1.0;
  else if (r <= 2.0)
    step = 2.0;
  else if (r <= 5.0)
    step = 5.0;
  return step * mag;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

void write_svg_plot(const std::filesystem::path& file, const PlotSpec& spec,
                    std::span<const Series> series) {
  std::ofstream out(file);
  if (!out) throw ConfigError("svg: cannot open " + file.string() + " for writing");

  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const Series& s : series)
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      x_lo = std::min(x_lo, x);
      x_hi = std::max(x_hi, x);
      y_lo = std::min(y_lo, y);
      y_hi = std::max(y_hi, y);
    }
  const Range xr = padded_range(x_lo, x_hi);
  const Range yr = padded_range(y_lo, y_hi);

  const double ml = 70, mr = 20, mt = 40, mb = 55;
  const double pw = spec.width - ml - mr;
  const double ph = spec.height - mt - mb;
  auto px = [&](double x) { return ml + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double y) { return mt + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\""
      << spec.height << "\" viewBox=\"0 0 " << spec.width << " " << spec.height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << spec.width / 2 << "\" y=\"22\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"15\">" << spec.title << "</text>\n";

  // Axes frame.
  out << "<rect x=\"" << fmt(ml) << "\" y=\"" << fmt(mt) << "\" width=\"" << fmt(pw)
      << "\" height=\"" << fmt(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";

  // Ticks and grid.
  const double xstep = nice_step(xr.hi - xr.lo, 6);
  for (double t = std::ceil(xr.lo / xstep) * xstep; t <= xr.hi + 1e-12 * xstep; t += xstep) {
    out << "<line x1=\"" << fmt(px(t)) << "\" y1=\"" << fmt(mt + ph) << "\" x2=\"" << fmt(px(t))
        << "\" y2=\"" << fmt(mt + ph + 5) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fmt(px(t)) << "\" y=\"" << fmt(mt + ph + 20)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(t)
        << "</text>\n";
  }
  const double ystep = nice_step(yr.hi - yr.lo, 6);
  for (double t = std::ceil(yr.lo / ystep) * ystep; t <= yr.hi + 1e-12 * ystep; t += ystep) {
    out << "<line x1=\"" << fmt(ml - 5) << "\" y1=\"" << fmt(py(t)) << "\" x2=\"" << fmt(ml)
        << "\" y2=\"" << fmt(py(t)) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fmt(ml - 8) << "\" y=\"" << fmt(py(t) + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(t)
        << "</text>\n";
  }

  out << "<text x=\"" << spec.width / 2 << "\" y=\"" << spec.height - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << spec.x_label
      << "</text>\n";
  out << "<text x=\"18\" y=\"" << spec.height / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
      << "transform=\"rotate(-90 18 " << spec.height / 2 << ")\">" << spec.y_label << "</text>\n";

  for (const Series& s : series) {
    if (s.line) {
      out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1\" points=\"";
      for (const auto& [x, y] : s.points) {
        if (!std::isfinite(x) || !std::isfinite(y)) continue;
        out << fmt(px(x)) << "," << fmt(py(y)) << " ";
      }
      out << "\"/>\n";
    } else {
      for (const auto& [x, y] : s.points) {
        if (!std::isfinite(x) || !std::isfinite(y)) continue;
        out << "<circle cx=\"" << fmt(px(x)) << "\" cy=\"" << fmt(py(y)) << "\" r=\"1.2\" fill=\""
            << s.color << "\"/>\n";
      }
    }
  }
  out << "</svg>\n";
}

}  // namespace rovib::io
