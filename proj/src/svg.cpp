#include "svg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "error.hpp"

namespace tsrlab {

namespace {

constexpr double kWidth = 960.0;
constexpr double kHeight = 540.0;

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                          "#9467bd"};

// Fixed two decimals for coordinates: compact and byte-stable.
std::string fmt2(double v) {
  char buf[32];
  auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
  if (ec != std::errc()) {
    throw Error(ErrorCode::Internal, "failed to format a coordinate");
  }
  return std::string(buf, ptr);
}

// printf %g style for tick labels: up to 6 significant digits.
std::string fmt_label(double v) {
  char buf[32];
  auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 6);
  if (ec != std::errc()) {
    throw Error(ErrorCode::Internal, "failed to format a label");
  }
  return std::string(buf, ptr);
}

std::string escape_xml(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Largest of 1, 2, 5 times a power of ten not exceeding `raw`.
double nice_step(double raw) {
  double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double frac = raw / mag;
  if (frac >= 5.0) return 5.0 * mag;
  if (frac >= 2.0) return 2.0 * mag;
  return mag;
}

struct Mapper {
  double lo, hi, pix_lo, pix_hi;

  double operator()(double v) const {
    return pix_lo + (v - lo) / (hi - lo) * (pix_hi - pix_lo);
  }
};

}  // namespace

std::string line_plot_svg(const LinePlotSpec& spec) {
  if (spec.series.empty()) {
    throw Error(ErrorCode::EmptyInput, "nothing to plot");
  }
  for (const auto& s : spec.series) {
    if (s.x.empty() || s.x.size() != s.mean.size() ||
        (!s.stderr_.empty() && s.stderr_.size() != s.mean.size())) {
      throw Error(ErrorCode::ShapeMismatch,
                  "series '" + s.label + "' has inconsistent lengths");
    }
  }

  double xlo = spec.series[0].x.front(), xhi = xlo;
  double ylo = 0.0, yhi = 0.0;
  bool first = true;
  for (const auto& s : spec.series) {
    for (size_t i = 0; i < s.x.size(); ++i) {
      double se = s.stderr_.empty() ? 0.0 : s.stderr_[i];
      xlo = std::min(xlo, s.x[i]);
      xhi = std::max(xhi, s.x[i]);
      double lo = s.mean[i] - se, hi = s.mean[i] + se;
      if (first) {
        ylo = lo;
        yhi = hi;
        first = false;
      } else {
        ylo = std::min(ylo, lo);
        yhi = std::max(yhi, hi);
      }
    }
  }
  if (xhi == xlo) xhi = xlo + 1.0;
  double pad = (yhi - ylo) * 0.05;
  if (pad == 0.0) pad = 1.0;
  ylo -= pad;
  yhi += pad;

  const double left = 70.0, right = 790.0, top = 45.0, bottom = 495.0;
  Mapper mx{xlo, xhi, left, right};
  Mapper my{ylo, yhi, bottom, top};

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt2(kWidth) +
         "\" height=\"" + fmt2(kHeight) + "\" viewBox=\"0 0 " + fmt2(kWidth) +
         " " + fmt2(kHeight) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  out += "<text x=\"" + fmt2((left + right) / 2) +
         "\" y=\"25\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\" fill=\"#000000\">" +
         escape_xml(spec.title) + "</text>\n";

  // Axes, grid lines and tick labels.
  double ystep = nice_step((yhi - ylo) / 5.0);
  for (double tick = std::ceil(ylo / ystep) * ystep; tick <= yhi;
       tick += ystep) {
    double py = my(tick);
    out += "<line x1=\"" + fmt2(left) + "\" y1=\"" + fmt2(py) + "\" x2=\"" +
           fmt2(right) + "\" y2=\"" + fmt2(py) +
           "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    out += "<text x=\"" + fmt2(left - 8) + "\" y=\"" + fmt2(py + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"12\" fill=\"#333333\">" +
           fmt_label(tick) + "</text>\n";
  }
  double xstep = nice_step((xhi - xlo) / 6.0);
  for (double tick = std::ceil(xlo / xstep) * xstep; tick <= xhi;
       tick += xstep) {
    double px = mx(tick);
    out += "<line x1=\"" + fmt2(px) + "\" y1=\"" + fmt2(bottom) + "\" x2=\"" +
           fmt2(px) + "\" y2=\"" + fmt2(bottom + 5) +
           "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    out += "<text x=\"" + fmt2(px) + "\" y=\"" + fmt2(bottom + 20) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"12\" fill=\"#333333\">" +
           fmt_label(tick) + "</text>\n";
  }
  out += "<line x1=\"" + fmt2(left) + "\" y1=\"" + fmt2(top) + "\" x2=\"" +
         fmt2(left) + "\" y2=\"" + fmt2(bottom) +
         "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
  out += "<line x1=\"" + fmt2(left) + "\" y1=\"" + fmt2(bottom) + "\" x2=\"" +
         fmt2(right) + "\" y2=\"" + fmt2(bottom) +
         "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
  out += "<text x=\"" + fmt2((left + right) / 2) + "\" y=\"" +
         fmt2(kHeight - 8) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\" fill=\"#000000\">" +
         escape_xml(spec.x_label) + "</text>\n";
  out += "<text x=\"18\" y=\"" + fmt2((top + bottom) / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\" fill=\"#000000\" transform=\"rotate(-90 18 " +
         fmt2((top + bottom) / 2) + ")\">" +
         escape_xml(spec.y_label) + "</text>\n";

  if (spec.marker_x && *spec.marker_x >= xlo && *spec.marker_x <= xhi) {
    double px = mx(*spec.marker_x);
    out += "<line x1=\"" + fmt2(px) + "\" y1=\"" + fmt2(top) + "\" x2=\"" +
           fmt2(px) + "\" y2=\"" + fmt2(bottom) +
           "\" stroke=\"#666666\" stroke-width=\"1.5\" "
           "stroke-dasharray=\"6,4\"/>\n";
  }

  // Series: translucent band first, mean line on top. Long series are
  // thinned to at most ~2000 points; the final point is always kept.
  for (size_t si = 0; si < spec.series.size(); ++si) {
    const PlotSeries& s = spec.series[si];
    const char* color = kPalette[si % std::size(kPalette)];
    const size_t n = s.x.size();
    const size_t stride = (n + 1999) / 2000;
    std::vector<size_t> idx;
    for (size_t i = 0; i < n; i += stride) {
      idx.push_back(i);
    }
    if (idx.back() != n - 1) {
      idx.push_back(n - 1);
    }

    if (!s.stderr_.empty()) {
      std::string pts;
      for (size_t i : idx) {
        pts += fmt2(mx(s.x[i])) + "," + fmt2(my(s.mean[i] + s.stderr_[i])) +
               " ";
      }
      for (size_t k = idx.size(); k-- > 0;) {
        size_t i = idx[k];
        pts += fmt2(mx(s.x[i])) + "," + fmt2(my(s.mean[i] - s.stderr_[i])) +
               " ";
      }
      pts.pop_back();
      out += "<polygon points=\"" + pts + "\" fill=\"" + color +
             "\" fill-opacity=\"0.2\" stroke=\"none\"/>\n";
    }
    std::string pts;
    for (size_t i : idx) {
      pts += fmt2(mx(s.x[i])) + "," + fmt2(my(s.mean[i])) + " ";
    }
    pts.pop_back();
    out += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" +
           color + "\" stroke-width=\"1.5\"/>\n";
  }

  // Legend, in input order.
  double ly = top + 10;
  for (size_t si = 0; si < spec.series.size(); ++si) {
    const char* color = kPalette[si % std::size(kPalette)];
    out += "<line x1=\"810\" y1=\"" + fmt2(ly) + "\" x2=\"840\" y2=\"" +
           fmt2(ly) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"846\" y=\"" + fmt2(ly + 4) +
           "\" font-family=\"sans-serif\" font-size=\"13\" "
           "fill=\"#000000\">" +
           escape_xml(spec.series[si].label) + "</text>\n";
    ly += 22;
  }

  out += "</svg>\n";
  return out;
}

namespace {

struct RampStop {
  double t;
  int r, g, b;
};

// Dark-violet to yellow ramp, perceptually ordered.
constexpr RampStop kRamp[] = {
    {0.00, 0x44, 0x01, 0x54}, {0.25, 0x3b, 0x52, 0x8b},
    {0.50, 0x21, 0x91, 0x8c}, {0.75, 0x5e, 0xc9, 0x62},
    {1.00, 0xfd, 0xe7, 0x25},
};

std::string ramp_color(double t) {
  t = std::clamp(t, 0.0, 1.0);
  size_t hi = 1;
  while (hi + 1 < std::size(kRamp) && kRamp[hi].t < t) {
    ++hi;
  }
  const RampStop& a = kRamp[hi - 1];
  const RampStop& b = kRamp[hi];
  double u = (t - a.t) / (b.t - a.t);
  auto mix = [u](int x, int y) {
    return static_cast<int>(std::lround(x + u * (y - x)));
  };
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", mix(a.r, b.r),
                mix(a.g, b.g), mix(a.b, b.b));
  return buf;
}

}  // namespace

std::string heatmap_svg(const FieldGrid& field, const std::string& title) {
  if (field.width < 1 || field.height < 1) {
    throw Error(ErrorCode::EmptyInput, "empty field");
  }
  double vmin = 0.0, vmax = 0.0;
  bool first = true;
  for (int r = 0; r < field.height; ++r) {
    for (int c = 0; c < field.width; ++c) {
      if (!field.has(r, c)) {
        continue;
      }
      double v = field.at(r, c);
      if (first) {
        vmin = vmax = v;
        first = false;
      } else {
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
      }
    }
  }
  if (first) {
    throw Error(ErrorCode::EmptyInput, "field has no present cells");
  }
  const double span = vmax > vmin ? vmax - vmin : 1.0;

  const double cell = std::min((kWidth - 80.0) / field.width,
                               (kHeight - 90.0) / field.height);
  const double grid_w = cell * field.width;
  const double grid_h = cell * field.height;
  const double x0 = (kWidth - grid_w) / 2.0;
  const double y0 = 50.0 + ((kHeight - 90.0) - grid_h) / 2.0;

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt2(kWidth) +
         "\" height=\"" + fmt2(kHeight) + "\" viewBox=\"0 0 " + fmt2(kWidth) +
         " " + fmt2(kHeight) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  out += "<text x=\"" + fmt2(kWidth / 2) +
         "\" y=\"30\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\" fill=\"#000000\">" +
         escape_xml(title) + "</text>\n";

  for (int r = 0; r < field.height; ++r) {
    for (int c = 0; c < field.width; ++c) {
      std::string color = field.has(r, c)
                              ? ramp_color((field.at(r, c) - vmin) / span)
                              : std::string("#1a1a2e");
      out += "<rect x=\"" + fmt2(x0 + c * cell) + "\" y=\"" +
             fmt2(y0 + r * cell) + "\" width=\"" + fmt2(cell) +
             "\" height=\"" + fmt2(cell) + "\" fill=\"" + color + "\"/>\n";
    }
  }
  out += "<rect x=\"" + fmt2(x0 + field.target_col * cell) + "\" y=\"" +
         fmt2(y0 + field.target_row * cell) + "\" width=\"" + fmt2(cell) +
         "\" height=\"" + fmt2(cell) +
         "\" fill=\"none\" stroke=\"#ffffff\" stroke-width=\"2\"/>\n";
  out += "<text x=\"" + fmt2(x0) + "\" y=\"" + fmt2(kHeight - 14) +
         "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#333333\">" +
         "min " + fmt_label(vmin) + ", max " + fmt_label(vmax) + "</text>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace tsrlab
