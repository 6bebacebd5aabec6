#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lodstory/cell_typing.hpp"
#include "lodstory/detail/text.hpp"
#include "lodstory/error.hpp"
#include "lodstory/exporter.hpp"

namespace lodstory {

namespace {

using detail::format_number;
using detail::html_escape;

constexpr double kWidth = 640;
constexpr double kHeight = 400;
constexpr double kLeft = 60;
constexpr double kRight = 20;
constexpr double kTop = 50;
constexpr double kBottom = 60;

const std::string& colour(const std::vector<std::string>& palette, std::size_t i) {
  static const std::string kGrey = "#888888";
  return palette.empty() ? kGrey : palette[i % palette.size()];
}

struct Range {
  double lo;
  double hi;
  double span() const { return hi - lo; }
};

Range value_range(const std::vector<double>& values, bool include_zero) {
  double lo = *std::min_element(values.begin(), values.end());
  double hi = *std::max_element(values.begin(), values.end());
  if (include_zero) {
    lo = std::min(lo, 0.0);
    hi = std::max(hi, 0.0);
  }
  if (hi - lo <= 0) {
    hi = lo + 1;
  }
  return {lo, hi};
}

class SvgBuilder {
 public:
  explicit SvgBuilder(std::string_view title, ChartKind kind) {
    out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
         << format_number(kWidth) << "\" height=\"" << format_number(kHeight)
         << "\" viewBox=\"0 0 " << format_number(kWidth) << " " << format_number(kHeight)
         << "\" class=\"chart chart-" << to_string(kind) << "\" role=\"img\">";
    out_ << "<text class=\"title\" x=\"" << format_number(kWidth / 2)
         << "\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
            "font-size=\"16\">"
         << html_escape(title) << "</text>";
  }

  std::ostringstream& raw() { return out_; }

  void axes() {
    out_ << "<line class=\"axis\" x1=\"" << format_number(kLeft) << "\" y1=\""
         << format_number(kHeight - kBottom) << "\" x2=\""
         << format_number(kWidth - kRight) << "\" y2=\""
         << format_number(kHeight - kBottom) << "\" stroke=\"#444444\"/>";
    out_ << "<line class=\"axis\" x1=\"" << format_number(kLeft) << "\" y1=\""
         << format_number(kTop) << "\" x2=\"" << format_number(kLeft) << "\" y2=\""
         << format_number(kHeight - kBottom) << "\" stroke=\"#444444\"/>";
  }

  void label(double x, double y, std::string_view text, std::string_view anchor) {
    out_ << "<text class=\"tick\" x=\"" << format_number(x) << "\" y=\""
         << format_number(y) << "\" text-anchor=\"" << anchor
         << "\" font-family=\"sans-serif\" font-size=\"10\">" << html_escape(text)
         << "</text>";
  }

  std::string finish() {
    out_ << "</svg>";
    return out_.str();
  }

 private:
  std::ostringstream out_;
};

double to_y(double v, const Range& r) {
  double plot = kHeight - kTop - kBottom;
  return kHeight - kBottom - (v - r.lo) / r.span() * plot;
}

void value_ticks(SvgBuilder& svg, const Range& r) {
  svg.label(kLeft - 6, to_y(r.lo, r) + 3, format_number(r.lo), "end");
  svg.label(kLeft - 6, to_y(r.hi, r) + 3, format_number(r.hi), "end");
}

void bars(SvgBuilder& svg, const Series& s, const std::vector<std::string>& palette) {
  Range r = value_range(s.values, true);
  double plot_w = kWidth - kLeft - kRight;
  double slot = plot_w / static_cast<double>(s.values.size());
  double width = slot * 0.8;
  svg.axes();
  value_ticks(svg, r);
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    double x = kLeft + slot * static_cast<double>(i) + slot * 0.1;
    double y0 = to_y(0, r);
    double y1 = to_y(s.values[i], r);
    svg.raw() << "<rect class=\"datum\" x=\"" << format_number(x) << "\" y=\""
              << format_number(std::min(y0, y1)) << "\" width=\"" << format_number(width)
              << "\" height=\"" << format_number(std::abs(y1 - y0)) << "\" fill=\""
              << colour(palette, i) << "\" data-label=\"" << html_escape(s.labels[i])
              << "\" data-value=\"" << format_number(s.values[i]) << "\"/>";
    svg.label(x + width / 2, kHeight - kBottom + 14, s.labels[i], "middle");
  }
}

void points(SvgBuilder& svg, const std::vector<double>& xs, const Series& s,
            const std::vector<std::string>& palette, bool with_line) {
  Range rx = value_range(xs, false);
  Range ry = value_range(s.values, false);
  double plot_w = kWidth - kLeft - kRight;
  auto to_x = [&](double x) { return kLeft + (x - rx.lo) / rx.span() * plot_w; };
  svg.axes();
  value_ticks(svg, ry);
  if (with_line) {
    svg.raw() << "<polyline class=\"series\" fill=\"none\" stroke=\"" << colour(palette, 0)
              << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i) svg.raw() << ' ';
      svg.raw() << format_number(to_x(xs[i])) << ',' << format_number(to_y(s.values[i], ry));
    }
    svg.raw() << "\"/>";
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    svg.raw() << "<circle class=\"datum\" cx=\"" << format_number(to_x(xs[i]))
              << "\" cy=\"" << format_number(to_y(s.values[i], ry)) << "\" r=\"4\" fill=\""
              << colour(palette, with_line ? 0 : i) << "\" data-label=\""
              << html_escape(s.labels[i]) << "\" data-value=\""
              << format_number(s.values[i]) << "\"/>";
    if (with_line) svg.label(to_x(xs[i]), kHeight - kBottom + 14, s.labels[i], "middle");
  }
  if (!with_line) {
    svg.label(kLeft, kHeight - kBottom + 14, format_number(rx.lo), "middle");
    svg.label(kWidth - kRight, kHeight - kBottom + 14, format_number(rx.hi), "middle");
  }
}

struct Point {
  double x;
  double y;
};

Point on_circle(double cx, double cy, double radius, double degrees) {
  double rad = degrees * std::numbers::pi / 180.0;
  return {cx + radius * std::cos(rad), cy + radius * std::sin(rad)};
}

// Clockwise ring segment from `start` to `start + sweep` degrees, 0 = 12 o'clock.
std::string ring_segment(double cx, double cy, double outer, double inner, double start,
                         double sweep) {
  std::ostringstream d;
  auto arc = [&](double radius, double from, double to, bool clockwise) {
    Point p = on_circle(cx, cy, radius, to - 90);
    bool large = std::abs(to - from) > 180;
    d << " A " << format_number(radius) << ' ' << format_number(radius) << " 0 "
      << (large ? 1 : 0) << ' ' << (clockwise ? 1 : 0) << ' ' << format_number(p.x)
      << ' ' << format_number(p.y);
  };
  Point p0 = on_circle(cx, cy, outer, start - 90);
  d << "M " << format_number(p0.x) << ' ' << format_number(p0.y);
  double end = start + sweep;
  // a single arc command cannot draw a full turn, so split at the midpoint
  bool full = sweep >= 360;
  double mid = start + sweep / 2;
  if (full) {
    arc(outer, start, mid, true);
    arc(outer, mid, end, true);
  } else {
    arc(outer, start, end, true);
  }
  Point p1 = on_circle(cx, cy, inner, end - 90);
  d << " L " << format_number(p1.x) << ' ' << format_number(p1.y);
  if (full) {
    arc(inner, end, mid, false);
    arc(inner, mid, start, false);
  } else {
    arc(inner, end, start, false);
  }
  d << " Z";
  return d.str();
}

void doughnut(SvgBuilder& svg, const Series& s, const std::vector<std::string>& palette) {
  double total = 0;
  for (double v : s.values) total += std::max(v, 0.0);
  double cx = kWidth / 2 - 80;
  double cy = (kHeight + kTop) / 2 - 10;
  double outer = 140;
  double inner = 80;
  double angle = 0;
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    double v = std::max(s.values[i], 0.0);
    double sweep = total > 0 ? 360.0 * v / total : 0;
    svg.raw() << "<path class=\"datum\" d=\""
              << ring_segment(cx, cy, outer, inner, angle, sweep) << "\" fill=\""
              << colour(palette, i) << "\" data-label=\"" << html_escape(s.labels[i])
              << "\" data-value=\"" << format_number(s.values[i]) << "\"/>";
    angle += sweep;
    double ly = kTop + 14 * static_cast<double>(i);
    svg.raw() << "<g class=\"legend\"><circle cx=\"" << format_number(kWidth - 170)
              << "\" cy=\"" << format_number(ly - 4) << "\" r=\"5\" fill=\""
              << colour(palette, i) << "\"/></g>";
    svg.label(kWidth - 160, ly, s.labels[i] + " (" + format_number(s.values[i]) + ")",
              "start");
  }
}

}  // namespace

std::string export_component_svg(const Series& series, ChartKind kind,
                                  const std::vector<std::string>& palette,
                                  std::string_view title) {
  if (series.values.empty()) {
    throw Error(ErrorCode::EmptySeries, "cannot draw a chart without data");
  }
  SvgBuilder svg(title, kind);
  switch (kind) {
    case ChartKind::Bar:
      bars(svg, series, palette);
      break;
    case ChartKind::Line: {
      std::vector<double> xs(series.values.size());
      for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = static_cast<double>(i);
      points(svg, xs, series, palette, true);
      break;
    }
    case ChartKind::Scatter: {
      std::vector<double> xs;
      for (const auto& label : series.labels) {
        auto x = parse_numeral(label);
        if (!x) {
          throw Error(ErrorCode::NonNumericX, "scatter x value '" + label + "' is not a number");
        }
        xs.push_back(*x);
      }
      points(svg, xs, series, palette, false);
      break;
    }
    case ChartKind::Doughnut:
      doughnut(svg, series, palette);
      break;
  }
  return svg.finish();
}

}  // namespace lodstory
