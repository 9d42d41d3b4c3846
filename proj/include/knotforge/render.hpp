#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "knotforge/geometry.hpp"
#include "knotforge/state.hpp"

namespace knotforge {

/// Stroke styling. A is in global-time units, B in global time per scene unit.
struct Style {
  double stroke_width = 4.0;
  std::string foreground = "#000000";
  std::string background = "#ffffff";
  double A = 0.01;
  double B = 0.002;
  double gap_ratio = 1.0;  // halo extends gap_ratio * w beyond the stroke on each side

  double halo_width() const { return (1.0 + 2.0 * gap_ratio) * stroke_width; }
  bool operator==(const Style&) const = default;
};

/// Half-length (global time) of the re-drawn over strand around a crossing:
///   l = A |cos angle(tan_t, tan_s)| + 2 B w
/// A zero tangent falls back to the widest cover, A + 2 B w.
inline double over_strand_length(Point2 tan_t, Point2 tan_s, const Style& style) {
  const double nt = norm(tan_t), ns = norm(tan_s);
  const double base = 2.0 * style.B * style.stroke_width;
  if (nt == 0.0 || ns == 0.0) return style.A + base;
  const double c = std::min(1.0, std::abs(dot(tan_t, tan_s)) / (nt * ns));
  return style.A * c + base;
}

/// The re-drawn piece gamma([from, to]) of the over strand at one crossing. from < to; the
/// bounds are not wrapped, so to may exceed 1 or from drop below 0.
struct StrandGap {
  std::size_t crossing = 0;
  double center = 0.0;
  double from = 0.0;
  double to = 0.0;

  bool operator==(const StrandGap&) const = default;
};

/// [c - l, c + l] around the over strand, kept within the owning segment and one neighbour
/// on each side, and stopped halfway to any other crossing this strand passes under.
inline StrandGap strand_gap(const DiagramState& state, std::size_t index, const Style& style) {
  const BezierPath& path = state.path;
  const Crossing& c = state.crossings[index];
  const double center = c.over_time();
  const double l = over_strand_length(tangent(path, c.pair.t), tangent(path, c.pair.s), style);
  const double n = static_cast<double>(path.size());
  const double k = static_cast<double>(path.segment_of(center));
  double from = std::max(center - l, (k - 1.0) / n);
  double to = std::min(center + l, (k + 2.0) / n);
  for (std::size_t j = 0; j < state.crossings.size(); ++j) {
    if (j == index) continue;
    double d = state.crossings[j].under_time() - center;
    d -= std::round(d);
    if (d > 0.0) to = std::min(to, center + d / 2.0);
    else if (d < 0.0) from = std::max(from, center + d / 2.0);
  }
  // never more than the whole loop
  if (to - from >= 1.0) {
    from = center - 0.499;
    to = center + 0.499;
  }
  return {index, center, from, to};
}

inline std::vector<StrandGap> strand_gaps(const DiagramState& state, const Style& style) {
  std::vector<StrandGap> gaps;
  gaps.reserve(state.crossings.size());
  for (std::size_t i = 0; i < state.crossings.size(); ++i)
    gaps.push_back(strand_gap(state, i, style));
  return gaps;
}

namespace detail {

/// Fixed 4-decimal rendering with '.' regardless of locale; -0 prints as 0.
inline std::string fixed4(double v) {
  if (std::abs(v) < 0.00005) v = 0.0;
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 4);
  return std::string(buf, res.ptr);
}

inline std::string svg_point(Point2 p) { return fixed4(p.x) + "," + fixed4(p.y); }

inline std::string svg_path_data(const std::vector<CubicSegment>& segs, bool closed) {
  if (segs.empty()) return {};
  std::string d = "M " + svg_point(segs.front().p0);
  for (const CubicSegment& s : segs) d += " C " + svg_point(s.c0) + " " + svg_point(s.c1) + " " + svg_point(s.p1);
  if (closed) d += " Z";
  return d;
}

inline std::string tikz_point(Point2 p) { return "(" + fixed4(p.x) + "," + fixed4(p.y) + ")"; }

inline std::string tikz_path(const std::vector<CubicSegment>& segs, bool closed) {
  std::string d = tikz_point(segs.front().p0);
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const CubicSegment& s = segs[i];
    d += " .. controls " + tikz_point(s.c0) + " and " + tikz_point(s.c1) + " .. ";
    d += closed && i + 1 == segs.size() ? std::string("cycle") : tikz_point(s.p1);
  }
  return d;
}

/// "#rrggbb" -> "RRGGBB" for xcolor's HTML model; anything else passes through unchanged.
inline std::string html_color(const std::string& c) {
  std::string out = c.size() == 7 && c[0] == '#' ? c.substr(1) : c;
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
  return out;
}

/// Box of the path padded by the halo so strokes are not cut at the border.
inline BoundingBox canvas(const BezierPath& path, const Style& style) {
  BoundingBox b = bounds(path);
  const double pad = style.halo_width();
  b.lo = b.lo - Point2{pad, pad};
  b.hi = b.hi + Point2{pad, pad};
  return b;
}

}  // namespace detail

/// SVG 1.1 document: background, the whole path once, then per crossing a background halo
/// and a foreground stroke along the over strand's gap interval.
inline std::string to_svg(const DiagramState& state, const Style& style = {}) {
  using detail::fixed4;
  const BoundingBox box = detail::canvas(state.path, style);
  const std::string w = fixed4(style.stroke_width);
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + fixed4(box.width()) +
         "\" height=\"" + fixed4(box.height()) + "\" viewBox=\"" + fixed4(box.lo.x) + " " + fixed4(box.lo.y) + " " +
         fixed4(box.width()) + " " + fixed4(box.height()) + "\">\n";
  out += "<rect x=\"" + fixed4(box.lo.x) + "\" y=\"" + fixed4(box.lo.y) + "\" width=\"" + fixed4(box.width()) +
         "\" height=\"" + fixed4(box.height()) + "\" fill=\"" + style.background + "\"/>\n";
  out += "<path d=\"" + detail::svg_path_data(state.path.segments(), true) + "\" fill=\"none\" stroke=\"" +
         style.foreground + "\" stroke-width=\"" + w + "\"/>\n";
  for (const StrandGap& g : strand_gaps(state, style)) {
    const std::string d = detail::svg_path_data(subpath(state.path, g.from, g.to), false);
    out += "<g id=\"crossing-" + std::to_string(g.crossing) + "\">\n";
    out += "<path d=\"" + d + "\" fill=\"none\" stroke=\"" + style.background + "\" stroke-width=\"" +
           fixed4(style.halo_width()) + "\"/>\n";
    out += "<path d=\"" + d + "\" fill=\"none\" stroke=\"" + style.foreground + "\" stroke-width=\"" + w + "\"/>\n";
    out += "</g>\n";
  }
  out += "</svg>\n";
  return out;
}

/// A tikzpicture in scene coordinates (1 unit = 1pt, y pointing down as in SVG). Needs only
/// TikZ itself.
inline std::string to_tikz(const DiagramState& state, const Style& style = {}) {
  using detail::fixed4;
  const BoundingBox box = detail::canvas(state.path, style);
  std::string out;
  out += "\\begin{tikzpicture}[x=1pt,y=-1pt]\n";
  out += "\\definecolor{kfFg}{HTML}{" + detail::html_color(style.foreground) + "}\n";
  out += "\\definecolor{kfBg}{HTML}{" + detail::html_color(style.background) + "}\n";
  out += "\\fill[kfBg] " + detail::tikz_point(box.lo) + " rectangle " + detail::tikz_point(box.hi) + ";\n";
  out += "\\draw[kfFg, line width=" + fixed4(style.stroke_width) + "pt] " +
         detail::tikz_path(state.path.segments(), true) + ";\n";
  for (const StrandGap& g : strand_gaps(state, style)) {
    const std::string d = detail::tikz_path(subpath(state.path, g.from, g.to), false);
    out += "% crossing " + std::to_string(g.crossing) + "\n";
    out += "\\draw[kfBg, line width=" + fixed4(style.halo_width()) + "pt] " + d + ";\n";
    out += "\\draw[kfFg, line width=" + fixed4(style.stroke_width) + "pt] " + d + ";\n";
  }
  out += "\\end{tikzpicture}\n";
  return out;
}

}  // namespace knotforge
