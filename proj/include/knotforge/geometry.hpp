#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "knotforge/errors.hpp"

namespace knotforge {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Point2 operator+(Point2 o) const { return {x + o.x, y + o.y}; }
  constexpr Point2 operator-(Point2 o) const { return {x - o.x, y - o.y}; }
  constexpr Point2 operator-() const { return {-x, -y}; }
  constexpr Point2 operator*(double k) const { return {x * k, y * k}; }
  constexpr Point2 operator/(double k) const { return {x / k, y / k}; }
  constexpr Point2& operator+=(Point2 o) { x += o.x; y += o.y; return *this; }
  constexpr Point2& operator-=(Point2 o) { x -= o.x; y -= o.y; return *this; }
  constexpr bool operator==(const Point2&) const = default;
};

constexpr Point2 operator*(double k, Point2 p) { return p * k; }

constexpr double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
/// z-component of the 3D cross product.
constexpr double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(b - a); }
constexpr Point2 lerp(Point2 a, Point2 b, double u) { return a + (b - a) * u; }
inline bool is_finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

/// One cubic piece: anchor, out-handle, in-handle, anchor.
struct CubicSegment {
  Point2 p0, c0, c1, p1;

  /// de Casteljau evaluation at local parameter u.
  Point2 at(double u) const {
    const Point2 a = lerp(p0, c0, u), b = lerp(c0, c1, u), c = lerp(c1, p1, u);
    const Point2 d = lerp(a, b, u), e = lerp(b, c, u);
    return lerp(d, e, u);
  }

  /// d/du of the cubic (local parameter).
  Point2 derivative(double u) const {
    const double v = 1.0 - u;
    return (c0 - p0) * (3.0 * v * v) + (c1 - c0) * (6.0 * v * u) + (p1 - c1) * (3.0 * u * u);
  }

  std::pair<CubicSegment, CubicSegment> split(double u) const {
    const Point2 a = lerp(p0, c0, u), b = lerp(c0, c1, u), c = lerp(c1, p1, u);
    const Point2 d = lerp(a, b, u), e = lerp(b, c, u);
    const Point2 m = lerp(d, e, u);
    return {CubicSegment{p0, a, d, m}, CubicSegment{m, e, c, p1}};
  }

  /// The piece of the curve between local parameters u0 < u1, reparametrized to [0,1].
  CubicSegment sub(double u0, double u1) const {
    if (u0 <= 0.0 && u1 >= 1.0) return *this;
    CubicSegment right = u0 > 0.0 ? split(u0).second : *this;
    if (u1 >= 1.0) return right;
    const double rel = (u1 - u0) / (1.0 - u0);
    return right.split(rel).first;
  }

  CubicSegment reversed() const { return {p1, c1, c0, p0}; }

  std::array<Point2, 4> points() const { return {p0, c0, c1, p1}; }

  bool operator==(const CubicSegment&) const = default;
};

struct BoundingBox {
  Point2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Point2 hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};

  void add(Point2 p) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  }
  bool empty() const { return lo.x > hi.x; }
  double width() const { return hi.x - lo.x; }
  double height() const { return hi.y - lo.y; }
  double diagonal() const { return empty() ? 0.0 : std::hypot(width(), height()); }
  Point2 center() const { return (lo + hi) * 0.5; }
  bool overlaps(const BoundingBox& o, double slack = 0.0) const {
    return lo.x <= o.hi.x + slack && o.lo.x <= hi.x + slack &&
           lo.y <= o.hi.y + slack && o.lo.y <= hi.y + slack;
  }
};

inline BoundingBox hull_box(const CubicSegment& c) {
  BoundingBox b;
  for (const Point2& p : c.points()) b.add(p);
  return b;
}

namespace detail {

/// Roots in the open interval (0,1) of a*u^2 + b*u + c.
inline std::vector<double> unit_quadratic_roots(double a, double b, double c) {
  std::vector<double> out;
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
  if (scale == 0.0) return out;
  const double eps = 1e-14 * scale;
  auto keep = [&](double r) {
    if (r > 0.0 && r < 1.0) out.push_back(r);
  };
  if (std::abs(a) <= eps) {
    if (std::abs(b) > eps) keep(-c / b);
    return out;
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return out;
  const double sq = std::sqrt(disc);
  // numerically stable pair
  const double q = -0.5 * (b + std::copysign(sq, b));
  keep(q / a);
  if (q != 0.0) keep(c / q);
  std::sort(out.begin(), out.end());
  return out;
}

/// Parameters in (0,1) where dx/du or dy/du vanishes.
inline std::vector<double> axis_extrema(const CubicSegment& s) {
  // derivative/3 = A v^2 + 2 B v u + C u^2 with A=c0-p0, B=c1-c0, C=p1-c1
  // = (A - 2B + C) u^2 + 2 (B - A) u + A
  const Point2 A = s.c0 - s.p0, B = s.c1 - s.c0, C = s.p1 - s.c1;
  const Point2 qa = A - B * 2.0 + C, qb = (B - A) * 2.0;
  std::vector<double> r = unit_quadratic_roots(qa.x, qb.x, A.x);
  const std::vector<double> ry = unit_quadratic_roots(qa.y, qb.y, A.y);
  r.insert(r.end(), ry.begin(), ry.end());
  std::sort(r.begin(), r.end());
  return r;
}

}  // namespace detail

/// Tight axis-aligned box of the curve (not the control polygon).
inline BoundingBox tight_box(const CubicSegment& s) {
  BoundingBox b;
  b.add(s.p0);
  b.add(s.p1);
  for (double u : detail::axis_extrema(s)) b.add(s.at(u));
  return b;
}

/// Global time parameter t in [0,1).
inline double wrap_time(double t) {
  double w = t - std::floor(t);
  if (w >= 1.0) w = 0.0;
  return w;
}

struct LocalTime {
  std::size_t segment = 0;
  double u = 0.0;
};

/// A closed chain of cubic segments; segments[i].p1 == segments[i+1].p0 and the last closes onto the first.
class BezierPath {
 public:
  BezierPath() = default;

  /// Throws InvalidPath unless the segments form a closed chain of finite points.
  explicit BezierPath(std::vector<CubicSegment> segments) : segments_(std::move(segments)) {
    if (segments_.empty()) throw InvalidPath("a path needs at least one segment");
    for (std::size_t i = 0; i < segments_.size(); ++i) {
      for (const Point2& p : segments_[i].points())
        if (!is_finite(p)) throw InvalidPath("non-finite coordinate in segment " + std::to_string(i));
      if (!(segments_[i].p1 == segments_[(i + 1) % segments_.size()].p0))
        throw InvalidPath("segment " + std::to_string(i) + " does not end where the next begins");
    }
  }

  std::size_t size() const { return segments_.size(); }
  bool empty() const { return segments_.empty(); }
  const CubicSegment& operator[](std::size_t i) const { return segments_[i]; }
  const std::vector<CubicSegment>& segments() const { return segments_; }
  auto begin() const { return segments_.begin(); }
  auto end() const { return segments_.end(); }

  /// Anchor i is the start point of segment i.
  Point2 anchor(std::size_t i) const { return segments_[i].p0; }

  LocalTime local(double t) const {
    const double n = static_cast<double>(segments_.size());
    const double scaled = wrap_time(t) * n;
    auto k = static_cast<std::size_t>(std::floor(scaled));
    if (k >= segments_.size()) k = segments_.size() - 1;
    return {k, scaled - static_cast<double>(k)};
  }

  double global(std::size_t segment, double u) const {
    return wrap_time((static_cast<double>(segment) + u) / static_cast<double>(segments_.size()));
  }

  std::size_t segment_of(double t) const { return local(t).segment; }

  bool operator==(const BezierPath&) const = default;

 private:
  std::vector<CubicSegment> segments_;
};

/// Point on the path at global time t (wrapped modulo 1).
inline Point2 evaluate(const BezierPath& path, double t) {
  const LocalTime lt = path.local(t);
  return path[lt.segment].at(lt.u);
}

/// d(gamma)/dt in global time; zero at cusps.
inline Point2 tangent(const BezierPath& path, double t) {
  const LocalTime lt = path.local(t);
  return path[lt.segment].derivative(lt.u) * static_cast<double>(path.size());
}

inline BoundingBox bounds(const BezierPath& path) {
  BoundingBox b;
  for (const CubicSegment& s : path) {
    const BoundingBox sb = tight_box(s);
    b.add(sb.lo);
    b.add(sb.hi);
  }
  return b;
}

/// Detection tolerance used when the caller does not supply one: 1e-4 of the box diagonal.
inline double default_tolerance(const BezierPath& path) {
  const double d = bounds(path).diagonal();
  return d > 0.0 ? 1e-4 * d : 1e-9;
}

/// Subdivides the owning segment at t. Always yields n+1 segments; splitting exactly
/// on an anchor inserts a zero-length segment.
inline BezierPath split_at(const BezierPath& path, double t) {
  const LocalTime lt = path.local(t);
  std::vector<CubicSegment> out;
  out.reserve(path.size() + 1);
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i != lt.segment) {
      out.push_back(path[i]);
      continue;
    }
    auto [a, b] = path[i].split(lt.u);
    out.push_back(a);
    out.push_back(b);
  }
  return BezierPath(std::move(out));
}

/// Where an old global time lands after split_at(path, split_time).
inline double time_after_split(const BezierPath& path, double split_time, double t) {
  const LocalTime at = path.local(split_time);
  const LocalTime lt = path.local(t);
  const double n1 = static_cast<double>(path.size() + 1);
  if (lt.segment < at.segment) return wrap_time((lt.segment + lt.u) / n1);
  if (lt.segment > at.segment) return wrap_time((lt.segment + 1 + lt.u) / n1);
  if (at.u <= 0.0) return wrap_time((lt.segment + 1 + lt.u) / n1);
  if (lt.u < at.u) return wrap_time((lt.segment + lt.u / at.u) / n1);
  return wrap_time((lt.segment + 1 + (lt.u - at.u) / (1.0 - at.u)) / n1);
}

/// The cubic pieces tracing gamma over [from, to] (global time, to may exceed 1 to wrap).
inline std::vector<CubicSegment> subpath(const BezierPath& path, double from, double to) {
  std::vector<CubicSegment> out;
  const double n = static_cast<double>(path.size());
  if (!(to > from)) return out;
  double a = from * n, b = to * n;
  const double shift = std::floor(a);
  a -= shift;
  b -= shift;
  while (a < b) {
    const double seg_start = std::floor(a);
    const double seg_end = std::min(seg_start + 1.0, b);
    const auto idx = static_cast<std::size_t>(
        (static_cast<long long>(seg_start + shift) % static_cast<long long>(path.size()) +
         static_cast<long long>(path.size())) % static_cast<long long>(path.size()));
    const double u0 = a - seg_start, u1 = seg_end - seg_start;
    if (u1 - u0 > 1e-15) out.push_back(path[idx].sub(u0, u1));
    a = seg_end;
  }
  return out;
}

struct TimePair {
  double t = 0.0;
  double s = 0.0;

  TimePair swapped() const { return {s, t}; }
  bool operator==(const TimePair&) const = default;
};

}  // namespace knotforge
