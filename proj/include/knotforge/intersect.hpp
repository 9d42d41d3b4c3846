#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "knotforge/geometry.hpp"

namespace knotforge {

/// Output of self_intersections. The flags are diagnostics, not failures: the pairs that
/// could be resolved are still listed.
struct IntersectionReport {
  std::vector<TimePair> pairs;  // t < s, sorted by t
  bool tangency_unresolved = false;
  bool triple_point = false;
};

namespace detail {

inline constexpr double kTimeResolution = 1e-6;
inline constexpr double kAnchorWindow = 1e-5;
inline constexpr double kClusterWindow = 1e-4;
inline constexpr double kDuplicateWindow = 1e-7;
/// Crossings whose unit tangents have |sin| below this are treated as tangencies.
inline constexpr double kMinCrossingSine = 1e-3;
inline constexpr std::size_t kLeafBudget = 512;

/// Distance between two times on the circle [0,1).
inline double cyclic_gap(double a, double b) {
  const double d = std::abs(wrap_time(a) - wrap_time(b));
  return std::min(d, 1.0 - d);
}

/// An x- and y-monotone piece of one segment; such pieces cannot cross themselves.
struct Span {
  CubicSegment curve;
  double g0 = 0.0;  // global time range
  double g1 = 0.0;
};

inline std::vector<Span> monotone_pieces(const BezierPath& path) {
  std::vector<Span> out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    std::vector<double> cuts{0.0};
    for (double u : axis_extrema(path[i]))
      if (u - cuts.back() > 1e-9 && u < 1.0 - 1e-9) cuts.push_back(u);
    cuts.push_back(1.0);
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double n = static_cast<double>(path.size());
      out.push_back({path[i].sub(cuts[k], cuts[k + 1]), (static_cast<double>(i) + cuts[k]) / n,
                     (static_cast<double>(i) + cuts[k + 1]) / n});
    }
  }
  return out;
}

struct Leaf {
  double ta = 0.0;
  double tb = 0.0;
};

struct Subdivider {
  double slack = 0.0;
  std::vector<Leaf> leaves;
  bool exhausted = false;

  void run(const Span& a, const Span& b) {
    if (exhausted) return;
    if (!hull_box(a.curve).overlaps(hull_box(b.curve), slack)) return;
    const bool split_a = a.g1 - a.g0 > kTimeResolution;
    const bool split_b = b.g1 - b.g0 > kTimeResolution;
    if (!split_a && !split_b) {
      if (leaves.size() >= kLeafBudget) {
        exhausted = true;
        return;
      }
      leaves.push_back({0.5 * (a.g0 + a.g1), 0.5 * (b.g0 + b.g1)});
      return;
    }
    auto halve = [](const Span& s) {
      auto [l, r] = s.curve.split(0.5);
      const double mid = 0.5 * (s.g0 + s.g1);
      return std::pair<Span, Span>{{l, s.g0, mid}, {r, mid, s.g1}};
    };
    if (split_a && split_b) {
      auto [a0, a1] = halve(a);
      auto [b0, b1] = halve(b);
      run(a0, b0);
      run(a0, b1);
      run(a1, b0);
      run(a1, b1);
    } else if (split_a) {
      auto [a0, a1] = halve(a);
      run(a0, b);
      run(a1, b);
    } else {
      auto [b0, b1] = halve(b);
      run(a, b0);
      run(a, b1);
    }
  }
};

/// Times the two pieces share as endpoints (consecutive pieces, including across the seam).
inline std::vector<double> shared_times(const Span& a, const Span& b) {
  std::vector<double> out;
  if (cyclic_gap(a.g1, b.g0) == 0.0) out.push_back(wrap_time(a.g1));
  if (cyclic_gap(b.g1, a.g0) == 0.0) out.push_back(wrap_time(b.g1));
  return out;
}

inline bool near_shared_anchor(double ta, double tb, const std::vector<double>& shared) {
  for (double c : shared)
    if (cyclic_gap(ta, c) <= kAnchorWindow && cyclic_gap(tb, c) <= kAnchorWindow) return true;
  return false;
}

enum class Refined { Ok, Tangent, Rejected };

/// One Newton step on gamma(t) - gamma(s) = 0 from a leaf estimate.
inline Refined refine(const BezierPath& path, double tol, double& t, double& s) {
  const Point2 ta = tangent(path, t), tb = tangent(path, s);
  const double na = norm(ta), nb = norm(tb);
  if (na == 0.0 || nb == 0.0) return Refined::Tangent;
  const double c = cross(ta, tb);
  if (std::abs(c) / (na * nb) < kMinCrossingSine) return Refined::Tangent;
  // ta*dt - tb*ds = -(gamma(t) - gamma(s))
  const Point2 r = evaluate(path, s) - evaluate(path, t);
  const double dt = cross(r, tb) / c;
  const double ds = -cross(ta, r) / c;
  if (std::abs(dt) < kClusterWindow && std::abs(ds) < kClusterWindow) {
    t += dt;
    s += ds;
  }
  if (distance(evaluate(path, t), evaluate(path, s)) > tol) return Refined::Rejected;
  return Refined::Ok;
}

inline bool has_triple(const BezierPath& path, const std::vector<TimePair>& pairs, double tol) {
  std::vector<Point2> at;
  at.reserve(pairs.size());
  for (const TimePair& p : pairs) at.push_back(evaluate(path, p.t));
  for (std::size_t i = 0; i < at.size(); ++i)
    for (std::size_t j = i + 1; j < at.size(); ++j) {
      if (distance(at[i], at[j]) > tol) continue;
      for (std::size_t k = j + 1; k < at.size(); ++k)
        if (distance(at[i], at[k]) <= tol && distance(at[j], at[k]) <= tol) return true;
    }
  return false;
}

inline IntersectionReport detect(const BezierPath& path, double tol) {
  IntersectionReport report;
  const std::vector<Span> pieces = monotone_pieces(path);
  std::vector<TimePair> found;

  for (std::size_t i = 0; i < pieces.size(); ++i) {
    for (std::size_t j = i + 1; j < pieces.size(); ++j) {
      Subdivider sub;
      sub.slack = 1e-3 * tol;
      sub.run(pieces[i], pieces[j]);
      if (sub.exhausted) report.tangency_unresolved = true;
      if (sub.leaves.empty()) continue;

      const std::vector<double> shared = shared_times(pieces[i], pieces[j]);
      std::vector<Leaf> leaves;
      for (const Leaf& l : sub.leaves)
        if (!near_shared_anchor(l.ta, l.tb, shared)) leaves.push_back(l);
      if (leaves.empty()) continue;

      std::sort(leaves.begin(), leaves.end(),
                [](const Leaf& x, const Leaf& y) { return x.ta < y.ta || (x.ta == y.ta && x.tb < y.tb); });
      // single-linkage clusters; the median leaf seeds the refinement
      std::vector<std::vector<Leaf>> clusters;
      for (const Leaf& l : leaves) {
        bool placed = false;
        for (auto& cl : clusters) {
          for (const Leaf& m : cl) {
            if (std::abs(m.ta - l.ta) <= kClusterWindow && std::abs(m.tb - l.tb) <= kClusterWindow) {
              cl.push_back(l);
              placed = true;
              break;
            }
          }
          if (placed) break;
        }
        if (!placed) clusters.push_back({l});
      }
      for (const auto& cl : clusters) {
        const Leaf& seed = cl[cl.size() / 2];
        double t = seed.ta, s = seed.tb;
        switch (refine(path, tol, t, s)) {
          case Refined::Tangent:
            report.tangency_unresolved = true;
            continue;
          case Refined::Rejected:
            continue;
          case Refined::Ok:
            break;
        }
        if (near_shared_anchor(t, s, shared)) continue;
        t = wrap_time(t);
        s = wrap_time(s);
        if (t > s) std::swap(t, s);
        if (t == s) continue;
        found.push_back({t, s});
      }
    }
  }

  for (const TimePair& p : found) {
    const bool dup = std::any_of(report.pairs.begin(), report.pairs.end(), [&](const TimePair& q) {
      const bool same = cyclic_gap(p.t, q.t) <= kDuplicateWindow && cyclic_gap(p.s, q.s) <= kDuplicateWindow;
      const bool relabelled = cyclic_gap(p.t, q.s) <= kDuplicateWindow && cyclic_gap(p.s, q.t) <= kDuplicateWindow;
      return same || relabelled;
    });
    if (!dup) report.pairs.push_back(p);
  }
  std::sort(report.pairs.begin(), report.pairs.end(),
            [](const TimePair& a, const TimePair& b) { return a.t < b.t || (a.t == b.t && a.s < b.s); });
  return report;
}

}  // namespace detail

/// All transverse self-intersections of the closed path, sorted by t.
///
/// Monotone pieces of every segment are intersected pairwise by bounding-box subdivision
/// down to a time resolution of 1e-6, then refined by one Newton step. Coincidences at the
/// shared endpoint of consecutive pieces are dropped only when both times lie within 1e-5
/// of that endpoint. Near-tangent or overlapping contacts set tangency_unresolved. If three
/// crossings coincide within tol the detection is repeated once at tol/10 before the
/// triple_point flag is raised.
inline IntersectionReport self_intersections(const BezierPath& path, double tol) {
  if (!(tol > 0.0)) throw InvalidPath("intersection tolerance must be positive");
  IntersectionReport report = detail::detect(path, tol);
  if (detail::has_triple(path, report.pairs, tol)) {
    const double finer = tol / 10.0;
    report = detail::detect(path, finer);
    report.triple_point = detail::has_triple(path, report.pairs, finer);
  }
  return report;
}

inline IntersectionReport self_intersections(const BezierPath& path) {
  return self_intersections(path, default_tolerance(path));
}

}  // namespace knotforge
