#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "knotforge/geometry.hpp"
#include "knotforge/intersect.hpp"

namespace knotforge {

/// A double point of the diagram with its over/under choice.
///
/// over_first is true when the strand passing through pair.t is on top. The sign is +1 when
/// cross(over tangent, under tangent) points out of the page, -1 for the opposite, and 0 only
/// when a tangent vanishes. location and the segment indices are derived from the path.
struct Crossing {
  TimePair pair;
  bool over_first = false;
  int sign = 0;
  std::size_t seg_t = 0;
  std::size_t seg_s = 0;
  Point2 location;

  double over_time() const { return over_first ? pair.t : pair.s; }
  double under_time() const { return over_first ? pair.s : pair.t; }

  bool operator==(const Crossing&) const = default;
};

using CrossingSet = std::vector<Crossing>;

inline int crossing_sign(const BezierPath& path, double over_time, double under_time) {
  const double z = cross(tangent(path, over_time), tangent(path, under_time));
  return z > 0.0 ? 1 : (z < 0.0 ? -1 : 0);
}

/// Builds a crossing from a time pair (in any order) and the time of the strand on top.
inline Crossing make_crossing(const BezierPath& path, TimePair pair, bool over_first) {
  if (pair.t > pair.s) {
    pair = pair.swapped();
    over_first = !over_first;
  }
  Crossing c;
  c.pair = pair;
  c.over_first = over_first;
  c.sign = crossing_sign(path, c.over_time(), c.under_time());
  c.seg_t = path.segment_of(pair.t);
  c.seg_s = path.segment_of(pair.s);
  c.location = evaluate(path, pair.t);
  return c;
}

inline void sort_crossings(CrossingSet& set) {
  std::sort(set.begin(), set.end(), [](const Crossing& a, const Crossing& b) {
    return a.pair.t < b.pair.t || (a.pair.t == b.pair.t && a.pair.s < b.pair.s);
  });
}

/// Knobs of the frame-to-frame tracker. Zero means "derive from the path".
struct TrackerConfig {
  double match_threshold = 0.2;  // time_distance units
  double tolerance = 0.0;        // scene units; default 1e-4 of the box diagonal
  double r3_radius = 0.0;        // scene units; default 20 x tolerance
  double loop_eps = 0.0;         // scene units; default 1e-2 of the box diagonal

  double tolerance_for(const BezierPath& path) const {
    return tolerance > 0.0 ? tolerance : default_tolerance(path);
  }
  double r3_radius_for(const BezierPath& path) const {
    return r3_radius > 0.0 ? r3_radius : 20.0 * tolerance_for(path);
  }
  double loop_eps_for(const BezierPath& path) const {
    return loop_eps > 0.0 ? loop_eps : 1e-2 * bounds(path).diagonal();
  }
};

/// The unit of undo/redo and of frame stepping.
struct DiagramState {
  BezierPath path;
  CrossingSet crossings;
  std::uint64_t revision = 0;

  bool operator==(const DiagramState&) const = default;
};

/// A fresh diagram for a path: every detected crossing starts with boolean false.
inline DiagramState seed_state(const BezierPath& path, const TrackerConfig& cfg = {}) {
  DiagramState st;
  st.path = path;
  for (const TimePair& p : self_intersections(path, cfg.tolerance_for(path)).pairs)
    st.crossings.push_back(make_crossing(path, p, false));
  sort_crossings(st.crossings);
  return st;
}

/// Same geometry, explicit booleans (one per crossing in t order).
inline DiagramState with_booleans(DiagramState st, const std::vector<bool>& over_first) {
  if (over_first.size() != st.crossings.size())
    throw InvalidCommand("boolean count does not match crossing count");
  for (std::size_t i = 0; i < over_first.size(); ++i)
    st.crossings[i] = make_crossing(st.path, st.crossings[i].pair, over_first[i]);
  return st;
}

inline int writhe(const DiagramState& st) {
  int w = 0;
  for (const Crossing& c : st.crossings) w += c.sign;
  return w;
}

}  // namespace knotforge
