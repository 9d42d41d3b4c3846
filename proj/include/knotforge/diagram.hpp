#pragma once

#include <cmath>
#include <cstddef>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "knotforge/geometry.hpp"
#include "knotforge/invariants.hpp"
#include "knotforge/state.hpp"
#include "knotforge/tracker.hpp"

namespace knotforge {

enum class CommandKind {
  DragNode,
  DragHandle,
  InsertNode,
  DeleteNode,
  SmoothNode,
  FlipCrossing,
  Mirror,
  Rotate,
  Translate,
  Reverse,
};

inline std::string_view to_string(CommandKind k) {
  switch (k) {
    case CommandKind::DragNode: return "DragNode";
    case CommandKind::DragHandle: return "DragHandle";
    case CommandKind::InsertNode: return "InsertNode";
    case CommandKind::DeleteNode: return "DeleteNode";
    case CommandKind::SmoothNode: return "SmoothNode";
    case CommandKind::FlipCrossing: return "FlipCrossing";
    case CommandKind::Mirror: return "Mirror";
    case CommandKind::Rotate: return "Rotate";
    case CommandKind::Translate: return "Translate";
    case CommandKind::Reverse: return "Reverse";
  }
  return "?";
}

inline std::optional<CommandKind> command_kind_from(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(CommandKind::Reverse); ++i) {
    const auto k = static_cast<CommandKind>(i);
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

/// Which handle of a node: `In` is the in-handle (c1 of the previous segment), `Out` the
/// out-handle (c0 of the node's own segment).
enum class HandleSide { In, Out };

/// One user edit. Only the fields relevant to `kind` are read.
///
///   DragNode     node, target        anchor moves to target, its handles follow
///   DragHandle   node, side, target
///   InsertNode   time                split the owning segment at global time
///   DeleteNode   node                merge the two segments around the node
///   SmoothNode   node
///   FlipCrossing crossing
///   Mirror       pivot (x only)      reflect across the vertical line x = pivot.x
///   Rotate       angle, pivot        radians, counter-clockwise in scene axes
///   Translate    vector
///   Reverse
///
/// Mirror and Rotate use the box centre when `pivot` is unset.
struct EditCommand {
  CommandKind kind = CommandKind::DragNode;
  std::size_t node = 0;
  std::size_t crossing = 0;
  HandleSide side = HandleSide::Out;
  Point2 target;
  Point2 vector;
  double angle = 0.0;
  double time = 0.0;
  std::optional<Point2> pivot;

  bool operator==(const EditCommand&) const = default;

  static EditCommand drag_node(std::size_t node, Point2 to) {
    EditCommand c;
    c.kind = CommandKind::DragNode;
    c.node = node;
    c.target = to;
    return c;
  }
  static EditCommand drag_handle(std::size_t node, HandleSide side, Point2 to) {
    EditCommand c;
    c.kind = CommandKind::DragHandle;
    c.node = node;
    c.side = side;
    c.target = to;
    return c;
  }
  static EditCommand insert_node(double t) {
    EditCommand c;
    c.kind = CommandKind::InsertNode;
    c.time = t;
    return c;
  }
  static EditCommand delete_node(std::size_t node) {
    EditCommand c;
    c.kind = CommandKind::DeleteNode;
    c.node = node;
    return c;
  }
  static EditCommand smooth_node(std::size_t node) {
    EditCommand c;
    c.kind = CommandKind::SmoothNode;
    c.node = node;
    return c;
  }
  static EditCommand flip_crossing(std::size_t i) {
    EditCommand c;
    c.kind = CommandKind::FlipCrossing;
    c.crossing = i;
    return c;
  }
  static EditCommand mirror(std::optional<Point2> pivot = std::nullopt) {
    EditCommand c;
    c.kind = CommandKind::Mirror;
    c.pivot = pivot;
    return c;
  }
  static EditCommand rotate(double radians, std::optional<Point2> pivot = std::nullopt) {
    EditCommand c;
    c.kind = CommandKind::Rotate;
    c.angle = radians;
    c.pivot = pivot;
    return c;
  }
  static EditCommand translate(Point2 by) {
    EditCommand c;
    c.kind = CommandKind::Translate;
    c.vector = by;
    return c;
  }
  static EditCommand reverse() {
    EditCommand c;
    c.kind = CommandKind::Reverse;
    return c;
  }
};

inline bool is_continuous(CommandKind k) {
  return k == CommandKind::DragNode || k == CommandKind::DragHandle || k == CommandKind::SmoothNode;
}

namespace detail {

inline std::vector<CubicSegment> segments_of(const BezierPath& p) { return p.segments(); }

/// Moves anchor `node` to `to` together with both of its handles.
inline BezierPath move_node(const BezierPath& path, std::size_t node, Point2 to) {
  auto segs = segments_of(path);
  const std::size_t n = segs.size();
  const std::size_t prev = (node + n - 1) % n;
  const Point2 delta = to - segs[node].p0;
  segs[node].p0 = to;
  segs[prev].p1 = to;
  segs[node].c0 += delta;
  segs[prev].c1 += delta;
  return BezierPath(std::move(segs));
}

inline BezierPath move_handle(const BezierPath& path, std::size_t node, HandleSide side, Point2 to) {
  auto segs = segments_of(path);
  const std::size_t n = segs.size();
  if (side == HandleSide::Out) segs[node].c0 = to;
  else segs[(node + n - 1) % n].c1 = to;
  return BezierPath(std::move(segs));
}

/// Handles collinear with the chord between the neighbouring anchors, each a third of the
/// distance to its own neighbour.
inline BezierPath smooth_node(const BezierPath& path, std::size_t node) {
  auto segs = segments_of(path);
  const std::size_t n = segs.size();
  const std::size_t prev = (node + n - 1) % n;
  const Point2 here = segs[node].p0, before = segs[prev].p0, after = segs[node].p1;
  const Point2 chord = after - before;
  const double len = norm(chord);
  if (len == 0.0) return path;
  const Point2 dir = chord / len;
  segs[node].c0 = here + dir * (distance(here, after) / 3.0);
  segs[prev].c1 = here - dir * (distance(here, before) / 3.0);
  return BezierPath(std::move(segs));
}

inline BezierPath map_points(const BezierPath& path, const std::function<Point2(Point2)>& f) {
  auto segs = segments_of(path);
  for (CubicSegment& s : segs) s = {f(s.p0), f(s.c0), f(s.c1), f(s.p1)};
  return BezierPath(std::move(segs));
}

/// Re-labels crossing times through f, keeping the same strand on top.
inline CrossingSet remap_crossings(const CrossingSet& set, const BezierPath& new_path,
                                   const std::function<double(double)>& f) {
  CrossingSet out;
  out.reserve(set.size());
  for (const Crossing& c : set) out.push_back(make_crossing(new_path, {f(c.over_time()), f(c.under_time())}, true));
  sort_crossings(out);
  return out;
}

/// Cubic through p0 and p3 whose handles minimise the squared error to samples[k] at
/// parameter params[k].
inline CubicSegment fit_cubic(Point2 p0, Point2 p3, const std::vector<Point2>& samples,
                              const std::vector<double>& params) {
  double a11 = 0, a12 = 0, a22 = 0;
  Point2 r1, r2;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const double u = params[k], v = 1.0 - u;
    const double b0 = v * v * v, b1 = 3 * v * v * u, b2 = 3 * v * u * u, b3 = u * u * u;
    const Point2 rest = samples[k] - p0 * b0 - p3 * b3;
    a11 += b1 * b1;
    a12 += b1 * b2;
    a22 += b2 * b2;
    r1 += rest * b1;
    r2 += rest * b2;
  }
  const double det = a11 * a22 - a12 * a12;
  const Point2 c0 = (r1 * a22 - r2 * a12) / det;
  const Point2 c1 = (r2 * a11 - r1 * a12) / det;
  return {p0, c0, c1, p3};
}

struct Merge {
  CubicSegment segment;
  double ratio = 0.5;  // parameter of the merged cubic where the removed anchor sits
};

/// Least-squares refit of two consecutive segments as one cubic over 32 samples, 16 per
/// segment. The split ratio is fitted too, so two halves of one cubic merge back exactly.
inline Merge merge_segments(const CubicSegment& a, const CubicSegment& b) {
  constexpr int kPerSide = 16;
  std::vector<Point2> samples;
  for (int k = 0; k < kPerSide; ++k) samples.push_back(a.at(static_cast<double>(k) / kPerSide));
  for (int k = 0; k < kPerSide; ++k) samples.push_back(b.at(static_cast<double>(k + 1) / kPerSide));
  auto fit = [&](double r) {
    std::vector<double> params;
    for (int k = 0; k < kPerSide; ++k) params.push_back(r * k / kPerSide);
    for (int k = 0; k < kPerSide; ++k) params.push_back(r + (1.0 - r) * (k + 1) / kPerSide);
    const CubicSegment c = fit_cubic(a.p0, b.p1, samples, params);
    double err = 0.0;
    for (std::size_t k = 0; k < samples.size(); ++k) {
      const Point2 d = c.at(params[k]) - samples[k];
      err += dot(d, d);
    }
    return std::pair{c, err};
  };
  double best = 0.5, best_err = fit(0.5).second;
  for (int k = 1; k < 20; ++k) {
    const double e = fit(k / 20.0).second;
    if (e < best_err) best = k / 20.0, best_err = e;
  }
  // golden-section refinement inside the best grid cell
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = std::max(0.02, best - 0.05), hi = std::min(0.98, best + 0.05);
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = fit(x1).second, f2 = fit(x2).second;
  for (int it = 0; it < 60; ++it) {
    if (f1 < f2) {
      hi = x2, x2 = x1, f2 = f1, x1 = hi - g * (hi - lo), f1 = fit(x1).second;
    } else {
      lo = x1, x1 = x2, f1 = f2, x2 = lo + g * (hi - lo), f2 = fit(x2).second;
    }
  }
  const double r = 0.5 * (lo + hi);
  const double chosen = fit(r).second < best_err ? r : best;
  return {fit(chosen).first, chosen};
}

}  // namespace detail

enum class Consistency { Consistent, Inconsistent };

/// Compares the Alexander polynomials of two diagrams. Mirror images agree, so this can
/// only ever prove two diagrams different.
inline Consistency recheck_invariant(const DiagramState& before, const DiagramState& after) {
  return alexander_polynomial(before) == alexander_polynomial(after) ? Consistency::Consistent
                                                                     : Consistency::Inconsistent;
}

namespace detail {

/// Accepts a rigidly transformed diagram after re-reading the crossing times from the new
/// geometry. The bookkeeping must already be in the new time frame.
inline FrameResult settle(DiagramState candidate, const TrackerConfig& cfg) {
  const IntersectionReport report = self_intersections(candidate.path, cfg.tolerance_for(candidate.path));
  if (report.tangency_unresolved || report.triple_point || report.pairs.size() != candidate.crossings.size())
    return revert_with(RevertReason::AmbiguousMatch, "transformed crossings disagree with the new geometry");
  const MatchResult m = match_crossings(candidate.crossings, report.pairs, 1e-3);
  if (m.ambiguous || !m.unmatched_new.empty() || !m.unmatched_old.empty())
    return revert_with(RevertReason::AmbiguousMatch, "transformed crossings disagree with the new geometry");
  CrossingSet fresh;
  for (std::size_t i = 0; i < candidate.crossings.size(); ++i) {
    const Match& a = *m.assignment[i];
    const bool over = a.swapped ? !candidate.crossings[i].over_first : candidate.crossings[i].over_first;
    fresh.push_back(make_crossing(candidate.path, report.pairs[a.next], over));
  }
  sort_crossings(fresh);
  candidate.crossings = std::move(fresh);
  return FrameResult{Accepted{std::move(candidate), {}}};
}

inline void require_node(const DiagramState& st, std::size_t node) {
  if (node >= st.path.size())
    throw InvalidCommand("node " + std::to_string(node) + " out of range (" + std::to_string(st.path.size()) + " nodes)");
}

}  // namespace detail

/// Applies one edit.
///
/// Drags and smoothing change the geometry and then go through step_frame. Whole-diagram
/// transforms, insertion and deletion rewrite the crossing bookkeeping alongside the path;
/// a deletion whose refit moves crossings far enough to need births or deaths is only kept
/// when the Alexander polynomial is unchanged. Throws InvalidCommand for bad indices.
inline FrameResult apply(const DiagramState& state, const EditCommand& cmd, const TrackerConfig& cfg = {}) {
  using detail::settle;
  const BezierPath& path = state.path;
  const std::size_t n = path.size();
  auto bump = [&](FrameResult r) {
    if (r.accepted()) std::get<Accepted>(r.outcome).state.revision = state.revision + 1;
    return r;
  };

  switch (cmd.kind) {
    case CommandKind::DragNode:
      detail::require_node(state, cmd.node);
      if (!is_finite(cmd.target)) throw InvalidCommand("non-finite target");
      return bump(step_frame(state, detail::move_node(path, cmd.node, cmd.target), cfg));

    case CommandKind::DragHandle:
      detail::require_node(state, cmd.node);
      if (!is_finite(cmd.target)) throw InvalidCommand("non-finite target");
      return bump(step_frame(state, detail::move_handle(path, cmd.node, cmd.side, cmd.target), cfg));

    case CommandKind::SmoothNode:
      detail::require_node(state, cmd.node);
      return bump(step_frame(state, detail::smooth_node(path, cmd.node), cfg));

    case CommandKind::FlipCrossing: {
      if (cmd.crossing >= state.crossings.size())
        throw InvalidCommand("crossing " + std::to_string(cmd.crossing) + " out of range");
      DiagramState next = state;
      Crossing& c = next.crossings[cmd.crossing];
      c = make_crossing(next.path, c.pair, !c.over_first);
      return bump(FrameResult{Accepted{std::move(next), {}}});
    }

    case CommandKind::Translate: {
      if (!is_finite(cmd.vector)) throw InvalidCommand("non-finite vector");
      DiagramState next = state;
      next.path = detail::map_points(path, [&](Point2 p) { return p + cmd.vector; });
      next.crossings = detail::remap_crossings(state.crossings, next.path, [](double t) { return t; });
      return bump(settle(std::move(next), cfg));
    }

    case CommandKind::Rotate: {
      if (!std::isfinite(cmd.angle)) throw InvalidCommand("non-finite angle");
      const Point2 o = cmd.pivot.value_or(bounds(path).center());
      const double c = std::cos(cmd.angle), s = std::sin(cmd.angle);
      DiagramState next = state;
      next.path = detail::map_points(path, [&](Point2 p) {
        const Point2 d = p - o;
        return o + Point2{c * d.x - s * d.y, s * d.x + c * d.y};
      });
      next.crossings = detail::remap_crossings(state.crossings, next.path, [](double t) { return t; });
      return bump(settle(std::move(next), cfg));
    }

    case CommandKind::Mirror: {
      const double axis = cmd.pivot ? cmd.pivot->x : bounds(path).center().x;
      DiagramState next = state;
      next.path = detail::map_points(path, [&](Point2 p) { return Point2{2.0 * axis - p.x, p.y}; });
      next.crossings = detail::remap_crossings(state.crossings, next.path, [](double t) { return t; });
      return bump(settle(std::move(next), cfg));
    }

    case CommandKind::Reverse: {
      std::vector<CubicSegment> segs;
      segs.reserve(n);
      for (std::size_t i = n; i-- > 0;) segs.push_back(path[i].reversed());
      DiagramState next = state;
      next.path = BezierPath(std::move(segs));
      next.crossings = detail::remap_crossings(state.crossings, next.path, [](double t) { return wrap_time(1.0 - t); });
      return bump(settle(std::move(next), cfg));
    }

    case CommandKind::InsertNode: {
      if (!std::isfinite(cmd.time)) throw InvalidCommand("non-finite time");
      const double at = wrap_time(cmd.time);
      if (const double u = path.local(at).u; u < 1e-9 || u > 1.0 - 1e-9)
        throw InvalidCommand("time " + std::to_string(cmd.time) + " is already a node");
      DiagramState next = state;
      next.path = split_at(path, at);
      next.crossings = detail::remap_crossings(state.crossings, next.path,
                                               [&](double t) { return time_after_split(path, at, t); });
      return bump(settle(std::move(next), cfg));
    }

    case CommandKind::DeleteNode: {
      detail::require_node(state, cmd.node);
      if (n < 2) throw InvalidCommand("cannot delete the only node");
      const std::size_t i = cmd.node, prev = (i + n - 1) % n;
      const detail::Merge fit = detail::merge_segments(path[prev], path[i]);
      const CubicSegment& merged = fit.segment;
      const double ratio = fit.ratio;

      // new layout: merged segment sits where `prev` was; when the seam anchor is deleted
      // the merged segment becomes segment 0
      std::vector<CubicSegment> segs;
      std::function<double(double)> remap;
      const double m = static_cast<double>(n - 1);
      if (i == 0) {
        segs.push_back(merged);
        for (std::size_t k = 1; k + 1 < n; ++k) segs.push_back(path[k]);
        remap = [&path, n, m, r = ratio](double t) {
          const LocalTime lt = path.local(t);
          if (lt.segment == n - 1) return wrap_time(r * lt.u / m);
          if (lt.segment == 0) return wrap_time((r + (1.0 - r) * lt.u) / m);
          return wrap_time((static_cast<double>(lt.segment) + lt.u) / m);
        };
      } else {
        for (std::size_t k = 0; k < n; ++k) {
          if (k == prev) segs.push_back(merged);
          else if (k != i) segs.push_back(path[k]);
        }
        remap = [&path, i, prev, m, r = ratio](double t) {
          const LocalTime lt = path.local(t);
          if (lt.segment == prev) return wrap_time((static_cast<double>(prev) + r * lt.u) / m);
          if (lt.segment == i) return wrap_time((static_cast<double>(prev) + r + (1.0 - r) * lt.u) / m);
          const double k = static_cast<double>(lt.segment > i ? lt.segment - 1 : lt.segment);
          return wrap_time((k + lt.u) / m);
        };
      }
      BezierPath merged_path(std::move(segs));

      // bookkeeping carried onto the merged layout, then stepped onto the refit geometry
      DiagramState carried;
      carried.path = merged_path;
      carried.revision = state.revision;
      for (const Crossing& c : state.crossings) {
        Crossing nc = make_crossing(merged_path, {remap(c.over_time()), remap(c.under_time())}, true);
        nc.location = c.location;
        carried.crossings.push_back(nc);
      }
      sort_crossings(carried.crossings);

      FrameResult r = step_frame(carried, merged_path, cfg);
      if (!r.accepted()) return r;
      if (!r.value().events.empty()) {
        if (recheck_invariant(state, r.value().state) == Consistency::Inconsistent)
          return revert_with(RevertReason::AmbiguousMatch, "deleting the node would change the knot");
      }
      return bump(std::move(r));
    }
  }
  throw InvalidCommand("unknown command");
}

/// A command that undoes `cmd` when applied to the state `cmd` produced. DeleteNode has no
/// exact inverse and yields nullopt.
inline std::optional<EditCommand> inverse_of(const EditCommand& cmd, const DiagramState& before) {
  const BezierPath& path = before.path;
  switch (cmd.kind) {
    case CommandKind::DragNode:
      return EditCommand::drag_node(cmd.node, path.anchor(cmd.node));
    case CommandKind::DragHandle: {
      const std::size_t n = path.size();
      const Point2 old = cmd.side == HandleSide::Out ? path[cmd.node].c0 : path[(cmd.node + n - 1) % n].c1;
      return EditCommand::drag_handle(cmd.node, cmd.side, old);
    }
    case CommandKind::FlipCrossing:
      return cmd;
    case CommandKind::Translate:
      return EditCommand::translate(-cmd.vector);
    case CommandKind::Rotate:
      return EditCommand::rotate(-cmd.angle, cmd.pivot.value_or(bounds(path).center()));
    case CommandKind::Mirror:
      return EditCommand::mirror(cmd.pivot.value_or(bounds(path).center()));
    case CommandKind::Reverse:
      return cmd;
    case CommandKind::InsertNode:
      return EditCommand::delete_node(path.local(wrap_time(cmd.time)).segment + 1);
    case CommandKind::SmoothNode:
    case CommandKind::DeleteNode:
      return std::nullopt;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// history

/// Bounded snapshot history. Holds up to depth+1 snapshots, so `depth` undos are possible.
class History {
 public:
  explicit History(DiagramState initial, std::size_t depth = 256) : depth_(depth) {
    snapshots_.push_back(std::move(initial));
  }

  const DiagramState& current() const { return snapshots_[cursor_]; }
  std::size_t depth() const { return depth_; }
  bool can_undo() const { return cursor_ > 0; }
  bool can_redo() const { return cursor_ + 1 < snapshots_.size(); }

  void push(DiagramState s) {
    snapshots_.erase(snapshots_.begin() + static_cast<std::ptrdiff_t>(cursor_ + 1), snapshots_.end());
    snapshots_.push_back(std::move(s));
    if (snapshots_.size() > depth_ + 1) snapshots_.pop_front();
    cursor_ = snapshots_.size() - 1;
  }

  const DiagramState& undo() {
    if (!can_undo()) throw NothingToUndo();
    return snapshots_[--cursor_];
  }

  const DiagramState& redo() {
    if (!can_redo()) throw NothingToRedo();
    return snapshots_[++cursor_];
  }

 private:
  std::deque<DiagramState> snapshots_;
  std::size_t cursor_ = 0;
  std::size_t depth_;
};

/// One editing session: the current diagram, its history and the tracker settings.
class Session {
 public:
  explicit Session(DiagramState initial, TrackerConfig cfg = {}, std::size_t depth = 256)
      : history_(std::move(initial), depth), cfg_(cfg) {}

  const DiagramState& state() const { return history_.current(); }
  const TrackerConfig& config() const { return cfg_; }
  History& history() { return history_; }

  /// Accepted results become the current state; reverted ones leave it untouched.
  FrameResult apply(const EditCommand& cmd) {
    FrameResult r = knotforge::apply(state(), cmd, cfg_);
    if (r.accepted()) history_.push(r.value().state);
    return r;
  }

  const DiagramState& undo() { return history_.undo(); }
  const DiagramState& redo() { return history_.redo(); }

 private:
  History history_;
  TrackerConfig cfg_;
};

}  // namespace knotforge
