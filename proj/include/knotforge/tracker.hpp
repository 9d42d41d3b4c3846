#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "knotforge/intersect.hpp"
#include "knotforge/state.hpp"

namespace knotforge {

// ---------------------------------------------------------------------------
// distances

/// Periodic time distance sin(pi|dt|) + sin(pi|ds|); zero iff the pairs agree modulo 1.
inline double time_distance(TimePair a, TimePair b) {
  return std::sin(std::numbers::pi * std::abs(a.t - b.t)) + std::sin(std::numbers::pi * std::abs(a.s - b.s));
}

/// Spatial distance of the two crossing locations. Diagnostics only; it collapses during R3.
inline double euclidean_distance(const BezierPath& path, TimePair a, TimePair b) {
  return distance(evaluate(path, a.t), evaluate(path, b.t));
}

/// time_distance against either labelling of the candidate. The swapped labelling is the
/// only way a pair whose endpoint crossed the 0/1 seam can stay close.
inline double oriented_distance(TimePair prev, TimePair next, bool& swapped) {
  const double direct = time_distance(prev, next);
  const double flipped = time_distance(prev, next.swapped());
  swapped = flipped < direct;
  return swapped ? flipped : direct;
}

// ---------------------------------------------------------------------------
// matching

struct Match {
  std::size_t next = 0;
  bool swapped = false;
  double distance = 0.0;
};

struct MatchResult {
  std::vector<std::optional<Match>> assignment;  // indexed like prev
  std::vector<std::size_t> unmatched_new;
  std::vector<std::size_t> unmatched_old;
  bool ambiguous = false;
};

/// Greedy nearest-neighbour assignment of previous crossings to new time pairs, in ascending
/// order of the previous t. Each new pair is claimed at most once and only below threshold.
inline MatchResult match_crossings(const CrossingSet& prev, const std::vector<TimePair>& next,
                                   double threshold = 0.2) {
  constexpr double kTie = 1e-12;
  MatchResult out;
  out.assignment.assign(prev.size(), std::nullopt);
  std::vector<bool> claimed(next.size(), false);

  std::vector<std::size_t> order(prev.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return prev[a].pair.t < prev[b].pair.t; });

  auto nearest = [&](std::size_t i, bool only_free) {
    std::optional<Match> best;
    for (std::size_t j = 0; j < next.size(); ++j) {
      if (only_free && claimed[j]) continue;
      bool sw = false;
      const double d = oriented_distance(prev[i].pair, next[j], sw);
      if (!best || d < best->distance) best = Match{j, sw, d};
    }
    return best;
  };

  for (std::size_t i : order) {
    const std::optional<Match> best = nearest(i, true);
    if (!best || !(best->distance < threshold)) continue;
    for (std::size_t k = 0; k < prev.size(); ++k) {
      if (k == i) continue;
      bool sw = false;
      const double dk = oriented_distance(prev[k].pair, next[best->next], sw);
      if (std::abs(dk - best->distance) > kTie) continue;
      const std::optional<Match> own = nearest(k, false);
      if (own && own->distance + kTie >= dk) out.ambiguous = true;
    }
    claimed[best->next] = true;
    out.assignment[i] = best;
  }
  for (std::size_t j = 0; j < next.size(); ++j)
    if (!claimed[j]) out.unmatched_new.push_back(j);
  for (std::size_t i = 0; i < prev.size(); ++i)
    if (!out.assignment[i]) out.unmatched_old.push_back(i);
  return out;
}

/// True when an endpoint of the crossing hopped between the last and the first segment
/// (crossing gamma(0) = gamma(1)) while its location moved less than eps. `matched` is the
/// successor labelled consistently with prev, i.e. matched.t continues prev.pair.t.
inline bool detect_loop_around(const Crossing& prev, TimePair matched, const BezierPath& path, double eps) {
  const std::size_t n = path.size();
  auto seam_jump = [&](std::size_t old_seg, double old_time, double new_time) {
    if (n == 1) return std::abs(old_time - new_time) > 0.5;
    const std::size_t new_seg = path.segment_of(new_time);
    return (old_seg == n - 1 && new_seg == 0) || (old_seg == 0 && new_seg == n - 1);
  };
  auto stayed = [&](double new_time) { return distance(evaluate(path, new_time), prev.location) < eps; };
  if (seam_jump(prev.seg_t, prev.pair.t, matched.t) && stayed(matched.t)) return true;
  if (seam_jump(prev.seg_s, prev.pair.s, matched.s) && stayed(matched.s)) return true;
  return false;
}

// ---------------------------------------------------------------------------
// strand combinatorics

namespace detail {

struct Endpoint {
  double time;
  std::size_t owner;
  bool is_t;
};

inline std::vector<Endpoint> endpoints_of(const std::vector<TimePair>& pairs) {
  std::vector<Endpoint> e;
  e.reserve(2 * pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    e.push_back({pairs[i].t, i, true});
    e.push_back({pairs[i].s, i, false});
  }
  return e;
}

inline double forward_gap(double from, double to) { return wrap_time(to - from); }

/// Length of the shorter arc from x to y that passes no other endpoint, if any.
inline std::optional<double> free_arc(const std::vector<Endpoint>& all, const Endpoint& x, const Endpoint& y) {
  auto is_self = [&](const Endpoint& e) {
    return (e.owner == x.owner && e.is_t == x.is_t) || (e.owner == y.owner && e.is_t == y.is_t);
  };
  std::optional<double> best;
  for (const auto& [a, b] : {std::pair{x, y}, std::pair{y, x}}) {
    const double len = forward_gap(a.time, b.time);
    const bool blocked = std::any_of(all.begin(), all.end(), [&](const Endpoint& e) {
      if (is_self(e)) return false;
      const double g = forward_gap(a.time, e.time);
      return g > 0.0 && g < len;
    });
    if (!blocked && (!best || len < *best)) best = len;
  }
  return best;
}

enum class Pairing { Straight, Crossed };

/// Whether crossings a and b bound a bigon: each of the two strands running between them
/// has an arc free of other endpoints. Straight pairs a.t with b.t, Crossed pairs a.t with b.s.
inline std::optional<Pairing> bigon_pairing(const std::vector<TimePair>& pairs, std::size_t a, std::size_t b) {
  const auto all = endpoints_of(pairs);
  const Endpoint at{pairs[a].t, a, true}, as{pairs[a].s, a, false};
  const Endpoint bt{pairs[b].t, b, true}, bs{pairs[b].s, b, false};
  std::optional<Pairing> best;
  double best_len = 0.0;
  auto consider = [&](Pairing p, const Endpoint& x1, const Endpoint& y1, const Endpoint& x2, const Endpoint& y2) {
    const auto l1 = free_arc(all, x1, y1), l2 = free_arc(all, x2, y2);
    if (!l1 || !l2) return;
    if (!best || *l1 + *l2 < best_len) {
      best = p;
      best_len = *l1 + *l2;
    }
  };
  consider(Pairing::Straight, at, bt, as, bs);
  consider(Pairing::Crossed, at, bs, as, bt);
  return best;
}

/// A crossing whose two endpoints are consecutive along the curve (an R1 kink).
inline bool is_kink(const std::vector<TimePair>& pairs, std::size_t c) {
  const auto all = endpoints_of(pairs);
  return free_arc(all, {pairs[c].t, c, true}, {pairs[c].s, c, false}).has_value();
}

}  // namespace detail

namespace detail {

/// How six endpoint times split into three short strands. Strand A holds endpoint x of the
/// first crossing and y of the second, B the other end of the first and z of the third, C
/// the remaining ends of the second and third (0 = t, 1 = s).
struct TripleStrands {
  int x = 0, y = 0, z = 0;

  std::array<std::array<std::pair<int, int>, 2>, 3> strands() const {
    return {{{{{0, x}, {1, y}}}, {{{0, 1 - x}, {2, z}}}, {{{1, 1 - y}, {2, 1 - z}}}}};
  }
};

inline double end_time(const TimePair& p, int end) { return end == 0 ? p.t : p.s; }

/// The grouping whose strands are shortest, provided each strand is shorter than the gap
/// between any two strands.
inline std::optional<TripleStrands> triple_strands(const std::array<TimePair, 3>& pairs) {
  std::optional<TripleStrands> best;
  double best_spread = 0.0;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int z = 0; z < 2; ++z) {
        const TripleStrands g{x, y, z};
        const auto strands = g.strands();
        auto time = [&](std::pair<int, int> e) { return end_time(pairs[e.first], e.second); };
        double within = 0.0;
        for (const auto& st : strands) within = std::max(within, cyclic_gap(time(st[0]), time(st[1])));
        double across = 1.0;
        for (int p = 0; p < 3; ++p)
          for (int q = p + 1; q < 3; ++q)
            for (const auto& e : strands[p])
              for (const auto& f : strands[q]) across = std::min(across, cyclic_gap(time(e), time(f)));
        if (!(within < across)) continue;
        if (!best || within < best_spread) {
          best = g;
          best_spread = within;
        }
      }
  return best;
}

/// Signed cyclic difference b - a in (-1/2, 1/2].
inline double signed_gap(double a, double b) {
  const double d = wrap_time(b - a);
  return d > 0.5 ? d - 1.0 : d;
}

}  // namespace detail

/// Whether three pairwise-crossing strands form a tangle, i.e. the goes-over relation among
/// them is cyclic and no strand lies above both others. Throws MalformedTriple when the six
/// endpoint times cannot be grouped into three short strands.
inline bool is_tangle(const Crossing& c1, const Crossing& c2, const Crossing& c3) {
  const auto g = detail::triple_strands({c1.pair, c2.pair, c3.pair});
  if (!g) throw MalformedTriple("crossing endpoints do not form three pairwise-crossing strands");
  const std::array<const Crossing*, 3> cs{&c1, &c2, &c3};
  auto over_end = [&](int c) { return cs[c]->over_first ? 0 : 1; };

  // wins[k]: how many of its two crossings strand k is on top at
  std::array<int, 3> wins{0, 0, 0};
  wins[over_end(0) == g->x ? 0 : 1]++;
  wins[over_end(1) == g->y ? 0 : 2]++;
  wins[over_end(2) == g->z ? 1 : 2]++;
  return wins[0] == 1 && wins[1] == 1 && wins[2] == 1;
}

/// Whether a strand of the triple slid across the crossing of the other two between the
/// frames: along some strand the two crossings it carries swapped order. `next` holds the
/// matched successors labelled like `prev`.
inline bool passed_triple(const std::array<TimePair, 3>& prev, const std::array<TimePair, 3>& next) {
  const auto g = detail::triple_strands(prev);
  if (!g) return false;
  for (const auto& st : g->strands()) {
    const double before = detail::signed_gap(detail::end_time(prev[st[0].first], st[0].second),
                                             detail::end_time(prev[st[1].first], st[1].second));
    const double after = detail::signed_gap(detail::end_time(next[st[0].first], st[0].second),
                                            detail::end_time(next[st[1].first], st[1].second));
    if (before * after < 0.0) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// frame stepping

enum class EventKind { R1Birth, R1Death, R2Birth, R2Death, R3Pass, LoopAround };

inline std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::R1Birth: return "R1Birth";
    case EventKind::R1Death: return "R1Death";
    case EventKind::R2Birth: return "R2Birth";
    case EventKind::R2Death: return "R2Death";
    case EventKind::R3Pass: return "R3Pass";
    case EventKind::LoopAround: return "LoopAround";
  }
  return "?";
}

/// Deaths index the previous crossing set; every other kind indexes the new one.
struct FrameEvent {
  EventKind kind;
  std::vector<std::size_t> crossings;

  bool operator==(const FrameEvent&) const = default;
};

enum class RevertReason { IllegalR2, IllegalR3, AmbiguousMatch, TriplePoint };

inline std::string_view to_string(RevertReason r) {
  switch (r) {
    case RevertReason::IllegalR2: return "IllegalR2";
    case RevertReason::IllegalR3: return "IllegalR3";
    case RevertReason::AmbiguousMatch: return "AmbiguousMatch";
    case RevertReason::TriplePoint: return "TriplePoint";
  }
  return "?";
}

struct Accepted {
  DiagramState state;
  std::vector<FrameEvent> events;
};

struct Reverted {
  RevertReason reason;
  std::string detail;
};

struct FrameResult {
  std::variant<Accepted, Reverted> outcome;

  bool accepted() const { return std::holds_alternative<Accepted>(outcome); }
  const Accepted& value() const { return std::get<Accepted>(outcome); }
  const Reverted& revert() const { return std::get<Reverted>(outcome); }
};

inline FrameResult revert_with(RevertReason r, std::string detail) {
  return FrameResult{Reverted{r, std::move(detail)}};
}

/// Carries the previous diagram onto a new path.
///
/// Pipeline: detect crossings, match them greedily under time_distance, undo seam
/// relabelling, classify unmatched crossings as R1/R2 births and deaths, guard against
/// sliding a strand through a tangle, and rebuild the crossing set with fresh signs.
/// Any refusal returns Reverted and leaves prev untouched.
inline FrameResult step_frame(const DiagramState& prev, const BezierPath& new_path, const TrackerConfig& cfg = {}) {
  using detail::Pairing;
  const double tol = cfg.tolerance_for(new_path);
  const IntersectionReport report = self_intersections(new_path, tol);
  if (report.triple_point) return revert_with(RevertReason::TriplePoint, "three crossings coincide");
  if (report.tangency_unresolved) return revert_with(RevertReason::AmbiguousMatch, "unresolved tangency");
  const std::vector<TimePair>& next = report.pairs;

  const MatchResult m = match_crossings(prev.crossings, next, cfg.match_threshold);
  if (m.ambiguous) return revert_with(RevertReason::AmbiguousMatch, "tied assignment");
  const auto& births = m.unmatched_new;
  const auto& deaths = m.unmatched_old;
  if (births.size() > 2 || deaths.size() > 2 || (!births.empty() && !deaths.empty()))
    return revert_with(RevertReason::AmbiguousMatch, "crossings changed beyond a single Reidemeister move");

  std::vector<FrameEvent> events;
  std::vector<std::optional<bool>> over(next.size());
  const double eps = cfg.loop_eps_for(new_path);

  for (std::size_t i = 0; i < prev.crossings.size(); ++i) {
    const auto& a = m.assignment[i];
    if (!a) continue;
    bool b = prev.crossings[i].over_first;
    if (a->swapped) {
      if (!detect_loop_around(prev.crossings[i], next[a->next].swapped(), new_path, eps))
        return revert_with(RevertReason::AmbiguousMatch, "endpoint jumped across the seam");
      b = !b;
      events.push_back({EventKind::LoopAround, {a->next}});
    }
    over[a->next] = b;
  }

  if (births.size() == 1) {
    over[births[0]] = false;
    events.push_back({EventKind::R1Birth, {births[0]}});
  } else if (births.size() == 2) {
    const std::size_t a = births[0], b = births[1];
    if (const auto p = detail::bigon_pairing(next, a, b)) {
      // a's s-strand is on top; keep the same strand on top at b
      over[a] = false;
      over[b] = *p == Pairing::Crossed;
      events.push_back({EventKind::R2Birth, {a, b}});
    } else if (detail::is_kink(next, a) && detail::is_kink(next, b)) {
      over[a] = over[b] = false;
      events.push_back({EventKind::R1Birth, {a}});
      events.push_back({EventKind::R1Birth, {b}});
    } else {
      return revert_with(RevertReason::AmbiguousMatch, "two unrelated crossings appeared");
    }
  }

  if (deaths.size() == 1) {
    events.push_back({EventKind::R1Death, {deaths[0]}});
  } else if (deaths.size() == 2) {
    std::vector<TimePair> old_pairs;
    for (const Crossing& c : prev.crossings) old_pairs.push_back(c.pair);
    const std::size_t a = deaths[0], b = deaths[1];
    if (const auto p = detail::bigon_pairing(old_pairs, a, b)) {
      const bool fa = prev.crossings[a].over_first, fb = prev.crossings[b].over_first;
      const bool same_strand_on_top = *p == Pairing::Straight ? fa == fb : fa != fb;
      if (!same_strand_on_top)
        return revert_with(RevertReason::IllegalR2, "bigon strands alternate over and under");
      events.push_back({EventKind::R2Death, {a, b}});
    } else if (detail::is_kink(old_pairs, a) && detail::is_kink(old_pairs, b)) {
      events.push_back({EventKind::R1Death, {a}});
      events.push_back({EventKind::R1Death, {b}});
    } else {
      return revert_with(RevertReason::AmbiguousMatch, "two unrelated crossings vanished");
    }
  }

  // R3 guard: three clustered crossings whose strands changed order slid a strand across
  const double r3 = cfg.r3_radius_for(new_path);
  const std::size_t n = prev.crossings.size();
  auto clustered = [&](Point2 a, Point2 b, Point2 c) {
    return distance(a, b) <= r3 && distance(b, c) <= r3 && distance(a, c) <= r3;
  };
  auto aligned = [&](std::size_t i) {
    const Match& a = *m.assignment[i];
    return a.swapped ? next[a.next].swapped() : next[a.next];
  };
  std::vector<Point2> moved(n);
  for (std::size_t i = 0; i < n; ++i)
    if (m.assignment[i]) moved[i] = evaluate(new_path, next[m.assignment[i]->next].t);
  for (std::size_t i = 0; i < n; ++i) {
    if (!m.assignment[i]) continue;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!m.assignment[j]) continue;
      for (std::size_t k = j + 1; k < n; ++k) {
        if (!m.assignment[k]) continue;
        if (!clustered(prev.crossings[i].location, prev.crossings[j].location, prev.crossings[k].location) &&
            !clustered(moved[i], moved[j], moved[k]))
          continue;
        const std::array<TimePair, 3> before{prev.crossings[i].pair, prev.crossings[j].pair, prev.crossings[k].pair};
        if (!passed_triple(before, {aligned(i), aligned(j), aligned(k)})) continue;
        bool tangle = false;
        try {
          tangle = is_tangle(prev.crossings[i], prev.crossings[j], prev.crossings[k]);
        } catch (const MalformedTriple&) {
          continue;
        }
        if (tangle) return revert_with(RevertReason::IllegalR3, "strand passed through a tangle");
        std::vector<std::size_t> idx{m.assignment[i]->next, m.assignment[j]->next, m.assignment[k]->next};
        std::sort(idx.begin(), idx.end());
        events.push_back({EventKind::R3Pass, idx});
      }
    }
  }

  Accepted acc;
  acc.state.path = new_path;
  acc.state.revision = prev.revision;
  acc.state.crossings.reserve(next.size());
  for (std::size_t j = 0; j < next.size(); ++j) acc.state.crossings.push_back(make_crossing(new_path, next[j], *over[j]));
  sort_crossings(acc.state.crossings);
  std::stable_sort(events.begin(), events.end(), [](const FrameEvent& a, const FrameEvent& b) {
    return a.kind < b.kind || (a.kind == b.kind && a.crossings < b.crossings);
  });
  acc.events = std::move(events);
  return FrameResult{std::move(acc)};
}

}  // namespace knotforge
