#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "knotforge/diagram.hpp"
#include "knotforge/errors.hpp"
#include "knotforge/render.hpp"
#include "knotforge/state.hpp"
#include "knotforge/tracker.hpp"

namespace knotforge {

using Json = nlohmann::json;

/// A diagram file: the state plus how to draw it.
struct Document {
  DiagramState state;
  Style style;
};

/// A diagram file with a command stream for headless replay.
struct Trace {
  Document initial;
  std::vector<EditCommand> commands;
  TrackerConfig config;
};

namespace detail {

inline std::string child(const std::string& ptr, std::string_view key) { return ptr + "/" + std::string(key); }
inline std::string child(const std::string& ptr, std::size_t i) { return ptr + "/" + std::to_string(i); }

inline const Json& field(const Json& obj, std::string_view key, const std::string& ptr) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaViolation(child(ptr, key), "missing");
  return *it;
}

inline void only_keys(const Json& obj, std::initializer_list<std::string_view> allowed, const std::string& ptr) {
  if (!obj.is_object()) throw SchemaViolation(ptr.empty() ? "/" : ptr, "expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (std::string_view a : allowed) ok = ok || it.key() == a;
    if (!ok) throw SchemaViolation(child(ptr, it.key()), "unknown field");
  }
}

inline double number(const Json& j, const std::string& ptr) {
  if (!j.is_number()) throw SchemaViolation(ptr, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw SchemaViolation(ptr, "not finite");
  return v;
}

inline std::size_t index(const Json& j, const std::string& ptr) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    throw SchemaViolation(ptr, "expected a non-negative integer");
  return j.get<std::size_t>();
}

inline bool boolean(const Json& j, const std::string& ptr) {
  if (!j.is_boolean()) throw SchemaViolation(ptr, "expected true or false");
  return j.get<bool>();
}

inline std::string text(const Json& j, const std::string& ptr) {
  if (!j.is_string()) throw SchemaViolation(ptr, "expected a string");
  return j.get<std::string>();
}

inline Point2 point(const Json& j, const std::string& ptr) {
  if (!j.is_array() || j.size() != 2) throw SchemaViolation(ptr, "expected [x, y]");
  return {number(j[0], child(ptr, 0)), number(j[1], child(ptr, 1))};
}

inline Json point_json(Point2 p) { return Json::array({p.x, p.y}); }

inline Json style_json(const Style& s) {
  return {{"stroke_width", s.stroke_width}, {"foreground", s.foreground}, {"background", s.background},
          {"A", s.A},                       {"B", s.B},                   {"gap_ratio", s.gap_ratio}};
}

inline Style parse_style(const Json& j, const std::string& ptr) {
  only_keys(j, {"stroke_width", "foreground", "background", "A", "B", "gap_ratio"}, ptr);
  Style s;
  if (j.contains("stroke_width")) s.stroke_width = number(j["stroke_width"], child(ptr, "stroke_width"));
  if (j.contains("foreground")) s.foreground = text(j["foreground"], child(ptr, "foreground"));
  if (j.contains("background")) s.background = text(j["background"], child(ptr, "background"));
  if (j.contains("A")) s.A = number(j["A"], child(ptr, "A"));
  if (j.contains("B")) s.B = number(j["B"], child(ptr, "B"));
  if (j.contains("gap_ratio")) s.gap_ratio = number(j["gap_ratio"], child(ptr, "gap_ratio"));
  if (!(s.stroke_width > 0.0)) throw SchemaViolation(child(ptr, "stroke_width"), "must be positive");
  if (!(s.A >= 0.0)) throw SchemaViolation(child(ptr, "A"), "must not be negative");
  if (!(s.B > 0.0)) throw SchemaViolation(child(ptr, "B"), "must be positive");
  if (!(s.gap_ratio >= 0.0)) throw SchemaViolation(child(ptr, "gap_ratio"), "must not be negative");
  return s;
}

struct StoredCrossing {
  TimePair pair;
  bool over_first = false;
  std::optional<int> sign;
};

struct ParsedDiagram {
  BezierPath path;
  std::vector<StoredCrossing> crossings;
  std::uint64_t revision = 0;
  Style style;
};

inline ParsedDiagram parse_diagram(const Json& root, std::initializer_list<std::string_view> extra_keys) {
  std::vector<std::string_view> keys{"version", "segments", "crossings", "style", "revision"};
  keys.insert(keys.end(), extra_keys.begin(), extra_keys.end());
  if (!root.is_object()) throw SchemaViolation("/", "expected an object");
  for (auto it = root.begin(); it != root.end(); ++it)
    if (std::find(keys.begin(), keys.end(), it.key()) == keys.end())
      throw SchemaViolation("/" + it.key(), "unknown field");

  const Json& version = field(root, "version", "");
  if (!version.is_number_integer() || version.get<long long>() != 1) throw SchemaViolation("/version", "must be 1");

  ParsedDiagram out;
  const Json& segs = field(root, "segments", "");
  if (!segs.is_array() || segs.empty()) throw SchemaViolation("/segments", "expected a non-empty array");
  std::vector<CubicSegment> segments;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const std::string ptr = child("/segments", i);
    only_keys(segs[i], {"p0", "c0", "c1", "p1"}, ptr);
    segments.push_back({point(field(segs[i], "p0", ptr), child(ptr, "p0")),
                        point(field(segs[i], "c0", ptr), child(ptr, "c0")),
                        point(field(segs[i], "c1", ptr), child(ptr, "c1")),
                        point(field(segs[i], "p1", ptr), child(ptr, "p1"))});
  }
  for (std::size_t i = 0; i < segments.size(); ++i)
    if (!(segments[i].p1 == segments[(i + 1) % segments.size()].p0))
      throw SchemaViolation(child(child("/segments", i), "p1"), "does not match the next segment's p0");
  out.path = BezierPath(std::move(segments));

  const Json& cs = field(root, "crossings", "");
  if (!cs.is_array()) throw SchemaViolation("/crossings", "expected an array");
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const std::string ptr = child("/crossings", i);
    only_keys(cs[i], {"t", "s", "over_first", "sign"}, ptr);
    StoredCrossing c;
    c.pair.t = number(field(cs[i], "t", ptr), child(ptr, "t"));
    c.pair.s = number(field(cs[i], "s", ptr), child(ptr, "s"));
    c.over_first = boolean(field(cs[i], "over_first", ptr), child(ptr, "over_first"));
    if (!(c.pair.t >= 0.0 && c.pair.t < 1.0)) throw SchemaViolation(child(ptr, "t"), "outside [0, 1)");
    if (!(c.pair.s >= 0.0 && c.pair.s < 1.0)) throw SchemaViolation(child(ptr, "s"), "outside [0, 1)");
    if (!(c.pair.t < c.pair.s)) throw SchemaViolation(child(ptr, "t"), "must be less than s");
    if (cs[i].contains("sign")) {
      const Json& sj = cs[i]["sign"];
      if (!sj.is_number_integer() || std::abs(sj.get<long long>()) > 1) throw SchemaViolation(child(ptr, "sign"), "expected -1, 0 or 1");
      c.sign = static_cast<int>(sj.get<long long>());
    }
    if (i > 0 && !(out.crossings.back().pair.t < c.pair.t || (out.crossings.back().pair.t == c.pair.t && out.crossings.back().pair.s < c.pair.s)))
      throw SchemaViolation(child(ptr, "t"), "crossings must be sorted by t");
    out.crossings.push_back(c);
  }

  if (root.contains("revision")) out.revision = index(root["revision"], "/revision");
  if (root.contains("style")) out.style = parse_style(root["style"], "/style");
  return out;
}

inline Json diagram_json(const DiagramState& state, const Style& style) {
  Json segs = Json::array();
  for (const CubicSegment& s : state.path)
    segs.push_back({{"p0", point_json(s.p0)}, {"c0", point_json(s.c0)}, {"c1", point_json(s.c1)}, {"p1", point_json(s.p1)}});
  Json cs = Json::array();
  for (const Crossing& c : state.crossings)
    cs.push_back({{"t", c.pair.t}, {"s", c.pair.s}, {"over_first", c.over_first}, {"sign", c.sign}});
  return {{"version", 1}, {"segments", segs}, {"crossings", cs}, {"style", style_json(style)}, {"revision", state.revision}};
}

inline Json parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SchemaViolation("/", std::string("not valid JSON: ") + e.what());
  }
}

}  // namespace detail

/// Builds the state from stored crossings, refusing files whose crossings drifted from the
/// geometry. Recomputed crossings must match the stored ones one to one, each endpoint
/// within `drift` in time.
inline DiagramState restore_state(const detail::ParsedDiagram& d, double drift = 1e-3) {
  DiagramState st;
  st.path = d.path;
  st.revision = d.revision;
  for (const auto& c : d.crossings) st.crossings.push_back(make_crossing(st.path, c.pair, c.over_first));

  const IntersectionReport fresh = self_intersections(st.path);
  if (fresh.pairs.size() != st.crossings.size())
    throw ImportMismatch("file lists " + std::to_string(st.crossings.size()) + " crossings but the path has " +
                         std::to_string(fresh.pairs.size()) + "; repair_import recomputes them and keeps the nearest booleans");
  for (std::size_t i = 0; i < st.crossings.size(); ++i) {
    const TimePair& a = st.crossings[i].pair;
    const TimePair& b = fresh.pairs[i];
    if (detail::cyclic_gap(a.t, b.t) > drift || detail::cyclic_gap(a.s, b.s) > drift)
      throw ImportMismatch("crossing " + std::to_string(i) + " is not where the path crosses itself" +
                           "; repair_import recomputes them and keeps the nearest booleans");
    if (d.crossings[i].sign && *d.crossings[i].sign != st.crossings[i].sign)
      throw ImportMismatch("crossing " + std::to_string(i) + " has a stored sign that disagrees with the path");
  }
  return st;
}

inline std::string to_json(const DiagramState& state, const Style& style = {}) {
  return detail::diagram_json(state, style).dump(2) + "\n";
}

inline Document parse_document(const std::string& text) {
  const Json root = detail::parse_text(text);
  const detail::ParsedDiagram d = detail::parse_diagram(root, {});
  return {restore_state(d), d.style};
}

inline DiagramState from_json(const std::string& text) { return parse_document(text).state; }

/// Recomputes crossings from the stored path and gives each one the boolean of the nearest
/// stored crossing (false when none is near).
inline DiagramState repair_import(const std::string& text) {
  const Json root = detail::parse_text(text);
  const detail::ParsedDiagram d = detail::parse_diagram(root, {"commands", "config"});
  CrossingSet stored;
  for (const auto& c : d.crossings) stored.push_back(make_crossing(d.path, c.pair, c.over_first));
  DiagramState st = seed_state(d.path);
  st.revision = d.revision;
  std::vector<TimePair> pairs;
  for (const Crossing& c : st.crossings) pairs.push_back(c.pair);
  const MatchResult m = match_crossings(stored, pairs, 2.0);
  for (std::size_t i = 0; i < stored.size(); ++i) {
    if (!m.assignment[i]) continue;
    const Match& a = *m.assignment[i];
    const bool over = a.swapped ? !stored[i].over_first : stored[i].over_first;
    st.crossings[a.next] = make_crossing(st.path, pairs[a.next], over);
  }
  return st;
}

// ---------------------------------------------------------------------------
// commands and traces

inline Json command_json(const EditCommand& c) {
  using detail::point_json;
  Json j{{"kind", std::string(to_string(c.kind))}};
  switch (c.kind) {
    case CommandKind::DragNode: j["node"] = c.node; j["to"] = point_json(c.target); break;
    case CommandKind::DragHandle:
      j["node"] = c.node;
      j["side"] = c.side == HandleSide::In ? "in" : "out";
      j["to"] = point_json(c.target);
      break;
    case CommandKind::InsertNode: j["t"] = c.time; break;
    case CommandKind::DeleteNode:
    case CommandKind::SmoothNode: j["node"] = c.node; break;
    case CommandKind::FlipCrossing: j["crossing"] = c.crossing; break;
    case CommandKind::Mirror:
      if (c.pivot) j["axis_x"] = c.pivot->x;
      break;
    case CommandKind::Rotate:
      j["angle"] = c.angle;
      if (c.pivot) j["center"] = point_json(*c.pivot);
      break;
    case CommandKind::Translate: j["by"] = point_json(c.vector); break;
    case CommandKind::Reverse: break;
  }
  return j;
}

inline EditCommand parse_command(const Json& j, const std::string& ptr) {
  using namespace detail;
  if (!j.is_object()) throw SchemaViolation(ptr, "expected an object");
  const std::string kind_name = text(field(j, "kind", ptr), child(ptr, "kind"));
  const auto kind = command_kind_from(kind_name);
  if (!kind) throw SchemaViolation(child(ptr, "kind"), "unknown command '" + kind_name + "'");
  auto pt = [&](std::string_view key) { return point(field(j, key, ptr), child(ptr, key)); };
  auto idx = [&](std::string_view key) { return index(field(j, key, ptr), child(ptr, key)); };
  switch (*kind) {
    case CommandKind::DragNode:
      only_keys(j, {"kind", "node", "to"}, ptr);
      return EditCommand::drag_node(idx("node"), pt("to"));
    case CommandKind::DragHandle: {
      only_keys(j, {"kind", "node", "side", "to"}, ptr);
      const std::string side = text(field(j, "side", ptr), child(ptr, "side"));
      if (side != "in" && side != "out") throw SchemaViolation(child(ptr, "side"), "expected \"in\" or \"out\"");
      return EditCommand::drag_handle(idx("node"), side == "in" ? HandleSide::In : HandleSide::Out, pt("to"));
    }
    case CommandKind::InsertNode:
      only_keys(j, {"kind", "t"}, ptr);
      return EditCommand::insert_node(number(field(j, "t", ptr), child(ptr, "t")));
    case CommandKind::DeleteNode:
      only_keys(j, {"kind", "node"}, ptr);
      return EditCommand::delete_node(idx("node"));
    case CommandKind::SmoothNode:
      only_keys(j, {"kind", "node"}, ptr);
      return EditCommand::smooth_node(idx("node"));
    case CommandKind::FlipCrossing:
      only_keys(j, {"kind", "crossing"}, ptr);
      return EditCommand::flip_crossing(idx("crossing"));
    case CommandKind::Mirror: {
      only_keys(j, {"kind", "axis_x"}, ptr);
      if (!j.contains("axis_x")) return EditCommand::mirror();
      return EditCommand::mirror(Point2{number(j["axis_x"], child(ptr, "axis_x")), 0.0});
    }
    case CommandKind::Rotate: {
      only_keys(j, {"kind", "angle", "center"}, ptr);
      const double a = number(field(j, "angle", ptr), child(ptr, "angle"));
      if (!j.contains("center")) return EditCommand::rotate(a);
      return EditCommand::rotate(a, pt("center"));
    }
    case CommandKind::Translate:
      only_keys(j, {"kind", "by"}, ptr);
      return EditCommand::translate(pt("by"));
    case CommandKind::Reverse:
      only_keys(j, {"kind"}, ptr);
      return EditCommand::reverse();
  }
  throw SchemaViolation(child(ptr, "kind"), "unknown command");
}

inline Json config_json(const TrackerConfig& c) {
  return {{"match_threshold", c.match_threshold}, {"tolerance", c.tolerance}, {"r3_radius", c.r3_radius}, {"loop_eps", c.loop_eps}};
}

inline TrackerConfig parse_config(const Json& j, const std::string& ptr) {
  using namespace detail;
  only_keys(j, {"match_threshold", "tolerance", "r3_radius", "loop_eps"}, ptr);
  TrackerConfig c;
  auto get = [&](std::string_view key, double& dst) {
    if (!j.contains(key)) return;
    dst = number(j[std::string(key)], child(ptr, key));
    if (dst < 0.0) throw SchemaViolation(child(ptr, key), "must not be negative");
  };
  get("match_threshold", c.match_threshold);
  get("tolerance", c.tolerance);
  get("r3_radius", c.r3_radius);
  get("loop_eps", c.loop_eps);
  return c;
}

inline std::string trace_to_json(const Trace& trace) {
  Json root = detail::diagram_json(trace.initial.state, trace.initial.style);
  Json cmds = Json::array();
  for (const EditCommand& c : trace.commands) cmds.push_back(command_json(c));
  root["commands"] = cmds;
  root["config"] = config_json(trace.config);
  return root.dump(2) + "\n";
}

inline Trace parse_trace(const std::string& text) {
  const Json root = detail::parse_text(text);
  const detail::ParsedDiagram d = detail::parse_diagram(root, {"commands", "config"});
  Trace trace;
  trace.initial = {restore_state(d), d.style};
  const Json& cmds = detail::field(root, "commands", "");
  if (!cmds.is_array()) throw SchemaViolation("/commands", "expected an array");
  for (std::size_t i = 0; i < cmds.size(); ++i) trace.commands.push_back(parse_command(cmds[i], detail::child("/commands", i)));
  if (root.contains("config")) trace.config = parse_config(root["config"], "/config");
  return trace;
}

}  // namespace knotforge
