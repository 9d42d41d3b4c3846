#pragma once

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "knotforge/diagram.hpp"
#include "knotforge/invariants.hpp"
#include "knotforge/json_io.hpp"
#include "knotforge/render.hpp"

#ifndef KNOTFORGE_DATA_DIR
#define KNOTFORGE_DATA_DIR "data"
#endif

namespace knotforge::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2, kReverted = 3 };

/// "[R2Birth(1,2),LoopAround(0)]"
inline std::string format_events(const std::vector<FrameEvent>& events) {
  std::string out = "[";
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (i) out += ',';
    out += to_string(events[i].kind);
    out += '(';
    for (std::size_t k = 0; k < events[i].crossings.size(); ++k) {
      if (k) out += ',';
      out += std::to_string(events[i].crossings[k]);
    }
    out += ')';
  }
  return out + "]";
}

inline std::string format_coefficients(const LaurentPolynomial& p) {
  std::string out;
  for (const Integer& c : p.coefficients()) {
    if (!out.empty()) out += ' ';
    out += c.str();
  }
  return out;
}

struct ReplayResult {
  DiagramState final_state;
  std::string log;  // one line per frame
  std::vector<std::size_t> reverted_frames;
  std::vector<RevertReason> reasons;
};

/// Runs every command as one frame. Reverted frames are logged and skipped; the stream
/// continues from the last accepted state. Frames count from 1.
inline ReplayResult replay(const Trace& trace) {
  ReplayResult r;
  DiagramState state = trace.initial.state;
  std::ostringstream log;
  for (std::size_t k = 0; k < trace.commands.size(); ++k) {
    const FrameResult f = apply(state, trace.commands[k], trace.config);
    log << "frame=" << k + 1;
    if (f.accepted()) {
      log << " events=" << format_events(f.value().events) << '\n';
      state = f.value().state;
    } else {
      log << " reverted=" << to_string(f.revert().reason) << '\n';
      r.reverted_frames.push_back(k + 1);
      r.reasons.push_back(f.revert().reason);
    }
  }
  r.final_state = std::move(state);
  r.log = log.str();
  return r;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path);
  f << text;
}

/// --table, then $KNOTFORGE_TABLE, then the installed table.
inline std::string resolve_table(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("KNOTFORGE_TABLE"); env && *env) return env;
  return std::string(KNOTFORGE_DATA_DIR) + "/knot_table.tsv";
}

struct Overrides {
  std::optional<TrackerConfig> tracker;
  std::optional<Style> style;
};

/// Config file: {"tracker": {...}, "style": {...}}, both optional.
inline Overrides load_config(const std::string& path) {
  Overrides o;
  if (path.empty()) return o;
  const Json root = detail::parse_text(read_file(path));
  detail::only_keys(root, {"tracker", "style"}, "");
  if (root.contains("tracker")) o.tracker = parse_config(root["tracker"], "/tracker");
  if (root.contains("style")) o.style = detail::parse_style(root["style"], "/style");
  return o;
}

/// Entry point. Returns the process exit code; all output goes to out and err.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"knotforge: knot diagram engine"};
  app.name("knotforge");
  app.require_subcommand(1);

  std::string input, out_path, format = "svg", table_flag, config_path;
  auto common = [&](CLI::App* sub) {
    sub->add_option("input", input, "diagram or trace JSON")->required();
    sub->add_option("--out", out_path, "output file (default stdout)");
    sub->add_option("--config", config_path, "JSON with tracker and style overrides");
  };
  CLI::App* replay_cmd = app.add_subcommand("replay", "apply a trace frame by frame");
  CLI::App* invariant_cmd = app.add_subcommand("invariant", "print normalized Alexander coefficients");
  CLI::App* classify_cmd = app.add_subcommand("classify", "look the diagram up in the knot table");
  CLI::App* export_cmd = app.add_subcommand("export", "write SVG or TikZ");
  CLI::App* info_cmd = app.add_subcommand("info", "crossings, Gauss code, signs and writhe");
  for (CLI::App* sub : {replay_cmd, invariant_cmd, classify_cmd, export_cmd, info_cmd}) common(sub);
  classify_cmd->add_option("--table", table_flag, "knot table (default $KNOTFORGE_TABLE)");
  export_cmd->add_option("--format", format, "svg or tikz")->check(CLI::IsMember({"svg", "tikz"}));

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "knotforge: " << e.what() << "\n";
    return kUsage;
  }

  try {
    const Overrides ov = load_config(config_path);
    if (replay_cmd->parsed()) {
      Trace trace = parse_trace(read_file(input));
      if (ov.tracker) trace.config = *ov.tracker;
      const ReplayResult r = replay(trace);
      out << r.log;
      for (std::size_t i = 0; i < r.reverted_frames.size(); ++i)
        err << "frame=" << r.reverted_frames[i] << " reverted=" << to_string(r.reasons[i]) << "\n";
      const std::string json = to_json(r.final_state, ov.style.value_or(trace.initial.style));
      if (out_path.empty()) out << json;
      else write_output(out_path, json, out);
      return r.reverted_frames.empty() ? kOk : kReverted;
    }

    const Document doc = parse_document(read_file(input));
    const Style style = ov.style.value_or(doc.style);
    if (invariant_cmd->parsed()) {
      write_output(out_path, format_coefficients(alexander_polynomial(doc.state)) + "\n", out);
    } else if (classify_cmd->parsed()) {
      const KnotTable table = load_knot_table(resolve_table(table_flag));
      const auto hits = classify(alexander_polynomial(doc.state), table);
      std::string text;
      for (const KnotEntry& e : hits) text += e.name + " " + e.atlas_url() + "\n";
      if (hits.empty()) text = "UNKNOWN\n";
      write_output(out_path, text, out);
    } else if (export_cmd->parsed()) {
      write_output(out_path, format == "tikz" ? to_tikz(doc.state, style) : to_svg(doc.state, style), out);
    } else if (info_cmd->parsed()) {
      std::string signs;
      for (const Crossing& c : doc.state.crossings) signs += c.sign > 0 ? "+" : (c.sign < 0 ? "-" : "0");
      std::string text = "crossings: " + std::to_string(doc.state.crossings.size()) + "\n";
      text += "gauss: " + to_string(gauss_code(doc.state)) + "\n";
      text += "signs: " + signs + "\n";
      text += "writhe: " + std::to_string(writhe(doc.state)) + "\n";
      write_output(out_path, text, out);
    }
    return kOk;
  } catch (const SchemaViolation& e) {
    err << "knotforge: schema violation at " << e.what() << "\n";
    return kFailure;
  } catch (const Error& e) {
    err << "knotforge: " << e.what() << "\n";
    return kFailure;
  }
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace knotforge::cli
