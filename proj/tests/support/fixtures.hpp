#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "knotforge/knotforge.hpp"

namespace kf_test {

inline std::string fixture_path(const std::string& name) { return std::string(KF_FIXTURES) + "/" + name; }

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline knotforge::Document load_document(const std::string& name) {
  return knotforge::parse_document(read_text(fixture_path(name)));
}

inline knotforge::DiagramState load_state(const std::string& name) { return load_document(name).state; }

inline knotforge::Trace load_trace(const std::string& name) {
  return knotforge::parse_trace(read_text(fixture_path("traces/" + name + ".json")));
}

/// The hand-built diagrams, without the Rolfsen batch.
inline const std::vector<std::string>& diagram_fixtures() {
  static const std::vector<std::string> names{"circle.json",  "kink.json",    "trefoil.json", "figure_eight.json",
                                              "perko_a.json", "perko_b.json", "knot20.json",  "composite.json"};
  return names;
}

inline const std::vector<std::string>& trace_names() {
  static const std::vector<std::string> names{"legal_r1",   "legal_r2",   "legal_r3",
                                              "illegal_r2", "illegal_r3", "loop_around"};
  return names;
}

struct RolfsenLayout {
  std::string name;
  knotforge::DiagramState state;
};

inline std::vector<RolfsenLayout> load_rolfsen() {
  std::vector<RolfsenLayout> out;
  std::ifstream in(fixture_path("rolfsen.jsonl"));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    out.push_back({j.at("name").get<std::string>(), knotforge::from_json(j.at("diagram").dump())});
  }
  return out;
}

inline knotforge::KnotTable load_table() { return knotforge::load_knot_table(KNOTFORGE_DATA_DIR "/knot_table.tsv"); }

}  // namespace kf_test
