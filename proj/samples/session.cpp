// Editing session on a diagram file: flip a crossing, watch the invariant, undo, export.
//
//   knotforge_session samples/trefoil.json out.svg

#include <fstream>
#include <iostream>
#include <sstream>

#include "knotforge/knotforge.hpp"

using namespace knotforge;

namespace {

std::string slurp(const char* path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void report(const DiagramState& st, const KnotTable& table) {
  const LaurentPolynomial delta = alexander_polynomial(st);
  std::cout << "  crossings " << st.crossings.size() << ", writhe " << writhe(st) << ", delta " << delta.to_string();
  const auto hits = classify(delta, table);
  std::cout << ", " << (hits.empty() ? std::string("unknown") : hits.front().name + " " + hits.front().atlas_url())
            << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: knotforge_session diagram.json out.svg\n";
    return 2;
  }
  try {
    const Document doc = parse_document(slurp(argv[1]));
    const KnotTable table = load_knot_table(KNOTFORGE_DATA_DIR "/knot_table.tsv");
    Session session(doc.state);
    std::cout << "loaded " << argv[1] << "\n";
    report(session.state(), table);

    if (!session.state().crossings.empty()) {
      session.apply(EditCommand::flip_crossing(0));
      std::cout << "flipped crossing 0\n";
      report(session.state(), table);
      session.undo();
      std::cout << "undo\n";
      report(session.state(), table);
    }

    // a small drag of the first node, frame by frame
    const Point2 start = session.state().path.anchor(0);
    for (int k = 1; k <= 5; ++k) {
      const FrameResult r = session.apply(EditCommand::drag_node(0, start + Point2{2.0 * k, 0.0}));
      if (!r.accepted()) {
        std::cout << "drag frame " << k << " reverted: " << to_string(r.revert().reason) << "\n";
        break;
      }
    }
    std::cout << "dragged node 0\n";
    report(session.state(), table);

    std::ofstream(argv[2], std::ios::binary) << to_svg(session.state(), doc.style);
    std::cout << "wrote " << argv[2] << "\n";
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
