#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "knotforge/laurent.hpp"
#include "knotforge/state.hpp"

namespace knotforge {

struct GaussEvent {
  std::size_t crossing = 0;
  bool over = false;
  int sign = 0;

  bool operator==(const GaussEvent&) const = default;
};

/// Crossing visits in walking order; every id appears once over and once under.
using GaussCode = std::vector<GaussEvent>;

/// Walks the 2n endpoint times in ascending order. Crossing ids are positions in the
/// crossing set.
inline GaussCode gauss_code(const DiagramState& state) {
  struct Visit {
    double time;
    GaussEvent event;
  };
  std::vector<Visit> visits;
  visits.reserve(2 * state.crossings.size());
  for (std::size_t i = 0; i < state.crossings.size(); ++i) {
    const Crossing& c = state.crossings[i];
    visits.push_back({c.pair.t, {i, c.over_first, c.sign}});
    visits.push_back({c.pair.s, {i, !c.over_first, c.sign}});
  }
  std::stable_sort(visits.begin(), visits.end(), [](const Visit& a, const Visit& b) { return a.time < b.time; });
  GaussCode code;
  code.reserve(visits.size());
  for (const Visit& v : visits) code.push_back(v.event);
  return code;
}

/// "O1+ U2- ..." style rendering of a Gauss code.
inline std::string to_string(const GaussCode& code) {
  std::string out;
  for (const GaussEvent& e : code) {
    if (!out.empty()) out += ' ';
    out += e.over ? 'O' : 'U';
    out += std::to_string(e.crossing);
    out += e.sign > 0 ? '+' : (e.sign < 0 ? '-' : '0');
  }
  return out;
}

/// Arc-labelled crossing matrix. Arcs run from one under-passage to the next; arc m starts
/// at the m-th under-passage of the walk. Row c belongs to crossing c: its over-arc gets
/// 1 - t, and of the under-arcs entering and leaving, a positive crossing puts -1 on the
/// incoming one and t on the outgoing one (swapped when negative). Coinciding arcs add up.
inline LaurentMatrix alexander_matrix(const GaussCode& code) {
  if (code.size() % 2 != 0) throw DegenerateDiagram("odd Gauss code length");
  const std::size_t n = code.size() / 2;
  std::vector<int> overs(n, 0), unders(n, 0);
  std::vector<int> signs(n, 0);
  for (const GaussEvent& e : code) {
    if (e.crossing >= n) throw DegenerateDiagram("crossing id out of range");
    (e.over ? overs : unders)[e.crossing]++;
    signs[e.crossing] = e.sign;
  }
  for (std::size_t c = 0; c < n; ++c) {
    if (overs[c] != 1 || unders[c] != 1) throw DegenerateDiagram("crossing " + std::to_string(c) + " is not visited once over and once under");
    if (signs[c] == 0) throw DegenerateDiagram("crossing " + std::to_string(c) + " has no sign");
  }

  // arc_at[p]: arc containing walk position p; under-passages close the running arc
  std::vector<std::size_t> under_positions;
  for (std::size_t p = 0; p < code.size(); ++p)
    if (!code[p].over) under_positions.push_back(p);
  std::vector<std::size_t> arc_at(code.size());
  {
    std::size_t arc = n - 1;  // positions before the first under-passage belong to the wrapping arc
    for (std::size_t p = 0; p < code.size(); ++p) {
      arc_at[p] = arc;
      if (!code[p].over) arc = (arc + 1) % n;
    }
  }

  LaurentMatrix m(n, std::vector<LaurentPolynomial>(n));
  const LaurentPolynomial one_minus_t = LaurentPolynomial(1) - LaurentPolynomial::t();
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t p = under_positions[k];
    const GaussEvent& e = code[p];
    const std::size_t incoming = arc_at[p];
    const std::size_t outgoing = (incoming + 1) % n;
    std::size_t over_arc = 0;
    for (std::size_t q = 0; q < code.size(); ++q)
      if (code[q].over && code[q].crossing == e.crossing) over_arc = arc_at[q];
    auto& row = m[e.crossing];
    row[over_arc] += one_minus_t;
    if (e.sign > 0) {
      row[incoming] += LaurentPolynomial(-1);
      row[outgoing] += LaurentPolynomial::t();
    } else {
      row[incoming] += LaurentPolynomial::t();
      row[outgoing] += LaurentPolynomial(-1);
    }
  }
  return m;
}

inline LaurentMatrix alexander_matrix(const DiagramState& state) { return alexander_matrix(gauss_code(state)); }

/// Determinant of the minor without the last row and column; 1 for crossingless codes.
inline LaurentPolynomial alexander_minor(const GaussCode& code) {
  if (code.empty()) return 1;
  LaurentMatrix m = alexander_matrix(code);
  m.pop_back();
  for (auto& row : m) row.pop_back();
  return determinant(std::move(m));
}

inline LaurentPolynomial alexander_polynomial(const GaussCode& code) { return alexander_minor(code).normalized(); }

inline LaurentPolynomial alexander_polynomial(const DiagramState& state) {
  return alexander_polynomial(gauss_code(state));
}

// ---------------------------------------------------------------------------
// knot table

struct KnotEntry {
  std::string name;
  int crossing_number = 0;
  std::vector<Integer> coefficients;  // normalized, constant term first
  std::string slug;

  std::string atlas_url() const { return "https://katlas.org/wiki/" + slug; }
  LaurentPolynomial polynomial() const { return LaurentPolynomial::from_coefficients(0, coefficients); }
  bool operator==(const KnotEntry&) const = default;
};

using KnotTable = std::vector<KnotEntry>;

/// One record per line, four tab-separated fields:
///   name <TAB> crossing-number <TAB> c0,c1,...,cd <TAB> atlas-slug
/// Blank lines and lines starting with '#' are skipped; anything else is an error.
inline KnotTable parse_knot_table(std::istream& in) {
  KnotTable table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() != 4) throw TableFormatError(lineno, "expected 4 tab-separated fields, got " + std::to_string(fields.size()));
    KnotEntry e;
    e.name = fields[0];
    if (e.name.empty()) throw TableFormatError(lineno, "empty name");
    {
      const std::string& f = fields[1];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), e.crossing_number);
      if (ec != std::errc{} || ptr != f.data() + f.size() || e.crossing_number < 0)
        throw TableFormatError(lineno, "bad crossing number '" + f + "'");
    }
    {
      std::stringstream ss(fields[2]);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        const bool neg = !tok.empty() && tok[0] == '-';
        const std::string digits = neg ? tok.substr(1) : tok;
        if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }))
          throw TableFormatError(lineno, "bad coefficient '" + tok + "'");
        e.coefficients.emplace_back(tok);
      }
      if (e.coefficients.empty() || fields[2].back() == ',') throw TableFormatError(lineno, "bad coefficient list");
      const LaurentPolynomial p = e.polynomial();
      if (p.min_degree() != 0 || p.coefficients().size() != e.coefficients.size() || !(p == p.normalized()))
        throw TableFormatError(lineno, "coefficients are not normalized");
    }
    e.slug = fields[3];
    if (e.slug.empty()) throw TableFormatError(lineno, "empty atlas slug");
    if (std::any_of(table.begin(), table.end(), [&](const KnotEntry& o) { return o.name == e.name; }))
      throw TableFormatError(lineno, "duplicate name " + e.name);
    table.push_back(std::move(e));
  }
  return table;
}

inline KnotTable load_knot_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open knot table " + path);
  return parse_knot_table(in);
}

/// Every entry whose polynomial equals poly. Several knots can share a polynomial.
inline std::vector<KnotEntry> classify(const LaurentPolynomial& poly, const KnotTable& table) {
  const LaurentPolynomial key = poly.normalized();
  std::vector<KnotEntry> hits;
  for (const KnotEntry& e : table)
    if (e.polynomial() == key) hits.push_back(e);
  return hits;
}

}  // namespace knotforge
