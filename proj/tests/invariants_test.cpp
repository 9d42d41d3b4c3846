#include <chrono>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "knotforge/knotforge.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace knotforge;
using kf_oracle::coefficients;

namespace {

/// Every (n-1)-minor of the crossing matrix, by cofactor expansion, normalized.
void expect_all_minors(const DiagramState& st, const kf_oracle::Poly& expected) {
  const auto m = kf_oracle::from_library(alexander_matrix(st));
  for (std::size_t r = 0; r < m.size(); ++r)
    for (std::size_t c = 0; c < m.size(); ++c)
      EXPECT_EQ(kf_oracle::normalize(kf_oracle::cofactor_determinant(kf_oracle::without(m, r, c))), expected)
          << "minor " << r << "," << c;
}

}  // namespace

TEST(GaussCode, EmptyForCrossinglessDiagram) {
  EXPECT_TRUE(gauss_code(kf_test::load_state("circle.json")).empty());
}

TEST(GaussCode, TrefoilAlternatesWithEqualSigns) {
  const GaussCode code = gauss_code(kf_test::load_state("trefoil.json"));
  ASSERT_EQ(code.size(), 6u);
  for (std::size_t i = 0; i < code.size(); ++i) {
    EXPECT_NE(code[i].over, code[(i + 1) % code.size()].over);
    EXPECT_EQ(code[i].sign, code[0].sign);
  }
}

TEST(GaussCode, KinkVisitsItsCrossingTwice) {
  const GaussCode code = gauss_code(kf_test::load_state("kink.json"));
  ASSERT_EQ(code.size(), 2u);
  EXPECT_EQ(code[0].crossing, code[1].crossing);
  EXPECT_NE(code[0].over, code[1].over);
}

TEST(AlexanderMatrix, TrefoilMinorsMatchCofactorOracle) {
  const DiagramState st = kf_test::load_state("trefoil.json");
  EXPECT_EQ(alexander_matrix(st).size(), 3u);
  expect_all_minors(st, coefficients({1, -1, 1}));
}

TEST(AlexanderMatrix, FigureEightMinorsMatchCofactorOracle) {
  const DiagramState st = kf_test::load_state("figure_eight.json");
  EXPECT_EQ(alexander_matrix(st).size(), 4u);
  expect_all_minors(st, coefficients({1, -3, 1}));
}

TEST(AlexanderMatrix, OneCrossingUnknotHasTrivialMinor) {
  const DiagramState st = kf_test::load_state("kink.json");
  ASSERT_EQ(alexander_matrix(st).size(), 1u);
  EXPECT_EQ(alexander_minor(gauss_code(st)), LaurentPolynomial(1));
}

TEST(AlexanderMatrix, UnsignedCrossingIsDegenerate) {
  GaussCode code{{0, true, 0}, {0, false, 0}};
  EXPECT_THROW(alexander_matrix(code), DegenerateDiagram);
  EXPECT_THROW(alexander_matrix(GaussCode{{0, true, 1}}), DegenerateDiagram);
}

TEST(Determinant, BareissAgreesWithCofactorExpansion) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> coeff(-3, 3), deg(-2, 2), size(1, 5);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = size(rng);
    LaurentMatrix m(static_cast<std::size_t>(n), std::vector<LaurentPolynomial>(static_cast<std::size_t>(n)));
    for (auto& row : m)
      for (auto& e : row) {
        const int terms = coeff(rng) & 3;
        for (int k = 0; k < terms; ++k) e += LaurentPolynomial::monomial(coeff(rng), deg(rng));
      }
    const auto expected = kf_oracle::cofactor_determinant(kf_oracle::from_library(m));
    EXPECT_EQ(kf_oracle::from_library(determinant(m)), expected) << trial;
  }
}

TEST(Alexander, UnknotIsOne) {
  EXPECT_EQ(alexander_polynomial(kf_test::load_state("circle.json")), LaurentPolynomial(1));
  EXPECT_EQ(alexander_polynomial(kf_test::load_state("kink.json")), LaurentPolynomial(1));
}

TEST(Alexander, TrefoilAndFigureEight) {
  EXPECT_EQ(alexander_polynomial(kf_test::load_state("trefoil.json")).to_string(), "1 - t + t^2");
  EXPECT_EQ(alexander_polynomial(kf_test::load_state("figure_eight.json")).to_string(), "1 - 3t + t^2");
}

TEST(Alexander, PerkoPresentationsAgree) {
  const auto a = alexander_polynomial(kf_test::load_state("perko_a.json"));
  const auto b = alexander_polynomial(kf_test::load_state("perko_b.json"));
  EXPECT_EQ(a, b);
  EXPECT_EQ(kf_oracle::from_library(a), coefficients({1, 0, -2, 3, -2, 0, 1}));
  EXPECT_NE(writhe(kf_test::load_state("perko_a.json")), writhe(kf_test::load_state("perko_b.json")));
}

TEST(Alexander, MirrorIsIndistinguishable) {
  const DiagramState st = kf_test::load_state("trefoil.json");
  const FrameResult m = apply(st, EditCommand::mirror());
  ASSERT_TRUE(m.accepted());
  EXPECT_EQ(writhe(m.value().state), -writhe(st));
  EXPECT_EQ(alexander_polynomial(m.value().state), alexander_polynomial(st));
}

TEST(Alexander, CompositeIsProductOfFactors) {
  const auto p = alexander_polynomial(kf_test::load_state("knot20.json"));
  const auto f = LaurentPolynomial::from_coefficients(0, {1, 0, -2, 3, -2, 0, 1});
  EXPECT_EQ(p, f * f);
}

TEST(Alexander, UnitAtOneAndPalindromicOnEveryLayout) {
  for (const auto& layout : kf_test::load_rolfsen()) {
    const LaurentPolynomial raw = alexander_minor(gauss_code(layout.state));
    const Integer one = raw.at_one();
    EXPECT_TRUE(one == 1 || one == -1) << layout.name;
    EXPECT_TRUE(raw.normalized().is_palindromic()) << layout.name;
  }
}

TEST(Laurent, ArithmeticAndNormalization) {
  const LaurentPolynomial t = LaurentPolynomial::t();
  const LaurentPolynomial p = LaurentPolynomial(1) - t + t * t;
  EXPECT_EQ(p.to_string(), "1 - t + t^2");
  EXPECT_EQ((-(LaurentPolynomial::monomial(1, -3) * p)).normalized(), p);
  EXPECT_EQ(exact_divide(p * p, p), p);
  EXPECT_THROW(exact_divide(p, LaurentPolynomial(2)), Error);
  EXPECT_TRUE(p.is_palindromic());
  EXPECT_FALSE((p + LaurentPolynomial(1)).is_palindromic());
  EXPECT_EQ(p.at_one(), 1);
  EXPECT_TRUE((p - p).is_zero());
}

TEST(KnotTable, ParsesRecordsAndRejectsGarbage) {
  std::istringstream ok("# name\tcn\tcoefficients\tslug\n0_1\t0\t1\t0_1\n3_1\t3\t1,-1,1\t3_1\n\n");
  const KnotTable t = parse_knot_table(ok);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[1].atlas_url(), "https://katlas.org/wiki/3_1");

  const char* bad[] = {"3_1\t3\t1,-1,1\n", "3_1\tx\t1,-1,1\t3_1\n", "3_1\t3\t-1,1,-1\t3_1\n",
                       "3_1\t3\t1,,1\t3_1\n", "3_1\t3\t1,-1,1\t3_1\n3_1\t3\t1,-1,1\t3_1\n"};
  for (const char* text : bad) {
    std::istringstream in(text);
    EXPECT_THROW(parse_knot_table(in), TableFormatError) << text;
  }
}

TEST(KnotTable, ShippedTableIsWellFormed) {
  const KnotTable t = kf_test::load_table();
  EXPECT_GE(t.size(), 250u);
  for (const KnotEntry& e : t) {
    EXPECT_TRUE(e.polynomial().is_palindromic()) << e.name;
    const Integer one = e.polynomial().at_one();
    EXPECT_TRUE(one == 1 || one == -1) << e.name;
  }
}

TEST(Classify, LooksUpKnownPolynomials) {
  const KnotTable table = kf_test::load_table();
  auto names = [&](const LaurentPolynomial& p) {
    std::vector<std::string> out;
    for (const auto& e : classify(p, table)) out.push_back(e.name);
    return out;
  };
  EXPECT_EQ(names(LaurentPolynomial(1)).front(), "0_1");
  EXPECT_EQ(names(alexander_polynomial(kf_test::load_state("trefoil.json"))), std::vector<std::string>{"3_1"});
  EXPECT_EQ(names(alexander_polynomial(kf_test::load_state("figure_eight.json"))), std::vector<std::string>{"4_1"});
  const auto perko = names(alexander_polynomial(kf_test::load_state("perko_a.json")));
  EXPECT_NE(std::find(perko.begin(), perko.end(), "10_161"), perko.end());
  // mirror pair: same polynomial up to t -> 1/t, same matches
  const auto p = alexander_polynomial(kf_test::load_state("figure_eight.json"));
  EXPECT_EQ(names(LaurentPolynomial::monomial(-1, 5) * p), names(p));
  EXPECT_TRUE(names(alexander_polynomial(kf_test::load_state("knot20.json"))).empty());
}

TEST(Classify, EveryRolfsenLayoutFindsItself) {
  const KnotTable table = kf_test::load_table();
  const auto layouts = kf_test::load_rolfsen();
  EXPECT_EQ(layouts.size(), 249u);
  for (const auto& layout : layouts) {
    const auto hits = classify(alexander_polynomial(layout.state), table);
    const bool found = std::any_of(hits.begin(), hits.end(), [&](const KnotEntry& e) { return e.name == layout.name; });
    EXPECT_TRUE(found) << layout.name;
  }
}

TEST(Alexander, TrefoilWithinTimeBudget) {
  const DiagramState st = kf_test::load_state("trefoil.json");
  const KnotTable table = kf_test::load_table();
  const auto start = std::chrono::steady_clock::now();
  const auto hits = classify(alexander_polynomial(st), table);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_LT(ms, 10.0);
}
