#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "knotforge/cli.hpp"
#include "support/fixtures.hpp"

using namespace knotforge;

namespace {

struct Outcome {
  int code = -1;
  std::string out, err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Outcome r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string fixture(const std::string& name) { return kf_test::fixture_path(name); }
std::string trace_file(const std::string& name) { return kf_test::fixture_path("traces/" + name + ".json"); }

std::string frame_lines(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line))
    if (line.rfind("frame=", 0) == 0) out += line + "\n";
  return out;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "knotforge_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

void write(const std::filesystem::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

}  // namespace

TEST(Cli, InvariantOfTrefoil) {
  const Outcome r = run({"invariant", fixture("trefoil.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "1 -1 1\n");
  EXPECT_EQ(run({"invariant", fixture("figure_eight.json")}).out, "1 -3 1\n");
  EXPECT_EQ(run({"invariant", fixture("circle.json")}).out, "1\n");
}

TEST(Cli, ClassifyPrintsNameAndAtlasLink) {
  const Outcome r = run({"classify", fixture("trefoil.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "3_1 https://katlas.org/wiki/3_1\n");
  EXPECT_EQ(run({"classify", fixture("figure_eight.json")}).out, "4_1 https://katlas.org/wiki/4_1\n");
  EXPECT_NE(run({"classify", fixture("perko_b.json")}).out.find("10_161 "), std::string::npos);
  const Outcome unknown = run({"classify", fixture("knot20.json")});
  EXPECT_EQ(unknown.code, 0);
  EXPECT_EQ(unknown.out, "UNKNOWN\n");
}

TEST(Cli, ClassifyTableFromFlagOrEnvironment) {
  const auto table = scratch("tiny.tsv");
  write(table, "# name\tcn\tcoefficients\tslug\nmine\t3\t1,-1,1\tMine\n");
  EXPECT_EQ(run({"classify", fixture("trefoil.json"), "--table", table.string()}).out,
            "mine https://katlas.org/wiki/Mine\n");
  ::setenv("KNOTFORGE_TABLE", table.c_str(), 1);
  EXPECT_EQ(run({"classify", fixture("trefoil.json")}).out, "mine https://katlas.org/wiki/Mine\n");
  ::unsetenv("KNOTFORGE_TABLE");
  EXPECT_EQ(run({"classify", fixture("trefoil.json"), "--table", "/nonexistent.tsv"}).code, 1);
}

TEST(Cli, IllegalR2ReplayExitsThreeNamingTheFrame) {
  const Outcome r = run({"replay", trace_file("illegal_r2")});
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(r.err.rfind("frame=48 reverted=IllegalR2\n", 0), 0u) << r.err;
}

TEST(Cli, IllegalR3ReplayExitsThree) {
  const Outcome r = run({"replay", trace_file("illegal_r3")});
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(r.err.rfind("frame=34 reverted=IllegalR3\n", 0), 0u) << r.err;
}

TEST(Cli, ReplayLogsMatchGoldenFiles) {
  for (const auto& name : kf_test::trace_names()) {
    const Outcome r = run({"replay", trace_file(name)});
    EXPECT_EQ(frame_lines(r.out), kf_test::read_text(kf_test::fixture_path("golden/" + name + ".log"))) << name;
  }
}

TEST(Cli, LegalReplaysAcceptEveryFrameAndPrintFinalState) {
  for (const auto& name : {"legal_r1", "legal_r2", "legal_r3", "loop_around"}) {
    const Outcome r = run({"replay", trace_file(name)});
    EXPECT_EQ(r.code, 0) << name;
    EXPECT_TRUE(r.err.empty()) << name;
    const std::string json = r.out.substr(r.out.find('{'));
    EXPECT_EQ(alexander_polynomial(from_json(json)).to_string(), "1 - t + t^2") << name;
  }
}

TEST(Cli, ReplayIsDeterministic) {
  for (const auto& name : kf_test::trace_names()) {
    const Outcome a = run({"replay", trace_file(name)});
    const Outcome b = run({"replay", trace_file(name)});
    EXPECT_EQ(a.out, b.out) << name;
    EXPECT_EQ(a.err, b.err) << name;
  }
}

TEST(Cli, ReplayWritesStateToOutFile) {
  const auto path = scratch("final.json");
  const Outcome r = run({"replay", trace_file("legal_r1"), "--out", path.string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.find('{'), std::string::npos);
  EXPECT_NO_THROW(from_json(kf_test::read_text(path.string())));
}

TEST(Cli, ExportMatchesLibraryEmitters) {
  const DiagramState st = kf_test::load_state("trefoil.json");
  EXPECT_EQ(run({"export", fixture("trefoil.json")}).out, to_svg(st));
  EXPECT_EQ(run({"export", fixture("trefoil.json"), "--format", "tikz"}).out, to_tikz(st));
  const auto path = scratch("trefoil.svg");
  EXPECT_EQ(run({"export", fixture("trefoil.json"), "--format", "svg", "--out", path.string()}).code, 0);
  EXPECT_EQ(kf_test::read_text(path.string()), to_svg(st));
}

TEST(Cli, ConfigOverridesStyle) {
  const auto cfg = scratch("style.json");
  write(cfg, R"({"style": {"stroke_width": 2, "foreground": "#112233", "background": "#ffffff",
                "A": 0.01, "B": 0.002, "gap_ratio": 1}})");
  const Outcome r = run({"export", fixture("trefoil.json"), "--config", cfg.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("stroke=\"#112233\" stroke-width=\"2.0000\""), std::string::npos);
  write(cfg, R"({"colour": 1})");
  EXPECT_EQ(run({"export", fixture("trefoil.json"), "--config", cfg.string()}).code, 1);
}

TEST(Cli, InfoSummarisesTheDiagram) {
  const Outcome r = run({"info", fixture("trefoil.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("crossings: 3\n"), std::string::npos);
  EXPECT_NE(r.out.find("gauss: "), std::string::npos);
  const int w = writhe(kf_test::load_state("trefoil.json"));
  EXPECT_NE(r.out.find("signs: " + std::string(3, w > 0 ? '+' : '-') + "\n"), std::string::npos);
  EXPECT_NE(r.out.find("writhe: " + std::to_string(w) + "\n"), std::string::npos);
}

TEST(Cli, BadUsageExitsTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"explode", fixture("trefoil.json")}).code, 2);
  EXPECT_EQ(run({"invariant"}).code, 2);
  EXPECT_EQ(run({"export", fixture("trefoil.json"), "--format", "png"}).code, 2);
  EXPECT_EQ(run({"invariant", fixture("trefoil.json"), "--bogus"}).code, 2);
}

TEST(Cli, SchemaAndIoErrorsExitOne) {
  const auto bad = scratch("bad.json");
  write(bad, R"({"version": 1, "segments": []})");
  const Outcome r = run({"invariant", bad.string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("/segments"), std::string::npos) << r.err;
  EXPECT_EQ(run({"invariant", "/nonexistent.json"}).code, 1);
  EXPECT_EQ(run({"replay", fixture("trefoil.json")}).code, 1);
}

TEST(Cli, HelpExitsZero) {
  const Outcome r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("replay"), std::string::npos);
}
