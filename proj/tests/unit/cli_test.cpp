#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "kahan/config.hpp"
#include "kahan/run.hpp"

using namespace kahan;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("kahan_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t line_count(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST(Config, ParsesInlineSystem) {
  const auto c = parse_config(
      "order = 2\n"
      "rhs: -a*x1^3 - d   # cubic force\n"
      "[params]\n"
      "a = 1; d = 0.5\n"
      "h = 0.1\n"
      "[initial]\n"
      "window = 0.3, 0.31\n"
      "[run]\n"
      "steps = 10\n");
  EXPECT_TRUE(c.is_inline());
  EXPECT_EQ(c.order, 2);
  ASSERT_EQ(c.rhs.size(), 1U);
  EXPECT_EQ(c.params.at("d"), Rational(1, 2));
  EXPECT_EQ(c.h, Rational(1, 10));
  EXPECT_EQ(c.steps, 10);
  EXPECT_EQ(c.window.size(), 2U);
}

TEST(Config, PresetWithOverrides) {
  const auto c = parse_config("preset = quartic\n[params]\nd = 0\n[run]\nsteps = 3\n");
  EXPECT_EQ(c.preset, "quartic");
  EXPECT_EQ(c.params.at("d"), 0);
  EXPECT_EQ(c.params.at("a"), 1);
  EXPECT_EQ(c.steps, 3);
}

TEST(Config, UnknownKeyReportsPosition) {
  try {
    (void)parse_config("preset = lv\n[run]\n  stepz = 3\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_EQ(e.column(), 3);
  }
}

TEST(Config, ValidationErrors) {
  EXPECT_THROW(parse_config("preset = nope\n"), Error);
  EXPECT_THROW(parse_config("order = 1\nrhs = x1\n[params]\nh = 0\n[initial]\nwindow = 1\n"), Error);
  EXPECT_THROW(parse_config("order = 1\nrhs = x1\n[params]\nh = 0.1\n[initial]\nwindow = 1, 2\n"), Error);
  EXPECT_THROW(parse_config("order = 1\nrhs = a*x1\n[params]\nh = 0.1\n[initial]\nwindow = 1\n"), Error);
  try {
    (void)parse_config("preset = beam-lag\n[params]\nalphavec = 1, 1, 0, 0, 0, 0\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AffineConstraintViolated);
  }
}

TEST(Config, AllPresetsValidate) {
  for (const auto& name : kPresets) EXPECT_NO_THROW(validate(preset_config(name))) << name;
}

TEST(Run, ZeroStepsGiveSingleCsvRow) {
  auto c = preset_config("quartic");
  c.steps = 0;
  const auto out = scratch("zero");
  run(Command::Orbit, c, out);
  const std::string csv = slurp(out / "orbit.csv");
  EXPECT_EQ(line_count(csv), 2U);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "step,x1_0,x1_1");
}

TEST(Run, RepeatedRunsAreByteIdentical) {
  const auto a = scratch("rep_a");
  const auto b = scratch("rep_b");
  const auto c = preset_config("lv");
  const auto ra = run(Command::Report, c, a);
  const auto rb = run(Command::Report, c, b);
  EXPECT_EQ(ra.text, rb.text);
  for (const char* f : {"orbit.csv", "orbit.svg", "report.txt"}) EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
}

TEST(Run, SvgIsWellFormed) {
  const auto out = scratch("svg");
  run(Command::Orbit, preset_config("lv"), out);
  const std::string svg = slurp(out / "orbit.svg");
  EXPECT_EQ(svg.rfind("<svg", 0), 0U);
  EXPECT_NE(svg.find("<polyline"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(Run, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 1e21}) EXPECT_EQ(std::stod(format_double(v)), v);
}

TEST(Run, ExitCodeMapping) {
  EXPECT_EQ(exit_code_for(ErrorCode::ParseError), kExitConfig);
  EXPECT_EQ(exit_code_for(ErrorCode::ValidationError), kExitConfig);
  EXPECT_EQ(exit_code_for(ErrorCode::AffineConstraintViolated), kExitConfig);
  EXPECT_EQ(exit_code_for(ErrorCode::SingularStep), kExitNumeric);
  EXPECT_EQ(exit_code_for(ErrorCode::NoRealFixedPoint), kExitNumeric);
}

#ifdef KAHAN_CLI_PATH

namespace {

int cli(const std::string& args) {
  const std::string cmd = std::string("\"") + KAHAN_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Cli, ExitCodes) {
  const auto out = scratch("cli");
  EXPECT_EQ(cli("discretize --preset lv --out " + out.string()), kExitOk);
  EXPECT_EQ(cli("darboux --preset lv --out " + out.string()), kExitOk);
  EXPECT_EQ(cli("analyze-beam --preset beam-sym --out " + out.string()), kExitOk);
  EXPECT_EQ(cli("orbit --preset nope --out " + out.string()), kExitConfig);
  EXPECT_EQ(cli("orbit --config /nonexistent.cfg --out " + out.string()), kExitConfig);
  EXPECT_EQ(cli("frobnicate"), kExitConfig);

  std::ofstream(out / "bad.cfg") << "preset = lv\n[run]\nsteps = many\n";
  EXPECT_EQ(cli("orbit --config " + (out / "bad.cfg").string() + " --out " + out.string()), kExitConfig);

  // delta = 1 - c < 0 leaves the beam without real fixed points.
  std::ofstream(out / "beam.cfg") << "preset = beam-sym\n[params]\nc = 2\n";
  EXPECT_EQ(cli("analyze-beam --config " + (out / "beam.cfg").string() + " --out " + out.string()), kExitNumeric);
}

#endif
