#include "support.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <regex>

using namespace hopfdisc;
using namespace hopfdisc::test;

namespace {
RunConfig config(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "test.cfg");
}

std::map<std::string, std::string> key_values(const std::string& report) {
  std::map<std::string, std::string> out;
  std::istringstream in(report.substr(report.find("[key=value]")));
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    auto eq = line.find('=');
    if (eq != std::string::npos) out[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return out;
}

std::string temp_dir(const std::string& leaf) {
  auto d = std::filesystem::temp_directory_path() / ("hopfdisc_test_" + leaf);
  std::filesystem::remove_all(d);
  std::filesystem::create_directories(d);
  return d.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}
}  // namespace

TEST(Config, ParsesFieldsAndDegrees) {
  RunConfig c = config("# comment\nfamily = wobble\nbeta0 = 90deg\ndbeta=0.25 # trailing\nm = 3\nn = -1\n"
                       "a = 2.5\nb = 0.5\ngrid = 1024\neps_ladder = 0.08, 0.02\nemit = csv,svg\nstrict = yes\n");
  EXPECT_EQ(c.motion.family, Family::Wobble);
  EXPECT_DOUBLE_EQ(c.motion.beta0, kPi / 2);
  EXPECT_EQ(c.motion.amplitude, 0.25);
  EXPECT_EQ(c.motion.m, 3);
  EXPECT_EQ(c.motion.n, -1);
  EXPECT_EQ(c.N, 1024u);
  EXPECT_EQ(c.eps_ladder, (std::vector<double>{0.08, 0.02}));
  EXPECT_TRUE(c.emit_csv && c.emit_svg && !c.emit_report);
  EXPECT_TRUE(c.strict);
}

TEST(Config, DiagnosticsNameLineAndField) {
  auto message = [](const std::string& text) {
    try {
      config(text);
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::Config);
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message("family = wobble\nbeta0 = x1\n").find("test.cfg:2: field 'beta0'"), std::string::npos);
  EXPECT_NE(message("colour = red\n").find("test.cfg:1: field 'colour'"), std::string::npos);
  EXPECT_NE(message("\n\nfamily\n").find("test.cfg:3"), std::string::npos);
  EXPECT_NE(message("grid = 1001\n").find("grid"), std::string::npos);
  EXPECT_NE(message("a = 3deg\n").find("angles"), std::string::npos);
  EXPECT_NE(message("family = spinning\n").find("unknown family"), std::string::npos);
}

TEST(Config, MissingTableFile) {
  RunConfig c = config("family = piecewise_linear_table\ntable = /nonexistent/motion.table\n");
  try {
    run(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Config);
  }
}

TEST(MotionTable, ParsesCommentsAndDegrees) {
  std::istringstream in("# header\n0 0 1.0\n\n0.5 180deg 1.2  # half way\n1 6.283185307179586 1.0\n");
  auto rows = parse_motion_table(in, "m.table");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_DOUBLE_EQ(rows[1].theta, kPi);
  std::istringstream bad("0 0 1\n0.5 0.1\n");
  try {
    parse_motion_table(bad, "m.table");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("m.table:2"), std::string::npos);
  }
}

TEST(Run, LatitudeAllRoutesAgree) {
  RunConfig c = config("family = constant_tilt\nbeta0 = 1.0471975511965976\n");
  PhaseReport r = run(c);
  EXPECT_DOUBLE_EQ(r.delta_d, kTwoPi);
  for (const Route& rt : r.routes) {
    ASSERT_TRUE(rt.done) << rt.name << " " << rt.skipped;
    EXPECT_NEAR(rt.value, -kPi, rt.name == "area_index" ? 2e-3 : 1e-9) << rt.name;
  }
  EXPECT_NEAR(r.delta_total, kPi, 1e-9);
  EXPECT_LT(std::abs(r.tau + 1.0), 1e-9);
  EXPECT_EQ(r.I_plus, 1);
  EXPECT_NEAR(r.length, kTwoPi * std::sin(kPi / 3), 1e-12);
  EXPECT_TRUE(r.failures.empty());
  // Every pair of completed routes has a residual.
  int pairs = 0;
  for (const Residual& res : r.residuals) pairs += !res.congruence;
  EXPECT_EQ(pairs, 10);
}

TEST(Run, FigureEightSkipsAreaRoutes) {
  RunConfig c;
  c.motion = figure_eight_table();
  PhaseReport r = run(c);
  EXPECT_FALSE(r.simple);
  EXPECT_EQ(r.route("area_index")->skipped.rfind("NotSimple", 0), 0u);
  EXPECT_EQ(r.route("curvature_corollary")->skipped.rfind("NotSimple", 0), 0u);
  EXPECT_TRUE(r.route("line_integral")->done);
  EXPECT_TRUE(r.tau_done);
  std::string text = format_report(r);
  EXPECT_NE(text.find("area_index             skipped: NotSimple"), std::string::npos);
  EXPECT_NE(text.find("route.curvature_corollary=skipped:NotSimple"), std::string::npos);
}

TEST(Run, FlatCoinShowsCoveringSpace) {
  RunConfig c = config("family = constant_tilt\nbeta0 = 0\na = 2\nb = 1\n");
  PhaseReport r = run(c);
  EXPECT_NEAR(r.route("regularized_limit")->value, -kTwoPi, 1e-6);
  EXPECT_NEAR(r.delta_d + r.route("regularized_limit")->value, kTwoPi, 1e-6);
  EXPECT_LT(std::abs(r.tau - 1.0), 1e-8);
  auto kv = key_values(format_report(r));
  EXPECT_NEAR(std::stod(kv["tau_re"]), 1.0, 1e-8);
  EXPECT_NEAR(std::stod(kv["delta_g"]), -kTwoPi, 1e-8);
}

TEST(Run, StrictFailureIsRecorded) {
  RunConfig c = config("family = wobble\nbeta0 = 1\ndbeta = 0.5\nm = 2\ntol_line_vs_fiber = 1e-300\n");
  c.N = 1024;
  PhaseReport r = run(c);
  EXPECT_FALSE(r.failures.empty());
}

TEST(Output, DeterministicReportAndCsv) {
  RunConfig c = config("family = wobble\nbeta0 = 1.2\ndbeta = 0.4\nm = 3\nemit = report,csv,svg\n");
  c.out_dir = temp_dir("det1");
  auto a = write_outputs(c, run(c));
  RunConfig d = c;
  d.out_dir = temp_dir("det2");
  d.area.threads = 1;
  auto b = write_outputs(d, run(d));
  ASSERT_EQ(a.size(), 3u);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(slurp(a[i]), slurp(b[i])) << a[i];
}

TEST(Output, CsvShape) {
  RunConfig c = config("family = constant_tilt\nbeta0 = 1.0\ngrid = 512\nemit = csv\n");
  c.out_dir = temp_dir("csv");
  write_outputs(c, run(c));
  std::ifstream in(c.out_dir + "/run.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,theta,beta,running_delta_g,phi_fiber,phi_compass,s,kappa_g");
  int rows = 0;
  double last_s = -1.0;
  while (std::getline(in, line)) {
    std::vector<double> v;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) v.push_back(std::stod(cell));
    ASSERT_EQ(v.size(), 8u);
    EXPECT_GE(v[6], last_s);
    last_s = v[6];
    ++rows;
  }
  EXPECT_EQ(rows, 513);
  EXPECT_NEAR(last_s, kTwoPi * std::sin(1.0), 1e-12);
}

TEST(Output, EquatorSvgIsUnitCircle) {
  RunConfig c = config("family = constant_tilt\nbeta0 = 1.5707963267948966\ngrid = 512\n");
  std::string svg = render_svg(run(c));
  EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
  // The curve is the second path element; every vertex lies on |z| = 1.
  std::regex path_re("<path d=\"([^\"]*)\" fill=\"none\"");
  std::smatch m;
  ASSERT_TRUE(std::regex_search(svg, m, path_re));
  std::regex pt("[ML](-?[0-9.e+-]+) (-?[0-9.e+-]+)");
  std::string d = m[1];
  int n = 0;
  for (auto it = std::sregex_iterator(d.begin(), d.end(), pt); it != std::sregex_iterator(); ++it, ++n)
    EXPECT_NEAR(std::hypot(std::stod((*it)[1]), std::stod((*it)[2])), 1.0, 1e-5);
  EXPECT_EQ(n, 513);
  EXPECT_NE(svg.find("fill-rule=\"evenodd\""), std::string::npos);
}

TEST(Output, UnwritableDirectory) {
  RunConfig c = config("family = constant_tilt\nbeta0 = 1\ngrid = 256\nemit = csv\n");
  c.out_dir = "/proc/hopfdisc_cannot_write_here";
  PhaseReport r = run(c);
  try {
    write_outputs(c, r);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Io);
    EXPECT_NE(std::string(e.what()).find("/proc/hopfdisc_cannot_write_here"), std::string::npos);
  }
}
