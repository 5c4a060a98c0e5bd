#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "cdk/serialize.hpp"
#include "cdk/svg.hpp"

using namespace cdk;

namespace {
std::string run_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd =
      env + std::string(CDK_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  while (size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  pclose(pipe);
  return out;
}
}  // namespace

TEST_CASE("potential spec grammar") {
  const Potential p = parse_potential(json::parse(
      R"({"kind":"poly","coeffs":[0,0,1],"interval":["-inf","inf"]})"));
  CHECK(p.value(2.0) == 4.0);
  const Potential q = parse_potential(json::parse(
      R"({"kind":"poly","coeffs":[0,0,1],"interval":[-3,3]})"));
  CHECK(q.interval().hi == 3.0);
  const Potential g = potential_preset("gue");
  CHECK(g.value(1.0) == 1.0);
  const Potential q4 = potential_preset("quartic");
  CHECK(q4.second(1.0) == 12.0);
  CHECK_THROWS(potential_preset("nope"));
}

TEST_CASE("equilibrium JSON round trip") {
  const Potential p = potential_preset("gue");
  const EquilibriumData eq = EquilibriumData::build(p, solve_mrs(p));
  const json j = equilibrium_to_json(eq);
  CHECK(j["a"].get<double>() == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-10));
  const EquilibriumData back = equilibrium_from_json(p, j);
  CHECK(back.gamma_plus() == doctest::Approx(eq.gamma_plus()).epsilon(1e-13));
  CHECK(back.lagrange_l() == doctest::Approx(eq.lagrange_l()).epsilon(1e-13));
}

TEST_CASE("recurrence JSON round trip") {
  const Potential p = potential_preset("gue");
  const RecurrenceTable tab = build_recurrence(p, 8, 8);
  const RecurrenceTable back = recurrence_from_json(p, recurrence_to_json(tab));
  CHECK(back.betas == tab.betas);
  CHECK(back.alphas == tab.alphas);
  CHECK(cd_kernel_exact(back, 0.4, -0.2).to_double() ==
        cd_kernel_exact(tab, 0.4, -0.2).to_double());
}

TEST_CASE("csv writer is deterministic and carries scaled pairs") {
  std::ostringstream os1, os2;
  for (std::ostringstream* os : {&os1, &os2}) {
    CsvWriter csv(*os);
    csv.meta("test config=abc");
    csv.header({"x", "v_mantissa", "v_log2"});
    csv.row({CsvWriter::num(0.1), CsvWriter::scaled(ScaledReal::from_log(-1000.0))});
  }
  CHECK(os1.str() == os2.str());
  CHECK(os1.str().find("# test") == 0);
}

TEST_CASE("svg renderer emits a well-formed document") {
  SvgPlot p;
  p.title = "demo";
  SvgSeries s;
  s.name = "line";
  for (int i = 0; i <= 10; ++i) {
    s.x.push_back(i);
    s.y.push_back(i * i);
  }
  p.series.push_back(s);
  const std::string svg = render_svg(p);
  CHECK(svg.find("<svg") == 0);
  CHECK(svg.find("polyline") != std::string::npos);
  CHECK(svg.rfind("</svg>\n") == svg.size() - 7);
}

TEST_CASE("cli equilibrium emits the analytic endpoints") {
  const std::string out = run_cli("equilibrium --preset gue");
  const json j = json::parse(out);
  CHECK(j["a"].get<double>() == doctest::Approx(-1.41421356).epsilon(1e-8));
  CHECK(j["b"].get<double>() == doctest::Approx(1.41421356).epsilon(1e-8));
}

TEST_CASE("cli density output format and determinism") {
  const std::string args = "density --preset gue --n 50 --grid -1.2:1.2:0.2";
  const std::string out1 = run_cli(args);
  const std::string out2 = run_cli(args);
  CHECK(out1 == out2);
  std::istringstream is(out1);
  std::string line;
  std::getline(is, line);
  CHECK(line.rfind("# cdk", 0) == 0);
  std::getline(is, line);
  CHECK(line == "x,value_mantissa,value_log2,regime,correction_scale");
  int rows = 0;
  while (std::getline(is, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 13);
}

TEST_CASE("cli tw table is monotone in s") {
  const std::string out = run_cli("tw --range -3:3:0.5 --m 40");
  std::istringstream is(out);
  std::string line;
  std::getline(is, line);  // meta
  std::getline(is, line);  // header
  double prev = -1.0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::getline(ls, cell, ',');
    std::getline(ls, cell, ',');
    const double cdf = std::atof(cell.c_str());
    CHECK(cdf >= prev - 1e-12);
    prev = cdf;
  }
  CHECK(prev > 0.9);
}

TEST_CASE("cli exit codes: config errors give 1") {
  const int rc = std::system((std::string(CDK_CLI_PATH) +
                              " density --preset nope >/dev/null 2>&1")
                                 .c_str());
  CHECK(WEXITSTATUS(rc) == 1);
}

TEST_CASE("cli honors the CDK_QUAD_ORDER environment override") {
  const std::string out =
      run_cli("density --preset gue --n 10 --grid 0:0.5:0.5 2>/dev/null",
              "CDK_QUAD_ORDER=128 ");
  CHECK(out.find("quad_order=128") != std::string::npos);
}
