// Command-line front end: equilibrium data, density profiles, kernel
// slices, exact finite-N oracle tables, gap probabilities, Tracy-Widom
// tables, deviation comparisons and the self-test suite.

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>

#include "cdk/acceptance.hpp"
#include "cdk/deviations.hpp"
#include "cdk/equilibrium.hpp"
#include "cdk/errors.hpp"
#include "cdk/kernel_asym.hpp"
#include "cdk/oracle.hpp"
#include "cdk/serialize.hpp"
#include "cdk/svg.hpp"
#include "cdk/version.hpp"

namespace {

using cdk::CsvWriter;
using cdk::json;

struct GridSpec {
  double lo = 0.0, hi = 1.0, step = 0.1;
  std::vector<double> points() const {
    std::vector<double> p;
    const double tol = 1e-9 * std::max(1.0, std::fabs(hi));
    for (int i = 0;; ++i) {
      const double x = lo + i * step;
      if (x > hi + tol) break;
      p.push_back(x);
    }
    return p;
  }
};

GridSpec parse_grid(const std::string& s) {
  GridSpec g;
  char c1 = 0, c2 = 0;
  std::istringstream is(s);
  if (!(is >> g.lo >> c1 >> g.hi >> c2 >> g.step) || c1 != ':' || c2 != ':' ||
      g.step <= 0.0)
    throw cdk::DomainError("grid must be lo:hi:step with step > 0");
  return g;
}

struct CommonOpts {
  std::string preset;
  std::string potential_json;
  std::string config_path;
  int quad_order = 256;

  json config;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--preset", preset, "potential preset (gue, quartic)");
    cmd->add_option("--potential", potential_json,
                    "potential spec JSON, e.g. {\"kind\":\"poly\",...}");
    cmd->add_option("--config", config_path, "JSON config file");
    cmd->add_option("--quad-order", quad_order, "quadrature order override");
  }

  void load() {
    if (const char* env = std::getenv("CDK_QUAD_ORDER")) quad_order = std::atoi(env);
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw cdk::DomainError("cannot open config file " + config_path);
      f >> config;
      if (config.contains("quad_order")) quad_order = config["quad_order"].get<int>();
    }
  }

  cdk::Potential potential() const {
    if (!preset.empty()) return cdk::potential_preset(preset);
    if (!potential_json.empty()) return cdk::parse_potential(json::parse(potential_json));
    if (config.contains("potential")) return cdk::parse_potential(config["potential"]);
    throw cdk::DomainError("no potential given (use --preset/--potential/--config)");
  }

  std::string canonical(const std::string& cmd, const std::string& extra) const {
    json j;
    j["command"] = cmd;
    j["quad_order"] = quad_order;
    if (!preset.empty()) j["preset"] = preset;
    if (!potential_json.empty()) j["potential"] = potential_json;
    j["extra"] = extra;
    return j.dump();
  }
};

std::ostream& open_out(std::ofstream& file, const std::string& path) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw cdk::DomainError("cannot open output file " + path);
  return file;
}

void write_meta(CsvWriter& csv, const CommonOpts& opt, const std::string& cmd,
                const std::string& extra) {
  csv.meta("cdk v" + std::string(cdk::kVersion) + " cmd=" + cmd +
           " config=" + cdk::config_hash(opt.canonical(cmd, extra)) +
           " quad_order=" + std::to_string(opt.quad_order) + " " + extra);
}

std::shared_ptr<const cdk::EquilibriumData> build_eq(const CommonOpts& opt) {
  const cdk::Potential pot = opt.potential();
  return std::make_shared<cdk::EquilibriumData>(
      cdk::EquilibriumData::build(pot, cdk::solve_mrs(pot), opt.quad_order));
}

int cmd_equilibrium(const CommonOpts& opt, const std::string& out,
                    const std::string& table, const std::string& grid) {
  const auto eq = build_eq(opt);
  json j = cdk::equilibrium_to_json(*eq);
  std::ofstream file;
  std::ostream& os = open_out(file, out);
  os << j.dump(2) << "\n";
  if (!table.empty()) {
    const GridSpec g = parse_grid(grid.empty() ? "-1.5:1.5:0.01" : grid);
    std::ofstream tf(table);
    if (!tf) throw cdk::DomainError("cannot open table file " + table);
    CsvWriter csv(tf);
    write_meta(csv, const_cast<CommonOpts&>(opt), "equilibrium", "grid=" + grid);
    csv.header({"x", "rho", "xi", "eta"});
    for (double x : g.points()) {
      const cdk::ExtendedInterval dom = eq->domain();
      if (!dom.contains(x)) continue;
      csv.row({CsvWriter::num(x), CsvWriter::num(eq->rho(x)),
               CsvWriter::num(eq->xi(x)), CsvWriter::num(eq->eta(x))});
    }
  }
  return 0;
}

int cmd_density(const CommonOpts& opt, int n, const std::string& grid,
                const std::string& out, const std::string& plot) {
  const auto eq = build_eq(opt);
  cdk::AsymptoticKernel ker(eq);
  const GridSpec g = parse_grid(grid);
  std::ofstream file;
  std::ostream& os = open_out(file, out);
  CsvWriter csv(os);
  write_meta(csv, opt, "density", "n=" + std::to_string(n) + " grid=" + grid);
  csv.header({"x", "value_mantissa", "value_log2", "regime", "correction_scale"});
  cdk::SvgSeries series;
  for (double x : g.points()) {
    if (!eq->domain().contains(x)) continue;
    const cdk::KernelValue v = ker.density(n, x);
    csv.row({CsvWriter::num(x), CsvWriter::scaled(v.value),
             cdk::regime_name(v.regime), CsvWriter::num(v.correction_scale)});
    series.x.push_back(x);
    series.y.push_back(v.value.log_abs() / std::numbers::ln10);
  }
  if (!plot.empty()) {
    cdk::SvgPlot p;
    p.title = "one-point density (log10), N=" + std::to_string(n);
    p.x_label = "x";
    p.y_label = "density";
    p.log_y = true;
    series.name = "density";
    p.series.push_back(std::move(series));
    cdk::write_svg(p, plot);
  }
  return 0;
}

int cmd_kernel(const CommonOpts& opt, int n, double x0, const std::string& grid,
               double delta, const std::string& mode, const std::string& out,
               const std::string& plot) {
  const auto eq = build_eq(opt);
  cdk::AsymptoticKernel ker(eq);
  if (delta <= 0.0) delta = ker.delta0();
  const GridSpec g = parse_grid(grid);
  std::ofstream file;
  std::ostream& os = open_out(file, out);
  CsvWriter csv(os);
  write_meta(csv, opt, "kernel",
             "n=" + std::to_string(n) + " x0=" + CsvWriter::num(x0) +
                 " delta=" + CsvWriter::num(delta) + " mode=" + mode);
  if (mode == "kvec") {
    csv.header({"x", "k1_mantissa", "k1_log2", "k2_mantissa", "k2_log2", "regime"});
    for (double x : g.points()) {
      if (!eq->domain().contains(x)) continue;
      const cdk::KVector k = ker.k_vector(n, delta, x);
      csv.row({CsvWriter::num(x), CsvWriter::scaled(k.k1), CsvWriter::scaled(k.k2),
               cdk::regime_name(k.regime)});
    }
    return 0;
  }
  csv.header({"x", "y", "value_mantissa", "value_log2", "regime", "branch",
              "correction_scale"});
  cdk::SvgSeries series;
  for (double y : g.points()) {
    if (!eq->domain().contains(y)) continue;
    cdk::ScaledReal value;
    try {
      const cdk::KernelValue v = ker.leading_kernel(n, delta, x0, y);
      value = v.value;
      csv.row({CsvWriter::num(x0), CsvWriter::num(y), CsvWriter::scaled(v.value),
               cdk::regime_name(v.regime), v.branch,
               CsvWriter::num(v.correction_scale)});
    } catch (const cdk::MixedRegime&) {
      value = ker.k_quotient(n, delta, x0, y);
      csv.row({CsvWriter::num(x0), CsvWriter::num(y), CsvWriter::scaled(value),
               "mixed", "k_quotient", CsvWriter::num(0.0)});
    }
    series.x.push_back(y);
    series.y.push_back(value.to_double());
  }
  if (!plot.empty()) {
    cdk::SvgPlot p;
    p.title = "kernel slice at x=" + CsvWriter::num(x0) + ", N=" + std::to_string(n);
    p.x_label = "y";
    p.y_label = "kernel";
    series.name = "leading order";
    p.series.push_back(std::move(series));
    cdk::write_svg(p, plot);
  }
  return 0;
}

int cmd_oracle(const CommonOpts& opt, int n, int n_max, const std::string& grid,
               bool compare, const std::string& out, const std::string& dump) {
  const cdk::Potential pot = opt.potential();
  const cdk::RecurrenceTable tab =
      cdk::build_recurrence(pot, n, n_max > 0 ? n_max : n);
  if (!dump.empty()) {
    std::ofstream f(dump);
    f << cdk::recurrence_to_json(tab).dump(2) << "\n";
  }
  const auto eq = build_eq(opt);
  std::unique_ptr<cdk::AsymptoticKernel> ker;
  if (compare) ker = std::make_unique<cdk::AsymptoticKernel>(eq);
  const GridSpec g = parse_grid(grid);
  std::ofstream file;
  std::ostream& os = open_out(file, out);
  CsvWriter csv(os);
  write_meta(csv, opt, "oracle", "n=" + std::to_string(n) + " grid=" + grid);
  std::vector<std::string> cols = {"x", "kernel_mantissa", "kernel_log2"};
  if (compare) {
    cols.push_back("asym_mantissa");
    cols.push_back("asym_log2");
    cols.push_back("regime");
  }
  csv.header(cols);
  const double half = 0.5 * (eq->endpoints().b - eq->endpoints().a);
  for (double x : g.points()) {
    if (!pot.interval().contains(x)) continue;
    const cdk::ScaledReal k = cdk::cd_kernel_exact(tab, x, x);
    std::vector<std::string> row = {CsvWriter::num(x), CsvWriter::scaled(k)};
    if (compare) {
      // compare density in the rescaled variable: K(x,x) ~ D(u)/half
      const double u = eq->lambda_inv(x);
      if (eq->domain().contains(u)) {
        const cdk::KernelValue v = ker->density(n, u);
        row.push_back(CsvWriter::scaled(v.value / cdk::ScaledReal(half)));
        row.push_back(cdk::regime_name(v.regime));
      } else {
        row.push_back("nan,0");
        row.push_back("outside");
      }
    }
    csv.row(row);
  }
  return 0;
}

int cmd_gap(const CommonOpts& opt, int n, const std::string& tgrid, int m,
            const std::string& out) {
  const cdk::Potential pot = opt.potential();
  const cdk::RecurrenceTable tab = cdk::build_recurrence(pot, n, n);
  const GridSpec g = parse_grid(tgrid);
  std::ofstream file;
  std::ostream& os = open_out(file, out);
  CsvWriter csv(os);
  write_meta(csv, opt, "gap", "n=" + std::to_string(n) + " m=" + std::to_string(m));
  csv.header({"t", "gap", "tail_prob", "self_check"});
  const double inf = std::numeric_limits<double>::infinity();
  for (double t : g.points()) {
    const cdk::GapResult r = cdk::gap_probability(tab, t, inf, m);
    csv.row({CsvWriter::num(t), CsvWriter::num(r.value),
             CsvWriter::num(1.0 - r.value), CsvWriter::num(r.self_check)});
  }
  return 0;
}

int cmd_tw(const std::string& range, int m, const std::string& out) {
  const GridSpec g = parse_grid(range);
  std::ofstream file;
  std::ostream& os = open_out(file, out);
  CsvWriter csv(os);
  csv.meta("cdk v" + std::string(cdk::kVersion) + " cmd=tw m=" + std::to_string(m) +
           " range=" + range);
  csv.header({"s", "cdf", "tail_mantissa", "tail_log2"});
  for (double s : g.points()) {
    const double cdf = cdk::tw2_cdf(s, m);
    std::string tail = "nan,0";
    if (s > 0.0) tail = CsvWriter::scaled(cdk::tw2_tail(s));
    csv.row({CsvWriter::num(s), CsvWriter::num(cdf), tail});
  }
  return 0;
}

int cmd_deviations(const CommonOpts& opt, int n, const std::string& srange, int m,
                   const std::string& out) {
  const auto eq = build_eq(opt);
  const cdk::Potential pot = opt.potential();
  const cdk::RecurrenceTable tab = cdk::build_recurrence(pot, n, n);
  const GridSpec g = parse_grid(srange);
  std::ofstream file;
  std::ostream& os = open_out(file, out);
  CsvWriter csv(os);
  write_meta(csv, opt, "deviations", "n=" + std::to_string(n) + " m=" + std::to_string(m));
  csv.header({"s", "x", "moderate_mantissa", "moderate_log2", "large_mantissa",
              "large_log2", "oracle_mantissa", "oracle_log2", "regime_valid"});
  for (double s : g.points()) {
    if (s < 1.0) continue;
    const cdk::DeviationResult md = cdk::moderate_deviation(*eq, n, s);
    const double x = 1.0 + s / (eq->gamma_plus() * std::pow(n, 2.0 / 3.0));
    std::string large = "nan,0";
    if (x > 1.0 + std::pow(n, -2.0 / 3.0) && x < eq->domain().hi)
      large = CsvWriter::scaled(cdk::large_deviation(*eq, n, x).value);
    const cdk::ScaledReal tail = cdk::oracle_upper_tail(tab, eq->lambda(x));
    csv.row({CsvWriter::num(s), CsvWriter::num(x), CsvWriter::scaled(md.value),
             large, CsvWriter::scaled(tail), md.regime_valid ? "1" : "0"});
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cdk: global Christoffel-Darboux kernel asymptotics for convex unitary ensembles"};
  app.set_version_flag("--version", cdk::kVersion);
  app.require_subcommand(1);

  CommonOpts opt;

  // equilibrium
  auto* c_eq = app.add_subcommand("equilibrium", "solve endpoints, dump equilibrium data");
  std::string eq_out, eq_table, eq_grid;
  opt.add_to(c_eq);
  c_eq->add_option("--json", eq_out, "output JSON path (default stdout)");
  c_eq->add_option("--table", eq_table, "CSV table of (x, rho, xi, eta)");
  c_eq->add_option("--grid", eq_grid, "table grid lo:hi:step");

  // density
  auto* c_d = app.add_subcommand("density", "one-point density profile");
  int d_n = 50;
  std::string d_grid = "-1.2:1.2:0.01", d_out, d_plot;
  opt.add_to(c_d);
  c_d->add_option("--n", d_n, "matrix size N");
  c_d->add_option("--grid", d_grid, "grid lo:hi:step (rescaled variable)");
  c_d->add_option("--out", d_out, "CSV output path");
  c_d->add_option("--plot", d_plot, "optional SVG plot path");

  // kernel
  auto* c_k = app.add_subcommand("kernel", "kernel slices / k-vector");
  int k_n = 50;
  double k_x0 = 0.0, k_delta = 0.0;
  std::string k_grid = "-1.2:1.2:0.01", k_mode = "leading", k_out, k_plot;
  opt.add_to(c_k);
  c_k->add_option("--n", k_n, "matrix size N");
  c_k->add_option("--x", k_x0, "fixed first argument (leading mode)");
  c_k->add_option("--grid", k_grid, "grid for the second argument");
  c_k->add_option("--delta", k_delta, "regime split distance (default delta0)");
  c_k->add_option("--mode", k_mode, "leading | kvec");
  c_k->add_option("--out", k_out, "CSV output path");
  c_k->add_option("--plot", k_plot, "optional SVG plot path");

  // oracle
  auto* c_o = app.add_subcommand("oracle", "exact finite-N kernel table");
  int o_n = 20, o_nmax = 0;
  std::string o_grid = "-2:2:0.02", o_out, o_dump;
  bool o_compare = false;
  opt.add_to(c_o);
  c_o->add_option("--n", o_n, "weight parameter N");
  c_o->add_option("--nmax", o_nmax, "recurrence depth (default N)");
  c_o->add_option("--grid", o_grid, "grid in the original variable");
  c_o->add_flag("--compare", o_compare, "add asymptotic comparison columns");
  c_o->add_option("--out", o_out, "CSV output path");
  c_o->add_option("--dump", o_dump, "JSON dump of the recurrence table");

  // gap
  auto* c_g = app.add_subcommand("gap", "gap probabilities over a t-grid");
  int g_n = 10, g_m = 40;
  std::string g_tgrid = "1:2.5:0.1", g_out;
  opt.add_to(c_g);
  c_g->add_option("--n", g_n, "weight parameter N");
  c_g->add_option("--tgrid", g_tgrid, "left endpoints t (interval (t, inf))");
  c_g->add_option("--m", g_m, "Nystrom nodes");
  c_g->add_option("--out", g_out, "CSV output path");

  // tw
  auto* c_t = app.add_subcommand("tw", "Tracy-Widom CDF and tail table");
  int t_m = 60;
  std::string t_range = "-6:8:0.1", t_out;
  c_t->add_option("--range", t_range, "s-grid lo:hi:step");
  c_t->add_option("--m", t_m, "Nystrom nodes");
  c_t->add_option("--out", t_out, "CSV output path");

  // deviations
  auto* c_v = app.add_subcommand("deviations", "moderate/large deviation comparison");
  int v_n = 100, v_m = 60;
  std::string v_srange = "1:4:0.5", v_out;
  opt.add_to(c_v);
  c_v->add_option("--n", v_n, "matrix size N");
  c_v->add_option("--srange", v_srange, "s-grid lo:hi:step");
  c_v->add_option("--m", v_m, "Nystrom nodes");
  c_v->add_option("--out", v_out, "CSV output path");

  // selftest
  auto* c_s = app.add_subcommand("selftest", "run the acceptance suite");

  CLI11_PARSE(app, argc, argv);

  try {
    opt.load();
    if (app.got_subcommand(c_eq)) return cmd_equilibrium(opt, eq_out, eq_table, eq_grid);
    if (app.got_subcommand(c_d)) return cmd_density(opt, d_n, d_grid, d_out, d_plot);
    if (app.got_subcommand(c_k))
      return cmd_kernel(opt, k_n, k_x0, k_grid, k_delta, k_mode, k_out, k_plot);
    if (app.got_subcommand(c_o))
      return cmd_oracle(opt, o_n, o_nmax, o_grid, o_compare, o_out, o_dump);
    if (app.got_subcommand(c_g)) return cmd_gap(opt, g_n, g_tgrid, g_m, g_out);
    if (app.got_subcommand(c_t)) return cmd_tw(t_range, t_m, t_out);
    if (app.got_subcommand(c_v)) return cmd_deviations(opt, v_n, v_srange, v_m, v_out);
    if (app.got_subcommand(c_s)) {
      const int failures = cdk::acceptance::run_and_report(std::cout);
      return failures == 0 ? 0 : 2;
    }
  } catch (const cdk::DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const cdk::Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
