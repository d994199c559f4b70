#include "translab/config.hpp"
#include "translab/elliptic.hpp"
#include "translab/error.hpp"
#include "translab/field_io.hpp"
#include "translab/oracle.hpp"
#include "translab/parabolic.hpp"
#include "translab/regularity.hpp"
#include "translab/report.hpp"
#include "translab/run_log.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

using namespace translab;

namespace {

struct Common {
  std::string config;
  std::string log;
  int cells = 0;
};

CgOptions cg_options(const Config& c)
{
  CgOptions opt;
  opt.tol = c.solver.tol;
  opt.max_iter = c.solver.max_iter;
  if (c.solver.isa == "scalar")
    opt.kernels = &simd::kernels_for(simd::Isa::scalar);
  else if (c.solver.isa == "avx2")
    opt.kernels = &simd::kernels_for(simd::Isa::avx2);
  return opt;
}

VerifiedProblem verified(const Config& c)
{
  if (!c.problem)
    throw ConfigError("the configuration has no 'problem' section", 0);
  for (const auto& w : c.warnings)
    std::cerr << "warning: " << w << '\n';
  return verify(*c.problem, c.verify_samples);
}

void log_config(RunLog& log, const Config& c, std::string_view command)
{
  log.append({{"kind", "config"}, {"command", std::string(command)}, {"name", c.name}, {"effective", c.effective}});
}

std::string log_path(const Common& o, const Config& c)
{
  return o.log.empty() ? c.output.log : o.log;
}

unsigned thread_budget()
{
  unsigned t = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("TRANSLAB_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1)
      t = std::min<unsigned>(t, static_cast<unsigned>(cap));
  }
  return t;
}

/// Runs f(i) for i in [0, count) on up to thread_budget() workers.
template <class F>
void parallel_for(std::size_t count, F&& f)
{
  const unsigned workers = std::min<std::size_t>(thread_budget(), std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i)
      f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count)
          return;
        try {
          f(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error)
            error = std::current_exception();
        }
      }
    });
  for (auto& t : pool)
    t.join();
  if (error)
    std::rethrow_exception(error);
}

double max_nodal_error(const DiscreteField& u, const oracle::FieldOracle& o, double t)
{
  const Grid& g = u.grid();
  double worst = 0.0;
  std::vector<double> v(u.m()), grad(static_cast<std::size_t>(u.m() * g.n()));
  for (Index node = 0; node < g.node_count(); ++node) {
    o.eval(g.node_position(node), t, v, grad);
    for (int i = 0; i < u.m(); ++i)
      worst = std::max(worst, std::abs(u.value(node, i) - v[i]));
  }
  return worst;
}

// --- subcommands -------------------------------------------------------

int run_solve(const Common& o, const std::string& field_out)
{
  const Config c = load_config(o.config);
  const auto p = verified(c);
  RunLog log(log_path(o, c));
  log_config(log, c, "solve");
  const Grid grid(c.n, o.cells > 0 ? o.cells : c.grid.cells_per_side);
  const auto sol = solve_transmission(p, grid, cg_options(c), &log);
  const std::string out = field_out.empty() ? c.output.field : field_out;
  write_field(out, sol.field);
  if (!c.output.gradients.empty())
    write_gradient_csv(c.output.gradients, sol.field);
  if (!c.output.matrix.empty()) {
    std::ofstream ms(c.output.matrix);
    assemble(p, grid).matrix.write_triplets(ms);
  }
  fmt::print("solved {} on {} cells per side: {} iterations, residual {:.3e}, {:.3f} s\n", c.name,
             grid.cells_per_side(), sol.stats.iterations, sol.stats.residual, sol.stats.wall_seconds);
  if (c.oracle) {
    const double nodal = max_nodal_error(sol.field, *c.oracle, 0.0);
    const double l2 = l2_error(sol.field, *c.oracle);
    log.append({{"kind", "oracle_error"}, {"max_nodal_error", nodal}, {"relative_l2_error", l2}});
    fmt::print("oracle {}: max nodal error {:.3e}, relative L2 error {:.3e}\n", c.oracle->name, nodal, l2);
  }
  log.flush();
  fmt::print("field written to {}\n", out);
  return 0;
}

int run_parabolic(const Common& o, const std::string& field_out, double dt, const std::string& scheme)
{
  Config c = load_config(o.config);
  const auto p = verified(c);
  RunLog log(log_path(o, c));
  log_config(log, c, "parabolic");
  const Grid grid(c.n, o.cells > 0 ? o.cells : c.grid.cells_per_side);
  ParabolicOptions opt;
  opt.dt = dt > 0.0 ? dt : c.time.dt;
  opt.scheme = scheme.empty() ? c.time.scheme : parse_scheme(scheme);
  opt.t_start = c.time.t_start;
  opt.t_end = c.time.t_end;
  opt.store_every = c.time.store_every;
  opt.cg = cg_options(c);
  const auto& init = *c.initial;
  const auto initial = DiscreteField::interpolate(
      grid, c.m, [&](const Point& x, std::span<double> out) { init.eval(x, opt.t_start, out, {}); });
  const auto sol = solve_parabolic(p, grid, opt, initial.values(), &log);
  const std::string out = field_out.empty() ? c.output.field : field_out;
  write_series(out, sol.series);
  if (c.output.snapshot_every > 0)
    for (std::size_t k = 0; k < sol.series.size(); k += static_cast<std::size_t>(c.output.snapshot_every))
      write_field(fmt::format("{}_{:05d}.fld", c.output.snapshot_prefix, k), sol.series.level(k),
                  sol.series.times()[k]);

  // normalization summands: sup_t int |u|^2 and the max gradient on D
  const double l2 = sup_time_l2_squared(sol.series);
  AnalysisOptions aopt;
  double lip_d = 0.0;
  for (std::size_t k = 0; k < sol.series.size(); ++k) {
    aopt.t = sol.series.times()[k];
    lip_d = std::max(lip_d, lipschitz_ratio(p, sol.series.level(k), aopt).norm_lip_d);
  }
  log.append({{"kind", "normalization"}, {"sup_t_l2_squared", l2}, {"lip_d", lip_d}, {"sum", l2 + lip_d}});
  if (c.oracle) {
    const double e = max_nodal_error(sol.series.level(sol.series.size() - 1), *c.oracle, sol.series.times().back());
    log.append({{"kind", "oracle_error"}, {"max_nodal_error", e}, {"t", sol.series.times().back()}});
    fmt::print("oracle {}: max nodal error at t = {} is {:.3e}\n", c.oracle->name, sol.series.times().back(), e);
  }
  log.flush();
  fmt::print("{} steps of {} with dt = {:.3e}: {} CG iterations, {:.3f} s\n", sol.steps, scheme_name(opt.scheme),
             sol.dt, sol.total_iterations, sol.wall_seconds);
  fmt::print("normalization: sup_t |u|^2 = {:.6g}, |grad u|_D = {:.6g}\n", l2, lip_d);
  fmt::print("series written to {}\n", out);
  return 0;
}

struct AnalyzeArgs {
  std::string field;
  std::string centers;
  std::string scales;
  std::string out;
  std::string scenario;
  double threshold = 0.0;
  int min_cells = 0;
  double s = std::nan("");
};

int run_analyze(const Common& o, const AnalyzeArgs& a)
{
  std::optional<Config> c;
  std::optional<VerifiedProblem> p;
  if (!o.config.empty()) {
    c = load_config(o.config);
    if (c->problem)
      p = verified(*c);
  }
  const std::string field_path = !a.field.empty() ? a.field : (c ? c->output.field : std::string());
  if (field_path.empty())
    throw ParameterError("analyze needs --field or a configuration naming one");
  const FieldFile file = read_field(field_path);
  const bool parabolic = file.times.size() > 1;

  AnalysisOptions opt;
  std::string centers = c ? c->analysis.centers : "grid8";
  std::string scales_spec = c ? c->analysis.scales : "0.25:3";
  double threshold = c ? c->analysis.threshold : 0.0;
  double s = c ? c->analysis.s : 0.0;
  if (c) {
    opt.min_cells_per_radius = c->analysis.min_cells_per_radius;
    opt.subsamples = c->analysis.subsamples;
    opt.density_resolution = c->analysis.density_resolution;
  }
  if (!a.centers.empty())
    centers = a.centers;
  if (!a.scales.empty())
    scales_spec = a.scales;
  if (a.threshold > 0.0)
    threshold = a.threshold;
  if (a.min_cells > 0)
    opt.min_cells_per_radius = a.min_cells;
  if (!std::isnan(a.s))
    s = a.s;

  const auto scales = parse_scales(scales_spec);
  const auto zs = parse_centers(centers, file.n, scales.front());
  if (zs.empty())
    throw GeometryError(fmt::format("no center of '{}' keeps B_{} inside B_1", centers, scales.front()));

  std::optional<FieldSeries> series;
  const DiscreteField u = file.field(parabolic ? file.levels.size() - 1 : 0);
  if (parabolic)
    series = file.series();
  if (threshold <= 0.0) {
    LipschitzRatio l;
    if (p)
      l = lipschitz_ratio(*p, u, opt);
    else
      l.norm_l2 = ball_l2_norm(u, opt);
    threshold = default_threshold(l);
  }

  std::vector<DyadicReport> reports(zs.size());
  const VerifiedProblem* pp = p ? &*p : nullptr;
  parallel_for(zs.size(), [&](std::size_t i) {
    reports[i] = parabolic ? analyze_parabolic_center(pp, *series, zs[i], s, scales, threshold, opt)
                           : analyze_center(pp, u, zs[i], scales, threshold, opt);
  });

  const std::string out = !a.out.empty() ? a.out : (c ? c->output.report : std::string("report.csv"));
  const std::string scenario =
      !a.scenario.empty() ? a.scenario : (c ? c->name : std::filesystem::path(field_path).stem().string());
  {
    std::ofstream os(out, std::ios::binary);
    if (!os)
      throw ParameterError(fmt::format("cannot open '{}' for writing", out));
    write_report(os, scenario, reports);
  }
  std::size_t rows = 0, case1 = 0;
  for (const auto& r : reports) {
    rows += r.rows.size();
    case1 += r.tag == CaseTag::case1;
  }
  if (!o.log.empty()) {
    RunLog log(o.log);
    log.append({{"kind", "analyze"}, {"field", field_path}, {"report", out}, {"centers", zs.size()},
                {"rows", rows}, {"threshold", threshold}});
    log.flush();
  }
  fmt::print("{} centers x {} scales = {} rows (M = {:.6g}, {} centers Case1) written to {}\n", zs.size(),
             scales.size(), rows, threshold, case1, out);
  return 0;
}

int run_oracle_check(std::int64_t points)
{
  const auto rows = oracle::run_checks(points);
  bool ok = true;
  fmt::print("{:<28} {:<16} {:>10} {:>14} {:>10}  {}\n", "oracle", "check", "points", "max_residual", "tolerance",
             "result");
  for (const auto& r : rows) {
    fmt::print("{:<28} {:<16} {:>10} {:>14.3e} {:>10.1e}  {}\n", r.oracle, r.check, r.points, r.max_residual,
               r.tolerance, r.pass() ? "pass" : "FAIL");
    ok = ok && r.pass();
  }
  return ok ? 0 : 2;
}

int run_modulus_check(const Common& o)
{
  const Config c = load_config(o.config);
  const auto& mc = c.modulus_check;
  if (mc.moduli.empty())
    throw ConfigError("modulus_check.moduli is empty", 0);
  bool all_dini = true;
  std::vector<double> radii;
  for (int k = 1; k <= 40; ++k)
    radii.push_back(std::ldexp(1.0, -k));
  RunLog log(o.log);
  for (const auto& [name, m] : mc.moduli) {
    const auto dini = dini_integral(m, mc.r_min);
    const auto profile = log_decay_profile(m, radii);
    const auto conf = check_conformance(m);
    fmt::print("{}: {}\n", name, m.describe());
    fmt::print("  dini integral on [{:g}, 1] = {:.10g}  verdict: {}\n", mc.r_min, dini.value,
               dini.convergent ? "convergent" : "DIVERGENT (not a Dini modulus)");
    fmt::print("  omega(r) log(1/r) at r = 2^-40: {:.6g}\n", profile.back());
    nlohmann::json rec{{"kind", "modulus_check"},
                       {"name", name},
                       {"modulus", m.describe()},
                       {"dini_integral", dini.value},
                       {"convergent", dini.convergent},
                       {"log_product_2^-40", profile.back()},
                       {"omega_at_one", conf.omega_at_one},
                       {"max_log_product", conf.max_log_product}};
    if (dini.convergent) {
      const double ps = psi(m, mc.psi_rho, mc.psi_n);
      const auto a2 = lemma_a2_check(m, mc.lemma_alpha, mc.r_min);
      fmt::print("  psi({:g}) with n = {}: {:.10g}\n", mc.psi_rho, mc.psi_n, ps);
      fmt::print("  weighted integral (alpha = {:g}) = {:.10g}  verdict: {}\n", mc.lemma_alpha, a2.value,
                 a2.convergent ? "convergent" : "DIVERGENT");
      rec["psi"] = ps;
      rec["lemma_a2"] = a2.value;
      rec["lemma_a2_convergent"] = a2.convergent;
    }
    fmt::print("  normalization: omega(1) = {:.6g}{}, max omega(r)|log r| = {:.6g}{}\n", conf.omega_at_one,
               conf.elliptic_ok ? "" : " (> 1/2)", conf.max_log_product, conf.parabolic_ok ? "" : " (> 1/2)");
    log.append(rec);
    all_dini = all_dini && dini.convergent;
  }
  log.flush();
  return all_dini ? 0 : 1;
}

int run_sweep(const Common& o, const std::string& resolutions, const std::string& out)
{
  const Config c = load_config(o.config);
  const auto p = verified(c);
  std::vector<int> res = c.sweep.resolutions;
  if (!resolutions.empty()) {
    res.clear();
    std::stringstream ss(resolutions);
    std::string item;
    while (std::getline(ss, item, ','))
      res.push_back(std::stoi(item));
  }
  RunLog log(log_path(o, c));
  log_config(log, c, "sweep");
  const auto table = refine_study(p, res, c.oracle, cg_options(c), &log);
  log.flush();
  std::ostringstream os;
  write_refinement(os, table);
  std::cout << (table.against_oracle ? "errors against the closed-form solution\n" : "errors against the finest grid\n")
            << os.str();
  if (!out.empty()) {
    std::ofstream f(out);
    f << os.str();
  }
  return 0;
}

int run_report(const std::vector<std::string>& inputs, const std::string& out)
{
  std::vector<ScenarioSummary> rows;
  for (const auto& path : inputs) {
    std::ifstream is(path);
    if (!is)
      throw ParameterError(fmt::format("cannot open report '{}'", path));
    rows.push_back(summarize_report(is, std::filesystem::path(path).stem().string()));
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.scenario < b.scenario; });
  if (out.empty()) {
    write_summary(std::cout, rows);
  } else {
    std::ofstream os(out);
    write_summary(os, rows);
  }
  return 0;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"translab: transmission problems and their regularity harness"};
  app.require_subcommand(1);

  Common common;
  std::string field_out;

  auto* solve = app.add_subcommand("solve", "Solve the elliptic transmission problem");
  solve->add_option("--config", common.config, "Configuration file")->required()->check(CLI::ExistingFile);
  solve->add_option("--cells", common.cells, "Override grid.cells_per_side");
  solve->add_option("--out", field_out, "Field file");
  solve->add_option("--log", common.log, "Run log (JSON lines)");

  double dt = 0.0;
  std::string scheme;
  auto* para = app.add_subcommand("parabolic", "Time-dependent transmission problem");
  para->add_option("--config", common.config, "Configuration file")->required()->check(CLI::ExistingFile);
  para->add_option("--cells", common.cells, "Override grid.cells_per_side");
  para->add_option("--dt", dt, "Time step (default h^2)");
  para->add_option("--scheme", scheme, "backward_euler or crank_nicolson");
  para->add_option("--out", field_out, "Series file");
  para->add_option("--log", common.log, "Run log (JSON lines)");

  AnalyzeArgs aa;
  auto* analyze = app.add_subcommand("analyze", "Dyadic regularity report of a field");
  analyze->add_option("--field", aa.field, "Field or series file");
  analyze->add_option("--config", common.config, "Configuration (problem for density columns)")
      ->check(CLI::ExistingFile);
  analyze->add_option("--centers", aa.centers, "gridK or x,y;x,y");
  analyze->add_option("--scales", aa.scales, "r0:k");
  analyze->add_option("--threshold", aa.threshold, "M (default 10 (|u|_L2 + |grad u|_D))");
  analyze->add_option("--min-cells", aa.min_cells, "Smallest radius in cells (default 4)");
  analyze->add_option("--time", aa.s, "Cylinder vertex time for series files");
  analyze->add_option("--scenario", aa.scenario, "Scenario name in the report");
  analyze->add_option("--out", aa.out, "Report CSV");
  analyze->add_option("--log", common.log, "Run log (JSON lines)");

  std::int64_t points = 1'000'000;
  auto* oc = app.add_subcommand("oracle-check", "Strong-form checks of the closed-form solutions");
  oc->add_option("--points", points, "Sample points per oracle");

  auto* mod = app.add_subcommand("modulus-check", "Dini calculus of configured moduli");
  mod->add_option("--config", common.config, "Configuration file")->required()->check(CLI::ExistingFile);
  mod->add_option("--log", common.log, "Run log (JSON lines)");

  std::string resolutions, sweep_out;
  auto* sweep = app.add_subcommand("sweep", "Resolution study");
  sweep->add_option("--config", common.config, "Configuration file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--resolutions", resolutions, "Comma-separated cells per side");
  sweep->add_option("--out", sweep_out, "Table CSV");
  sweep->add_option("--log", common.log, "Run log (JSON lines)");

  std::vector<std::string> inputs;
  std::string report_out;
  auto* report = app.add_subcommand("report", "Summarize report CSVs per scenario");
  report->add_option("inputs", inputs, "Report CSV files")->required()->check(CLI::ExistingFile);
  report->add_option("--out", report_out, "Summary CSV (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*solve)
      return run_solve(common, field_out);
    if (*para)
      return run_parabolic(common, field_out, dt, scheme);
    if (*analyze)
      return run_analyze(common, aa);
    if (*oc)
      return run_oracle_check(points);
    if (*mod)
      return run_modulus_check(common);
    if (*sweep)
      return run_sweep(common, resolutions, sweep_out);
    if (*report)
      return run_report(inputs, report_out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
