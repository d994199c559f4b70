#include "translab/config.hpp"
#include "translab/error.hpp"
#include "translab/field_io.hpp"
#include "translab/report.hpp"

#include <doctest.h>
#include <fmt/format.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace translab;
namespace fs = std::filesystem;

namespace {

const std::string cli = TRANSLAB_CLI;
const std::string configs = TRANSLAB_CONFIGS;

struct Run {
  int status;
  std::string out;
};

fs::path work_dir()
{
  static const fs::path dir = [] {
    const fs::path d = fs::current_path() / "cli_work";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

// runs the CLI inside the work directory, stdout and stderr merged
Run run(const std::string& args)
{
  const fs::path capture = work_dir() / "capture.txt";
  const std::string cmd =
      fmt::format("cd '{}' && '{}' {} > '{}' 2>&1", work_dir().string(), cli, args, capture.string());
  const int raw = std::system(cmd.c_str());
  std::ifstream is(capture);
  std::stringstream ss;
  ss << is.rdbuf();
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, ss.str()};
}

std::string slurp(const fs::path& p)
{
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

fs::path write_text(const std::string& name, const std::string& text)
{
  const fs::path p = work_dir() / name;
  std::ofstream(p) << text;
  return p;
}

std::size_t data_rows(const std::string& csv)
{
  std::istringstream is(csv);
  std::string line;
  std::size_t n = 0;
  bool header = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#')
      continue;
    if (!header) {
      header = true;
      continue;
    }
    ++n;
  }
  return n;
}

} // namespace

TEST_CASE("help and usage errors")
{
  CHECK(run("--help").status == 0);
  CHECK(run("solve --help").status == 0);
  CHECK(run("frobnicate").status == 1);
  CHECK(run("solve --config does_not_exist.yaml").status == 1);
}

TEST_CASE("solve writes a field and a log")
{
  const auto r = run(fmt::format("solve --config '{}/flat.yaml'", configs));
  INFO(r.out);
  REQUIRE(r.status == 0);
  const auto file = read_field((work_dir() / "flat.fld").string());
  CHECK(file.cells_per_side == 64);
  CHECK(file.levels.size() == 1);
  const auto log = slurp(work_dir() / "flat.jsonl");
  CHECK(log.find("effective") != std::string::npos);
  CHECK(log.find("iterations") != std::string::npos);
}

TEST_CASE("malformed configs exit 1 with the line number")
{
  const auto p = write_text("bad.yaml", "name: bad\nn: 2\ngrid:\n  cells_per_side: 32\n  cell_size: 3\n");
  const auto r = run(fmt::format("solve --config '{}'", p.string()));
  CHECK(r.status == 1);
  CHECK(r.out.find("line 5") != std::string::npos);

  const auto q = write_text("bad2.yaml", "name: bad\nproblem:\n  preset: flat_interface\n  a: [1\n");
  const auto r2 = run(fmt::format("solve --config '{}'", q.string()));
  CHECK(r2.status == 1);
  CHECK(r2.out.find("line") != std::string::npos);
}

TEST_CASE("numerical failures exit 2")
{
  const auto p = write_text("capped.yaml", "name: capped\nproblem:\n  preset: disk_inclusion\ngrid:\n  cells_per_side: 32\n"
                                           "solver:\n  tol: 1.0e-12\n  max_iter: 2\noutput:\n  field: capped.fld\n"
                                           "  log: capped.jsonl\n");
  CHECK(run(fmt::format("solve --config '{}'", p.string())).status == 2);
}

TEST_CASE("modulus-check")
{
  const auto bad = run(fmt::format("modulus-check --config '{}/nondini.yaml'", configs));
  CHECK(bad.status == 1);
  CHECK(bad.out.find("DIVERGENT") != std::string::npos);
  CHECK(run(fmt::format("modulus-check --config '{}/dini.yaml'", configs)).status == 0);
}

TEST_CASE("oracle-check")
{
  const auto r = run("oracle-check --points 5000");
  CHECK(r.status == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
}

TEST_CASE("analyze: row count and determinism")
{
  REQUIRE(run(fmt::format("solve --config '{}/disk.yaml' --cells 64 --out disk64.fld", configs)).status == 0);
  const auto a = run("analyze --field disk64.fld --centers grid16 --scales 0.25:5 --out a1.csv");
  INFO(a.out);
  REQUIRE(a.status == 0);
  const auto b = run("analyze --field disk64.fld --centers grid16 --scales 0.25:5 --out a2.csv");
  REQUIRE(b.status == 0);
  const auto csv = slurp(work_dir() / "a1.csv");
  CHECK(csv == slurp(work_dir() / "a2.csv"));
  // 112 of the 256 grid16 midpoints keep B_0.25 inside B_1
  CHECK(data_rows(csv) == parse_centers("grid16", 2, 0.25).size() * 5);
  CHECK(data_rows(csv) == 560);
  CHECK(csv.rfind(std::string(kReportHeader), 0) == 0);

  const auto c =
      run(fmt::format("analyze --field disk64.fld --config '{}/disk.yaml' --centers grid4 --out a3.csv", configs));
  REQUIRE(c.status == 0);
  const auto with_density = slurp(work_dir() / "a3.csv");
  CHECK(with_density.find("scenario: disk_inclusion") != std::string::npos);
  CHECK(data_rows(with_density) == 4 * 3);

  const auto s = run("report a1.csv a3.csv");
  CHECK(s.status == 0);
  CHECK(s.out.find("disk_inclusion") != std::string::npos);
  CHECK(run("analyze --field missing.fld").status == 1);
}

TEST_CASE("parabolic run and space-time analysis")
{
  const auto r = run(fmt::format("parabolic --config '{}/eigenmode.yaml' --out eig.fld", configs));
  INFO(r.out);
  REQUIRE(r.status == 0);
  const auto file = read_field((work_dir() / "eig.fld").string());
  CHECK(file.levels.size() == 1001);
  CHECK(file.times.front() == doctest::Approx(-1.0));
  const auto a = run(fmt::format("analyze --field eig.fld --config '{}/eigenmode.yaml' --out eig.csv", configs));
  REQUIRE(a.status == 0);
  const auto csv = slurp(work_dir() / "eig.csv");
  CHECK(csv.find("sup_t_residual") != std::string::npos);
}

TEST_CASE("sweep")
{
  const auto r = run(fmt::format("sweep --config '{}/flat.yaml' --resolutions 16,32 --out sweep.csv", configs));
  INFO(r.out);
  CHECK(r.status == 0);
  CHECK(slurp(work_dir() / "sweep.csv").find("exact") != std::string::npos);
}

TEST_CASE("effective configuration round-trips")
{
  for (const char* name : {"flat", "disk", "cusp", "smooth", "eigenmode", "nondini", "example"}) {
    CAPTURE(name);
    const auto c = load_config(fmt::format("{}/{}.yaml", configs, name));
    CHECK_FALSE(c.effective.empty());
    const auto again = parse_config(c.effective);
    CHECK(again.effective == c.effective);
    CHECK(again.name == c.name);
  }
}

TEST_CASE("config validation")
{
  CHECK_THROWS_AS(parse_config("name: x\nbogus: 1\n"), ConfigError);
  try {
    parse_config("name: x\ngrid:\n  cells_per_side: 64\ntime:\n  scheme: leapfrog\n");
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 5);
  }
  const std::string rough = "name: r\nproblem:\n  conformance: {}\n  A:\n    kind: constant\n    value: 1\n"
                            "    dini: {{modulus: {{kind: power, exponent: 1}}, seminorm: 0.1}}\n";
  CHECK_THROWS_AS(parse_config(fmt::format(fmt::runtime(rough), "reject")), ParameterError);
  const auto warned = parse_config(fmt::format(fmt::runtime(rough), "warn"));
  CHECK(warned.warnings.size() == 1);
  const auto rescaled = parse_config(fmt::format(fmt::runtime(rough), "rescale"));
  REQUIRE(rescaled.problem.has_value());
  const auto& d = rescaled.problem->a().dini();
  REQUIRE(d.has_value());
  CHECK(d->modulus(1.0) <= 0.5 + 1e-12);
  CHECK(check_conformance(d->modulus).elliptic_ok);

  const auto c = parse_config("name: defaults\n");
  CHECK(c.grid.cells_per_side == 64);
  CHECK(c.solver.tol == 1e-10);
  CHECK(c.time.scheme == TimeScheme::backward_euler);
  CHECK(c.analysis.centers == "grid8");
  CHECK_FALSE(c.problem.has_value());
}

TEST_CASE("field files")
{
  const Grid g(2, 16);
  const auto f = DiscreteField::interpolate(g, 2, [](const Point& x, std::span<double> out) {
    out[0] = x[0] * x[1];
    out[1] = 1.0 / 3.0 + x[0];
  });
  std::stringstream ss;
  write_field(ss, f);
  const auto back = read_field(ss);
  CHECK(back.m == 2);
  CHECK(back.times.empty());
  const auto fb = back.field();
  for (Index k = 0; k < g.node_count(); ++k)
    CHECK(fb.value(k, 1) == f.value(k, 1));

  FieldSeries s(g, 2);
  s.push(-1.0, std::vector<double>(f.values().begin(), f.values().end()));
  s.push(-0.5, std::vector<double>(f.values().size(), 0.25));
  std::stringstream ss2;
  write_series(ss2, s);
  const auto sb = read_field(ss2);
  CHECK(sb.times == s.times());
  CHECK(sb.series().level_values(1)[7] == 0.25);

  std::stringstream bad("TRANSLAB-FIELD 1\nn 2\nm 1\ncells_per_side 16\nlevels 1\nend\n");
  CHECK_THROWS_AS(read_field(bad), ParameterError);
  std::stringstream wrong("NOT-A-FIELD\n");
  CHECK_THROWS_AS(read_field(wrong), ParameterError);

  std::stringstream grad;
  write_gradient_csv(grad, f);
  CHECK(data_rows(grad.str()) == static_cast<std::size_t>(g.cell_count()));
}

TEST_CASE("scales and centers")
{
  const auto s = parse_scales("0.25:3");
  REQUIRE(s.size() == 3);
  CHECK(s[2] == 0.0625);
  CHECK_THROWS_AS(parse_scales("0.25"), ParameterError);
  CHECK_THROWS_AS(parse_scales("1.5:2"), ParameterError);
  const auto c = parse_centers("grid4", 2, 0.25);
  CHECK(c.size() == 4);
  const auto e = parse_centers("0.1,0.2;-0.3,0", 2, 0.25);
  REQUIRE(e.size() == 2);
  CHECK(e[1][0] == -0.3);
  CHECK_THROWS_AS(parse_centers("0.1", 2, 0.25), ParameterError);
  CHECK(format_cell(std::nullopt) == "NA");
  CHECK(format_cell(0.5) == "5.0000000000e-01");
}
