#include "translab/elliptic.hpp"

#include "translab/error.hpp"

#include <fmt/format.h>

#include <array>
#include <chrono>
#include <cmath>
#include <limits>

namespace translab {

EllipticSolution solve_transmission(const VerifiedProblem& p, const Grid& grid, const CgOptions& opt, RunLog* log)
{
  if (grid.cells_per_side() < 16)
    throw ResolutionError(fmt::format("solve_transmission needs cells_per_side >= 16, got {}",
                                      grid.cells_per_side()));
  const auto start = std::chrono::steady_clock::now();
  const auto system = assemble(p, grid);
  auto cg = solve_cg(system, opt);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  EllipticSolution out{DiscreteField(grid, p->m(), std::move(cg.x)), {cg.iterations, cg.residual, seconds}};
  if (log) {
    const auto& k = opt.kernels ? *opt.kernels : simd::kernels();
    log->append({{"kind", "solve"},
                 {"problem_hash", p->hash()},
                 {"n", grid.n()},
                 {"m", p->m()},
                 {"cells_per_side", grid.cells_per_side()},
                 {"residual", cg.residual},
                 {"iterations", cg.iterations},
                 {"wall_time_s", seconds},
                 {"isa", std::string(simd::isa_name(k.isa))}});
  }
  return out;
}

double l2_error(const DiscreteField& u, const oracle::FieldOracle& exact, double t, bool relative)
{
  const Grid& grid = u.grid();
  const int n = grid.n();
  const int m = u.m();
  if (exact.m != m || exact.n != n)
    throw ParameterError("l2_error: oracle shape does not match the field");
  static constexpr std::array<double, 3> nodes{0.5 - 0.5 * 0.7745966692414834, 0.5, 0.5 + 0.5 * 0.7745966692414834};
  static constexpr std::array<double, 3> weights{5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
  int points = 1;
  for (int d = 0; d < n; ++d)
    points *= 3;
  const double vol = std::pow(grid.h(), n);
  std::vector<double> uh(m), ue(m), ge(static_cast<std::size_t>(m * n));

  double err2 = 0.0, ref2 = 0.0;
  for (Index cell = 0; cell < grid.cell_count(); ++cell) {
    const Point origin = grid.cell_origin(cell);
    for (int q = 0; q < points; ++q) {
      Point x = origin;
      double w = vol;
      int code = q;
      for (int d = 0; d < n; ++d) {
        x[d] += grid.h() * nodes[code % 3];
        w *= weights[code % 3];
        code /= 3;
      }
      u.sample(x, uh, {});
      exact.eval(x, t, ue, ge);
      for (int i = 0; i < m; ++i) {
        err2 += w * (uh[i] - ue[i]) * (uh[i] - ue[i]);
        ref2 += w * ue[i] * ue[i];
      }
    }
  }
  if (!relative)
    return std::sqrt(err2);
  return ref2 > 0.0 ? std::sqrt(err2 / ref2) : std::sqrt(err2);
}

std::string RefinementTable::rate_label(std::size_t row) const
{
  const auto& r = rows.at(row);
  if (r.exact && (row == 0 || rows[row - 1].exact))
    return "exact";
  if (!r.rate)
    return "-";
  return fmt::format("{:.3f}", *r.rate);
}

namespace {

// Relative discrete L2 difference between a coarse field and a fine one sampled at the coarse nodes.
double restricted_error(const DiscreteField& coarse, const DiscreteField& fine)
{
  const Grid& g = coarse.grid();
  const int m = coarse.m();
  const int ratio = fine.grid().cells_per_side() / g.cells_per_side();
  double err2 = 0.0, ref2 = 0.0;
  for (Index node = 0; node < g.node_count(); ++node) {
    auto idx = g.node_multi(node);
    for (int d = 0; d < g.n(); ++d)
      idx[d] *= ratio;
    const Index fnode = fine.grid().node_index(idx);
    for (int i = 0; i < m; ++i) {
      const double e = coarse.value(node, i) - fine.value(fnode, i);
      err2 += e * e;
      ref2 += fine.value(fnode, i) * fine.value(fnode, i);
    }
  }
  return ref2 > 0.0 ? std::sqrt(err2 / ref2) : std::sqrt(err2);
}

} // namespace

RefinementTable refine_study(const VerifiedProblem& p, const std::vector<int>& resolutions,
                             const std::optional<oracle::FieldOracle>& exact, const CgOptions& opt, RunLog* log)
{
  if (resolutions.size() < 2)
    throw ParameterError("refine_study needs at least two resolutions");
  for (std::size_t k = 1; k < resolutions.size(); ++k)
    if (resolutions[k] <= resolutions[k - 1])
      throw ParameterError("refine_study resolutions must be strictly increasing");

  RefinementTable table;
  table.against_oracle = exact.has_value();
  std::vector<DiscreteField> fields;
  for (int cells : resolutions) {
    const Grid grid(p->n(), cells);
    auto sol = solve_transmission(p, grid, opt, log);
    RefinementRow row;
    row.cells_per_side = cells;
    row.h = grid.h();
    row.iterations = sol.stats.iterations;
    row.wall_seconds = sol.stats.wall_seconds;
    if (exact)
      row.error = l2_error(sol.field, *exact);
    table.rows.push_back(row);
    fields.push_back(std::move(sol.field));
  }
  if (!exact) {
    for (std::size_t k = 0; k + 1 < fields.size(); ++k)
      table.rows[k].error = restricted_error(fields[k], fields.back());
    table.rows.back().error = std::numeric_limits<double>::quiet_NaN();
  }
  for (std::size_t k = 0; k < table.rows.size(); ++k) {
    auto& row = table.rows[k];
    row.exact = std::isfinite(row.error) && row.error <= kExactThreshold;
    if (k > 0 && std::isfinite(row.error) && std::isfinite(table.rows[k - 1].error) && row.error > 0.0)
      row.rate = std::log2(table.rows[k - 1].error / row.error) /
                 std::log2(static_cast<double>(row.cells_per_side) / table.rows[k - 1].cells_per_side);
  }
  return table;
}

} // namespace translab
