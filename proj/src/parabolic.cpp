#include "translab/parabolic.hpp"

#include "translab/error.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>

namespace translab {

std::string_view scheme_name(TimeScheme s)
{
  return s == TimeScheme::backward_euler ? "backward_euler" : "crank_nicolson";
}

TimeScheme parse_scheme(std::string_view s)
{
  if (s == "backward_euler" || s == "be")
    return TimeScheme::backward_euler;
  if (s == "crank_nicolson" || s == "cn")
    return TimeScheme::crank_nicolson;
  throw ParameterError(fmt::format("unknown time scheme '{}'", s));
}

namespace {

struct Operators {
  CsrMatrix stiffness;
  std::vector<double> load;
};

Operators operators_at(const VerifiedProblem& p, const Grid& grid, double t)
{
  Operators op{stiffness_matrix(p, grid, t), std::vector<double>(static_cast<std::size_t>(grid.node_count() * p->m()), 0.0)};
  if (p->forcing()) {
    const auto& f = *p->forcing();
    add_flux_load(op.load, grid, p->m(), [&f, t](const Point& x, std::span<double> out) { f(x, t, out); });
  }
  return op;
}

} // namespace

ParabolicSolution solve_parabolic(const VerifiedProblem& p, const Grid& grid, const ParabolicOptions& opt,
                                  std::span<const double> initial, RunLog* log)
{
  const int m = p->m();
  const std::size_t dofs = static_cast<std::size_t>(grid.node_count() * m);
  if (initial.size() != dofs)
    throw ParameterError(fmt::format("initial field has {} values, expected {}", initial.size(), dofs));
  const double dt_req = opt.dt > 0.0 ? opt.dt : grid.h() * grid.h();
  if (!(dt_req > 0.0 && dt_req < 1.0))
    throw ParameterError(fmt::format("time step {} not in (0,1)", dt_req));
  if (!(opt.t_end > opt.t_start))
    throw ParameterError("t_end must exceed t_start");
  if (opt.store_every < 1)
    throw ParameterError("store_every must be >= 1");

  const double span = opt.t_end - opt.t_start;
  const int steps = static_cast<int>(std::ceil(span / dt_req - 1e-9));
  const double dt = span / steps;
  const double theta = opt.scheme == TimeScheme::backward_euler ? 1.0 : 0.5;
  const auto start_clock = std::chrono::steady_clock::now();

  CsrMatrix mass = q1_pattern(grid, m);
  add_mass(mass, grid, m);
  const auto mask = boundary_dofs(grid, m);
  const bool frozen = p->is_static();

  Operators current = operators_at(p, grid, opt.t_start);
  auto system_for = [&](const CsrMatrix& k_next) {
    CsrMatrix s = mass;
    s.add_scaled(k_next, theta * dt);
    return s;
  };
  Operators next = frozen ? current : operators_at(p, grid, opt.t_start + dt);
  CsrMatrix system = system_for(next.stiffness);
  CsrMatrix constrained = system;
  {
    std::vector<double> dummy(dofs, 0.0), zeros(dofs, 0.0);
    apply_dirichlet(constrained, dummy, mask, zeros);
  }

  ParabolicSolution out{FieldSeries(grid, m), dt, steps, 0, 0.0, 0.0};
  std::vector<double> u(initial.begin(), initial.end());
  out.series.push(opt.t_start, u);

  std::vector<double> rhs(dofs), tmp(dofs), lifted(dofs);
  for (int step = 0; step < steps; ++step) {
    const double t_next = opt.t_start + (step + 1) * dt;
    if (!frozen && step > 0) {
      current = std::move(next);
      next = operators_at(p, grid, t_next);
      system = system_for(next.stiffness);
      constrained = system;
      std::vector<double> dummy(dofs, 0.0), zeros(dofs, 0.0);
      apply_dirichlet(constrained, dummy, mask, zeros);
    }

    // rhs = M u - (1-theta) dt K u + dt (theta L+ + (1-theta) L)
    mass.multiply(u, rhs);
    if (theta < 1.0) {
      current.stiffness.multiply(u, tmp);
      for (std::size_t i = 0; i < dofs; ++i)
        rhs[i] -= (1.0 - theta) * dt * tmp[i];
    }
    for (std::size_t i = 0; i < dofs; ++i)
      rhs[i] += dt * (theta * next.load[i] + (1.0 - theta) * current.load[i]);

    // symmetric elimination of the Dirichlet data at t_next
    const auto g = boundary_values(grid, m, p->boundary(), t_next);
    system.multiply(g, lifted);
    for (std::size_t i = 0; i < dofs; ++i)
      rhs[i] = mask[i] ? g[i] : rhs[i] - lifted[i];

    std::vector<double> guess = u;
    for (std::size_t i = 0; i < dofs; ++i)
      if (mask[i])
        guess[i] = g[i];
    CgResult cg;
    try {
      cg = solve_cg(constrained, rhs, guess, opt.cg);
    } catch (const ConvergenceError& e) {
      throw ConvergenceError(fmt::format("time step {} (t = {}): {}", step + 1, t_next, e.what()), e.residual(),
                             e.iterations());
    }
    u = std::move(cg.x);
    for (std::size_t i = 0; i < dofs; ++i)
      if (mask[i])
        u[i] = g[i];
    out.total_iterations += cg.iterations;
    out.max_residual = std::max(out.max_residual, cg.residual);
    if ((step + 1) % opt.store_every == 0 || step + 1 == steps)
      out.series.push(t_next, u);
  }
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_clock).count();

  if (log)
    log->append({{"kind", "parabolic"},
                 {"problem_hash", p->hash()},
                 {"n", grid.n()},
                 {"m", m},
                 {"cells_per_side", grid.cells_per_side()},
                 {"dt", dt},
                 {"steps", steps},
                 {"scheme", std::string(scheme_name(opt.scheme))},
                 {"max_residual", out.max_residual},
                 {"iterations", out.total_iterations},
                 {"wall_time_s", out.wall_seconds}});
  return out;
}

SpacetimeSample sample_spacetime(const FieldSeries& u, const Point& x, double t)
{
  SpacetimeSample s{std::vector<double>(u.m()), std::vector<double>(static_cast<std::size_t>(u.m() * u.grid().n()))};
  u.sample(x, t, s.value, s.gradient);
  return s;
}

double sup_time_l2_squared(const FieldSeries& u)
{
  CsrMatrix mass = q1_pattern(u.grid(), u.m());
  add_mass(mass, u.grid(), u.m());
  double best = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k)
    best = std::max(best, quadratic_form(mass, u.level_values(k)));
  return best;
}

} // namespace translab
