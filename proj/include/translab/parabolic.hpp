#pragma once

#include "translab/elliptic.hpp"
#include "translab/fem.hpp"

#include <span>
#include <string_view>

namespace translab {

enum class TimeScheme { backward_euler, crank_nicolson };

std::string_view scheme_name(TimeScheme s);
TimeScheme parse_scheme(std::string_view s);

struct ParabolicOptions {
  /// Time step; 0 selects h^2.
  double dt = 0.0;
  TimeScheme scheme = TimeScheme::backward_euler;
  double t_start = -1.0;
  double t_end = 0.0;
  /// Store every k-th level (the first and last level are always stored).
  int store_every = 1;
  CgOptions cg{};
};

struct ParabolicSolution {
  FieldSeries series;
  double dt = 0.0;
  int steps = 0;
  int total_iterations = 0;
  double max_residual = 0.0;
  double wall_seconds = 0.0;
};

/// Theta-scheme for d_t u = div(A_eff grad u - F) on [-1,1]^n x (t_start, t_end):
///   (M + theta dt K(t+dt)) u+ = M u - (1 - theta) dt K(t) u + dt (theta L(t+dt) + (1 - theta) L(t))
/// with theta = 1 (backward Euler) or 1/2 (Crank-Nicolson), L the flux load
/// and Dirichlet data imposed at every level. Static problems reuse one matrix.
ParabolicSolution solve_parabolic(const VerifiedProblem& p, const Grid& grid, const ParabolicOptions& opt,
                                  std::span<const double> initial, RunLog* log = nullptr);

/// Value and spatial gradient of the stored series at (x, t).
struct SpacetimeSample {
  std::vector<double> value;
  std::vector<double> gradient;
};

SpacetimeSample sample_spacetime(const FieldSeries& u, const Point& x, double t);

/// sup_t int |u(., t)|^2 dx over the stored levels, the first summand of the
/// normalization hypothesis (paired with the L-inf norm of grad u on D).
double sup_time_l2_squared(const FieldSeries& u);

} // namespace translab
