#pragma once

#include "translab/fem.hpp"
#include "translab/oracle.hpp"
#include "translab/run_log.hpp"

#include <optional>
#include <string>
#include <vector>

namespace translab {

struct SolveStats {
  int iterations = 0;
  double residual = 0.0;
  double wall_seconds = 0.0;
};

struct EllipticSolution {
  DiscreteField field;
  SolveStats stats;
};

/// Q1 Galerkin solution of the transmission problem with the problem's
/// boundary data. Requires cells_per_side >= 16. Appends a record to `log`
/// when given.
EllipticSolution solve_transmission(const VerifiedProblem& p, const Grid& grid, const CgOptions& opt = {},
                                    RunLog* log = nullptr);

/// L2 norm over [-1,1]^n of (u_h - oracle) with a 3-point Gauss rule per
/// direction and cell; relative to the oracle's L2 norm when `relative`.
double l2_error(const DiscreteField& u, const oracle::FieldOracle& exact, double t = 0.0, bool relative = true);

struct RefinementRow {
  int cells_per_side = 0;
  double h = 0.0;
  /// Relative L2 error (NaN for the reference grid of a self-convergence study).
  double error = 0.0;
  /// log2(e_h / e_{h/2}) against the previous row.
  std::optional<double> rate;
  bool exact = false;
  int iterations = 0;
  double wall_seconds = 0.0;
};

struct RefinementTable {
  bool against_oracle = false;
  std::vector<RefinementRow> rows;

  /// "exact", "-" or the rate with three decimals.
  std::string rate_label(std::size_t row) const;
};

/// Errors at or below this relative level count as exact reproduction.
inline constexpr double kExactThreshold = 1e-8;

/// Solves at each resolution (strictly increasing powers of two, at least two)
/// and measures the error against `exact` when given, else against the
/// finest solve restricted to each coarser grid's nodes.
RefinementTable refine_study(const VerifiedProblem& p, const std::vector<int>& resolutions,
                             const std::optional<oracle::FieldOracle>& exact, const CgOptions& opt = {},
                             RunLog* log = nullptr);

} // namespace translab
