#pragma once

#include "translab/grid.hpp"
#include "translab/modulus.hpp"
#include "translab/problem.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace translab {

struct AnalysisOptions {
  /// Smallest admissible radius, in cells.
  int min_cells_per_radius = 4;
  /// Subsamples per direction in cells cut by a sphere.
  int subsamples = 8;
  /// Midpoint resolution for densities; 0 picks 512 (n = 2) or 64 (n = 3).
  int density_resolution = 0;
  /// Space and time resolution of parabolic densities; 0 picks 128 (n = 2) or 32 (n = 3).
  int parabolic_density_resolution = 0;
  /// Modulus used in the slack columns when A declares none.
  std::optional<Modulus> modulus;
  /// Time level of the coefficients and of D for elliptic analysis.
  double t = 0.0;
};

/// Value and gradient of a field at a point: value[i], grad[i*n + a].
using PointSampler = std::function<void(const Point& x, std::span<double> value, std::span<double> grad)>;

/// l(x) = value + gradient (x - z), the affine linearization on B_r(z).
struct AffineFit {
  Point z{};
  double r = 0.0;
  int n = 2;
  int m = 1;
  /// l(z), m entries.
  std::vector<double> value;
  /// m x n row-major.
  std::vector<double> gradient;
  /// r^{-n} int_{B_r(z)} |grad u - grad l|^2.
  double residual = 0.0;
  /// Measured |B_r(z)|.
  double volume = 0.0;

  double gradient_norm() const;
  std::vector<double> operator()(const Point& x) const;
};

/// Gradient part: cell-center gradients averaged with the in-ball fraction of
/// each cell (8^n subsamples in cut cells). Constant part: in-ball average of u.
/// Throws GeometryError unless B_r(z) lies in B_1, ResolutionError when r is
/// below options.min_cells_per_radius cells.
AffineFit affine_fit(const DiscreteField& u, const Point& z, double r, const AnalysisOptions& opt = {});

/// The same fit for a closed-form field on a lattice of `cells` cells across
/// the ball's bounding box (cells aligned with z - r).
AffineFit affine_fit(const PointSampler& u, int n, int m, const Point& z, double r, int cells,
                     const AnalysisOptions& opt = {});

/// Fits at r_k = r0 2^{-k}, k = 0..k_max; C_{r_k} is each fit's residual.
std::vector<AffineFit> bmo_profile(const DiscreteField& u, const Point& z, double r0, int k_max,
                                   const AnalysisOptions& opt = {});

enum class CaseTag { case1, case2, undetermined };
std::string_view case_name(CaseTag c);

struct DyadicRow {
  double r = 0.0;
  std::optional<double> grad_l_norm;
  std::optional<double> bmo_c;
  std::optional<double> density;
  std::optional<double> density_rhs;
  /// (|D_{r/2}| - |D_r| / 2^k) / omega(r)^e when |grad l_r| >= M.
  std::optional<double> slack;
  /// Parabolic columns.
  std::optional<double> sup_t_residual;
  std::optional<double> log_bound_ratio;
};

struct DyadicReport {
  int n = 2;
  Point z{};
  /// Time of the cylinder vertex for parabolic reports.
  std::optional<double> s;
  double threshold = 0.0;
  CaseTag tag = CaseTag::undetermined;
  std::vector<DyadicRow> rows;

  /// Smallest c with LHS <= RHS + c omega^e on every row meeting the
  /// hypothesis (0 if none does).
  double required_constant() const;
};

/// Density columns for every scale (strictly decreasing, contained in B_1),
/// together with the fit columns needed for the hypothesis |grad l| >= M.
DyadicReport density_decay_report(const VerifiedProblem& p, const DiscreteField& u, const Point& z,
                                  const std::vector<double>& scales, double threshold,
                                  const AnalysisOptions& opt = {});

/// Fit, BMO, density and dichotomy columns at one center. Without a problem
/// the density columns stay empty; scales the grid cannot resolve keep empty
/// fit columns.
DyadicReport analyze_center(const VerifiedProblem* p, const DiscreteField& u, const Point& z,
                            const std::vector<double>& scales, double threshold, const AnalysisOptions& opt = {});

struct LipschitzRatio {
  double sup_grad = 0.0;
  double norm_l2 = 0.0;
  double norm_lip_d = 0.0;
  double ratio = 0.0;
};

/// sup of cell-center |grad u| over cells centered in B_{1/2}, against
/// ||u||_{L2(B_1)} + max |grad u| over cells with every corner in D and B_1.
LipschitzRatio lipschitz_ratio(const VerifiedProblem& p, const DiscreteField& u, const AnalysisOptions& opt = {});

/// ||u||_{L2(B_1)} (Gauss points in interior cells, subsamples in cut cells).
double ball_l2_norm(const DiscreteField& u, const AnalysisOptions& opt = {});

/// Case1 when some resolvable scale has |grad l| < 2M, Case2 when all do not,
/// undetermined with fewer than three resolvable scales.
CaseTag dichotomy_classify(const DiscreteField& u, const Point& z, double threshold, double r0, int k_max,
                           const AnalysisOptions& opt = {});

/// 10 (norm_l2 + norm_lip_d).
double default_threshold(const LipschitzRatio& l);

struct FrozenComparison {
  DiscreteField v;
  double sup_grad_inner = 0.0;
  double energy_ratio = 0.0;
};

/// Solves div(A(z) grad v) = 0 on the cells with all corners in B_r(z), v = u - l_{z,r}
/// on the boundary of that cell set. Requires r >= 16 h.
FrozenComparison frozen_comparison(const VerifiedProblem& p, const DiscreteField& u, const Point& z, double r,
                                   const AnalysisOptions& opt = {});

// --- parabolic ---------------------------------------------------------

struct ParabolicFit {
  Point z{};
  double s = 0.0;
  double r = 0.0;
  /// u(z, s).
  std::vector<double> value;
  /// Space-time average of grad u over Q_r(z, s), m x n.
  std::vector<double> gradient;
  /// max over stored levels t in [s - r^2, s] of r^{-n-2} int_{B_r(z)} |u(t) - u(Z) - grad l (x - z)|^2.
  double sup_t_residual = 0.0;
  double log_bound_ratio = 0.0;
  int levels = 0;

  double gradient_norm() const;
};

ParabolicFit parabolic_affine_fit(const FieldSeries& u, const Point& z, double s, double r,
                                  const AnalysisOptions& opt = {});

/// Parabolic analogue of density_decay_report (factor 2^{n+2}, exponent 3n+4).
DyadicReport parabolic_density_decay(const VerifiedProblem& p, const FieldSeries& u, const Point& z, double s,
                                     const std::vector<double>& scales, double threshold,
                                     const AnalysisOptions& opt = {});

/// Parabolic analogue of analyze_center.
DyadicReport analyze_parabolic_center(const VerifiedProblem* p, const FieldSeries& u, const Point& z, double s,
                                      const std::vector<double>& scales, double threshold,
                                      const AnalysisOptions& opt = {});

struct SpacetimePoint {
  Point x{};
  double t = 0.0;
};

/// sqrt(|x - y|^2 + |t - s|).
double parabolic_distance(const SpacetimePoint& a, const SpacetimePoint& b);

struct TimeProbe {
  Point x{};
  double s = 0.0;
  std::vector<double> gaps;
};

struct HolderReport {
  std::vector<double> ratios;
  double max_ratio = 0.0;
  /// Least-squares slope of log|u(x,s) - u(x,s-g)| against log g; empty when static.
  std::optional<double> time_exponent;
  bool is_static = false;
};

/// Ratios |u(X) - u(Y)| / d_p(X, Y) for pairs in Q_{1/2} separated by at
/// least 2 max(h, sqrt(dt)), and the time exponent at the probe point.
HolderReport holder_time_exponent(const FieldSeries& u, const std::vector<std::pair<SpacetimePoint, SpacetimePoint>>& pairs,
                                  const TimeProbe& probe);

} // namespace translab
