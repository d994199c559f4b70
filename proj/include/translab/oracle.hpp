#pragma once

#include "translab/geometry.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace translab::oracle {

struct ScalarSample {
  double u;
  Point grad;
};

/// u = x2 below the interface {x2 = 0}, u = (a/b) x2 above; coefficient a
/// below and b in D = {x2 > 0}.
ScalarSample flat_interface(double a, double b, const Point& x);

/// Planar two-phase disk: conductivity k in |x| < R, 1 outside.
/// u = 2 x1/(1+k) inside, u = x1 (1 + (1-k)/(1+k) R^2/|x|^2) outside.
ScalarSample disk_inclusion(double k, double radius, const Point& x);

/// One-sided branches, used for trace and flux checks on the interface.
ScalarSample flat_interface_branch(double a, double b, const Point& x, bool inside);
ScalarSample disk_inclusion_branch(double k, double radius, const Point& x, bool inside);

/// prod_i sin(pi p_i x_i) exp(-pi^2 |p|^2 elapsed): a Dirichlet eigenmode of
/// the heat equation on [-1,1]^n.
ScalarSample eigenmode_decay(int n, std::span<const int> modes, const Point& x, double elapsed);
double eigenmode_rate(std::span<const int> modes);

/// A closed-form field R^n x R -> R^m with its spatial gradient (out[i*n+a]).
struct FieldOracle {
  int n = 2;
  int m = 1;
  std::string name;
  std::function<void(const Point& x, double t, std::span<double> value, std::span<double> grad)> eval;

  std::vector<double> value(const Point& x, double t = 0.0) const;
  std::vector<double> gradient(const Point& x, double t = 0.0) const;
};

FieldOracle flat_interface_oracle(double a, double b, int n = 2);
FieldOracle disk_inclusion_oracle(double k, double radius);
/// Eigenmode with elapsed time t - t_start.
FieldOracle eigenmode_oracle(int n, std::vector<int> modes, double t_start = -1.0);
/// u(x) = G x + c, G given row-major m x n.
FieldOracle affine_oracle(int n, int m, std::vector<double> gradient, std::vector<double> offset);

/// m stacked copies of a scalar oracle, component i multiplied by scales[i]
/// (all ones when empty).
FieldOracle vector_decoupled(const FieldOracle& base, int m, std::vector<double> scales = {});

/// One row of the strong-form residual suite.
struct CheckRow {
  std::string oracle;
  std::string check;
  std::int64_t points = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass() const noexcept { return max_residual <= tolerance; }
};

/// Finite-difference step used by the suite.
inline constexpr double kFdStep = 1e-5;
/// Distance kept from interfaces when checking the strong form.
inline constexpr double kInterfaceMargin = 1e-3;

/// Strong-form, gradient and flux-continuity checks of every oracle at
/// `points` quasi-random points each.
std::vector<CheckRow> run_checks(std::int64_t points = 1'000'000);

} // namespace translab::oracle
