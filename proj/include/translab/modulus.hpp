#pragma once

#include "translab/quadrature.hpp"

#include <span>
#include <string>
#include <variant>
#include <vector>

namespace translab {

/// omega(r) = scale * r^exponent
struct PowerKind {
  double exponent;
  double scale;
};

/// omega(r) = scale * log(e/r)^(-exponent)
struct LogPowerKind {
  double exponent;
  double scale;
};

struct Breakpoint {
  double r;
  double value;
};

/// Piecewise-linear through the breakpoints, constant below the first and
/// above the last one.
struct TabulatedKind {
  std::vector<Breakpoint> points;
};

/// A modulus of continuity omega: (0,1] -> (0,inf), non-decreasing.
class Modulus {
public:
  using Kind = std::variant<PowerKind, LogPowerKind, TabulatedKind>;

  static Modulus power(double exponent, double scale = 1.0);
  static Modulus log_power(double exponent, double scale = 1.0);
  static Modulus tabulated(std::vector<Breakpoint> points);

  /// omega(r); throws DomainError unless r is in (0,1].
  double operator()(double r) const;

  /// omega(r) without the domain check, for quadrature inner loops.
  double value_unchecked(double r) const noexcept;

  const Kind& kind() const noexcept { return kind_; }

  /// The same shape multiplied by `factor` > 0.
  Modulus scaled(double factor) const;

  std::string describe() const;

private:
  explicit Modulus(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

struct ConvergenceVerdict {
  double value = 0.0;
  bool convergent = false;
  /// Per-decade contributions over [10^-(k+1), 10^-k], k = 0..15, used for the verdict.
  std::vector<double> decade_increments;
};

/// Ratio by which successive per-decade tail increments must shrink.
inline constexpr double kTailDecayFactor = 1.2;
/// Decades probed for the convergence verdict (down to 1e-16).
inline constexpr int kVerdictDecades = 16;
/// Trailing increment ratios that must all meet kTailDecayFactor.
inline constexpr int kVerdictWindow = 4;

/// int_{r_min}^1 omega(r)/r dr plus a convergence verdict from the decay of
/// per-decade tail increments.
ConvergenceVerdict dini_integral(const Modulus& m, double r_min, QuadratureTolerance tol = {});

/// omega(r) * log(1/r) for each radius; radii must be strictly decreasing in (0,1).
std::vector<double> log_decay_profile(const Modulus& m, std::span<const double> radii);

/// psi(rho) = rho^(n/2) + sqrt(rho^n * int_rho^1 omega(t)^(3n) / t^(n+1) dt) + omega(rho),
/// for rho in (0, 1/2].
double psi(const Modulus& m, double rho, int n);

/// int_{r_min}^1 r^(a/2-1) sqrt( int_r^1 omega(s)^(2a) / s^(a+1) ds ) dr for a > 1,
/// with the same tail verdict as dini_integral.
ConvergenceVerdict lemma_a2_check(const Modulus& m, double alpha, double r_min);

/// The normalizations omega(1) <= 1/2 and omega(r)|log r| <= 1/2 on (0, 3/4]
/// assumed by the decay lemmas.
struct Conformance {
  double omega_at_one = 0.0;
  double max_log_product = 0.0;
  bool elliptic_ok = false;
  bool parabolic_ok = false;
};

Conformance check_conformance(const Modulus& m);

/// True iff the verdict rule accepts the given increments.
bool tail_decays_geometrically(std::span<const double> increments);

} // namespace translab
