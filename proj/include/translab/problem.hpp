#pragma once

#include "translab/domain.hpp"
#include "translab/tensor.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace translab {

/// (x, t) -> R^k, written into `out`.
using VectorField = std::function<void(const Point& x, double t, std::span<double> out)>;

/// div((A + (B - A) chi_D) grad u) = div F on the computational square
/// [-1,1]^n, with Dirichlet data g on its boundary. For space-time problems
/// the same data is read at each time level.
class TransmissionProblem {
public:
  TransmissionProblem(CoefficientTensor a, CoefficientTensor b, IndicatorDomain domain, VectorField boundary,
                      std::optional<VectorField> forcing = std::nullopt, std::string description = {});

  int n() const noexcept { return a_.n(); }
  int m() const noexcept { return a_.m(); }
  const CoefficientTensor& a() const noexcept { return a_; }
  const CoefficientTensor& b() const noexcept { return b_; }
  const IndicatorDomain& domain() const noexcept { return domain_; }
  const VectorField& boundary() const noexcept { return boundary_; }
  /// F with F_a^i stored at i*n + a.
  const std::optional<VectorField>& forcing() const noexcept { return forcing_; }
  const std::string& description() const noexcept { return description_; }

  /// True when neither the tensors nor D depend on time.
  bool is_static() const noexcept;

  /// A(x) outside D, B(x) inside D.
  void effective_tensor(const Point& x, double t, std::span<double> out) const;
  std::vector<double> effective_tensor(const Point& x, double t = 0.0) const;

  /// A copy with the boundary data and forcing multiplied by s.
  TransmissionProblem scaled_data(double s) const;

  /// FNV-1a hash of the description, for run logs.
  std::string hash() const;

private:
  CoefficientTensor a_;
  CoefficientTensor b_;
  IndicatorDomain domain_;
  VectorField boundary_;
  std::optional<VectorField> forcing_;
  std::string description_;
};

// --- condition verification --------------------------------------------

struct Witness {
  std::string condition;
  Point x{};
  double t = 0.0;
  std::optional<Point> y;
  std::vector<double> xi;
  double observed = 0.0;
};

struct TensorCheck {
  double lambda_observed = 0.0;
  double bound_observed = 0.0;
  /// sup |a(x) - a(y)|_max / omega(|x - y|); absent when not checked.
  std::optional<double> dini_seminorm_observed;
  bool ellipticity_ok = false;
  bool boundedness_ok = false;
  bool dini_ok = true;
  std::optional<Witness> witness;

  bool ok() const noexcept { return ellipticity_ok && boundedness_ok && dini_ok; }
};

struct ConditionReport {
  TensorCheck a;
  TensorCheck b;
  int samples = 0;
  bool ok() const noexcept { return a.ok() && b.ok(); }
  std::string summary() const;
};

/// Samples quasi-random points (Halton) of the computational square, and for
/// time-dependent tensors of (-1, 0), and compares ellipticity, boundedness
/// and, for A only, the Dini quotient with the declared constants.
ConditionReport verify_conditions(const TransmissionProblem& p, int samples);

/// A problem whose coefficient conditions have been checked. Assembly only
/// accepts this type.
class VerifiedProblem {
public:
  const TransmissionProblem& problem() const noexcept { return *problem_; }
  const TransmissionProblem* operator->() const noexcept { return problem_.get(); }
  const ConditionReport& report() const noexcept { return report_; }
  std::shared_ptr<const TransmissionProblem> shared() const noexcept { return problem_; }

private:
  friend VerifiedProblem verify(TransmissionProblem, int);
  VerifiedProblem(std::shared_ptr<const TransmissionProblem> p, ConditionReport r)
      : problem_(std::move(p)), report_(std::move(r)) {}
  std::shared_ptr<const TransmissionProblem> problem_;
  ConditionReport report_;
};

/// Runs verify_conditions and throws ValidationError naming the witness on failure.
VerifiedProblem verify(TransmissionProblem p, int samples = 4096);

/// Point `index` (>= 1) of the Halton sequence in `dims` dimensions, in [0,1)^dims.
std::vector<double> halton(std::uint64_t index, int dims);

// --- rescaled densities -------------------------------------------------

/// |D_{z,r}| = |{x in B_1 : |x| < within, chi_D(r x + z) = 1}| by midpoint
/// quadrature on a resolution^n grid over [-1,1]^n. `within` = 1/2 gives
/// |D_{z,r} intersect B_{1/2}|.
double rescaled_density(const IndicatorDomain& d, int n, const Point& z, double r, int resolution,
                        double within = 1.0);

/// |D_{Z,r}| for Z = (z, s): midpoint quadrature over Q_1 = B_1 x (-1, 0) of
/// chi_D(r x + z, r^2 t + s), resolution^n space points times `resolution`
/// time points.
double parabolic_rescaled_density(const IndicatorDomain& d, int n, const Point& z, double s, double r,
                                  int resolution);

} // namespace translab
