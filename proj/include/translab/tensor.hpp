#pragma once

#include "translab/geometry.hpp"
#include "translab/modulus.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace translab {

/// Dini regularity data: [a]_{C^{0,omega}} <= seminorm.
struct DiniBound {
  Modulus modulus;
  double seminorm;
};

/// The coefficient field x -> (a_{ij}^{ab}(x, t)) of an m-component system in
/// n space dimensions, stored as an (mn)x(mn) row-major matrix with row index
/// i*n + a and column index j*n + b.
class CoefficientTensor {
public:
  using Field = std::function<void(const Point& x, double t, std::span<double> out)>;

  CoefficientTensor(int n, int m, Field field, double lambda, std::optional<DiniBound> dini,
                    bool time_dependent, std::string description);

  /// Constant (mn)x(mn) matrix.
  static CoefficientTensor constant(int n, int m, std::vector<double> matrix, double lambda,
                                    std::optional<DiniBound> dini = std::nullopt);

  /// matrix(x) = base + sum_k x_k * slopes[k].
  static CoefficientTensor affine(int n, int m, std::vector<double> base,
                                  std::vector<std::vector<double>> slopes, double lambda,
                                  std::optional<DiniBound> dini = std::nullopt);

  /// sigma(x) times the identity on R^{mn}.
  static CoefficientTensor scaled_identity(int n, int m, std::function<double(const Point&)> sigma,
                                           double lambda, std::optional<DiniBound> dini,
                                           std::string description);

  static CoefficientTensor identity(int n, int m, double value = 1.0, double lambda = 0.5,
                                    std::optional<DiniBound> dini = std::nullopt);

  int n() const noexcept { return n_; }
  int m() const noexcept { return m_; }
  /// Side length mn of the matrix representation.
  int order() const noexcept { return n_ * m_; }
  double lambda() const noexcept { return lambda_; }
  const std::optional<DiniBound>& dini() const noexcept { return dini_; }
  bool time_dependent() const noexcept { return time_dependent_; }
  const std::string& description() const noexcept { return description_; }

  void evaluate(const Point& x, double t, std::span<double> out) const;
  std::vector<double> at(const Point& x, double t = 0.0) const;

private:
  int n_;
  int m_;
  Field field_;
  double lambda_;
  std::optional<DiniBound> dini_;
  bool time_dependent_;
  std::string description_;
};

/// Smallest eigenvalue of the symmetric part of a (mn)x(mn) matrix, and the
/// corresponding unit eigenvector.
struct LegendreMinimum {
  double value;
  std::vector<double> direction;
};

LegendreMinimum legendre_minimum(std::span<const double> matrix, int order);

} // namespace translab
