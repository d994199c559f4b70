#include "translab/tensor.hpp"

#include "translab/error.hpp"

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include <algorithm>

namespace translab {

namespace {

void check_dims(int n, int m)
{
  if (n < 1 || n > kMaxDim)
    throw ParameterError(fmt::format("spatial dimension n = {} not in [1, {}]", n, kMaxDim));
  if (m < 1)
    throw ParameterError(fmt::format("system dimension m = {} must be >= 1", m));
}

void check_matrix(const std::vector<double>& a, int n, int m, const char* what)
{
  const auto expected = static_cast<std::size_t>(n * m) * static_cast<std::size_t>(n * m);
  if (a.size() != expected)
    throw ParameterError(fmt::format("{} has {} entries, expected {}", what, a.size(), expected));
}

} // namespace

CoefficientTensor::CoefficientTensor(int n, int m, Field field, double lambda, std::optional<DiniBound> dini,
                                     bool time_dependent, std::string description)
    : n_(n), m_(m), field_(std::move(field)), lambda_(lambda), dini_(std::move(dini)),
      time_dependent_(time_dependent), description_(std::move(description))
{
  check_dims(n, m);
  if (!(lambda > 0.0 && lambda < 1.0))
    throw ParameterError(fmt::format("ellipticity constant lambda = {} not in (0,1)", lambda));
  if (dini_ && !(dini_->seminorm > 0.0))
    throw ParameterError("Dini seminorm bound must be positive");
  if (!field_)
    throw ParameterError("coefficient field is empty");
}

CoefficientTensor CoefficientTensor::constant(int n, int m, std::vector<double> matrix, double lambda,
                                              std::optional<DiniBound> dini)
{
  check_dims(n, m);
  check_matrix(matrix, n, m, "constant tensor");
  std::string desc = "constant[";
  for (std::size_t k = 0; k < matrix.size(); ++k)
    desc += fmt::format("{}{}", k ? "," : "", matrix[k]);
  desc += "]";
  auto field = [a = std::move(matrix)](const Point&, double, std::span<double> out) {
    std::copy(a.begin(), a.end(), out.begin());
  };
  return CoefficientTensor(n, m, std::move(field), lambda, std::move(dini), false, std::move(desc));
}

CoefficientTensor CoefficientTensor::affine(int n, int m, std::vector<double> base,
                                            std::vector<std::vector<double>> slopes, double lambda,
                                            std::optional<DiniBound> dini)
{
  check_dims(n, m);
  check_matrix(base, n, m, "affine tensor base");
  if (slopes.size() != static_cast<std::size_t>(n))
    throw ParameterError(fmt::format("affine tensor needs {} slope matrices, got {}", n, slopes.size()));
  for (const auto& s : slopes)
    check_matrix(s, n, m, "affine tensor slope");
  std::string desc = "affine[";
  for (double v : base)
    desc += fmt::format("{},", v);
  for (const auto& s : slopes)
    for (double v : s)
      desc += fmt::format("{},", v);
  desc += "]";
  auto field = [a = std::move(base), d = std::move(slopes)](const Point& x, double, std::span<double> out) {
    for (std::size_t k = 0; k < a.size(); ++k) {
      double v = a[k];
      for (std::size_t dim = 0; dim < d.size(); ++dim)
        v += x[dim] * d[dim][k];
      out[k] = v;
    }
  };
  return CoefficientTensor(n, m, std::move(field), lambda, std::move(dini), false, std::move(desc));
}

CoefficientTensor CoefficientTensor::scaled_identity(int n, int m, std::function<double(const Point&)> sigma,
                                                     double lambda, std::optional<DiniBound> dini,
                                                     std::string description)
{
  check_dims(n, m);
  const int order = n * m;
  auto field = [sigma = std::move(sigma), order](const Point& x, double, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    const double s = sigma(x);
    for (int k = 0; k < order; ++k)
      out[k * order + k] = s;
  };
  return CoefficientTensor(n, m, std::move(field), lambda, std::move(dini), false,
                           "scaled_identity[" + description + "]");
}

CoefficientTensor CoefficientTensor::identity(int n, int m, double value, double lambda,
                                              std::optional<DiniBound> dini)
{
  return scaled_identity(n, m, [value](const Point&) { return value; }, lambda, std::move(dini),
                         fmt::format("{}", value));
}

void CoefficientTensor::evaluate(const Point& x, double t, std::span<double> out) const
{
  field_(x, t, out);
}

std::vector<double> CoefficientTensor::at(const Point& x, double t) const
{
  std::vector<double> out(static_cast<std::size_t>(order() * order()));
  field_(x, t, out);
  return out;
}

LegendreMinimum legendre_minimum(std::span<const double> matrix, int order)
{
  Eigen::MatrixXd a(order, order);
  for (int r = 0; r < order; ++r)
    for (int c = 0; c < order; ++c)
      a(r, c) = 0.5 * (matrix[r * order + c] + matrix[c * order + r]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  LegendreMinimum out;
  out.value = es.eigenvalues()(0);
  out.direction.resize(order);
  for (int k = 0; k < order; ++k)
    out.direction[k] = es.eigenvectors()(k, 0);
  return out;
}

} // namespace translab
