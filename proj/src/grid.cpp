#include "translab/grid.hpp"

#include "translab/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace translab {

Grid::Grid(int n, int cells_per_side) : n_(n), cells_(cells_per_side)
{
  if (n < 1 || n > kMaxDim)
    throw ParameterError(fmt::format("grid dimension {} not in [1, {}]", n, kMaxDim));
  if (cells_per_side < 2 || (cells_per_side & (cells_per_side - 1)) != 0)
    throw ParameterError(fmt::format("cells_per_side = {} must be a power of two >= 2", cells_per_side));
  h_ = 2.0 / cells_per_side;
  node_count_ = 1;
  cell_count_ = 1;
  for (int d = 0; d < n; ++d) {
    node_count_ *= cells_ + 1;
    cell_count_ *= cells_;
  }
}

Index Grid::node_index(const MultiIndex& idx) const noexcept
{
  Index k = 0;
  for (int d = n_ - 1; d >= 0; --d)
    k = k * (cells_ + 1) + idx[d];
  return k;
}

MultiIndex Grid::node_multi(Index node) const noexcept
{
  MultiIndex idx{};
  for (int d = 0; d < n_; ++d) {
    idx[d] = static_cast<int>(node % (cells_ + 1));
    node /= cells_ + 1;
  }
  return idx;
}

Point Grid::node_position(Index node) const noexcept
{
  const auto idx = node_multi(node);
  Point x{};
  for (int d = 0; d < n_; ++d)
    x[d] = -1.0 + idx[d] * h_;
  return x;
}

bool Grid::is_boundary_node(Index node) const noexcept
{
  const auto idx = node_multi(node);
  for (int d = 0; d < n_; ++d)
    if (idx[d] == 0 || idx[d] == cells_)
      return true;
  return false;
}

Index Grid::cell_index(const MultiIndex& idx) const noexcept
{
  Index k = 0;
  for (int d = n_ - 1; d >= 0; --d)
    k = k * cells_ + idx[d];
  return k;
}

MultiIndex Grid::cell_multi(Index cell) const noexcept
{
  MultiIndex idx{};
  for (int d = 0; d < n_; ++d) {
    idx[d] = static_cast<int>(cell % cells_);
    cell /= cells_;
  }
  return idx;
}

Point Grid::cell_origin(Index cell) const noexcept
{
  const auto idx = cell_multi(cell);
  Point x{};
  for (int d = 0; d < n_; ++d)
    x[d] = -1.0 + idx[d] * h_;
  return x;
}

Point Grid::cell_center(Index cell) const noexcept
{
  const auto idx = cell_multi(cell);
  Point x{};
  for (int d = 0; d < n_; ++d)
    x[d] = -1.0 + (idx[d] + 0.5) * h_;
  return x;
}

Index Grid::cell_corner(Index cell, int b) const noexcept
{
  auto idx = cell_multi(cell);
  for (int d = 0; d < n_; ++d)
    idx[d] += (b >> d) & 1;
  return node_index(idx);
}

Index Grid::locate(const Point& x, Point& local) const noexcept
{
  MultiIndex idx{};
  local = {0, 0, 0};
  for (int d = 0; d < n_; ++d) {
    const double s = (x[d] + 1.0) / h_;
    const int k = std::clamp(static_cast<int>(std::floor(s)), 0, cells_ - 1);
    idx[d] = k;
    local[d] = std::clamp(s - k, 0.0, 1.0);
  }
  return cell_index(idx);
}

// -------------------------------------------------------------------------

DiscreteField::DiscreteField(Grid grid, int m)
    : grid_(std::move(grid)), m_(m), values_(static_cast<std::size_t>(grid_.node_count() * m), 0.0)
{
  if (m < 1)
    throw ParameterError("field needs at least one component");
}

DiscreteField::DiscreteField(Grid grid, int m, std::vector<double> values)
    : grid_(std::move(grid)), m_(m), values_(std::move(values))
{
  if (m < 1)
    throw ParameterError("field needs at least one component");
  if (values_.size() != static_cast<std::size_t>(grid_.node_count() * m))
    throw ParameterError(fmt::format("field has {} values, grid needs {}", values_.size(),
                                     grid_.node_count() * m));
}

DiscreteField DiscreteField::interpolate(const Grid& grid, int m,
                                         const std::function<void(const Point&, std::span<double>)>& f)
{
  DiscreteField out(grid, m);
  for (Index k = 0; k < grid.node_count(); ++k)
    f(grid.node_position(k), std::span<double>(out.values_).subspan(k * m, m));
  return out;
}

void DiscreteField::cell_gradient(Index cell, std::span<double> out) const noexcept
{
  const int n = grid_.n();
  const int corners = grid_.corners();
  const double scale = 1.0 / (grid_.h() * (corners / 2));
  std::fill(out.begin(), out.begin() + n * m_, 0.0);
  for (int b = 0; b < corners; ++b) {
    const Index node = grid_.cell_corner(cell, b);
    for (int a = 0; a < n; ++a) {
      const double sign = ((b >> a) & 1) ? 1.0 : -1.0;
      for (int i = 0; i < m_; ++i)
        out[i * n + a] += sign * values_[node * m_ + i];
    }
  }
  for (int k = 0; k < n * m_; ++k)
    out[k] *= scale;
}

void sample_nodal(const Grid& grid, int m, std::span<const double> values, const Point& x,
                  std::span<double> value, std::span<double> gradient) noexcept
{
  const int n = grid.n();
  Point xi;
  const Index cell = grid.locate(x, xi);
  std::fill(value.begin(), value.begin() + m, 0.0);
  if (!gradient.empty())
    std::fill(gradient.begin(), gradient.begin() + n * m, 0.0);
  for (int b = 0; b < grid.corners(); ++b) {
    double phi = 1.0;
    std::array<double, kMaxDim> dphi{1.0, 1.0, 1.0};
    for (int d = 0; d < n; ++d) {
      const bool hi = (b >> d) & 1;
      const double f = hi ? xi[d] : 1.0 - xi[d];
      const double df = (hi ? 1.0 : -1.0) / grid.h();
      for (int a = 0; a < n; ++a)
        dphi[a] *= (a == d) ? df : f;
      phi *= f;
    }
    const Index node = grid.cell_corner(cell, b);
    for (int i = 0; i < m; ++i) {
      const double u = values[node * m + i];
      value[i] += phi * u;
      if (!gradient.empty())
        for (int a = 0; a < n; ++a)
          gradient[i * n + a] += dphi[a] * u;
    }
  }
}

void DiscreteField::sample(const Point& x, std::span<double> value, std::span<double> gradient) const noexcept
{
  sample_nodal(grid_, m_, values_, x, value, gradient);
}

std::vector<double> DiscreteField::value_at(const Point& x) const
{
  std::vector<double> v(m_);
  sample(x, v, {});
  return v;
}

std::vector<double> gradient_at(const DiscreteField& f, Index cell)
{
  if (cell < 0 || cell >= f.grid().cell_count())
    throw ParameterError(fmt::format("cell index {} out of range", cell));
  std::vector<double> g(static_cast<std::size_t>(f.m() * f.grid().n()));
  f.cell_gradient(cell, g);
  return g;
}

// -------------------------------------------------------------------------

void FieldSeries::push(double t, std::vector<double> values)
{
  if (values.size() != static_cast<std::size_t>(grid_.node_count() * m_))
    throw ParameterError("time level has the wrong number of values");
  if (!times_.empty() && !(t > times_.back()))
    throw ParameterError("time levels must be strictly increasing");
  times_.push_back(t);
  levels_.push_back(std::move(values));
}

DiscreteField FieldSeries::level(std::size_t k) const
{
  return DiscreteField(grid_, m_, levels_.at(k));
}

void FieldSeries::sample(const Point& x, double t, std::span<double> value, std::span<double> gradient) const
{
  if (times_.empty())
    throw DomainError("empty field series");
  const double tol = 1e-12 * std::max(1.0, std::abs(t));
  if (t < times_.front() - tol || t > times_.back() + tol)
    throw DomainError(fmt::format("time {} outside stored range [{}, {}]", t, times_.front(), times_.back()));
  for (int d = 0; d < grid_.n(); ++d)
    if (std::abs(x[d]) > 1.0 + 1e-12)
      throw DomainError("sample point outside the computational square");

  auto it = std::lower_bound(times_.begin(), times_.end(), t - tol);
  std::size_t k = static_cast<std::size_t>(it - times_.begin());
  if (k >= times_.size())
    k = times_.size() - 1;
  if (std::abs(times_[k] - t) <= tol) {
    sample_nodal(grid_, m_, levels_[k], x, value, gradient);
    return;
  }
  // times_[k-1] < t < times_[k]
  const double w = (t - times_[k - 1]) / (times_[k] - times_[k - 1]);
  const int n = grid_.n();
  std::vector<double> v0(m_), v1(m_), g0(gradient.empty() ? 0 : m_ * n), g1(g0.size());
  sample_nodal(grid_, m_, levels_[k - 1], x, v0, g0);
  sample_nodal(grid_, m_, levels_[k], x, v1, g1);
  for (int i = 0; i < m_; ++i)
    value[i] = (1.0 - w) * v0[i] + w * v1[i];
  for (std::size_t j = 0; j < g0.size(); ++j)
    gradient[j] = (1.0 - w) * g0[j] + w * g1[j];
}

} // namespace translab
