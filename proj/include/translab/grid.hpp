#pragma once

#include "translab/geometry.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace translab {

using Index = std::int64_t;
using MultiIndex = std::array<int, kMaxDim>;

/// Uniform grid of [-1,1]^n with cells_per_side (a power of two) cells per
/// direction. Nodes and cells are numbered lexicographically with the first
/// coordinate running fastest.
class Grid {
public:
  Grid(int n, int cells_per_side);

  int n() const noexcept { return n_; }
  int cells_per_side() const noexcept { return cells_; }
  int nodes_per_side() const noexcept { return cells_ + 1; }
  double h() const noexcept { return h_; }
  Index node_count() const noexcept { return node_count_; }
  Index cell_count() const noexcept { return cell_count_; }
  /// Number of corners of a cell, 2^n.
  int corners() const noexcept { return 1 << n_; }

  Index node_index(const MultiIndex& idx) const noexcept;
  MultiIndex node_multi(Index node) const noexcept;
  Point node_position(Index node) const noexcept;
  bool is_boundary_node(Index node) const noexcept;

  Index cell_index(const MultiIndex& idx) const noexcept;
  MultiIndex cell_multi(Index cell) const noexcept;
  Point cell_origin(Index cell) const noexcept;
  Point cell_center(Index cell) const noexcept;
  /// Corner `b` of the cell sits at origin + h * (bits of b).
  Index cell_corner(Index cell, int b) const noexcept;

  /// Cell containing x (clamped to the square) and the local coordinates in [0,1]^n.
  Index locate(const Point& x, Point& local) const noexcept;

  bool operator==(const Grid& o) const noexcept { return n_ == o.n_ && cells_ == o.cells_; }

private:
  int n_;
  int cells_;
  double h_;
  Index node_count_;
  Index cell_count_;
};

/// Nodal values of u: grid -> R^m, stored node-major (values[node*m + i]),
/// read through the Q1 (multilinear) interpolant.
class DiscreteField {
public:
  DiscreteField(Grid grid, int m);
  DiscreteField(Grid grid, int m, std::vector<double> values);

  /// Nodal interpolant of f.
  static DiscreteField interpolate(const Grid& grid, int m,
                                   const std::function<void(const Point&, std::span<double>)>& f);

  const Grid& grid() const noexcept { return grid_; }
  int m() const noexcept { return m_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  double value(Index node, int i) const noexcept { return values_[node * m_ + i]; }

  /// Gradient of the interpolant at the center of `cell`; out[i*n + a] = d_a u^i.
  void cell_gradient(Index cell, std::span<double> out) const noexcept;

  /// Interpolated value and gradient at an arbitrary point of the square.
  void sample(const Point& x, std::span<double> value, std::span<double> gradient) const noexcept;
  std::vector<double> value_at(const Point& x) const;

private:
  Grid grid_;
  int m_;
  std::vector<double> values_;
};

/// Value and gradient of the Q1 interpolant of node-major `values` at x.
void sample_nodal(const Grid& grid, int m, std::span<const double> values, const Point& x,
                  std::span<double> value, std::span<double> gradient) noexcept;

/// m x n gradient of the interpolant at the cell center (row-major, i*n + a).
std::vector<double> gradient_at(const DiscreteField& f, Index cell);

/// Time-indexed nodal fields on a common grid, times strictly increasing.
class FieldSeries {
public:
  FieldSeries(Grid grid, int m) : grid_(std::move(grid)), m_(m) {}

  void push(double t, std::vector<double> values);

  const Grid& grid() const noexcept { return grid_; }
  int m() const noexcept { return m_; }
  std::size_t size() const noexcept { return times_.size(); }
  const std::vector<double>& times() const noexcept { return times_; }
  DiscreteField level(std::size_t k) const;
  std::span<const double> level_values(std::size_t k) const noexcept { return levels_[k]; }

  /// Multilinear in space, linear in time; throws DomainError outside the stored range.
  void sample(const Point& x, double t, std::span<double> value, std::span<double> gradient) const;

private:
  Grid grid_;
  int m_;
  std::vector<double> times_;
  std::vector<std::vector<double>> levels_;
};

} // namespace translab
