#pragma once

#include "translab/geometry.hpp"

#include <memory>
#include <string>
#include <vector>

namespace translab {

/// The inclusion D, given by its indicator function chi_D. Shapes are
/// analytic; a domain may be swept through time with a constant velocity or
/// be a time slab, for use in space-time problems.
class IndicatorDomain {
public:
  /// The set {x : normal . x > offset}.
  static IndicatorDomain half_space(const Point& normal, double offset);
  /// The open ball |x - center| < radius.
  static IndicatorDomain ball(const Point& center, double radius);
  /// {x : (x-apex)_axis < -|(x-apex)_perp|^(1/gamma)} intersected with the unit ball.
  static IndicatorDomain cusp(double gamma, const Point& apex, int axis);
  static IndicatorDomain complement(const IndicatorDomain& inner);
  static IndicatorDomain union_of(const std::vector<IndicatorDomain>& parts);
  static IndicatorDomain empty();
  /// Space-time set {(x,t) : t < t_max}.
  static IndicatorDomain time_slab(double t_max);

  IndicatorDomain() : IndicatorDomain(empty()) {}

  /// The same set translated by velocity * t at time t.
  IndicatorDomain moving(const Point& velocity) const;

  bool contains(const Point& x) const { return contains(x, 0.0); }
  bool contains(const Point& x, double t) const;

  /// Time-independent (static extrusion, no time slabs).
  bool is_static() const noexcept;

  std::string describe() const;

  struct Node;

private:
  explicit IndicatorDomain(std::shared_ptr<const Node> root, Point velocity = {0, 0, 0})
      : root_(std::move(root)), velocity_(velocity) {}

  std::shared_ptr<const Node> root_;
  Point velocity_;
};

} // namespace translab
