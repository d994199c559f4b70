#pragma once

#include <array>
#include <cmath>
#include <numbers>

namespace translab {

inline constexpr int kMaxDim = 3;

/// A point of R^n, n <= kMaxDim. Coordinates beyond n are kept at zero, so
/// Euclidean norms over all components equal the n-dimensional ones.
using Point = std::array<double, kMaxDim>;

inline double norm(const Point& x)
{
  return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
}

inline Point operator-(const Point& a, const Point& b)
{
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

inline Point operator+(const Point& a, const Point& b)
{
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

inline Point operator*(double s, const Point& a)
{
  return {s * a[0], s * a[1], s * a[2]};
}

inline double dot(const Point& a, const Point& b)
{
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

/// Volume of the unit ball in R^n.
inline double unit_ball_volume(int n)
{
  switch (n) {
  case 1: return 2.0;
  case 2: return std::numbers::pi;
  case 3: return 4.0 * std::numbers::pi / 3.0;
  }
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

} // namespace translab
