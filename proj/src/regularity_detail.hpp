#pragma once

#include "translab/regularity.hpp"

#include <functional>
#include <span>
#include <vector>

namespace translab::detail {

/// Cells of width h from origin, `cells` per direction.
struct Lattice {
  int n;
  Point origin;
  double h;
  int cells;
};

/// A lattice cell meeting an open ball, with its quadrature points inside the
/// ball: 2-point Gauss per direction when the cell lies inside, subsample
/// midpoints otherwise.
struct BallCell {
  Point origin{};
  Point center{};
  bool full = false;
  double fraction = 0.0;
  std::vector<Point> points;
  std::vector<double> weights;
};

void for_each_ball_cell(const Lattice& lat, const Point& z, double r, int subsamples,
                        const std::function<void(const BallCell&)>& f);

AffineFit fit_on_lattice(const PointSampler& u, const Lattice& lat, int m, const Point& z, double r,
                         int subsamples);

Lattice grid_lattice(const Grid& g);
PointSampler nodal_sampler(const Grid& g, int m, std::span<const double> values);
double frobenius(std::span<const double> a);
void check_ball(int n, const Point& z, double r);
void check_radius(const Grid& g, double r, int cells);
Modulus slack_modulus(const VerifiedProblem& p, const AnalysisOptions& opt);
CaseTag classify(const std::vector<double>& norms, double threshold);
void check_scales(const std::vector<double>& scales);

} // namespace translab::detail
