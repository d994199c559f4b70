#include "translab/fem.hpp"

#include "translab/error.hpp"

#include <fmt/format.h>

#include <array>
#include <cmath>

namespace translab {

namespace {

constexpr int kMaxCorners = 1 << kMaxDim;

// Reference data of the 2-point tensor Gauss rule on [0,1]^n for Q1 shape functions.
struct ReferenceCell {
  int n;
  int corners;
  std::array<Point, kMaxCorners> points{};
  std::array<std::array<double, kMaxCorners>, kMaxCorners> phi{};                  // [q][b]
  std::array<std::array<std::array<double, kMaxDim>, kMaxCorners>, kMaxCorners> dphi{}; // [q][b][a], unit cell

  explicit ReferenceCell(int dim) : n(dim), corners(1 << dim)
  {
    const double off = 0.5 / std::sqrt(3.0);
    for (int q = 0; q < corners; ++q) {
      for (int d = 0; d < n; ++d)
        points[q][d] = 0.5 + (((q >> d) & 1) ? off : -off);
      for (int b = 0; b < corners; ++b) {
        double p = 1.0;
        std::array<double, kMaxDim> g{1.0, 1.0, 1.0};
        for (int d = 0; d < n; ++d) {
          const bool hi = (b >> d) & 1;
          const double f = hi ? points[q][d] : 1.0 - points[q][d];
          const double df = hi ? 1.0 : -1.0;
          for (int a = 0; a < n; ++a)
            g[a] *= (a == d) ? df : f;
          p *= f;
        }
        phi[q][b] = p;
        for (int a = 0; a < n; ++a)
          dphi[q][b][a] = g[a];
      }
    }
  }
};

} // namespace

void add_stiffness(CsrMatrix& k, const Grid& grid, int m, const PointField& tensor,
                   std::span<const std::uint8_t> cell_mask)
{
  const int n = grid.n();
  const ReferenceCell ref(n);
  const int corners = ref.corners;
  const int order = n * m;
  const int local = corners * m;
  const double h = grid.h();
  // weight h^n / 2^n times (1/h)^2 from the two derivatives
  const double w = std::pow(h, n - 2) / corners;

  std::vector<double> t(static_cast<std::size_t>(order * order));
  std::vector<double> ke(static_cast<std::size_t>(local * local));
  std::array<Index, kMaxCorners> nodes{};
  auto vals = k.values();

  for (Index cell = 0; cell < grid.cell_count(); ++cell) {
    if (!cell_mask.empty() && !cell_mask[cell])
      continue;
    std::fill(ke.begin(), ke.end(), 0.0);
    const Point origin = grid.cell_origin(cell);
    for (int q = 0; q < corners; ++q) {
      Point x = origin;
      for (int d = 0; d < n; ++d)
        x[d] += h * ref.points[q][d];
      tensor(x, t);
      const auto& dphi = ref.dphi[q];
      for (int ra = 0; ra < local; ++ra) {
        const int a = ra / m, i = ra % m;
        for (int cb = ra; cb < local; ++cb) {
          const int b = cb / m, j = cb % m;
          double s = 0.0;
          for (int al = 0; al < n; ++al)
            for (int be = 0; be < n; ++be)
              s += t[(i * n + al) * order + (j * n + be)] * dphi[a][al] * dphi[b][be];
          ke[ra * local + cb] += w * s;
        }
      }
    }
    for (int ra = 0; ra < local; ++ra)
      for (int cb = 0; cb < ra; ++cb)
        ke[ra * local + cb] = ke[cb * local + ra];

    for (int b = 0; b < corners; ++b)
      nodes[b] = grid.cell_corner(cell, b);
    for (int ra = 0; ra < local; ++ra) {
      const Index row = nodes[ra / m] * m + ra % m;
      for (int cb = 0; cb < local; ++cb) {
        const Index col = nodes[cb / m] * m + cb % m;
        vals[k.find(row, col)] += ke[ra * local + cb];
      }
    }
  }
}

void add_mass(CsrMatrix& mass, const Grid& grid, int m)
{
  const int n = grid.n();
  const ReferenceCell ref(n);
  const int corners = ref.corners;
  const double w = std::pow(grid.h(), n) / corners;
  std::array<std::array<double, kMaxCorners>, kMaxCorners> me{};
  for (int a = 0; a < corners; ++a)
    for (int b = 0; b < corners; ++b) {
      double s = 0.0;
      for (int q = 0; q < corners; ++q)
        s += ref.phi[q][a] * ref.phi[q][b];
      me[a][b] = w * s;
    }
  auto vals = mass.values();
  for (Index cell = 0; cell < grid.cell_count(); ++cell)
    for (int a = 0; a < corners; ++a) {
      const Index na = grid.cell_corner(cell, a);
      for (int b = 0; b < corners; ++b) {
        const Index nb = grid.cell_corner(cell, b);
        for (int i = 0; i < m; ++i)
          vals[mass.find(na * m + i, nb * m + i)] += me[a][b];
      }
    }
}

void add_flux_load(std::vector<double>& rhs, const Grid& grid, int m, const PointField& flux)
{
  const int n = grid.n();
  const ReferenceCell ref(n);
  const int corners = ref.corners;
  const double h = grid.h();
  const double w = std::pow(h, n - 1) / corners;
  std::vector<double> f(static_cast<std::size_t>(m * n));
  for (Index cell = 0; cell < grid.cell_count(); ++cell) {
    const Point origin = grid.cell_origin(cell);
    for (int q = 0; q < corners; ++q) {
      Point x = origin;
      for (int d = 0; d < n; ++d)
        x[d] += h * ref.points[q][d];
      flux(x, f);
      for (int b = 0; b < corners; ++b) {
        const Index node = grid.cell_corner(cell, b);
        for (int i = 0; i < m; ++i) {
          double s = 0.0;
          for (int a = 0; a < n; ++a)
            s += f[i * n + a] * ref.dphi[q][b][a];
          rhs[node * m + i] += w * s;
        }
      }
    }
  }
}

std::vector<std::uint8_t> boundary_dofs(const Grid& grid, int m)
{
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(grid.node_count() * m), 0);
  for (Index node = 0; node < grid.node_count(); ++node)
    if (grid.is_boundary_node(node))
      for (int i = 0; i < m; ++i)
        mask[node * m + i] = 1;
  return mask;
}

std::vector<double> boundary_values(const Grid& grid, int m, const VectorField& g, double t)
{
  std::vector<double> values(static_cast<std::size_t>(grid.node_count() * m), 0.0);
  for (Index node = 0; node < grid.node_count(); ++node)
    if (grid.is_boundary_node(node))
      g(grid.node_position(node), t, std::span<double>(values).subspan(node * m, m));
  return values;
}

CsrMatrix stiffness_matrix(const VerifiedProblem& p, const Grid& grid, double t)
{
  const auto& prob = p.problem();
  if (grid.n() != prob.n())
    throw ParameterError(fmt::format("grid dimension {} does not match problem dimension {}", grid.n(), prob.n()));
  CsrMatrix k = q1_pattern(grid, prob.m());
  add_stiffness(k, grid, prob.m(), [&prob, t](const Point& x, std::span<double> out) {
    prob.effective_tensor(x, t, out);
  });
  return k;
}

SparseSystem assemble(const VerifiedProblem& p, const Grid& grid, double t)
{
  const auto& prob = p.problem();
  const int m = prob.m();
  SparseSystem s{grid, m, stiffness_matrix(p, grid, t), {}, boundary_dofs(grid, m),
                 boundary_values(grid, m, prob.boundary(), t)};
  s.rhs.assign(static_cast<std::size_t>(grid.node_count() * m), 0.0);
  if (prob.forcing()) {
    const auto& f = *prob.forcing();
    add_flux_load(s.rhs, grid, m, [&f, t](const Point& x, std::span<double> out) { f(x, t, out); });
  }
  apply_dirichlet(s.matrix, s.rhs, s.dirichlet, s.dirichlet_values);
  return s;
}

double quadratic_form(const CsrMatrix& k, std::span<const double> u)
{
  std::vector<double> ku(u.size());
  k.multiply(u, ku);
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    s += u[i] * ku[i];
  return s;
}

} // namespace translab
