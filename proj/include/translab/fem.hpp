#pragma once

#include "translab/grid.hpp"
#include "translab/problem.hpp"
#include "translab/simd/kernels.hpp"
#include "translab/sparse.hpp"

#include <functional>
#include <span>
#include <vector>

namespace translab {

/// Tensor (or flux) evaluation at a point, time already fixed by the caller.
using PointField = std::function<void(const Point& x, std::span<double> out)>;

/// Adds the Q1 stiffness of `tensor` integrated with 2 Gauss points per
/// direction over the selected cells (all cells when `cell_mask` is empty).
/// The element matrix is computed on its upper triangle and mirrored, so a
/// pointwise symmetric tensor yields an exactly symmetric matrix.
void add_stiffness(CsrMatrix& k, const Grid& grid, int m, const PointField& tensor,
                   std::span<const std::uint8_t> cell_mask = {});

/// Adds the consistent Q1 mass matrix (identity in the component index).
void add_mass(CsrMatrix& mass, const Grid& grid, int m);

/// rhs(node, i) += int F_a^i d_a phi_node.
void add_flux_load(std::vector<double>& rhs, const Grid& grid, int m, const PointField& flux);

/// Dofs on the boundary of [-1,1]^n.
std::vector<std::uint8_t> boundary_dofs(const Grid& grid, int m);

/// Nodal interpolation of g(., t) (zero at interior dofs).
std::vector<double> boundary_values(const Grid& grid, int m, const VectorField& g, double t);

/// Unconstrained stiffness of the effective tensor at time t.
CsrMatrix stiffness_matrix(const VerifiedProblem& p, const Grid& grid, double t = 0.0);

/// Dirichlet-constrained Galerkin system for the problem at time t.
SparseSystem assemble(const VerifiedProblem& p, const Grid& grid, double t = 0.0);

/// u^T K u.
double quadratic_form(const CsrMatrix& k, std::span<const double> u);

struct CgOptions {
  double tol = 1e-10;
  /// 0 selects 10 * rows + 100.
  int max_iter = 0;
  /// Kernels to use; the process default when null.
  const simd::KernelTable* kernels = nullptr;
};

struct CgResult {
  std::vector<double> x;
  int iterations = 0;
  double residual = 0.0;
};

/// Jacobi-preconditioned conjugate gradients from the initial guess x0 (zero
/// when empty). Stops when |b - A x| <= tol |b|. Throws ParameterError for a
/// non-symmetric matrix and ConvergenceError when max_iter is reached.
CgResult solve_cg(const CsrMatrix& a, std::span<const double> b, std::span<const double> x0,
                  const CgOptions& opt = {});

/// Solves the system and reinstates the Dirichlet values exactly.
CgResult solve_cg(const SparseSystem& s, const CgOptions& opt = {});

} // namespace translab
