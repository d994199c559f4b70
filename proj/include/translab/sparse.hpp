#pragma once

#include "translab/grid.hpp"
#include "translab/simd/kernels.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace translab {

/// Compressed-row sparse matrix with sorted column indices per row.
class CsrMatrix {
public:
  CsrMatrix() = default;
  CsrMatrix(Index rows, std::vector<std::int32_t> row_ptr, std::vector<std::int32_t> cols);

  Index rows() const noexcept { return rows_; }
  Index nnz() const noexcept { return static_cast<Index>(cols_.size()); }
  std::span<const std::int32_t> row_ptr() const noexcept { return row_ptr_; }
  std::span<const std::int32_t> cols() const noexcept { return cols_; }
  std::span<const double> values() const noexcept { return vals_; }
  std::span<double> values() noexcept { return vals_; }

  /// Position of (r, c) in the value array, or -1 if not stored.
  Index find(Index r, Index c) const noexcept;
  double coeff(Index r, Index c) const noexcept;
  double diagonal(Index r) const noexcept { return coeff(r, r); }

  void multiply(std::span<const double> x, std::span<double> y,
                const simd::KernelTable& k = simd::kernels()) const;

  /// max |a_rc - a_cr| <= tol * max |a|.
  bool is_symmetric(double tol = 0.0) const;

  /// Same pattern, values zeroed.
  CsrMatrix zeros_like() const;
  /// this += s * other (patterns must match).
  void add_scaled(const CsrMatrix& other, double s);

  /// One "row col value" line per stored entry, 0-based indices.
  void write_triplets(std::ostream& os) const;

private:
  Index rows_ = 0;
  std::vector<std::int32_t> row_ptr_{0};
  std::vector<std::int32_t> cols_;
  std::vector<double> vals_;
};

/// Sparsity of the Q1 stiffness for m components: dof (node, i) couples to
/// every dof of the 3^n neighbouring nodes.
CsrMatrix q1_pattern(const Grid& grid, int m);

/// Linear system with Dirichlet rows already eliminated symmetrically: rows
/// flagged in `dirichlet` are identity rows with rhs equal to the prescribed value.
struct SparseSystem {
  Grid grid;
  int m;
  CsrMatrix matrix;
  std::vector<double> rhs;
  std::vector<std::uint8_t> dirichlet;
  std::vector<double> dirichlet_values;
};

/// Symmetric elimination of the flagged rows/columns.
void apply_dirichlet(CsrMatrix& a, std::vector<double>& rhs, std::span<const std::uint8_t> mask,
                     std::span<const double> values);

} // namespace translab
