#include "translab/sparse.hpp"

#include "translab/error.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace translab {

CsrMatrix::CsrMatrix(Index rows, std::vector<std::int32_t> row_ptr, std::vector<std::int32_t> cols)
    : rows_(rows), row_ptr_(std::move(row_ptr)), cols_(std::move(cols)), vals_(cols_.size(), 0.0)
{
  if (row_ptr_.size() != static_cast<std::size_t>(rows + 1) || row_ptr_.back() != static_cast<std::int32_t>(cols_.size()))
    throw ParameterError("inconsistent CSR structure");
}

Index CsrMatrix::find(Index r, Index c) const noexcept
{
  const auto begin = cols_.begin() + row_ptr_[r];
  const auto end = cols_.begin() + row_ptr_[r + 1];
  const auto it = std::lower_bound(begin, end, static_cast<std::int32_t>(c));
  if (it == end || *it != c)
    return -1;
  return it - cols_.begin();
}

double CsrMatrix::coeff(Index r, Index c) const noexcept
{
  const Index k = find(r, c);
  return k < 0 ? 0.0 : vals_[k];
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y, const simd::KernelTable& k) const
{
  k.spmv(static_cast<std::size_t>(rows_), row_ptr_.data(), cols_.data(), vals_.data(), x.data(), y.data());
}

bool CsrMatrix::is_symmetric(double tol) const
{
  double scale = 0.0;
  for (double v : vals_)
    scale = std::max(scale, std::abs(v));
  const double allowed = tol * scale;
  for (Index r = 0; r < rows_; ++r)
    for (std::int32_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      const Index c = cols_[k];
      if (c <= r)
        continue;
      const Index t = find(c, r);
      const double other = t < 0 ? 0.0 : vals_[t];
      if (std::abs(vals_[k] - other) > allowed)
        return false;
    }
  return true;
}

CsrMatrix CsrMatrix::zeros_like() const
{
  CsrMatrix out = *this;
  std::fill(out.vals_.begin(), out.vals_.end(), 0.0);
  return out;
}

void CsrMatrix::add_scaled(const CsrMatrix& other, double s)
{
  if (other.cols_.size() != cols_.size() || other.rows_ != rows_)
    throw ParameterError("add_scaled: sparsity patterns differ");
  for (std::size_t k = 0; k < vals_.size(); ++k)
    vals_[k] += s * other.vals_[k];
}

void CsrMatrix::write_triplets(std::ostream& os) const
{
  for (Index r = 0; r < rows_; ++r)
    for (std::int32_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      fmt::print(os, "{} {} {:.17g}\n", r, cols_[k], vals_[k]);
}

CsrMatrix q1_pattern(const Grid& grid, int m)
{
  const int n = grid.n();
  const Index nodes = grid.node_count();
  const Index rows = nodes * m;
  if (rows * 27 * m > static_cast<Index>(INT32_MAX))
    throw ParameterError("system too large for 32-bit CSR indices");

  std::vector<std::int32_t> row_ptr;
  row_ptr.reserve(rows + 1);
  row_ptr.push_back(0);
  std::vector<std::int32_t> cols;
  std::vector<Index> neighbours;
  int stencil = 1;
  for (int d = 0; d < n; ++d)
    stencil *= 3;

  for (Index node = 0; node < nodes; ++node) {
    const auto idx = grid.node_multi(node);
    neighbours.clear();
    for (int s = 0; s < stencil; ++s) {
      MultiIndex nb = idx;
      int code = s;
      bool inside = true;
      for (int d = 0; d < n; ++d) {
        nb[d] += code % 3 - 1;
        code /= 3;
        if (nb[d] < 0 || nb[d] > grid.cells_per_side())
          inside = false;
      }
      if (inside)
        neighbours.push_back(grid.node_index(nb));
    }
    std::sort(neighbours.begin(), neighbours.end());
    for (int i = 0; i < m; ++i) {
      for (Index nb : neighbours)
        for (int j = 0; j < m; ++j)
          cols.push_back(static_cast<std::int32_t>(nb * m + j));
      row_ptr.push_back(static_cast<std::int32_t>(cols.size()));
    }
  }
  return CsrMatrix(rows, std::move(row_ptr), std::move(cols));
}

void apply_dirichlet(CsrMatrix& a, std::vector<double>& rhs, std::span<const std::uint8_t> mask,
                     std::span<const double> values)
{
  const auto row_ptr = a.row_ptr();
  const auto cols = a.cols();
  auto vals = a.values();
  for (Index r = 0; r < a.rows(); ++r) {
    if (mask[r]) {
      for (std::int32_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
        vals[k] = cols[k] == r ? 1.0 : 0.0;
      rhs[r] = values[r];
      continue;
    }
    for (std::int32_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
      const Index c = cols[k];
      if (mask[c]) {
        rhs[r] -= vals[k] * values[c];
        vals[k] = 0.0;
      }
    }
  }
}

} // namespace translab
