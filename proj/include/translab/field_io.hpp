#pragma once

#include "translab/grid.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace translab {

/// Contents of a field file: one or more time levels of nodal values.
struct FieldFile {
  int n = 2;
  int m = 1;
  int cells_per_side = 0;
  /// One entry per level when the file carries time stamps, else empty.
  std::vector<double> times;
  std::vector<std::vector<double>> levels;

  Grid grid() const { return Grid(n, cells_per_side); }
  DiscreteField field(std::size_t level = 0) const;
  FieldSeries series() const;
};

/// Text header
///   TRANSLAB-FIELD 1
///   n <n>
///   m <m>
///   cells_per_side <N>
///   levels <L>
///   times <t_0> ... <t_{L-1}>     (optional)
///   end
/// followed by L * (N+1)^n * m little-endian float64 values, level-major,
/// node-major within a level.
void write_field(std::ostream& os, const DiscreteField& f, std::optional<double> time = std::nullopt);
void write_field(const std::string& path, const DiscreteField& f, std::optional<double> time = std::nullopt);
void write_series(std::ostream& os, const FieldSeries& s);
void write_series(const std::string& path, const FieldSeries& s);

/// Throws ParameterError on a malformed header or a short payload.
FieldFile read_field(std::istream& is);
FieldFile read_field(const std::string& path);

/// One row per cell: cell index, center coordinates and d_a u^i at the center.
void write_gradient_csv(std::ostream& os, const DiscreteField& f);
void write_gradient_csv(const std::string& path, const DiscreteField& f);

} // namespace translab
