#pragma once

#include "translab/elliptic.hpp"
#include "translab/regularity.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace translab {

inline constexpr std::string_view kReportHeader = "# translab-report v1";

/// "r0:k" -> r0 * 2^{-j}, j = 0..k-1.
std::vector<double> parse_scales(std::string_view spec);

/// "gridK": midpoints of the K^n lattice of [-1,1]^n with |z| + r0 <= 1.
/// Otherwise an explicit list "x,y;x,y" (no filtering).
std::vector<Point> parse_centers(std::string_view spec, int n, double r0);

/// One row per (center, scale); reports are sorted by center, rows keep
/// their (decreasing) scale order. Parabolic reports add t,
/// sup_t_residual and log_bound_ratio.
void write_report(std::ostream& os, std::string_view scenario, std::vector<DyadicReport> reports);

/// Fixed-format number used in every CSV cell ("NA" when empty).
std::string format_cell(const std::optional<double>& v);

struct ScenarioSummary {
  std::string scenario;
  std::size_t rows = 0;
  std::optional<double> min_bmo_c;
  std::optional<double> max_bmo_c;
  std::optional<double> max_grad_l_norm;
  std::optional<double> max_slack;
  std::optional<double> max_sup_t_residual;
  std::size_t case1 = 0;
  std::size_t case2 = 0;
  std::size_t undetermined = 0;
};

/// Reads a report CSV; throws ParameterError on a missing or wrong header.
ScenarioSummary summarize_report(std::istream& is, std::string fallback_name);
void write_summary(std::ostream& os, const std::vector<ScenarioSummary>& rows);

void write_refinement(std::ostream& os, const RefinementTable& t);

} // namespace translab
