#include "translab/report.hpp"

#include "translab/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace translab {

namespace {

double parse_number(std::string_view s, std::string_view what)
{
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw ParameterError(fmt::format("cannot read {} from '{}'", what, s));
  return v;
}

std::vector<std::string> split(std::string_view s, char sep)
{
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos)
      break;
    start = pos + 1;
  }
  return out;
}

std::string trim(std::string_view s)
{
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string_view::npos)
    return {};
  const auto b = s.find_last_not_of(" \t\r");
  return std::string(s.substr(a, b - a + 1));
}

void keep_min(std::optional<double>& acc, double v)
{
  acc = acc ? std::min(*acc, v) : v;
}

void keep_max(std::optional<double>& acc, double v)
{
  acc = acc ? std::max(*acc, v) : v;
}

} // namespace

std::vector<double> parse_scales(std::string_view spec)
{
  const auto parts = split(spec, ':');
  if (parts.size() != 2)
    throw ParameterError(fmt::format("scales '{}' are not of the form r0:k", spec));
  const double r0 = parse_number(trim(parts[0]), "r0");
  const double k = parse_number(trim(parts[1]), "k");
  if (!(r0 > 0.0 && r0 <= 1.0))
    throw ParameterError(fmt::format("r0 = {} not in (0,1]", r0));
  if (k < 1 || k != std::floor(k))
    throw ParameterError(fmt::format("scale count {} must be a positive integer", k));
  std::vector<double> out;
  for (int j = 0; j < static_cast<int>(k); ++j)
    out.push_back(r0 * std::ldexp(1.0, -j));
  return out;
}

std::vector<Point> parse_centers(std::string_view spec, int n, double r0)
{
  std::vector<Point> out;
  if (spec.starts_with("grid")) {
    const double kd = parse_number(spec.substr(4), "lattice size");
    const int k = static_cast<int>(kd);
    if (k < 1 || kd != k)
      throw ParameterError(fmt::format("bad center lattice '{}'", spec));
    int total = 1;
    for (int d = 0; d < n; ++d)
      total *= k;
    for (int idx = 0; idx < total; ++idx) {
      Point z{0, 0, 0};
      int rem = idx;
      for (int d = 0; d < n; ++d) {
        z[d] = -1.0 + (2.0 * (rem % k) + 1.0) / k;
        rem /= k;
      }
      if (norm(z) + r0 <= 1.0 + 1e-12)
        out.push_back(z);
    }
    return out;
  }
  for (const auto& item : split(spec, ';')) {
    if (trim(item).empty())
      continue;
    const auto coords = split(item, ',');
    if (static_cast<int>(coords.size()) != n)
      throw ParameterError(fmt::format("center '{}' needs {} coordinates", item, n));
    Point z{0, 0, 0};
    for (int d = 0; d < n; ++d)
      z[d] = parse_number(trim(coords[d]), "center coordinate");
    out.push_back(z);
  }
  if (out.empty())
    throw ParameterError(fmt::format("no centers in '{}'", spec));
  return out;
}

std::string format_cell(const std::optional<double>& v)
{
  if (!v)
    return "NA";
  if (std::isnan(*v))
    return "nan";
  return fmt::format("{:.10e}", *v);
}

void write_report(std::ostream& os, std::string_view scenario, std::vector<DyadicReport> reports)
{
  std::stable_sort(reports.begin(), reports.end(), [](const DyadicReport& a, const DyadicReport& b) {
    if (a.z != b.z)
      return a.z < b.z;
    return a.s.value_or(0.0) < b.s.value_or(0.0);
  });
  const int n = reports.empty() ? 2 : reports.front().n;
  const bool parabolic = !reports.empty() && reports.front().s.has_value();
  static constexpr const char* axis[] = {"z0", "z1", "z2"};
  os << kReportHeader << '\n' << "# scenario: " << scenario << '\n';
  for (int d = 0; d < n; ++d)
    os << axis[d] << ',';
  os << "r,grad_l_norm,bmo_C,density,density_rhs,slack,case_tag";
  if (parabolic)
    os << ",t,sup_t_residual,log_bound_ratio";
  os << '\n';
  for (const auto& rep : reports)
    for (const auto& row : rep.rows) {
      for (int d = 0; d < n; ++d)
        os << format_cell(rep.z[d]) << ',';
      os << format_cell(row.r) << ',' << format_cell(row.grad_l_norm) << ',' << format_cell(row.bmo_c) << ','
         << format_cell(row.density) << ',' << format_cell(row.density_rhs) << ',' << format_cell(row.slack) << ','
         << case_name(rep.tag);
      if (parabolic)
        os << ',' << format_cell(rep.s) << ',' << format_cell(row.sup_t_residual) << ','
           << format_cell(row.log_bound_ratio);
      os << '\n';
    }
}

ScenarioSummary summarize_report(std::istream& is, std::string fallback_name)
{
  std::string line;
  if (!std::getline(is, line) || trim(line) != kReportHeader)
    throw ParameterError("not a translab report (missing version header)");
  ScenarioSummary s;
  s.scenario = std::move(fallback_name);
  std::vector<std::string> columns;
  while (std::getline(is, line)) {
    if (line.starts_with("# scenario:")) {
      s.scenario = trim(line.substr(11));
      continue;
    }
    if (line.starts_with("#") || trim(line).empty())
      continue;
    if (columns.empty()) {
      columns = split(trim(line), ',');
      continue;
    }
    const auto cells = split(trim(line), ',');
    if (cells.size() != columns.size())
      throw ParameterError(fmt::format("report row has {} cells, header has {}", cells.size(), columns.size()));
    ++s.rows;
    for (std::size_t k = 0; k < cells.size(); ++k) {
      const auto& c = columns[k];
      if (c == "case_tag") {
        if (cells[k] == "Case1")
          ++s.case1;
        else if (cells[k] == "Case2")
          ++s.case2;
        else
          ++s.undetermined;
        continue;
      }
      if (cells[k] == "NA" || cells[k] == "nan")
        continue;
      if (c == "bmo_C") {
        const double v = parse_number(cells[k], c);
        keep_min(s.min_bmo_c, v);
        keep_max(s.max_bmo_c, v);
      } else if (c == "grad_l_norm") {
        keep_max(s.max_grad_l_norm, parse_number(cells[k], c));
      } else if (c == "slack") {
        keep_max(s.max_slack, parse_number(cells[k], c));
      } else if (c == "sup_t_residual") {
        keep_max(s.max_sup_t_residual, parse_number(cells[k], c));
      }
    }
  }
  if (columns.empty())
    throw ParameterError("report has no column header");
  return s;
}

void write_summary(std::ostream& os, const std::vector<ScenarioSummary>& rows)
{
  os << kReportHeader << '\n';
  os << "scenario,rows,min_bmo_C,max_bmo_C,max_grad_l_norm,max_slack,max_sup_t_residual,case1,case2,undetermined\n";
  for (const auto& s : rows)
    os << s.scenario << ',' << s.rows << ',' << format_cell(s.min_bmo_c) << ',' << format_cell(s.max_bmo_c) << ','
       << format_cell(s.max_grad_l_norm) << ',' << format_cell(s.max_slack) << ','
       << format_cell(s.max_sup_t_residual) << ',' << s.case1 << ',' << s.case2 << ',' << s.undetermined << '\n';
}

void write_refinement(std::ostream& os, const RefinementTable& t)
{
  os << "cells_per_side,h,error,rate,iterations,wall_time_s\n";
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    const auto& r = t.rows[k];
    os << r.cells_per_side << ',' << format_cell(r.h) << ','
       << (std::isnan(r.error) ? std::string("NA") : format_cell(r.error)) << ',' << t.rate_label(k) << ','
       << r.iterations << ',' << fmt::format("{:.3f}", r.wall_seconds) << '\n';
  }
}

} // namespace translab
