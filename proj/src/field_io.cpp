#include "translab/field_io.hpp"

#include "translab/error.hpp"

#include <fmt/format.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace translab {

namespace {

constexpr const char* kMagic = "TRANSLAB-FIELD";
constexpr int kVersion = 1;

void put_doubles(std::ostream& os, std::span<const double> v)
{
  if constexpr (std::endian::native == std::endian::little) {
    os.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
  } else {
    for (double d : v) {
      auto bits = std::bit_cast<std::uint64_t>(d);
      char b[8];
      for (int k = 0; k < 8; ++k)
        b[k] = static_cast<char>((bits >> (8 * k)) & 0xff);
      os.write(b, 8);
    }
  }
}

void get_doubles(std::istream& is, std::span<double> v)
{
  is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
  if (static_cast<std::size_t>(is.gcount()) != v.size() * sizeof(double))
    throw ParameterError("field file payload is truncated");
  if constexpr (std::endian::native != std::endian::little) {
    for (double& d : v) {
      unsigned char b[8];
      std::memcpy(b, &d, 8);
      std::uint64_t bits = 0;
      for (int k = 0; k < 8; ++k)
        bits |= static_cast<std::uint64_t>(b[k]) << (8 * k);
      d = std::bit_cast<double>(bits);
    }
  }
}

void write_header(std::ostream& os, const Grid& g, int m, std::size_t levels, const std::vector<double>& times)
{
  os << fmt::format("{} {}\nn {}\nm {}\ncells_per_side {}\nlevels {}\n", kMagic, kVersion, g.n(), m,
                    g.cells_per_side(), levels);
  if (!times.empty()) {
    os << "times";
    for (double t : times)
      os << fmt::format(" {:.17g}", t);
    os << '\n';
  }
  os << "end\n";
}

std::ofstream open_out(const std::string& path)
{
  std::ofstream os(path, std::ios::binary);
  if (!os)
    throw ParameterError(fmt::format("cannot open '{}' for writing", path));
  return os;
}

} // namespace

DiscreteField FieldFile::field(std::size_t level) const
{
  if (level >= levels.size())
    throw ParameterError(fmt::format("field file has {} levels, asked for {}", levels.size(), level));
  return DiscreteField(grid(), m, levels[level]);
}

FieldSeries FieldFile::series() const
{
  if (times.size() != levels.size())
    throw ParameterError("field file carries no time stamps");
  FieldSeries s(grid(), m);
  for (std::size_t k = 0; k < levels.size(); ++k)
    s.push(times[k], levels[k]);
  return s;
}

void write_field(std::ostream& os, const DiscreteField& f, std::optional<double> time)
{
  std::vector<double> times;
  if (time)
    times.push_back(*time);
  write_header(os, f.grid(), f.m(), 1, times);
  put_doubles(os, f.values());
}

void write_field(const std::string& path, const DiscreteField& f, std::optional<double> time)
{
  auto os = open_out(path);
  write_field(os, f, time);
}

void write_series(std::ostream& os, const FieldSeries& s)
{
  write_header(os, s.grid(), s.m(), s.size(), s.times());
  for (std::size_t k = 0; k < s.size(); ++k)
    put_doubles(os, s.level_values(k));
}

void write_series(const std::string& path, const FieldSeries& s)
{
  auto os = open_out(path);
  write_series(os, s);
}

FieldFile read_field(std::istream& is)
{
  std::string line;
  if (!std::getline(is, line))
    throw ParameterError("empty field file");
  {
    std::istringstream ls(line);
    std::string magic;
    int version = 0;
    ls >> magic >> version;
    if (magic != kMagic)
      throw ParameterError("not a field file (bad magic)");
    if (version != kVersion)
      throw ParameterError(fmt::format("unsupported field file version {}", version));
  }
  FieldFile f;
  std::size_t levels = 1;
  bool done = false;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "end") {
      done = true;
      break;
    } else if (key == "n") {
      ls >> f.n;
    } else if (key == "m") {
      ls >> f.m;
    } else if (key == "cells_per_side") {
      ls >> f.cells_per_side;
    } else if (key == "levels") {
      ls >> levels;
    } else if (key == "times") {
      double t;
      while (ls >> t)
        f.times.push_back(t);
    } else {
      throw ParameterError(fmt::format("unknown field file header key '{}'", key));
    }
    if (ls.fail() && !ls.eof())
      throw ParameterError(fmt::format("malformed field file header line '{}'", line));
  }
  if (!done)
    throw ParameterError("field file header has no 'end' line");
  if (f.m < 1)
    throw ParameterError("field file m must be positive");
  if (!f.times.empty() && f.times.size() != levels)
    throw ParameterError("field file time stamps do not match the level count");
  const Grid g = f.grid();
  const std::size_t count = static_cast<std::size_t>(g.node_count() * f.m);
  f.levels.assign(levels, std::vector<double>(count));
  for (auto& level : f.levels)
    get_doubles(is, level);
  return f;
}

FieldFile read_field(const std::string& path)
{
  std::ifstream is(path, std::ios::binary);
  if (!is)
    throw ParameterError(fmt::format("cannot open field file '{}'", path));
  return read_field(is);
}

void write_gradient_csv(std::ostream& os, const DiscreteField& f)
{
  const Grid& g = f.grid();
  const int n = g.n();
  const int m = f.m();
  static constexpr const char* axis[] = {"x", "y", "z"};
  os << "cell";
  for (int a = 0; a < n; ++a)
    os << ',' << axis[a];
  for (int i = 0; i < m; ++i)
    for (int a = 0; a < n; ++a)
      os << fmt::format(",du{}_d{}", i, axis[a]);
  os << '\n';
  std::vector<double> grad(static_cast<std::size_t>(m * n));
  for (Index c = 0; c < g.cell_count(); ++c) {
    const Point x = g.cell_center(c);
    f.cell_gradient(c, grad);
    os << c;
    for (int a = 0; a < n; ++a)
      os << fmt::format(",{:.17g}", x[a]);
    for (double v : grad)
      os << fmt::format(",{:.17g}", v);
    os << '\n';
  }
}

void write_gradient_csv(const std::string& path, const DiscreteField& f)
{
  std::ofstream os(path);
  if (!os)
    throw ParameterError(fmt::format("cannot open '{}' for writing", path));
  write_gradient_csv(os, f);
}

} // namespace translab
