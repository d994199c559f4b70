#include "translab/config.hpp"

#include "translab/error.hpp"

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace translab {

namespace {

int line_of(const YAML::Node& node)
{
  const auto mark = node.Mark();
  return mark.line >= 0 ? mark.line + 1 : 0;
}

[[noreturn]] void fail(const YAML::Node& node, const std::string& what)
{
  throw ConfigError(what, line_of(node));
}

/// A map node whose keys are read once each; defaults are written back so the
/// node ends up holding the effective configuration.
class Section {
public:
  Section(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path))
  {
    if (!node_.IsMap())
      fail(node_, fmt::format("'{}' must be a mapping", path_));
  }

  static Section child_of(Section& parent, const std::string& key)
  {
    parent.seen_.insert(key);
    if (!parent.node_[key])
      parent.node_[key] = YAML::Node(YAML::NodeType::Map);
    return Section(parent.node_[key], parent.path_.empty() ? key : parent.path_ + "." + key);
  }

  bool has(const std::string& key) const { return static_cast<bool>(node_[key]); }

  template <class T>
  T get(const std::string& key, const T& fallback)
  {
    seen_.insert(key);
    if (!node_[key]) {
      node_[key] = fallback;
      return fallback;
    }
    return convert<T>(node_[key], key);
  }

  template <class T>
  T need(const std::string& key)
  {
    seen_.insert(key);
    if (!node_[key])
      fail(node_, fmt::format("'{}' is missing required key '{}'", path_, key));
    return convert<T>(node_[key], key);
  }

  /// Raw child node, marked as read.
  YAML::Node raw(const std::string& key)
  {
    seen_.insert(key);
    return node_[key];
  }

  void set_default(const std::string& key, const YAML::Node& value)
  {
    if (!node_[key])
      node_[key] = value;
  }

  void finish() const
  {
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!seen_.count(key))
        fail(kv.first, fmt::format("unknown key '{}' in '{}'", key, path_.empty() ? "<root>" : path_));
    }
  }

  const YAML::Node& node() const { return node_; }
  const std::string& path() const { return path_; }

private:
  template <class T>
  T convert(const YAML::Node& n, const std::string& key) const
  {
    try {
      return n.as<T>();
    } catch (const YAML::Exception&) {
      fail(n, fmt::format("'{}.{}' has the wrong type", path_, key));
    }
  }

  YAML::Node node_;
  std::string path_;
  std::set<std::string> seen_;
};

Point to_point(const std::vector<double>& v, int n, const YAML::Node& where, const std::string& what)
{
  if (static_cast<int>(v.size()) != n)
    fail(where, fmt::format("'{}' needs {} coordinates, got {}", what, n, v.size()));
  Point p{0, 0, 0};
  for (int d = 0; d < n; ++d)
    p[d] = v[d];
  return p;
}

YAML::Node seq(std::initializer_list<double> v)
{
  YAML::Node out(YAML::NodeType::Sequence);
  for (double x : v)
    out.push_back(x);
  return out;
}

YAML::Node unit_vector(int n, int axis)
{
  YAML::Node out(YAML::NodeType::Sequence);
  for (int d = 0; d < n; ++d)
    out.push_back(d == axis ? 1.0 : 0.0);
  return out;
}

YAML::Node map_of(std::initializer_list<std::pair<const char*, YAML::Node>> kv)
{
  YAML::Node out(YAML::NodeType::Map);
  for (const auto& [k, v] : kv)
    out[k] = v;
  return out;
}

template <class T>
YAML::Node scalar(const T& v)
{
  return YAML::Node(v);
}

// --- moduli --------------------------------------------------------------

Modulus parse_modulus(Section s)
{
  const auto kind = s.get<std::string>("kind", "power");
  Modulus out = Modulus::power(1.0);
  try {
    if (kind == "power") {
      out = Modulus::power(s.get<double>("exponent", 1.0), s.get<double>("scale", 1.0));
    } else if (kind == "log_power") {
      out = Modulus::log_power(s.get<double>("exponent", 1.0), s.get<double>("scale", 1.0));
    } else if (kind == "tabulated") {
      if (s.has("file")) {
        out = load_tabulated_modulus(s.need<std::string>("file"));
      } else {
        const auto pts = s.need<std::vector<std::vector<double>>>("points");
        std::vector<Breakpoint> bp;
        for (const auto& p : pts) {
          if (p.size() != 2)
            fail(s.node(), "tabulated points are [r, omega] pairs");
          bp.push_back({p[0], p[1]});
        }
        out = Modulus::tabulated(std::move(bp));
      }
    } else {
      fail(s.node(), fmt::format("unknown modulus kind '{}'", kind));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const ValidationError& e) {
    fail(s.node(), e.what());
  }
  s.finish();
  return out;
}

// --- tensors -------------------------------------------------------------

std::vector<double> parse_matrix(Section& s, const std::string& key, int order, double value_default)
{
  const YAML::Node node = s.raw(key);
  std::vector<double> out(static_cast<std::size_t>(order * order), 0.0);
  if (!node) {
    for (int k = 0; k < order; ++k)
      out[k * order + k] = value_default;
    return out;
  }
  if (node.IsScalar()) {
    double v = 0.0;
    try {
      v = node.as<double>();
    } catch (const YAML::Exception&) {
      fail(node, fmt::format("'{}.{}' must be a number or a matrix", s.path(), key));
    }
    for (int k = 0; k < order; ++k)
      out[k * order + k] = v;
    return out;
  }
  std::vector<std::vector<double>> rows;
  try {
    rows = node.as<std::vector<std::vector<double>>>();
  } catch (const YAML::Exception&) {
    fail(node, fmt::format("'{}.{}' must be a number or a matrix", s.path(), key));
  }
  if (static_cast<int>(rows.size()) != order)
    fail(node, fmt::format("'{}.{}' needs {} rows", s.path(), key, order));
  for (int i = 0; i < order; ++i) {
    if (static_cast<int>(rows[i].size()) != order)
      fail(node, fmt::format("'{}.{}' row {} needs {} entries", s.path(), key, i, order));
    for (int j = 0; j < order; ++j)
      out[i * order + j] = rows[i][j];
  }
  return out;
}

std::function<double(const Point&)> parse_sigma(Section s, int n, std::string& desc)
{
  const auto kind = s.get<std::string>("kind", "constant");
  const double value = s.get<double>("value", 1.0);
  std::function<double(const Point&)> f;
  if (kind == "constant") {
    f = [value](const Point&) { return value; };
    desc = fmt::format("{}", value);
  } else if (kind == "affine") {
    const auto slope = to_point(s.need<std::vector<double>>("slope"), n, s.node(), s.path() + ".slope");
    f = [value, slope](const Point& x) { return value + dot(slope, x); };
    desc = fmt::format("({} + ({}, {}, {}).x)", value, slope[0], slope[1], slope[2]);
  } else if (kind == "radial") {
    const double amp = s.get<double>("amplitude", 1.0);
    const double e = s.get<double>("exponent", 1.0);
    f = [value, amp, e](const Point& x) { return value + amp * std::pow(norm(x), e); };
    desc = fmt::format("({} + {} |x|^{})", value, amp, e);
  } else {
    fail(s.node(), fmt::format("unknown scalar field kind '{}'", kind));
  }
  s.finish();
  return f;
}

CoefficientTensor parse_tensor(Section s, int n, int m, ConformancePolicy policy, bool check_conformance_here,
                               std::vector<std::string>& warnings)
{
  const auto kind = s.get<std::string>("kind", "constant");
  const double lambda = s.get<double>("lambda", 0.5);
  const int order = n * m;

  std::optional<DiniBound> dini;
  if (s.has("dini")) {
    auto d = Section::child_of(s, "dini");
    Modulus mod = parse_modulus(Section::child_of(d, "modulus"));
    double seminorm = d.get<double>("seminorm", 1.0);
    if (check_conformance_here) {
      const auto c = check_conformance(mod);
      if (!c.elliptic_ok || !c.parabolic_ok) {
        const auto msg =
            fmt::format("modulus {} is not normalized: omega(1) = {:.6g}, max omega(r)|log r| = {:.6g}",
                        mod.describe(), c.omega_at_one, c.max_log_product);
        if (policy == ConformancePolicy::reject)
          throw ParameterError(msg);
        if (policy == ConformancePolicy::rescale) {
          double f = 1.0;
          if (c.omega_at_one > 0.5)
            f = std::min(f, 0.5 / c.omega_at_one);
          if (c.max_log_product > 0.5)
            f = std::min(f, 0.5 / c.max_log_product);
          mod = mod.scaled(f);
          seminorm /= f;
          warnings.push_back(msg + fmt::format("; rescaled by {:.6g}", f));
        } else {
          warnings.push_back(msg);
        }
      }
    }
    d.finish();
    dini = DiniBound{mod, seminorm};
  }

  try {
    if (kind == "constant") {
      auto mat = parse_matrix(s, "value", order, 1.0);
      s.finish();
      return CoefficientTensor::constant(n, m, std::move(mat), lambda, dini);
    }
    if (kind == "affine") {
      auto base = parse_matrix(s, "base", order, 1.0);
      const YAML::Node slopes_node = s.raw("slopes");
      std::vector<std::vector<double>> slopes;
      if (slopes_node) {
        if (!slopes_node.IsSequence() || static_cast<int>(slopes_node.size()) != n)
          fail(slopes_node ? slopes_node : s.node(), fmt::format("'{}.slopes' needs {} entries", s.path(), n));
        for (int k = 0; k < n; ++k) {
          YAML::Node holder(YAML::NodeType::Map);
          holder["slope"] = slopes_node[k];
          Section hs(holder, fmt::format("{}.slopes[{}]", s.path(), k));
          slopes.push_back(parse_matrix(hs, "slope", order, 0.0));
        }
      } else {
        slopes.assign(n, std::vector<double>(static_cast<std::size_t>(order * order), 0.0));
      }
      s.finish();
      return CoefficientTensor::affine(n, m, std::move(base), std::move(slopes), lambda, dini);
    }
    if (kind == "scalar") {
      std::string desc;
      auto sigma = parse_sigma(Section::child_of(s, "sigma"), n, desc);
      s.finish();
      return CoefficientTensor::scaled_identity(n, m, std::move(sigma), lambda, dini, desc + " I");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const ValidationError& e) {
    fail(s.node(), e.what());
  }
  fail(s.node(), fmt::format("unknown tensor kind '{}'", kind));
}

// --- domains -------------------------------------------------------------

IndicatorDomain parse_domain(Section s, int n)
{
  const auto kind = s.get<std::string>("kind", "empty");
  IndicatorDomain d;
  try {
    if (kind == "empty") {
      d = IndicatorDomain::empty();
    } else if (kind == "half_space") {
      const auto normal = to_point(s.need<std::vector<double>>("normal"), n, s.node(), s.path() + ".normal");
      d = IndicatorDomain::half_space(normal, s.get<double>("offset", 0.0));
    } else if (kind == "ball") {
      const auto c = to_point(s.need<std::vector<double>>("center"), n, s.node(), s.path() + ".center");
      d = IndicatorDomain::ball(c, s.need<double>("radius"));
    } else if (kind == "cusp") {
      const double gamma = s.get<double>("gamma", 0.5);
      std::vector<double> zero(static_cast<std::size_t>(n), 0.0);
      const auto apex = to_point(s.get<std::vector<double>>("apex", zero), n, s.node(), s.path() + ".apex");
      d = IndicatorDomain::cusp(gamma, apex, s.get<int>("axis", 1));
    } else if (kind == "complement") {
      d = IndicatorDomain::complement(parse_domain(Section::child_of(s, "of"), n));
    } else if (kind == "union") {
      const YAML::Node parts = s.raw("parts");
      if (!parts || !parts.IsSequence())
        fail(s.node(), fmt::format("'{}.parts' must be a list of domains", s.path()));
      std::vector<IndicatorDomain> ds;
      for (std::size_t k = 0; k < parts.size(); ++k)
        ds.push_back(parse_domain(Section(parts[k], fmt::format("{}.parts[{}]", s.path(), k)), n));
      d = IndicatorDomain::union_of(ds);
    } else if (kind == "time_slab") {
      d = IndicatorDomain::time_slab(s.need<double>("t_max"));
    } else {
      fail(s.node(), fmt::format("unknown domain kind '{}'", kind));
    }
    if (s.has("velocity"))
      d = d.moving(to_point(s.need<std::vector<double>>("velocity"), n, s.node(), s.path() + ".velocity"));
  } catch (const ConfigError&) {
    throw;
  } catch (const ValidationError& e) {
    fail(s.node(), e.what());
  }
  s.finish();
  return d;
}

// --- fields --------------------------------------------------------------

oracle::FieldOracle trig_field(int n, int m, double amplitude, Point k)
{
  oracle::FieldOracle f;
  f.n = n;
  f.m = m;
  f.name = "trig";
  f.eval = [n, m, amplitude, k](const Point& x, double, std::span<double> v, std::span<double> g) {
    const double ph = std::numbers::pi * dot(k, x);
    for (int i = 0; i < m; ++i) {
      v[i] = amplitude * std::sin(ph);
      if (!g.empty())
        for (int a = 0; a < n; ++a)
          g[i * n + a] = amplitude * std::numbers::pi * k[a] * std::cos(ph);
    }
  };
  return f;
}

struct ParsedField {
  oracle::FieldOracle field;
  bool is_oracle = false;
};

ParsedField parse_field(Section s, int n, int m, double t_start)
{
  const auto kind = s.get<std::string>("kind", "zero");
  ParsedField out;
  bool oracle_default = false;
  try {
    if (kind == "zero") {
      out.field = oracle::affine_oracle(n, m, std::vector<double>(static_cast<std::size_t>(m * n), 0.0),
                                        std::vector<double>(m, 0.0));
    } else if (kind == "affine") {
      const auto rows = s.need<std::vector<std::vector<double>>>("gradient");
      if (static_cast<int>(rows.size()) != m)
        fail(s.node(), fmt::format("'{}.gradient' needs {} rows", s.path(), m));
      std::vector<double> g;
      for (const auto& r : rows) {
        if (static_cast<int>(r.size()) != n)
          fail(s.node(), fmt::format("'{}.gradient' rows need {} entries", s.path(), n));
        g.insert(g.end(), r.begin(), r.end());
      }
      const auto offset = s.get<std::vector<double>>("offset", std::vector<double>(m, 0.0));
      if (static_cast<int>(offset.size()) != m)
        fail(s.node(), fmt::format("'{}.offset' needs {} entries", s.path(), m));
      out.field = oracle::affine_oracle(n, m, g, offset);
    } else if (kind == "trig") {
      std::vector<double> first(static_cast<std::size_t>(n), 0.0);
      first[0] = 1.0;
      const auto k = to_point(s.get<std::vector<double>>("wavenumber", first), n, s.node(), s.path() + ".wavenumber");
      out.field = trig_field(n, m, s.get<double>("amplitude", 1.0), k);
    } else if (kind == "flat_interface") {
      out.field = oracle::flat_interface_oracle(s.get<double>("a", 1.0), s.get<double>("b", 4.0), n);
      oracle_default = true;
    } else if (kind == "disk_inclusion") {
      if (n != 2)
        fail(s.node(), "the disk-inclusion field is planar (n = 2)");
      out.field = oracle::disk_inclusion_oracle(s.get<double>("k", 2.0), s.get<double>("radius", 0.5));
      oracle_default = true;
    } else if (kind == "eigenmode") {
      std::vector<int> ones(static_cast<std::size_t>(n), 1);
      const auto modes = s.get<std::vector<int>>("modes", ones);
      out.field = oracle::eigenmode_oracle(n, modes, s.get<double>("t_start", t_start));
      oracle_default = true;
    } else {
      fail(s.node(), fmt::format("unknown field kind '{}'", kind));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const ValidationError& e) {
    fail(s.node(), e.what());
  }
  if (kind != "zero" && kind != "affine" && kind != "trig" && out.field.m != m)
    out.field = oracle::vector_decoupled(out.field, m);
  out.is_oracle = s.get<bool>("oracle", oracle_default);

  if (s.has("perturbation")) {
    auto ps = Section::child_of(s, "perturbation");
    const double amp = ps.get<double>("amplitude", 0.01);
    std::vector<int> ones(static_cast<std::size_t>(n), 1);
    const auto modes = ps.get<std::vector<int>>("modes", ones);
    ps.finish();
    oracle::FieldOracle bump;
    try {
      bump = oracle::vector_decoupled(oracle::eigenmode_oracle(n, modes, t_start), m);
    } catch (const ValidationError& e) {
      fail(ps.node(), e.what());
    }
    auto base = out.field;
    out.field.name = base.name + "+perturbation";
    out.field.eval = [base, bump, amp, n, m](const Point& x, double t, std::span<double> v, std::span<double> g) {
      std::vector<double> bv(m), bg(static_cast<std::size_t>(m * n));
      base.eval(x, t, v, g);
      bump.eval(x, t, bv, bg);
      for (int i = 0; i < m; ++i)
        v[i] += amp * bv[i];
      if (!g.empty())
        for (std::size_t k = 0; k < bg.size(); ++k)
          g[k] += amp * bg[k];
    };
    out.is_oracle = false;
  }
  s.finish();
  return out;
}

std::optional<VectorField> parse_forcing(Section& problem, int n, int m)
{
  if (!problem.has("forcing"))
    return std::nullopt;
  auto s = Section::child_of(problem, "forcing");
  const auto kind = s.get<std::string>("kind", "constant");
  if (kind != "constant" && kind != "affine")
    fail(s.node(), fmt::format("unknown forcing kind '{}'", kind));
  auto read = [&](const YAML::Node& node, const std::string& what) {
    std::vector<std::vector<double>> rows;
    try {
      rows = node.as<std::vector<std::vector<double>>>();
    } catch (const YAML::Exception&) {
      fail(node, fmt::format("'{}' must be an m x n matrix", what));
    }
    if (static_cast<int>(rows.size()) != m)
      fail(node, fmt::format("'{}' needs {} rows", what, m));
    std::vector<double> flat;
    for (const auto& r : rows) {
      if (static_cast<int>(r.size()) != n)
        fail(node, fmt::format("'{}' rows need {} entries", what, n));
      flat.insert(flat.end(), r.begin(), r.end());
    }
    return flat;
  };
  const YAML::Node value_node = s.raw("value");
  if (!value_node)
    fail(s.node(), fmt::format("'{}' is missing required key 'value'", s.path()));
  const auto value = read(value_node, s.path() + ".value");
  std::vector<std::vector<double>> slopes;
  if (kind == "affine") {
    const YAML::Node sl = s.raw("slopes");
    if (!sl || !sl.IsSequence() || static_cast<int>(sl.size()) != n)
      fail(sl ? sl : s.node(), fmt::format("'{}.slopes' needs {} matrices", s.path(), n));
    for (int k = 0; k < n; ++k)
      slopes.push_back(read(sl[k], fmt::format("{}.slopes[{}]", s.path(), k)));
  }
  s.finish();
  return VectorField([value, slopes](const Point& x, double, std::span<double> out) {
    for (std::size_t k = 0; k < value.size(); ++k) {
      double v = value[k];
      for (std::size_t d = 0; d < slopes.size(); ++d)
        v += x[d] * slopes[d][k];
      out[k] = v;
    }
  });
}

// --- presets -------------------------------------------------------------

void expand_preset(Section& p, int n)
{
  const auto preset = p.get<std::string>("preset", "none");
  auto constant = [](double v) {
    const double lambda = std::min({0.5, v, 1.0 / v});
    return map_of({{"kind", scalar<std::string>("constant")}, {"value", scalar(v)}, {"lambda", scalar(lambda)}});
  };
  if (preset == "none") {
    return;
  } else if (preset == "flat_interface") {
    const double a = p.get<double>("a", 1.0), b = p.get<double>("b", 4.0);
    p.set_default("A", constant(a));
    p.set_default("B", constant(b));
    p.set_default("domain", map_of({{"kind", scalar<std::string>("half_space")}, {"normal", unit_vector(n, 1)},
                                    {"offset", scalar(0.0)}}));
    p.set_default("boundary",
                  map_of({{"kind", scalar<std::string>("flat_interface")}, {"a", scalar(a)}, {"b", scalar(b)}}));
  } else if (preset == "disk_inclusion") {
    const double k = p.get<double>("k", 2.0), r = p.get<double>("radius", 0.5);
    p.set_default("A", constant(1.0));
    p.set_default("B", constant(k));
    p.set_default("domain", map_of({{"kind", scalar<std::string>("ball")}, {"center", seq({0.0, 0.0})},
                                    {"radius", scalar(r)}}));
    p.set_default("boundary",
                  map_of({{"kind", scalar<std::string>("disk_inclusion")}, {"k", scalar(k)}, {"radius", scalar(r)}}));
  } else if (preset == "cusp") {
    const double a = p.get<double>("a", 1.0), b = p.get<double>("b", 4.0), g = p.get<double>("gamma", 0.5);
    p.set_default("A", constant(a));
    p.set_default("B", constant(b));
    YAML::Node apex(YAML::NodeType::Sequence);
    for (int d = 0; d < n; ++d)
      apex.push_back(0.0);
    p.set_default("domain", map_of({{"kind", scalar<std::string>("cusp")}, {"gamma", scalar(g)}, {"apex", apex},
                                    {"axis", scalar(1)}}));
    YAML::Node grad(YAML::NodeType::Sequence);
    grad.push_back(unit_vector(n, 1));
    p.set_default("boundary", map_of({{"kind", scalar<std::string>("affine")}, {"gradient", grad}}));
  } else if (preset == "eigenmode") {
    YAML::Node modes(YAML::NodeType::Sequence);
    for (int d = 0; d < n; ++d)
      modes.push_back(1);
    p.set_default("A", constant(1.0));
    p.set_default("B", constant(1.0));
    p.set_default("domain", map_of({{"kind", scalar<std::string>("empty")}}));
    p.set_default("boundary", map_of({{"kind", scalar<std::string>("zero")}}));
    p.set_default("initial", map_of({{"kind", scalar<std::string>("eigenmode")}, {"modes", modes}}));
  } else if (preset == "smooth") {
    YAML::Node slope(YAML::NodeType::Sequence);
    for (int d = 0; d < n; ++d)
      slope.push_back(d == 0 ? 0.25 : 0.0);
    auto tensor = map_of(
        {{"kind", scalar<std::string>("scalar")},
         {"sigma", map_of({{"kind", scalar<std::string>("affine")}, {"value", scalar(1.0)}, {"slope", slope}})},
         {"dini", map_of({{"modulus", map_of({{"kind", scalar<std::string>("power")},
                                              {"exponent", scalar(1.0)},
                                              {"scale", scalar(0.25)}})},
                          {"seminorm", scalar(1.0)}})}});
    p.set_default("A", tensor);
    p.set_default("B", YAML::Clone(tensor));
    p.set_default("domain", map_of({{"kind", scalar<std::string>("empty")}}));
    p.set_default("boundary", map_of({{"kind", scalar<std::string>("trig")}, {"amplitude", scalar(1.0)}}));
  } else {
    fail(p.node(), fmt::format("unknown preset '{}'", preset));
  }
}

ConformancePolicy parse_policy(Section& s)
{
  const auto v = s.get<std::string>("conformance", "warn");
  if (v == "warn")
    return ConformancePolicy::warn;
  if (v == "reject")
    return ConformancePolicy::reject;
  if (v == "rescale")
    return ConformancePolicy::rescale;
  fail(s.node()["conformance"], fmt::format("unknown conformance policy '{}'", v));
}

} // namespace

Config parse_config(std::string_view text)
{
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ConfigError(e.msg, e.mark.line >= 0 ? e.mark.line + 1 : 0);
  }
  if (!root || root.IsNull())
    root = YAML::Node(YAML::NodeType::Map);
  Section top(root, "");
  Config c;
  c.name = top.get<std::string>("name", "unnamed");
  c.n = top.get<int>("n", 2);
  c.m = top.get<int>("m", 1);
  if (c.n < 1 || c.n > kMaxDim)
    fail(root["n"], fmt::format("n = {} is not in 1..{}", c.n, kMaxDim));
  if (c.m < 1)
    fail(root["m"], "m must be positive");

  {
    auto s = Section::child_of(top, "grid");
    c.grid.cells_per_side = s.get<int>("cells_per_side", c.grid.cells_per_side);
    s.finish();
  }
  {
    auto s = Section::child_of(top, "solver");
    c.solver.tol = s.get<double>("tol", c.solver.tol);
    c.solver.max_iter = s.get<int>("max_iter", c.solver.max_iter);
    c.solver.isa = s.get<std::string>("isa", c.solver.isa);
    if (c.solver.isa != "auto" && c.solver.isa != "scalar" && c.solver.isa != "avx2")
      fail(s.node()["isa"], fmt::format("unknown isa '{}'", c.solver.isa));
    s.finish();
  }
  {
    auto s = Section::child_of(top, "time");
    c.time.t_start = s.get<double>("t_start", c.time.t_start);
    c.time.t_end = s.get<double>("t_end", c.time.t_end);
    c.time.dt = s.get<double>("dt", c.time.dt);
    const auto scheme = s.get<std::string>("scheme", std::string(scheme_name(c.time.scheme)));
    try {
      c.time.scheme = parse_scheme(scheme);
    } catch (const ValidationError& e) {
      fail(s.node()["scheme"], e.what());
    }
    c.time.store_every = s.get<int>("store_every", c.time.store_every);
    s.finish();
  }
  {
    auto s = Section::child_of(top, "analysis");
    auto& a = c.analysis;
    a.centers = s.get<std::string>("centers", a.centers);
    a.scales = s.get<std::string>("scales", a.scales);
    a.threshold = s.get<double>("threshold", a.threshold);
    a.min_cells_per_radius = s.get<int>("min_cells_per_radius", a.min_cells_per_radius);
    a.subsamples = s.get<int>("subsamples", a.subsamples);
    a.density_resolution = s.get<int>("density_resolution", a.density_resolution);
    a.s = s.get<double>("s", a.s);
    s.finish();
  }
  {
    auto s = Section::child_of(top, "output");
    auto& o = c.output;
    o.field = s.get<std::string>("field", o.field);
    o.log = s.get<std::string>("log", o.log);
    o.report = s.get<std::string>("report", o.report);
    o.gradients = s.get<std::string>("gradients", o.gradients);
    o.matrix = s.get<std::string>("matrix", o.matrix);
    o.snapshot_every = s.get<int>("snapshot_every", o.snapshot_every);
    o.snapshot_prefix = s.get<std::string>("snapshot_prefix", o.snapshot_prefix);
    s.finish();
  }
  {
    auto s = Section::child_of(top, "sweep");
    c.sweep.resolutions = s.get<std::vector<int>>("resolutions", c.sweep.resolutions);
    s.finish();
  }
  if (top.has("modulus_check")) {
    auto s = Section::child_of(top, "modulus_check");
    auto& mc = c.modulus_check;
    mc.r_min = s.get<double>("r_min", mc.r_min);
    mc.psi_rho = s.get<double>("psi_rho", mc.psi_rho);
    mc.psi_n = s.get<int>("psi_n", mc.psi_n);
    mc.lemma_alpha = s.get<double>("lemma_alpha", mc.lemma_alpha);
    YAML::Node list = s.raw("moduli");
    if (!list || !list.IsSequence())
      fail(s.node(), "'modulus_check.moduli' must be a list");
    for (std::size_t k = 0; k < list.size(); ++k) {
      Section ms(list[k], fmt::format("modulus_check.moduli[{}]", k));
      const auto name = ms.get<std::string>("name", fmt::format("modulus{}", k));
      // the remaining keys describe the modulus itself
      YAML::Node copy(YAML::NodeType::Map);
      for (const auto& kv : list[k])
        if (kv.first.as<std::string>() != "name")
          copy[kv.first] = kv.second;
      Modulus mod = parse_modulus(Section(copy, ms.path()));
      for (const auto& kv : copy)
        list[k][kv.first] = kv.second;
      mc.moduli.push_back({name, mod});
    }
    s.finish();
  }
  if (top.has("problem")) {
    auto p = Section::child_of(top, "problem");
    expand_preset(p, c.n);
    c.verify_samples = p.get<int>("verify_samples", c.verify_samples);
    c.conformance = parse_policy(p);
    auto a = parse_tensor(Section::child_of(p, "A"), c.n, c.m, c.conformance, true, c.warnings);
    auto b = parse_tensor(Section::child_of(p, "B"), c.n, c.m, c.conformance, false, c.warnings);
    auto d = parse_domain(Section::child_of(p, "domain"), c.n);
    auto bd = parse_field(Section::child_of(p, "boundary"), c.n, c.m, c.time.t_start);
    auto forcing = parse_forcing(p, c.n, c.m);
    if (bd.is_oracle)
      c.oracle = bd.field;
    if (p.has("initial"))
      c.initial = parse_field(Section::child_of(p, "initial"), c.n, c.m, c.time.t_start).field;
    else
      c.initial = bd.field;
    auto g = bd.field;
    VectorField boundary = [g](const Point& x, double t, std::span<double> out) { g.eval(x, t, out, {}); };
    const std::string desc = fmt::format("{}: A = {}, B = {}, D = {}, g = {}", c.name, a.description(),
                                         b.description(), d.describe(), g.name);
    try {
      c.problem.emplace(std::move(a), std::move(b), std::move(d), std::move(boundary), std::move(forcing), desc);
    } catch (const ConfigError&) {
      throw;
    } catch (const ValidationError& e) {
      fail(p.node(), e.what());
    }
    p.finish();
  }
  top.finish();

  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << root;
  c.effective = std::string(out.c_str()) + "\n";
  return c;
}

Config load_config(const std::string& path)
{
  std::ifstream is(path);
  if (!is)
    throw ConfigError(fmt::format("cannot open config file '{}'", path), 0);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

Modulus load_tabulated_modulus(const std::string& path)
{
  std::ifstream is(path);
  if (!is)
    throw ConfigError(fmt::format("cannot open modulus table '{}'", path), 0);
  std::vector<Breakpoint> pts;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos)
      line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    for (char& ch : line)
      if (ch == ',')
        ch = ' ';
    std::istringstream ls(line);
    double r = 0.0, w = 0.0;
    if (!(ls >> r >> w))
      throw ConfigError(fmt::format("{}: expected 'r, omega'", path), lineno);
    pts.push_back({r, w});
  }
  return Modulus::tabulated(std::move(pts));
}

} // namespace translab
