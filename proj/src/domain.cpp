#include "translab/domain.hpp"

#include "translab/error.hpp"

#include <fmt/format.h>

#include <variant>

namespace translab {

namespace {

struct EmptyShape {};
struct HalfSpaceShape {
  Point normal;
  double offset;
};
struct BallShape {
  Point center;
  double radius;
};
struct CuspShape {
  double gamma;
  Point apex;
  int axis;
};
struct ComplementShape {
  std::shared_ptr<const IndicatorDomain::Node> inner;
};
struct UnionShape {
  std::vector<std::shared_ptr<const IndicatorDomain::Node>> parts;
};
struct TimeSlabShape {
  double t_max;
};

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

struct IndicatorDomain::Node {
  std::variant<EmptyShape, HalfSpaceShape, BallShape, CuspShape, ComplementShape, UnionShape, TimeSlabShape> shape;
};

namespace {

bool node_contains(const IndicatorDomain::Node& node, const Point& x, double t)
{
  return std::visit(
      overloaded{
          [](const EmptyShape&) { return false; },
          [&](const HalfSpaceShape& s) { return dot(s.normal, x) > s.offset; },
          [&](const BallShape& s) { return norm(x - s.center) < s.radius; },
          [&](const CuspShape& s) {
            if (norm(x) >= 1.0)
              return false;
            const Point d = x - s.apex;
            double perp2 = 0.0;
            for (int k = 0; k < kMaxDim; ++k)
              if (k != s.axis)
                perp2 += d[k] * d[k];
            return d[s.axis] < -std::pow(std::sqrt(perp2), 1.0 / s.gamma);
          },
          [&](const ComplementShape& s) { return !node_contains(*s.inner, x, t); },
          [&](const UnionShape& s) {
            for (const auto& p : s.parts)
              if (node_contains(*p, x, t))
                return true;
            return false;
          },
          [&](const TimeSlabShape& s) { return t < s.t_max; },
      },
      node.shape);
}

bool node_static(const IndicatorDomain::Node& node)
{
  return std::visit(overloaded{
                        [](const TimeSlabShape&) { return false; },
                        [](const ComplementShape& s) { return node_static(*s.inner); },
                        [](const UnionShape& s) {
                          for (const auto& p : s.parts)
                            if (!node_static(*p))
                              return false;
                          return true;
                        },
                        [](const auto&) { return true; },
                    },
                    node.shape);
}

std::string fmt_point(const Point& p)
{
  return fmt::format("({},{},{})", p[0], p[1], p[2]);
}

std::string node_describe(const IndicatorDomain::Node& node)
{
  return std::visit(
      overloaded{
          [](const EmptyShape&) { return std::string("empty"); },
          [](const HalfSpaceShape& s) { return fmt::format("half_space{}>{}", fmt_point(s.normal), s.offset); },
          [](const BallShape& s) { return fmt::format("ball{}r{}", fmt_point(s.center), s.radius); },
          [](const CuspShape& s) { return fmt::format("cusp(g{},{},ax{})", s.gamma, fmt_point(s.apex), s.axis); },
          [](const ComplementShape& s) { return "complement(" + node_describe(*s.inner) + ")"; },
          [](const UnionShape& s) {
            std::string out = "union(";
            for (std::size_t i = 0; i < s.parts.size(); ++i)
              out += (i ? "," : "") + node_describe(*s.parts[i]);
            return out + ")";
          },
          [](const TimeSlabShape& s) { return fmt::format("time_slab(t<{})", s.t_max); },
      },
      node.shape);
}

} // namespace

IndicatorDomain IndicatorDomain::half_space(const Point& normal, double offset)
{
  const double len = norm(normal);
  if (!(len > 0.0))
    throw ParameterError("half_space normal must be non-zero");
  return IndicatorDomain(std::make_shared<Node>(Node{HalfSpaceShape{(1.0 / len) * normal, offset / len}}));
}

IndicatorDomain IndicatorDomain::ball(const Point& center, double radius)
{
  if (!(radius > 0.0))
    throw ParameterError(fmt::format("ball radius {} must be positive", radius));
  return IndicatorDomain(std::make_shared<Node>(Node{BallShape{center, radius}}));
}

IndicatorDomain IndicatorDomain::cusp(double gamma, const Point& apex, int axis)
{
  if (!(gamma > 0.0))
    throw ParameterError(fmt::format("cusp exponent gamma = {} must be positive", gamma));
  if (axis < 0 || axis >= kMaxDim)
    throw ParameterError(fmt::format("cusp axis {} out of range", axis));
  return IndicatorDomain(std::make_shared<Node>(Node{CuspShape{gamma, apex, axis}}));
}

IndicatorDomain IndicatorDomain::complement(const IndicatorDomain& inner)
{
  if (inner.velocity_ != Point{0, 0, 0})
    throw ParameterError("complement of a moving domain: apply moving() to the outer set instead");
  return IndicatorDomain(std::make_shared<Node>(Node{ComplementShape{inner.root_}}));
}

IndicatorDomain IndicatorDomain::union_of(const std::vector<IndicatorDomain>& parts)
{
  UnionShape u;
  for (const auto& p : parts) {
    if (p.velocity_ != Point{0, 0, 0})
      throw ParameterError("union of moving domains: apply moving() to the union instead");
    u.parts.push_back(p.root_);
  }
  return IndicatorDomain(std::make_shared<Node>(Node{std::move(u)}));
}

IndicatorDomain IndicatorDomain::empty()
{
  static const auto node = std::make_shared<Node>(Node{EmptyShape{}});
  return IndicatorDomain(node);
}

IndicatorDomain IndicatorDomain::time_slab(double t_max)
{
  return IndicatorDomain(std::make_shared<Node>(Node{TimeSlabShape{t_max}}));
}

IndicatorDomain IndicatorDomain::moving(const Point& velocity) const
{
  return IndicatorDomain(root_, velocity);
}

bool IndicatorDomain::contains(const Point& x, double t) const
{
  if (velocity_ == Point{0, 0, 0})
    return node_contains(*root_, x, t);
  return node_contains(*root_, x - t * velocity_, t);
}

bool IndicatorDomain::is_static() const noexcept
{
  return velocity_ == Point{0, 0, 0} && node_static(*root_);
}

std::string IndicatorDomain::describe() const
{
  std::string out = node_describe(*root_);
  if (velocity_ != Point{0, 0, 0})
    out += " moving" + fmt_point(velocity_);
  return out;
}

} // namespace translab
