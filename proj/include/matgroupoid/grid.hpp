#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "matgroupoid/errors.hpp"
#include "matgroupoid/tensor.hpp"

namespace matgroupoid {

struct NodeId {
  std::size_t index = 0;
  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

/// Regular Cartesian grid over the reference configuration. Node (i, j, k)
/// sits at origin + (i h1, j h2, k h3); linear index i + n1 (j + n2 k).
struct BodyGrid {
  std::array<std::size_t, 3> dims{1, 1, 1};
  std::array<double, 3> spacing{1.0, 1.0, 1.0};
  std::array<double, 3> origin{0.0, 0.0, 0.0};

  static BodyGrid cube(std::size_t n, double h) { return BodyGrid{{n, n, n}, {h, h, h}, {0.0, 0.0, 0.0}}; }

  friend bool operator==(const BodyGrid&, const BodyGrid&) = default;

  void validate() const {
    for (int a = 0; a < 3; ++a) {
      if (dims[a] == 0) throw Error(ErrorKind::ValidationError, "grid dims must be positive");
      if (!(spacing[a] > 0.0)) throw Error(ErrorKind::ValidationError, "grid spacing must be positive");
    }
  }

  std::size_t num_nodes() const noexcept { return dims[0] * dims[1] * dims[2]; }
  bool contains(NodeId n) const noexcept { return n.index < num_nodes(); }

  void check(NodeId n) const {
    if (!contains(n)) throw Error(ErrorKind::UnknownNode, "node " + std::to_string(n.index) + " is outside the grid");
  }

  NodeId node(std::size_t i, std::size_t j, std::size_t k) const {
    if (i >= dims[0] || j >= dims[1] || k >= dims[2]) throw Error(ErrorKind::UnknownNode, "grid index out of range");
    return NodeId{i + dims[0] * (j + dims[1] * k)};
  }

  std::array<std::size_t, 3> ijk(NodeId n) const {
    check(n);
    return {n.index % dims[0], (n.index / dims[0]) % dims[1], n.index / (dims[0] * dims[1])};
  }

  Vec3 coords(NodeId n) const {
    const auto c = ijk(n);
    return Vec3(origin[0] + c[0] * spacing[0], origin[1] + c[1] * spacing[1], origin[2] + c[2] * spacing[2]);
  }

  /// Node whose coordinates match x within a quarter cell, if any.
  std::optional<NodeId> find_node(const Vec3& x) const {
    std::array<std::size_t, 3> c{};
    for (int a = 0; a < 3; ++a) {
      const double t = (x[a] - origin[a]) / spacing[a];
      const double r = std::round(t);
      if (std::abs(t - r) > 0.25 || r < 0 || r >= static_cast<double>(dims[a])) return std::nullopt;
      c[a] = static_cast<std::size_t>(r);
    }
    return node(c[0], c[1], c[2]);
  }

  NodeId center() const { return node(dims[0] / 2, dims[1] / 2, dims[2] / 2); }

  /// Face neighbours in the fixed order -x, +x, -y, +y, -z, +z.
  std::vector<NodeId> neighbors(NodeId n) const {
    const auto c = ijk(n);
    std::vector<NodeId> out;
    for (int a = 0; a < 3; ++a) {
      if (c[a] > 0) {
        auto d = c;
        --d[a];
        out.push_back(node(d[0], d[1], d[2]));
      }
      if (c[a] + 1 < dims[a]) {
        auto d = c;
        ++d[a];
        out.push_back(node(d[0], d[1], d[2]));
      }
    }
    return out;
  }
};

template <typename T>
struct GridField {
  BodyGrid grid;
  std::vector<T> values;

  GridField() = default;
  GridField(BodyGrid g, T fill) : grid(g), values(g.num_nodes(), fill) {}

  T& operator[](NodeId n) { return values[n.index]; }
  const T& operator[](NodeId n) const { return values[n.index]; }

  template <typename Fn>
  static GridField generate(const BodyGrid& g, Fn&& fn) {
    GridField f;
    f.grid = g;
    f.values.reserve(g.num_nodes());
    for (std::size_t i = 0; i < g.num_nodes(); ++i) f.values.push_back(fn(g.coords(NodeId{i})));
    return f;
  }
};

using GridScalarField = GridField<double>;
using GridMat3Field = GridField<Mat3>;

enum class DifferenceScheme {
  SecondOrder,  // 3-point central interior, 3-point one-sided at the ends
  FourthOrder,  // 5-point central interior, 5-point biased stencils near the ends
};

inline const char* to_string(DifferenceScheme s) {
  return s == DifferenceScheme::SecondOrder ? "second_order" : "fourth_order";
}

namespace detail {

template <typename T, typename Stencil>
GridField<T> apply_stencil(const GridField<T>& f, int axis, Stencil&& stencil) {
  const auto& g = f.grid;
  GridField<T> out = f;
  const std::size_t n = g.dims[axis];
  const double h = g.spacing[axis];
  std::size_t stride = 1;
  for (int a = 0; a < axis; ++a) stride *= g.dims[a];
  for (std::size_t idx = 0; idx < g.num_nodes(); ++idx) {
    const auto c = g.ijk(NodeId{idx});
    const std::size_t pos = c[axis];
    const std::size_t line_start = idx - pos * stride;
    auto at = [&](std::size_t p) -> const T& { return f.values[line_start + p * stride]; };
    out.values[idx] = stencil(at, pos, n, h);
  }
  return out;
}

}  // namespace detail

/// Derivative along axis (0, 1, 2) by second-order differences:
/// (f(x+h) - f(x-h)) / 2h inside, (-3 f0 + 4 f1 - f2) / 2h at the ends.
template <typename T>
GridField<T> central_diff(const GridField<T>& f, int axis) {
  if (axis < 0 || axis > 2) throw Error(ErrorKind::BadDescriptor, "axis must be 0, 1 or 2");
  if (f.grid.dims[axis] < 3) throw Error(ErrorKind::GridTooSmall, "need at least 3 nodes along the axis");
  return detail::apply_stencil(f, axis, [](auto&& at, std::size_t p, std::size_t n, double h) -> T {
    if (p == 0) return T((-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h));
    if (p == n - 1) return T((3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * h));
    return T((at(p + 1) - at(p - 1)) / (2.0 * h));
  });
}

/// Fourth-order counterpart of central_diff; needs five nodes along the axis.
template <typename T>
GridField<T> fourth_order_diff(const GridField<T>& f, int axis) {
  if (axis < 0 || axis > 2) throw Error(ErrorKind::BadDescriptor, "axis must be 0, 1 or 2");
  if (f.grid.dims[axis] < 5) throw Error(ErrorKind::GridTooSmall, "need at least 5 nodes along the axis");
  return detail::apply_stencil(f, axis, [](auto&& at, std::size_t p, std::size_t n, double h) -> T {
    const double d = 12.0 * h;
    if (p == 0) return T((-25.0 * at(0) + 48.0 * at(1) - 36.0 * at(2) + 16.0 * at(3) - 3.0 * at(4)) / d);
    if (p == 1) return T((-3.0 * at(0) - 10.0 * at(1) + 18.0 * at(2) - 6.0 * at(3) + at(4)) / d);
    if (p == n - 1)
      return T((25.0 * at(n - 1) - 48.0 * at(n - 2) + 36.0 * at(n - 3) - 16.0 * at(n - 4) + 3.0 * at(n - 5)) / d);
    if (p == n - 2)
      return T((3.0 * at(n - 1) + 10.0 * at(n - 2) - 18.0 * at(n - 3) + 6.0 * at(n - 4) - at(n - 5)) / d);
    return T((at(p - 2) - 8.0 * at(p - 1) + 8.0 * at(p + 1) - at(p + 2)) / d);
  });
}

template <typename T>
GridField<T> differentiate(const GridField<T>& f, int axis, DifferenceScheme scheme) {
  return scheme == DifferenceScheme::FourthOrder ? fourth_order_diff(f, axis) : central_diff(f, axis);
}

}  // namespace matgroupoid
