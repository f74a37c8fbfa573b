#pragma once

// Algebroid-side numerics over a gauge field P(X): anchor, Christoffel field
// and map, the splitting gamma with anchor o gamma = id, torsion, and the
// homogeneity verdict.
//
// Index conventions. A vertical component index xi runs over the 9 frame
// coordinates and is flattened row-major as xi = 3 I + J, so the generic
// bundle symbols Gamma^xi_i and the material symbols Gamma^I_JK (K = i) share
// one array: values[node][9 I + 3 J + K].

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "matgroupoid/errors.hpp"
#include "matgroupoid/grid.hpp"
#include "matgroupoid/iso_solver.hpp"
#include "matgroupoid/tensor.hpp"
#include "matgroupoid/uniformity.hpp"

namespace matgroupoid {

struct TangentVector {
  NodeId node;
  std::array<double, 3> v{};
};

struct AlgebroidElement {
  NodeId node;
  std::array<double, 9> vertical{};    // a^xi
  std::array<double, 3> horizontal{};  // b^i

  friend AlgebroidElement operator+(AlgebroidElement a, const AlgebroidElement& b) {
    for (int i = 0; i < 9; ++i) a.vertical[i] += b.vertical[i];
    for (int i = 0; i < 3; ++i) a.horizontal[i] += b.horizontal[i];
    return a;
  }
  friend AlgebroidElement operator*(double s, AlgebroidElement a) {
    for (auto& v : a.vertical) v *= s;
    for (auto& v : a.horizontal) v *= s;
    return a;
  }
};

inline TangentVector anchor(const AlgebroidElement& e) { return TangentVector{e.node, e.horizontal}; }

enum class ChristoffelConvention {
  DerivativeTimesInverse,  // Gamma^I_JK = (d_K P)^I_a (P^-1)^a_J
};

inline const char* to_string(ChristoffelConvention) { return "dP_Pinv"; }

using Component27 = std::array<double, 27>;

inline constexpr std::size_t gamma_index(int i, int j, int k) { return static_cast<std::size_t>(9 * i + 3 * j + k); }

struct ChristoffelField {
  BodyGrid grid;
  std::vector<Component27> values;
  ChristoffelConvention convention = ChristoffelConvention::DerivativeTimesInverse;
  DifferenceScheme scheme = DifferenceScheme::FourthOrder;

  double operator()(NodeId n, int i, int j, int k) const { return values[n.index][gamma_index(i, j, k)]; }
  /// Generic view Gamma^xi_i with xi = 3 I + J.
  double symbol(NodeId n, int xi, int i) const { return values[n.index][static_cast<std::size_t>(3 * xi + i)]; }
};

struct TorsionField {
  BodyGrid grid;
  std::vector<Component27> values;  // T^I_JK = Gamma^I_JK - Gamma^I_KJ
  double max_abs = 0.0;
  Component27 component_max{};  // max |T^I_JK| over the grid, per component

  double operator()(NodeId n, int i, int j, int k) const { return values[n.index][gamma_index(i, j, k)]; }
};

struct ConnectionOptions {
  /// Fourth order by default; axes with fewer than 5 nodes fall back to the
  /// three-point stencils.
  DifferenceScheme scheme = DifferenceScheme::FourthOrder;
};

inline ChristoffelField material_connection(const GridMat3Field& p, const ConnectionOptions& opts = {}) {
  const auto& grid = p.grid;
  for (int a = 0; a < 3; ++a)
    if (grid.dims[a] < 3) throw Error(ErrorKind::GridTooSmall, "material_connection needs at least 3 nodes per axis");
  std::vector<Mat3> inv(grid.num_nodes());
  for (std::size_t i = 0; i < grid.num_nodes(); ++i) {
    if (!is_finite(p.values[i]) || is_singular(p.values[i]))
      throw Error(ErrorKind::SingularGauge, "gauge is singular at node " + std::to_string(i));
    inv[i] = invert3(p.values[i]);
  }
  ChristoffelField gamma;
  gamma.grid = grid;
  gamma.scheme = opts.scheme;
  gamma.values.assign(grid.num_nodes(), Component27{});
  for (int k = 0; k < 3; ++k) {
    const auto scheme = grid.dims[k] >= 5 ? opts.scheme : DifferenceScheme::SecondOrder;
    const auto dp = differentiate(p, k, scheme);
    for (std::size_t n = 0; n < grid.num_nodes(); ++n) {
      const Mat3 g = dp.values[n] * inv[n];
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) gamma.values[n][gamma_index(i, j, k)] = g(i, j);
    }
  }
  return gamma;
}

inline ChristoffelField material_connection(const GaugeField& gauge, const ConnectionOptions& opts = {}) {
  return material_connection(gauge.p, opts);
}

/// Horizontal lift: base part v^i, vertical part -Gamma^xi_i v^i.
inline AlgebroidElement christoffel_map(const ChristoffelField& gamma, const TangentVector& v) {
  gamma.grid.check(v.node);
  AlgebroidElement e;
  e.node = v.node;
  e.horizontal = v.v;
  for (int xi = 0; xi < 9; ++xi) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i) s += gamma.symbol(v.node, xi, i) * v.v[i];
    e.vertical[xi] = -s;
  }
  return e;
}

struct GammaSplitting {
  BodyGrid grid;
  std::vector<Component27> gamma;  // gamma^xi_i at [3 xi + i]

  AlgebroidElement operator()(const TangentVector& u) const {
    grid.check(u.node);
    AlgebroidElement e;
    e.node = u.node;
    e.horizontal = u.v;
    const auto& g = gamma[u.node.index];
    for (int xi = 0; xi < 9; ++xi) {
      double s = 0.0;
      for (int i = 0; i < 3; ++i) s += g[static_cast<std::size_t>(3 * xi + i)] * u.v[i];
      e.vertical[xi] = s;
    }
    return e;
  }
};

inline GammaSplitting gamma_splitting(const ChristoffelField& gamma) {
  GammaSplitting s{gamma.grid, gamma.values};
  for (auto& node : s.gamma)
    for (auto& v : node) v = -v;
  return s;
}

inline TorsionField torsion(const ChristoffelField& gamma) {
  TorsionField t;
  t.grid = gamma.grid;
  t.values.assign(gamma.values.size(), Component27{});
  for (std::size_t n = 0; n < gamma.values.size(); ++n)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
          const auto idx = gamma_index(i, j, k);
          const double v = gamma.values[n][idx] - gamma.values[n][gamma_index(i, k, j)];
          t.values[n][idx] = v;
          t.component_max[idx] = std::max(t.component_max[idx], std::abs(v));
          t.max_abs = std::max(t.max_abs, std::abs(v));
        }
  return t;
}

enum class Homogeneity { Homogeneous, Defective, IndeterminateGauge };

inline const char* to_string(Homogeneity h) {
  switch (h) {
    case Homogeneity::Homogeneous: return "homogeneous";
    case Homogeneity::Defective: return "defective";
    case Homogeneity::IndeterminateGauge: return "indeterminate_gauge";
  }
  return "?";
}

/// Default torsion tolerance: 10 h^2 with h the coarsest spacing.
inline double default_torsion_tolerance(const BodyGrid& grid) {
  const double h = *std::max_element(grid.spacing.begin(), grid.spacing.end());
  return 10.0 * h * h;
}

/// With a discrete symmetry group the material connection is unique and its
/// torsion decides. With a continuous group only zero torsion is conclusive.
inline Homogeneity homogeneity_verdict(const TorsionField& t, const SymmetryGroupEstimate& symmetry, double tol) {
  if (t.max_abs < tol) return Homogeneity::Homogeneous;
  return symmetry.is_discrete() ? Homogeneity::Defective : Homogeneity::IndeterminateGauge;
}

/// Largest componentwise gap between Gamma and the Christoffel field rebuilt
/// from the right-translated gauge P(X) g(X).
inline double right_translation_defect(const ChristoffelField& gamma, const GridMat3Field& gauge,
                                       const GridMat3Field& right_factor) {
  GridMat3Field moved = gauge;
  for (std::size_t n = 0; n < moved.values.size(); ++n) moved.values[n] = gauge.values[n] * right_factor.values[n];
  const auto other = material_connection(moved, ConnectionOptions{gamma.scheme});
  double worst = 0.0;
  for (std::size_t n = 0; n < gamma.values.size(); ++n)
    for (std::size_t c = 0; c < 27; ++c) worst = std::max(worst, std::abs(gamma.values[n][c] - other.values[n][c]));
  return worst;
}

/// Right invariance under every sampled constant symmetry element.
inline bool right_invariance_check(const ChristoffelField& gamma, const GridMat3Field& gauge,
                                   const SymmetryGroupEstimate& symmetry, double tol) {
  for (const auto& g : symmetry.discrete_elements) {
    const GridMat3Field factor(gauge.grid, g);
    if (!(right_translation_defect(gamma, gauge, factor) <= tol)) return false;
  }
  return true;
}

}  // namespace matgroupoid
