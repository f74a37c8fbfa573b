#pragma once

// Small dense 3x3 algebra shared by the numerical modules.

#include <Eigen/Dense>
#include <array>
#include <cmath>

#include "matgroupoid/errors.hpp"

namespace matgroupoid {

/// Frame map / stress / deformation gradient. Row-major so that flat dumps
/// read P11 P12 P13 P21 ...
using Mat3 = Eigen::Matrix<double, 3, 3, Eigen::RowMajor>;
using Vec3 = Eigen::Vector3d;

inline Mat3 identity3() { return Mat3::Identity(); }

/// Unit matrix with a single 1 at (row, col), zero-based.
inline Mat3 unit_matrix(int row, int col) {
  Mat3 e = Mat3::Zero();
  e(row, col) = 1.0;
  return e;
}

inline std::array<double, 9> flatten(const Mat3& a) {
  std::array<double, 9> out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[3 * i + j] = a(i, j);
  return out;
}

inline Mat3 unflatten(const std::array<double, 9>& v) {
  Mat3 a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = v[3 * i + j];
  return a;
}

inline bool is_finite(const Mat3& a) { return a.allFinite(); }

/// Scale-invariant singularity guard: |det a| < 1e-12 ||a||_F^3.
inline bool is_singular(const Mat3& a) {
  const double n = a.norm();
  return !(std::abs(a.determinant()) >= 1e-12 * n * n * n) || n == 0.0;
}

inline Mat3 invert3(const Mat3& a) {
  if (!is_finite(a) || is_singular(a)) throw Error(ErrorKind::Singular, "matrix is numerically singular");
  Mat3 adj;
  adj(0, 0) = a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1);
  adj(0, 1) = a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2);
  adj(0, 2) = a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1);
  adj(1, 0) = a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2);
  adj(1, 1) = a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0);
  adj(1, 2) = a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2);
  adj(2, 0) = a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0);
  adj(2, 1) = a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1);
  adj(2, 2) = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  const double det = a(0, 0) * adj(0, 0) + a(0, 1) * adj(1, 0) + a(0, 2) * adj(2, 0);
  Mat3 inv = adj / det;
  // One Newton-Schulz step recovers the last bits lost in the cofactor sums.
  return inv * (2.0 * Mat3::Identity() - a * inv);
}

/// Matrix exponential by scaling and squaring with a truncated Taylor series.
inline Mat3 mat_exp(const Mat3& a) {
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
  const Mat3 s = a / std::ldexp(1.0, squarings);
  Mat3 result = Mat3::Identity();
  Mat3 term = Mat3::Identity();
  for (int k = 1; k <= 18; ++k) {
    term = term * s / static_cast<double>(k);
    result += term;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

/// Skew generator of rotations about the given axis (unit vector).
inline Mat3 skew(const Vec3& w) {
  Mat3 k;
  k << 0, -w.z(), w.y(), w.z(), 0, -w.x(), -w.y(), w.x(), 0;
  return k;
}

inline Mat3 rotation(const Vec3& axis, double angle) { return mat_exp(skew(axis.normalized() * angle)); }

}  // namespace matgroupoid
