#pragma once

// Pointwise constitutive response T(F, X) over a body grid and the
// material-isomorphism residual built on it.
//
// All builtin laws see F only through B = F F^T, C = F^T F and J = |det F|,
// so T(-F, X) == T(F, X): -I is always a material automorphism and symmetry
// reporting works modulo sign.

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "matgroupoid/errors.hpp"
#include "matgroupoid/grid.hpp"
#include "matgroupoid/random.hpp"
#include "matgroupoid/tensor.hpp"

namespace matgroupoid {

enum class ModelKind { NeoHookeanIsotropic, SvkAnisotropic, ImplantedArchetype, FgmExponential };

inline const char* to_string(ModelKind k) {
  switch (k) {
    case ModelKind::NeoHookeanIsotropic: return "neo_hookean_isotropic";
    case ModelKind::SvkAnisotropic: return "svk_anisotropic";
    case ModelKind::ImplantedArchetype: return "implanted_archetype";
    case ModelKind::FgmExponential: return "fgm_exponential";
  }
  return "?";
}

/// Scalar parameter field over the grid (shear modulus of the neo-Hookean laws).
struct ModulusProfile {
  enum class Shape { Constant, Linear, Exponential, Values };
  Shape shape = Shape::Constant;
  double a = 1.0;  // constant value / intercept / prefactor
  double b = 0.0;  // slope / rate
  int axis = 0;    // coordinate the profile varies along
  std::vector<double> values;  // per node, Shape::Values only

  friend bool operator==(const ModulusProfile&, const ModulusProfile&) = default;

  static ModulusProfile constant(double mu) { return {Shape::Constant, mu, 0.0, 0, {}}; }
  static ModulusProfile linear(double a, double b, int axis = 0) { return {Shape::Linear, a, b, axis, {}}; }
  static ModulusProfile exponential(double a, double b, int axis = 0) { return {Shape::Exponential, a, b, axis, {}}; }

  double at(const Vec3& x, NodeId n) const {
    switch (shape) {
      case Shape::Constant: return a;
      case Shape::Linear: return a + b * x[axis];
      case Shape::Exponential: return a * std::exp(b * x[axis]);
      case Shape::Values: return values.at(n.index);
    }
    return a;
  }
};

enum class StiffnessKind { Isotropic, TransverselyIsotropic, Generic, Monoclinic, Explicit };

/// Fourth-order elasticity for the Saint Venant-Kirchhoff archetype.
///  Isotropic:             lambda, mu
///  TransverselyIsotropic: isotropic + fiber * (e3 x e3 x e3 x e3)
///  Generic:               isotropic + amplitude * seeded symmetric perturbation
///  Monoclinic:            Generic averaged over the half turn about e3
///  Explicit:              81 given components
struct StiffnessSpec {
  StiffnessKind kind = StiffnessKind::Isotropic;
  double lambda = 1.0;
  double mu = 1.0;
  double fiber = 0.0;
  double amplitude = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> values;

  friend bool operator==(const StiffnessSpec&, const StiffnessSpec&) = default;
};

enum class ImplantKind {
  Identity,     // P = I
  DiagX1,       // P = diag(1 + beta X1, 1, 1)
  ShearX3,      // P = I + beta X3 E12
  ExpDiagX1,    // P = diag(exp(beta X1), 1, 1)
  IntegrableX2, // P = I + beta X2 E12, a gradient field
  Values,       // per-node matrices
};

struct ImplantSpec {
  ImplantKind kind = ImplantKind::Identity;
  double beta = 0.0;
  std::vector<std::array<double, 9>> values;

  friend bool operator==(const ImplantSpec&, const ImplantSpec&) = default;

  Mat3 at(const Vec3& x, NodeId n) const {
    Mat3 p = Mat3::Identity();
    switch (kind) {
      case ImplantKind::Identity: break;
      case ImplantKind::DiagX1: p(0, 0) = 1.0 + beta * x[0]; break;
      case ImplantKind::ShearX3: p(0, 1) = beta * x[2]; break;
      case ImplantKind::ExpDiagX1: p(0, 0) = std::exp(beta * x[0]); break;
      case ImplantKind::IntegrableX2: p(0, 1) = beta * x[1]; break;
      case ImplantKind::Values: p = unflatten(values.at(n.index)); break;
    }
    return p;
  }
};

/// Everything needed to rebuild a model; compared for file round trips.
struct ModelDescriptor {
  ModelKind kind = ModelKind::NeoHookeanIsotropic;
  ModulusProfile mu = ModulusProfile::constant(1.0);  // neo-Hookean and FGM
  StiffnessSpec stiffness;                             // SVK
  ModelKind archetype_kind = ModelKind::SvkAnisotropic;  // implanted only
  ImplantSpec implant;                                    // implanted only

  friend bool operator==(const ModelDescriptor&, const ModelDescriptor&) = default;
};

using Stiffness = std::array<double, 81>;

inline double& c4(Stiffness& c, int i, int j, int k, int l) { return c[((i * 3 + j) * 3 + k) * 3 + l]; }
inline double c4(const Stiffness& c, int i, int j, int k, int l) { return c[((i * 3 + j) * 3 + k) * 3 + l]; }

namespace detail {

// Orthonormal basis of symmetric 3x3 tensors (Mandel ordering).
inline std::array<Mat3, 6> mandel_basis() {
  const double r = 1.0 / std::sqrt(2.0);
  std::array<Mat3, 6> b;
  for (auto& m : b) m.setZero();
  b[0](0, 0) = 1;
  b[1](1, 1) = 1;
  b[2](2, 2) = 1;
  b[3](1, 2) = b[3](2, 1) = r;
  b[4](0, 2) = b[4](2, 0) = r;
  b[5](0, 1) = b[5](1, 0) = r;
  return b;
}

inline Stiffness from_mandel(const Eigen::Matrix<double, 6, 6>& k) {
  const auto b = mandel_basis();
  Stiffness c{};
  for (int p = 0; p < 6; ++p)
    for (int q = 0; q < 6; ++q) {
      if (k(p, q) == 0.0) continue;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          for (int m = 0; m < 3; ++m)
            for (int n = 0; n < 3; ++n) c4(c, i, j, m, n) += k(p, q) * b[p](i, j) * b[q](m, n);
    }
  return c;
}

inline Eigen::Matrix<double, 6, 6> to_mandel(const Stiffness& c) {
  const auto b = mandel_basis();
  Eigen::Matrix<double, 6, 6> k = Eigen::Matrix<double, 6, 6>::Zero();
  for (int p = 0; p < 6; ++p)
    for (int q = 0; q < 6; ++q)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          for (int m = 0; m < 3; ++m)
            for (int n = 0; n < 3; ++n) k(p, q) += b[p](i, j) * c4(c, i, j, m, n) * b[q](m, n);
  return k;
}

inline Stiffness rotate(const Stiffness& c, const Mat3& r) {
  Stiffness out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          double s = 0.0;
          for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
              for (int cc = 0; cc < 3; ++cc)
                for (int d = 0; d < 3; ++d) s += r(i, a) * r(j, b) * r(k, cc) * r(l, d) * c4(c, a, b, cc, d);
          c4(out, i, j, k, l) = s;
        }
  return out;
}

}  // namespace detail

inline Stiffness build_stiffness(const StiffnessSpec& s) {
  using M6 = Eigen::Matrix<double, 6, 6>;
  Eigen::Matrix<double, 6, 1> tr;
  tr << 1, 1, 1, 0, 0, 0;
  M6 iso = 2.0 * s.mu * M6::Identity() + s.lambda * tr * tr.transpose();
  Stiffness c{};
  switch (s.kind) {
    case StiffnessKind::Isotropic: c = detail::from_mandel(iso); break;
    case StiffnessKind::TransverselyIsotropic: {
      M6 k = iso;
      k(2, 2) += s.fiber;
      c = detail::from_mandel(k);
      break;
    }
    case StiffnessKind::Generic:
    case StiffnessKind::Monoclinic: {
      Rng rng(s.seed);
      M6 pert;
      for (int p = 0; p < 6; ++p)
        for (int q = p; q < 6; ++q) pert(p, q) = pert(q, p) = rng.uniform(-1.0, 1.0);
      c = detail::from_mandel(iso + s.amplitude * pert);
      if (s.kind == StiffnessKind::Monoclinic) {
        const auto rc = detail::rotate(c, rotation(Vec3::UnitZ(), M_PI));
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = 0.5 * (c[i] + rc[i]);
      }
      break;
    }
    case StiffnessKind::Explicit:
      if (s.values.size() != 81) throw Error(ErrorKind::ValidationError, "stiffness.values must hold 81 components");
      std::copy(s.values.begin(), s.values.end(), c.begin());
      break;
  }
  return c;
}

/// Checks minor/major symmetry and positive definiteness on symmetric tensors.
inline void validate_stiffness(const Stiffness& c) {
  double scale = 0.0;
  for (double v : c) scale = std::max(scale, std::abs(v));
  const double tol = 1e-12 * std::max(1.0, scale);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          const double v = c4(c, i, j, k, l);
          if (std::abs(v - c4(c, j, i, k, l)) > tol || std::abs(v - c4(c, i, j, l, k)) > tol ||
              std::abs(v - c4(c, k, l, i, j)) > tol)
            throw Error(ErrorKind::ValidationError, "stiffness lacks minor/major symmetry");
        }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 6, 6>> es(detail::to_mandel(c));
  if (!(es.eigenvalues().minCoeff() > 0.0))
    throw Error(ErrorKind::ValidationError, "stiffness is not positive definite on symmetric tensors");
}

inline Mat3 neo_hookean_stress(double mu, const Mat3& f) {
  const double j = std::abs(f.determinant());
  return (mu / j) * (f * f.transpose() - Mat3::Identity());
}

inline Mat3 svk_stress(const Stiffness& c, const Mat3& f) {
  const Mat3 e = 0.5 * (f.transpose() * f - Mat3::Identity());
  Mat3 s = Mat3::Zero();
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      double v = 0.0;
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) v += c4(c, i, j, k, l) * e(k, l);
      s(i, j) = s(j, i) = v;
    }
  const double jac = std::abs(f.determinant());
  const Mat3 t = f * s * f.transpose() / jac;
  return 0.5 * (t + t.transpose());
}

class MaterialModel {
 public:
  MaterialModel(ModelDescriptor desc, BodyGrid grid) : desc_(std::move(desc)), grid_(grid) {
    grid_.validate();
    const auto n = grid_.num_nodes();
    const bool uses_mu = desc_.kind == ModelKind::NeoHookeanIsotropic || desc_.kind == ModelKind::FgmExponential ||
                         (desc_.kind == ModelKind::ImplantedArchetype && desc_.archetype_kind == ModelKind::NeoHookeanIsotropic);
    const bool uses_c = desc_.kind == ModelKind::SvkAnisotropic ||
                        (desc_.kind == ModelKind::ImplantedArchetype && desc_.archetype_kind == ModelKind::SvkAnisotropic);
    if (desc_.kind == ModelKind::FgmExponential &&
        (desc_.mu.shape != ModulusProfile::Shape::Exponential || desc_.mu.b == 0.0))
      throw Error(ErrorKind::BadDescriptor, "fgm_exponential needs an exponential mu profile with nonzero rate");
    if (desc_.kind == ModelKind::ImplantedArchetype) {
      if (desc_.archetype_kind != ModelKind::NeoHookeanIsotropic && desc_.archetype_kind != ModelKind::SvkAnisotropic)
        throw Error(ErrorKind::BadDescriptor, "archetype.kind must be neo_hookean_isotropic or svk_anisotropic");
      if (desc_.archetype_kind == ModelKind::NeoHookeanIsotropic && desc_.mu.shape != ModulusProfile::Shape::Constant)
        throw Error(ErrorKind::BadDescriptor, "an archetype has a constant modulus");
    }
    if (uses_mu) {
      if (desc_.mu.shape == ModulusProfile::Shape::Values && desc_.mu.values.size() != n)
        throw Error(ErrorKind::ValidationError, "mu values must have one entry per node");
      if (desc_.mu.axis < 0 || desc_.mu.axis > 2) throw Error(ErrorKind::ValidationError, "mu axis must be 0, 1 or 2");
      mu_.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        mu_[i] = desc_.mu.at(grid_.coords(NodeId{i}), NodeId{i});
        if (!(mu_[i] > 0.0) || !std::isfinite(mu_[i]))
          throw Error(ErrorKind::ValidationError, "mu must be positive (node " + std::to_string(i) + ")");
      }
    }
    if (uses_c) {
      if (desc_.stiffness.kind != StiffnessKind::Explicit && !(desc_.stiffness.mu > 0.0))
        throw Error(ErrorKind::ValidationError, "stiffness.mu must be positive");
      stiffness_ = build_stiffness(desc_.stiffness);
      validate_stiffness(stiffness_);
    }
    if (desc_.kind == ModelKind::ImplantedArchetype) {
      if (desc_.implant.kind == ImplantKind::Values && desc_.implant.values.size() != n)
        throw Error(ErrorKind::ValidationError, "implant values must have one matrix per node");
      implant_.grid = grid_;
      implant_.values.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        const Mat3 p = desc_.implant.at(grid_.coords(NodeId{i}), NodeId{i});
        if (!is_finite(p) || is_singular(p) || !(p.determinant() > 0.0))
          throw Error(ErrorKind::ValidationError, "implant must be invertible with det > 0 (node " + std::to_string(i) + ")");
        implant_.values[i] = p;
      }
    }
  }

  const ModelDescriptor& descriptor() const noexcept { return desc_; }
  ModelKind kind() const noexcept { return desc_.kind; }
  const BodyGrid& grid() const noexcept { return grid_; }
  const Stiffness& stiffness() const noexcept { return stiffness_; }
  const GridMat3Field& implant_field() const noexcept { return implant_; }

  Mat3 implant(NodeId x) const {
    grid_.check(x);
    return desc_.kind == ModelKind::ImplantedArchetype ? implant_[x] : Mat3::Identity();
  }

  /// Archetype response T0(F) of an implanted body.
  Mat3 archetype_stress(const Mat3& f) const {
    return desc_.archetype_kind == ModelKind::NeoHookeanIsotropic ? neo_hookean_stress(desc_.mu.a, f)
                                                                   : svk_stress(stiffness_, f);
  }

  /// Response without the det F > 0 precondition; the residual evaluates
  /// T(F P, X) for trial maps P of either orientation.
  Mat3 response(const Mat3& f, NodeId x) const {
    switch (desc_.kind) {
      case ModelKind::NeoHookeanIsotropic:
      case ModelKind::FgmExponential: return neo_hookean_stress(mu_[x.index], f);
      case ModelKind::SvkAnisotropic: return svk_stress(stiffness_, f);
      case ModelKind::ImplantedArchetype: return archetype_stress(f * implant_[x]);
    }
    return Mat3::Zero();
  }

  Mat3 cauchy_stress(const Mat3& f, NodeId x) const {
    grid_.check(x);
    if (!is_finite(f) || !(f.determinant() > 0.0)) throw Error(ErrorKind::InvalidF, "det F must be positive");
    return response(f, x);
  }

 private:
  ModelDescriptor desc_;
  BodyGrid grid_;
  std::vector<double> mu_;
  Stiffness stiffness_{};
  GridMat3Field implant_;
};

inline MaterialModel make_builtin_model(const ModelDescriptor& desc, const BodyGrid& grid) {
  return MaterialModel(desc, grid);
}

/// The generic anisotropic archetype used throughout the tests: numerically
/// trivial symmetry group {I, -I}.
inline StiffnessSpec generic_stiffness(std::uint64_t seed = 7, double amplitude = 0.3) {
  StiffnessSpec s;
  s.kind = StiffnessKind::Generic;
  s.lambda = 1.0;
  s.mu = 1.0;
  s.amplitude = amplitude;
  s.seed = seed;
  return s;
}

// ---------------------------------------------------------------------------

struct ProbeSet {
  std::vector<Mat3> gradients;

  void validate() const {
    if (gradients.empty()) throw Error(ErrorKind::ValidationError, "probe set is empty");
    for (std::size_t i = 0; i < gradients.size(); ++i) {
      const double d = gradients[i].determinant();
      if (!(d >= 0.5 && d <= 2.0)) throw Error(ErrorKind::ValidationError, "probe det F outside [0.5, 2]");
      for (std::size_t j = 0; j < i; ++j)
        if ((gradients[i] - gradients[j]).norm() < 1e-12) throw Error(ErrorKind::ValidationError, "duplicate probes");
    }
  }

  /// 3 uniaxial stretches (1.2), 3 simple shears (0.3), 6 seeded random
  /// well-conditioned gradients.
  static ProbeSet standard(std::uint64_t seed = 20240601) {
    ProbeSet p;
    for (int a = 0; a < 3; ++a) {
      Mat3 f = Mat3::Identity();
      f(a, a) = 1.2;
      p.gradients.push_back(f);
    }
    for (int a = 0; a < 3; ++a) {
      Mat3 f = Mat3::Identity();
      f(a, (a + 1) % 3) = 0.3;
      p.gradients.push_back(f);
    }
    Rng rng(seed);
    while (p.gradients.size() < 12) {
      Mat3 f;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) f(i, j) = (i == j ? 1.0 : 0.0) + 0.2 * rng.normal();
      const double d = f.determinant();
      if (d >= 0.5 && d <= 2.0) p.gradients.push_back(f);
    }
    return p;
  }
};

/// Least-squares form of the isomorphism condition T(F, Y) = T(F P, X).
/// residuals() fills 9 entries per probe, scaled so that their Euclidean
/// norm equals iso_residual().
class IsoObjective {
 public:
  IsoObjective(const MaterialModel& model, NodeId x, NodeId y, const ProbeSet& probes)
      : model_(model), x_(x), y_(y), probes_(probes) {
    model.grid().check(x);
    model.grid().check(y);
    probes.validate();
    double mean_norm = 0.0;
    targets_.reserve(probes.gradients.size());
    for (const auto& f : probes.gradients) {
      targets_.push_back(model.response(f, y));
      mean_norm += targets_.back().norm();
    }
    mean_norm /= static_cast<double>(probes.gradients.size());
    weight_ = 1.0 / ((1.0 + mean_norm) * std::sqrt(static_cast<double>(probes.gradients.size())));
  }

  std::size_t size() const noexcept { return 9 * probes_.gradients.size(); }
  NodeId source() const noexcept { return x_; }
  NodeId target() const noexcept { return y_; }

  template <typename Out>
  void residuals(const Mat3& p, Out& r) const {
    for (std::size_t k = 0; k < probes_.gradients.size(); ++k) {
      const Mat3 d = (model_.response(probes_.gradients[k] * p, x_) - targets_[k]) * weight_;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r[9 * k + 3 * i + j] = d(i, j);
    }
  }

  double value(const Mat3& p) const {
    double s = 0.0;
    for (std::size_t k = 0; k < probes_.gradients.size(); ++k)
      s += (model_.response(probes_.gradients[k] * p, x_) - targets_[k]).squaredNorm();
    return std::sqrt(s) * weight_;
  }

 private:
  const MaterialModel& model_;
  NodeId x_, y_;
  const ProbeSet& probes_;
  std::vector<Mat3> targets_;
  double weight_ = 1.0;
};

/// sqrt(mean_F ||T(F P, X) - T(F, Y)||^2) / (1 + mean_F ||T(F, Y)||).
inline double iso_residual(const MaterialModel& model, NodeId x, NodeId y, const Mat3& p, const ProbeSet& probes) {
  if (!is_finite(p) || is_singular(p)) throw Error(ErrorKind::InvalidP, "P must be invertible");
  return IsoObjective(model, x, y, probes).value(p);
}

}  // namespace matgroupoid
