#pragma once

// Multi-start least-squares search for material isomorphisms P with
// T(F, Y) = T(F P, X) on a probe set, and estimation of the symmetry group
// at a point from the automorphism problem X -> X.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "matgroupoid/constitutive.hpp"
#include "matgroupoid/errors.hpp"
#include "matgroupoid/levenberg_marquardt.hpp"
#include "matgroupoid/random.hpp"
#include "matgroupoid/tensor.hpp"

namespace matgroupoid {

enum class Parameterization { FullGl, ExpChart };

inline const char* to_string(Parameterization p) { return p == Parameterization::FullGl ? "full_gl" : "exp_chart"; }

struct SolverOptions {
  double eps_iso = 1e-6;
  int starts = 16;
  int max_iters = 200;
  std::uint64_t seed = 1;
  Parameterization parameterization = Parameterization::FullGl;
  double det_barrier = 0.05;     // trial P with |det P| below this are rejected
  double start_spread = 0.3;     // random starts are I + spread * N(0, 1)
  double cluster_radius = 1e-4;  // Frobenius radius for merging automorphisms
  double eps_rank = 1e-6;        // relative eigenvalue cut for null directions
  double eps_group = 1e-4;       // closure tolerance on sampled products

  void validate() const {
    if (!(eps_iso > 0.0)) throw Error(ErrorKind::ValidationError, "eps_iso must be positive");
    if (starts < 1) throw Error(ErrorKind::ValidationError, "starts must be at least 1");
    if (max_iters < 1) throw Error(ErrorKind::ValidationError, "max_iters must be at least 1");
    if (!(eps_rank > 0.0 && eps_rank < 1.0)) throw Error(ErrorKind::ValidationError, "eps_rank must be in (0, 1)");
  }
};

struct MaterialIsomorphism {
  NodeId source;
  NodeId target;
  Mat3 p = Mat3::Identity();
  double residual = 0.0;
};

struct SearchResult {
  MaterialIsomorphism best;
  bool accepted = false;
  bool diverged = false;  // every start was stopped by the det barrier
  int starts_run = 0;
};

namespace detail {

using Vec9 = Eigen::Matrix<double, 9, 1>;

inline Vec9 to_vec(const Mat3& p) {
  Vec9 v;
  for (int i = 0; i < 9; ++i) v[i] = p(i / 3, i % 3);
  return v;
}

inline Mat3 to_mat(const Vec9& v) {
  Mat3 p;
  for (int i = 0; i < 9; ++i) p(i / 3, i % 3) = v[i];
  return p;
}

/// One local solve from `start`; returns the converged P and its residual.
inline LmResult<9> local_solve(const IsoObjective& obj, const Mat3& start, const SolverOptions& opts) {
  LmOptions lm;
  lm.max_iters = opts.max_iters;
  const double target = 1e-15;
  const auto m = static_cast<Eigen::Index>(obj.size());
  if (opts.parameterization == Parameterization::FullGl) {
    auto residual = [&](const Vec9& v, Eigen::VectorXd& out) { obj.residuals(to_mat(v), out); };
    auto feasible = [&](const Vec9& v) { return std::abs(to_mat(v).determinant()) >= opts.det_barrier; };
    return levenberg_marquardt<9>(residual, feasible, to_vec(start), m, target, lm);
  }
  // P = start exp(A): the chart never leaves the orientation class of start.
  auto residual = [&](const Vec9& a, Eigen::VectorXd& out) { obj.residuals(Mat3(start * mat_exp(to_mat(a))), out); };
  auto feasible = [&](const Vec9& a) {
    return a.norm() < 10.0 && std::abs((start * mat_exp(to_mat(a))).determinant()) >= opts.det_barrier;
  };
  auto r = levenberg_marquardt<9>(residual, feasible, Vec9::Zero(), m, target, lm);
  r.x = to_vec(start * mat_exp(to_mat(r.x)));
  return r;
}

inline Mat3 random_start(Rng& rng, double spread, double barrier) {
  for (;;) {
    Mat3 p;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) p(i, j) = (i == j ? 1.0 : 0.0) + spread * rng.normal();
    if (std::abs(p.determinant()) >= barrier) return p;
  }
}

}  // namespace detail

/// Runs local solves from the warm start (if any), I, and seeded random
/// starts until one is accepted or `starts` have been tried. The random
/// stream depends only on (seed, X, Y). The reported P is the det > 0
/// representative of its +-I class.
inline SearchResult search_isomorphism(const MaterialModel& model, NodeId x, NodeId y, const SolverOptions& opts,
                                       const ProbeSet& probes, std::optional<Mat3> warm_start = std::nullopt) {
  opts.validate();
  const IsoObjective obj(model, x, y, probes);
  std::vector<Mat3> seeds;
  if (warm_start && is_finite(*warm_start) && std::abs(warm_start->determinant()) >= opts.det_barrier)
    seeds.push_back(*warm_start);
  seeds.push_back(Mat3::Identity());
  Rng rng(derive_seed(opts.seed, {x.index, y.index}));

  SearchResult out;
  out.best.source = x;
  out.best.target = y;
  out.best.residual = std::numeric_limits<double>::infinity();
  int infeasible = 0;
  for (int s = 0; s < std::max<int>(opts.starts, static_cast<int>(seeds.size())); ++s) {
    const Mat3 start = s < static_cast<int>(seeds.size()) ? seeds[s]
                                                          : detail::random_start(rng, opts.start_spread, opts.det_barrier);
    const auto r = detail::local_solve(obj, start, opts);
    ++out.starts_run;
    if (r.status == LmStatus::Infeasible || !std::isfinite(r.norm)) {
      ++infeasible;
      continue;
    }
    if (r.norm < out.best.residual) {
      out.best.p = detail::to_mat(r.x);
      out.best.residual = r.norm;
    }
    if (out.best.residual < opts.eps_iso) break;
  }
  out.diverged = infeasible == out.starts_run;
  if (out.diverged) return out;
  if (out.best.p.determinant() < 0.0) {
    out.best.p = -out.best.p;
    out.best.residual = obj.value(out.best.p);
  }
  out.accepted = out.best.residual < opts.eps_iso;
  return out;
}

inline MaterialIsomorphism solve_isomorphism(const MaterialModel& model, NodeId x, NodeId y, const SolverOptions& opts,
                                             const ProbeSet& probes = ProbeSet::standard(),
                                             std::optional<Mat3> warm_start = std::nullopt) {
  const auto r = search_isomorphism(model, x, y, opts, probes, warm_start);
  if (r.diverged) throw Error(ErrorKind::SolverDiverged, "every start collapsed against the det barrier");
  if (!r.accepted)
    throw NotIsomorphicError(r.best.residual, "best residual " + std::to_string(r.best.residual) + " exceeds eps_iso");
  return r.best;
}

// ---------------------------------------------------------------------------

struct SymmetryGroupEstimate {
  NodeId point;
  std::vector<Mat3> discrete_elements;  // first element is I
  std::vector<double> residuals;        // automorphism residual per element
  int continuous_dimension = 0;
  std::vector<Mat3> generators;         // Lie algebra directions, unit Frobenius norm
  std::vector<double> normal_spectrum;  // ascending eigenvalues of J^T J at I
  bool closed = true;                   // sampled pairwise products stay in the group
  std::vector<std::size_t> non_unimodular;  // indices with |det g - 1| > 1e-6, -I included

  bool is_discrete() const noexcept { return continuous_dimension == 0; }

  /// The set {I, -I}, the symmetry of a generic frame-indifferent law.
  static SymmetryGroupEstimate plus_minus_identity(NodeId at = {}) {
    SymmetryGroupEstimate g;
    g.point = at;
    g.discrete_elements = {Mat3::Identity(), -Mat3::Identity()};
    g.residuals = {0.0, 0.0};
    return g;
  }
};

/// Coordinate-axis half and quarter turns, with +-I, as fixed starting
/// candidates for the automorphism search.
inline std::vector<Mat3> symmetry_candidates() {
  std::vector<Mat3> c{Mat3::Identity(), -Mat3::Identity()};
  for (int a = 0; a < 3; ++a)
    for (double angle : {M_PI, M_PI / 2.0, -M_PI / 2.0}) {
      const Mat3 r = rotation(Vec3::Unit(a), angle);
      c.push_back(r);
      c.push_back(-r);
    }
  return c;
}

inline void add_clustered(std::vector<Mat3>& elems, std::vector<double>& res, const Mat3& g, double r, double radius) {
  for (std::size_t i = 0; i < elems.size(); ++i)
    if ((elems[i] - g).norm() < radius) {
      if (r < res[i] && i != 0) {
        elems[i] = g;
        res[i] = r;
      }
      return;
    }
  elems.push_back(g);
  res.push_back(r);
}

inline SymmetryGroupEstimate symmetry_group_estimate(const MaterialModel& model, NodeId x, const SolverOptions& opts,
                                                     const ProbeSet& probes = ProbeSet::standard()) {
  opts.validate();
  const IsoObjective obj(model, x, x, probes);
  SymmetryGroupEstimate est;
  est.point = x;
  est.discrete_elements.push_back(Mat3::Identity());
  est.residuals.push_back(0.0);

  Rng rng(derive_seed(opts.seed, {x.index, x.index, 0x5e11ULL}));
  std::vector<Mat3> starts = symmetry_candidates();
  for (int s = 0; s < opts.starts; ++s) starts.push_back(detail::random_start(rng, opts.start_spread, opts.det_barrier));
  int infeasible = 0;
  for (const auto& s : starts) {
    const auto r = detail::local_solve(obj, s, opts);
    if (r.status == LmStatus::Infeasible || !std::isfinite(r.norm)) {
      ++infeasible;
      continue;
    }
    if (r.norm < opts.eps_iso) add_clustered(est.discrete_elements, est.residuals, detail::to_mat(r.x), r.norm, opts.cluster_radius);
  }
  if (infeasible == static_cast<int>(starts.size()))
    throw Error(ErrorKind::SolverDiverged, "every automorphism start collapsed against the det barrier");

  // Null directions of the linearized automorphism condition at P = I.
  auto residual = [&](const detail::Vec9& v, Eigen::VectorXd& out) { obj.residuals(detail::to_mat(v), out); };
  const Eigen::MatrixXd jac = fd_jacobian<9>(residual, detail::to_vec(Mat3::Identity()),
                                             static_cast<Eigen::Index>(obj.size()), 1e-5);
  const Eigen::Matrix<double, 9, 9> normal = jac.transpose() * jac;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 9, 9>> es(normal);
  const auto& ev = es.eigenvalues();
  const double top = ev.maxCoeff();
  for (int i = 0; i < 9; ++i) {
    est.normal_spectrum.push_back(ev[i]);
    if (ev[i] < opts.eps_rank * top) {
      ++est.continuous_dimension;
      Mat3 gen = detail::to_mat(es.eigenvectors().col(i));
      gen /= gen.norm();
      est.generators.push_back(gen);
    }
  }

  for (std::size_t i = 0; i < est.discrete_elements.size(); ++i) {
    if (std::abs(est.discrete_elements[i].determinant() - 1.0) > 1e-6) est.non_unimodular.push_back(i);
    for (const auto& b : est.discrete_elements) {
      const Mat3 prod = est.discrete_elements[i] * b;
      bool found = false;
      for (const auto& c : est.discrete_elements) found = found || (prod - c).norm() < opts.eps_group;
      if (!found && est.continuous_dimension > 0) found = obj.value(prod) < opts.eps_iso;
      if (!found) est.closed = false;
    }
  }
  return est;
}

/// True iff P g P^-1 lands within tol of an element of Gy for every sampled
/// g in Gx, and the continuous dimensions agree.
inline bool conjugacy_check(const SymmetryGroupEstimate& gx, const SymmetryGroupEstimate& gy, const Mat3& p,
                            double tol) {
  const Mat3 pinv = invert3(p);
  if (gx.continuous_dimension != gy.continuous_dimension) return false;
  for (const auto& g : gx.discrete_elements) {
    const Mat3 c = p * g * pinv;
    bool found = false;
    for (const auto& h : gy.discrete_elements) found = found || (c - h).norm() < tol;
    if (!found) return false;
  }
  return true;
}

}  // namespace matgroupoid
