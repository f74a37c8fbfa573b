#pragma once

// Material groupoid over a body grid: archetype-star assembly, uniformity
// verdict, pairwise isomorphisms by composition, and gauge smoothing.

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>
#include <vector>

#include "matgroupoid/constitutive.hpp"
#include "matgroupoid/grid.hpp"
#include "matgroupoid/iso_solver.hpp"
#include "matgroupoid/parallel.hpp"
#include "matgroupoid/random.hpp"

namespace matgroupoid {

enum class Verdict { Uniform, NonUniform, Indeterminate };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Uniform: return "uniform";
    case Verdict::NonUniform: return "non_uniform";
    case Verdict::Indeterminate: return "indeterminate";
  }
  return "?";
}

struct GaugeField {
  GridMat3Field p;
  double continuity_defect = 0.0;
};

/// max over face-adjacent node pairs of ||P(X) - P(X')||_F / h.
inline double continuity_defect(const GridMat3Field& p) {
  const auto& g = p.grid;
  double worst = 0.0;
  for (std::size_t i = 0; i < g.num_nodes(); ++i) {
    const auto c = g.ijk(NodeId{i});
    for (int a = 0; a < 3; ++a) {
      if (c[a] + 1 >= g.dims[a]) continue;
      auto d = c;
      ++d[a];
      const auto j = g.node(d[0], d[1], d[2]);
      worst = std::max(worst, (p.values[i] - p[j]).norm() / g.spacing[a]);
    }
  }
  return worst;
}

inline GaugeField make_gauge(GridMat3Field p) {
  GaugeField g{std::move(p), 0.0};
  g.continuity_defect = continuity_defect(g.p);
  return g;
}

/// Breadth-first order from `start` with the discovering parent of each node.
struct Sweep {
  std::vector<NodeId> order;
  std::vector<std::size_t> parent;  // parent[start] == start
  std::vector<int> shell;
};

inline Sweep breadth_first(const BodyGrid& grid, NodeId start) {
  grid.check(start);
  Sweep s;
  const auto n = grid.num_nodes();
  s.parent.assign(n, n);
  s.shell.assign(n, -1);
  std::deque<NodeId> queue{start};
  s.parent[start.index] = start.index;
  s.shell[start.index] = 0;
  while (!queue.empty()) {
    const auto x = queue.front();
    queue.pop_front();
    s.order.push_back(x);
    for (auto y : grid.neighbors(x))
      if (s.shell[y.index] < 0) {
        s.shell[y.index] = s.shell[x.index] + 1;
        s.parent[y.index] = x.index;
        queue.push_back(y);
      }
  }
  return s;
}

struct PairFailure {
  NodeId source;
  NodeId target;
  double best_residual = 0.0;
  bool diverged = false;
};

struct ResidualStats {
  double max = 0.0;
  double mean = 0.0;
  double p95 = 0.0;
};

struct SpotCheck {
  NodeId source;
  NodeId target;
  double residual = 0.0;
};

struct UniformityOptions {
  SolverOptions solver;
  double eps_reject = 1e-2;
  int spot_checks = 32;
  std::optional<NodeId> archetype;  // defaults to the grid center
  bool smooth = true;
};

struct UniformityReport {
  Verdict verdict = Verdict::Indeterminate;
  NodeId archetype;
  GaugeField gauge;                     // archetype -> node maps (best found where not accepted)
  std::vector<double> node_residuals;   // residual of gauge[X] as archetype -> X isomorphism
  std::vector<unsigned char> accepted;
  std::vector<int> shell;
  ResidualStats residual_stats;
  SymmetryGroupEstimate symmetry;
  std::vector<PairFailure> failures;
  std::vector<SpotCheck> spot_checks;
  double eps_iso = 0.0;
  double eps_reject = 0.0;
};

inline ResidualStats residual_stats(std::vector<double> r) {
  ResidualStats s;
  if (r.empty()) return s;
  std::sort(r.begin(), r.end());
  s.max = r.back();
  double sum = 0.0;
  for (double v : r) sum += v;
  s.mean = sum / static_cast<double>(r.size());
  const auto k = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(r.size())));
  s.p95 = r[std::max<std::size_t>(k, 1) - 1];
  return s;
}

/// Replaces each P(X), in sweep order from `start`, by P(X) g with g among
/// the sampled symmetry elements and det P(X) g > 0 (then a short polish
/// along the continuous generators) so that it lies closest to the mean of
/// its already-fixed neighbours. Returns the input unchanged if the continuity defect would
/// grow.
inline GaugeField smooth_gauge(const GaugeField& gauge, const SymmetryGroupEstimate& symmetry,
                               std::optional<NodeId> start = std::nullopt) {
  const auto& grid = gauge.p.grid;
  const NodeId s0 = start.value_or(grid.center());
  const auto sweep = breadth_first(grid, s0);
  GridMat3Field p = gauge.p;
  std::vector<Mat3> elements = symmetry.discrete_elements;
  if (elements.empty()) elements.push_back(Mat3::Identity());

  if (p[s0].determinant() < 0.0)
    for (const auto& g : elements)
      if ((p[s0] * g).determinant() > 0.0) {
        p[s0] = p[s0] * g;
        break;
      }

  std::vector<unsigned char> fixed(grid.num_nodes(), 0);
  fixed[s0.index] = 1;
  const int dim = static_cast<int>(symmetry.generators.size());
  for (auto x : sweep.order) {
    if (fixed[x.index]) continue;
    Mat3 target = Mat3::Zero();
    int count = 0;
    for (auto y : grid.neighbors(x))
      if (fixed[y.index]) {
        target += p[y];
        ++count;
      }
    target /= static_cast<double>(count);

    Mat3 best = p[x];
    double best_d = best.determinant() > 0.0 ? (best - target).norm() : std::numeric_limits<double>::infinity();
    for (const auto& g : elements) {
      const Mat3 cand = p[x] * g;
      if (cand.determinant() <= 0.0) continue;
      const double d = (cand - target).norm();
      if (d < best_d - 1e-14) {
        best = cand;
        best_d = d;
      }
    }
    if (dim > 0) {
      // Gauss-Newton on the group: cur <- cur exp(sum s_k A_k) towards target.
      Mat3 cur = best;
      for (int it = 0; it < 20; ++it) {
        Eigen::MatrixXd jac(9, dim);
        Eigen::VectorXd r(9);
        for (int i = 0; i < 9; ++i) r[i] = (cur - target)(i / 3, i % 3);
        for (int k = 0; k < dim; ++k) {
          const Mat3 d = cur * symmetry.generators[k];
          for (int i = 0; i < 9; ++i) jac(i, k) = d(i / 3, i % 3);
        }
        const Eigen::VectorXd step = jac.colPivHouseholderQr().solve(-r);
        Mat3 a = Mat3::Zero();
        for (int k = 0; k < dim; ++k) a += step[k] * symmetry.generators[k];
        const Mat3 next = cur * mat_exp(a);
        if (!((next - target).norm() < (cur - target).norm())) break;
        cur = next;
        if (step.norm() < 1e-15) break;
      }
      if ((cur - target).norm() < best_d) best = cur;
    }
    p[x] = best;
    fixed[x.index] = 1;
  }
  auto out = make_gauge(std::move(p));
  if (out.continuity_defect > gauge.continuity_defect) return gauge;
  return out;
}

/// Solves archetype -> X for every node, breadth-first from the archetype
/// with the parent's solution as warm start; nodes of one shell run in
/// parallel. Transitivity is then spot-checked on random pairs through the
/// composition P(Y) P(X)^-1.
inline UniformityReport assemble_material_groupoid(const MaterialModel& model, const UniformityOptions& opts,
                                                   const ProbeSet& probes = ProbeSet::standard()) {
  opts.solver.validate();
  const auto& grid = model.grid();
  const auto n = grid.num_nodes();
  UniformityReport rep;
  rep.eps_iso = opts.solver.eps_iso;
  rep.eps_reject = opts.eps_reject;
  rep.archetype = opts.archetype.value_or(grid.center());
  grid.check(rep.archetype);
  rep.symmetry = symmetry_group_estimate(model, rep.archetype, opts.solver, probes);

  const auto sweep = breadth_first(grid, rep.archetype);
  rep.shell = sweep.shell;
  GridMat3Field p(grid, Mat3::Identity());
  rep.node_residuals.assign(n, 0.0);
  rep.accepted.assign(n, 0);
  std::vector<unsigned char> diverged(n, 0);

  std::size_t begin = 0;
  while (begin < sweep.order.size()) {
    std::size_t end = begin;
    const int shell = sweep.shell[sweep.order[begin].index];
    while (end < sweep.order.size() && sweep.shell[sweep.order[end].index] == shell) ++end;
    parallel_for(end - begin, [&](std::size_t k) {
      const auto x = sweep.order[begin + k];
      std::optional<Mat3> warm;
      if (x != rep.archetype) warm = p.values[sweep.parent[x.index]];
      const auto r = search_isomorphism(model, rep.archetype, x, opts.solver, probes, warm);
      p[x] = r.diverged ? (warm ? *warm : Mat3::Identity()) : r.best.p;
      rep.node_residuals[x.index] = r.diverged ? std::numeric_limits<double>::infinity() : r.best.residual;
      rep.accepted[x.index] = r.accepted ? 1 : 0;
      diverged[x.index] = r.diverged ? 1 : 0;
    });
    begin = end;
  }

  for (auto x : sweep.order)
    if (!rep.accepted[x.index])
      rep.failures.push_back(PairFailure{rep.archetype, x, rep.node_residuals[x.index], diverged[x.index] != 0});

  if (rep.failures.empty() && opts.spot_checks > 0 && n > 1) {
    Rng rng(derive_seed(opts.solver.seed, {0x5907ULL, rep.archetype.index}));
    for (int k = 0; k < opts.spot_checks; ++k) {
      const NodeId x{rng.index(n)}, y{rng.index(n)};
      const Mat3 pxy = p[y] * invert3(p[x]);
      const double r = iso_residual(model, x, y, pxy, probes);
      rep.spot_checks.push_back(SpotCheck{x, y, r});
      if (!(r < 3.0 * opts.solver.eps_iso)) rep.failures.push_back(PairFailure{x, y, r, false});
    }
  }

  if (rep.failures.empty()) {
    rep.verdict = Verdict::Uniform;
  } else {
    rep.verdict = Verdict::Indeterminate;
    for (const auto& f : rep.failures)
      if (!f.diverged && f.best_residual > opts.eps_reject) rep.verdict = Verdict::NonUniform;
  }

  auto gauge = make_gauge(std::move(p));
  if (rep.verdict == Verdict::Uniform && opts.smooth) gauge = smooth_gauge(gauge, rep.symmetry, rep.archetype);
  rep.gauge = std::move(gauge);
  if (rep.verdict == Verdict::Uniform)
    for (std::size_t i = 0; i < n; ++i)
      rep.node_residuals[i] = iso_residual(model, rep.archetype, NodeId{i}, rep.gauge.p.values[i], probes);

  std::vector<double> finite;
  for (double r : rep.node_residuals)
    if (std::isfinite(r)) finite.push_back(r);
  rep.residual_stats = residual_stats(std::move(finite));
  return rep;
}

/// P(Y) P(X)^-1 from the report's gauge, with its residual recomputed.
inline MaterialIsomorphism pairwise_isomorphism(const UniformityReport& report, const MaterialModel& model, NodeId x,
                                                NodeId y, const ProbeSet& probes = ProbeSet::standard()) {
  if (report.verdict != Verdict::Uniform) throw Error(ErrorKind::NotUniform, "body was not found uniform");
  model.grid().check(x);
  model.grid().check(y);
  MaterialIsomorphism iso;
  iso.source = x;
  iso.target = y;
  iso.p = x == y ? Mat3::Identity() : Mat3(report.gauge.p[y] * invert3(report.gauge.p[x]));
  iso.residual = iso_residual(model, x, y, iso.p, probes);
  return iso;
}

}  // namespace matgroupoid
