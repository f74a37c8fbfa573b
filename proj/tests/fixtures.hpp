#pragma once

// Seeded generators and model builders shared by the unit tests and the
// acceptance binary. No test framework dependency.

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "matgroupoid/constitutive.hpp"
#include "matgroupoid/errors.hpp"
#include "matgroupoid/finite_group.hpp"
#include "matgroupoid/groupoid.hpp"
#include "matgroupoid/random.hpp"
#include "matgroupoid/tensor.hpp"

namespace matgroupoid::testing {

/// Klein four-group Z2 x Z2.
inline FiniteGroup klein_four() { return FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2)); }

inline FiniteGroup random_small_group(Rng& rng) {
  switch (rng.index(5)) {
    case 0: return FiniteGroup::trivial();
    case 1: return FiniteGroup::cyclic(2);
    case 2: return FiniteGroup::cyclic(3);
    case 3: return klein_four();
    default: return FiniteGroup::symmetric(3);
  }
}

/// Disjoint union of trivial groupoids M_i x G_i x M_i with random orbit
/// sizes and groups, then a random relabelling of arrow ids. At most
/// `max_arrows` arrows.
inline FiniteGroupoid random_groupoid(std::uint64_t seed, std::size_t max_arrows = 50) {
  Rng rng(seed);
  std::optional<FiniteGroupoid> acc;
  std::size_t arrows = 0;
  const std::size_t orbits = 1 + rng.index(3);
  for (std::size_t o = 0; o < orbits; ++o) {
    auto group = random_small_group(rng);
    std::size_t n = 1 + rng.index(4);
    while (n > 1 && arrows + n * n * group.order() > max_arrows) --n;
    if (arrows + n * n * group.order() > max_arrows) group = FiniteGroup::trivial();
    if (arrows + n * n * group.order() > max_arrows) break;
    auto part = trivial_groupoid(n, group);
    arrows += part.num_arrows();
    acc = acc ? disjoint_union(*acc, part) : part;
  }
  if (!acc) acc = pair_groupoid(1);
  std::vector<std::uint32_t> perm(acc->num_arrows());
  std::iota(perm.begin(), perm.end(), 0u);
  for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.index(i)]);
  return relabel_arrows(*acc, perm);
}

/// A transitive random groupoid: one orbit of `objects` points with group `g`.
inline FiniteGroupoid random_transitive_groupoid(std::uint64_t seed, std::size_t objects, const FiniteGroup& g) {
  Rng rng(seed);
  const auto base = trivial_groupoid(objects, g);
  std::vector<std::uint32_t> perm(base.num_arrows());
  std::iota(perm.begin(), perm.end(), 0u);
  for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.index(i)]);
  return relabel_arrows(base, perm);
}

/// The hand-built test families: pair, trivial with |G| in {2, 4, 6}, action
/// groupoids, and the intransitive constructions.
inline std::vector<FiniteGroupoid> named_groupoids() {
  std::vector<FiniteGroupoid> out;
  out.push_back(pair_groupoid(1));
  out.push_back(pair_groupoid(3));
  out.push_back(pair_groupoid(5));
  out.push_back(trivial_groupoid(3, FiniteGroup::cyclic(2)));
  out.push_back(trivial_groupoid(2, klein_four()));
  out.push_back(trivial_groupoid(2, FiniteGroup::cyclic(4)));
  out.push_back(trivial_groupoid(2, FiniteGroup::symmetric(3)));
  out.push_back(trivial_groupoid(1, FiniteGroup::symmetric(3)));
  const auto s3 = FiniteGroup::symmetric(3);
  out.push_back(action_groupoid(s3, s3.order(), left_regular_action(s3)));
  // S3 permuting 3 points: the point stabilizers have order 2.
  {
    std::vector<std::uint32_t> act(s3.order() * 3);
    std::vector<std::array<std::uint32_t, 3>> perms;
    std::array<std::uint32_t, 3> p{0, 1, 2};
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    for (std::size_t g = 0; g < perms.size(); ++g)
      for (std::uint32_t x = 0; x < 3; ++x) act[g * 3 + x] = perms[g][x];
    out.push_back(action_groupoid(s3, 3, act));
  }
  out.push_back(identities_only_groupoid(5));
  out.push_back(disjoint_union(pair_groupoid(3), pair_groupoid(4)));
  return out;
}

inline Mat3 random_matrix(Rng& rng, double spread = 1.0) {
  Mat3 a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = spread * rng.normal();
  return a;
}

/// I + spread N with det bounded away from zero.
inline Mat3 random_near_identity(Rng& rng, double spread = 0.3, double min_det = 0.3) {
  for (;;) {
    const Mat3 a = Mat3::Identity() + random_matrix(rng, spread);
    if (a.determinant() > min_det) return a;
  }
}

inline Mat3 diag(double a, double b, double c) {
  Mat3 m = Mat3::Zero();
  m.diagonal() << a, b, c;
  return m;
}

inline ModelDescriptor neo_hookean(double mu) {
  ModelDescriptor d;
  d.kind = ModelKind::NeoHookeanIsotropic;
  d.mu = ModulusProfile::constant(mu);
  return d;
}

inline ModelDescriptor svk(const StiffnessSpec& s) {
  ModelDescriptor d;
  d.kind = ModelKind::SvkAnisotropic;
  d.stiffness = s;
  return d;
}

/// Implanted body over the generic SVK archetype (or a neo-Hookean one with
/// mu = 1.5).
inline ModelDescriptor implanted(ModelKind archetype, ImplantKind kind, double beta) {
  ModelDescriptor d;
  d.kind = ModelKind::ImplantedArchetype;
  d.archetype_kind = archetype;
  d.stiffness = generic_stiffness();
  d.mu = ModulusProfile::constant(1.5);
  d.implant = {kind, beta, {}};
  return d;
}

inline ModelDescriptor fgm(double rate) {
  ModelDescriptor d;
  d.kind = ModelKind::FgmExponential;
  d.mu = ModulusProfile::exponential(1.0, rate);
  return d;
}

inline std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("matgroupoid_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace matgroupoid::testing
