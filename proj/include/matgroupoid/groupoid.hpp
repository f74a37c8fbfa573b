#pragma once

// Exact finite groupoid algebra. Arrows are dense integer ids; products are
// stored in a flat partial table so that exhaustive axiom checks are cheap.
//
// Composition order: compose(g, f) is "f then g". It is defined iff
// target(f) == source(g), and the product runs from source(f) to target(g).

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "matgroupoid/errors.hpp"
#include "matgroupoid/finite_group.hpp"

namespace matgroupoid {

struct ObjectId {
  std::uint32_t index = 0;
  friend auto operator<=>(const ObjectId&, const ObjectId&) = default;
};

struct ArrowId {
  std::uint32_t value = 0;
  friend auto operator<=>(const ArrowId&, const ArrowId&) = default;
};

struct Arrow {
  ArrowId id;
  ObjectId source;
  ObjectId target;
  std::string label;
};

enum class ViolationKind {
  Composability,  // product defined for a non-composable pair, or missing for a composable one
  Endpoints,      // source/target of a product are wrong
  Associativity,
  UnitLaw,
  InverseLaw,
};

inline const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::Composability: return "composability";
    case ViolationKind::Endpoints: return "endpoints";
    case ViolationKind::Associativity: return "associativity";
    case ViolationKind::UnitLaw: return "unit-law";
    case ViolationKind::InverseLaw: return "inverse-law";
  }
  return "?";
}

struct Violation {
  ViolationKind kind;
  /// Table entries (g, f) consulted while detecting the violation.
  std::vector<std::pair<ArrowId, ArrowId>> entries;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

struct VertexGroup {
  ObjectId base;
  ArrowId unit;
  std::vector<ArrowId> elements;  // sorted by id

  std::size_t order() const noexcept { return elements.size(); }
  bool contains(ArrowId a) const { return std::binary_search(elements.begin(), elements.end(), a); }
};

struct OrbitDecomposition {
  std::vector<std::vector<ObjectId>> blocks;  // each block sorted, blocks ordered by smallest member
  bool is_transitive = false;
};

struct PrincipalSlice {
  ObjectId origin;
  std::vector<ArrowId> arrows;  // all arrows with source == origin, sorted
  VertexGroup structure_group;
  std::map<ObjectId, std::vector<ArrowId>> fibres;  // projection: target -> arrows
  /// Set when the groupoid is not transitive and the slice only covers the orbit of origin.
  bool orbit_restricted = false;

  bool contains(ArrowId a) const { return std::binary_search(arrows.begin(), arrows.end(), a); }
};

class FiniteGroupoid {
 public:
  static constexpr std::int64_t kUndefined = -1;

  /// Raw constructor. Checks structural sanity (dense ids, indices in range)
  /// but not the axioms; use validate_axioms() for that.
  FiniteGroupoid(std::size_t num_objects, std::vector<Arrow> arrows, std::vector<ArrowId> inverse,
                 std::vector<ArrowId> identities, std::vector<std::int64_t> table)
      : num_objects_(num_objects),
        arrows_(std::move(arrows)),
        inverse_(std::move(inverse)),
        identities_(std::move(identities)),
        table_(std::move(table)) {
    const auto n = arrows_.size();
    if (num_objects_ == 0) throw Error(ErrorKind::ValidationError, "object set must be nonempty");
    if (inverse_.size() != n) throw Error(ErrorKind::ValidationError, "inverse map must be total");
    if (identities_.size() != num_objects_) throw Error(ErrorKind::ValidationError, "identity map must be total");
    if (table_.size() != n * n) throw Error(ErrorKind::ValidationError, "composition table has wrong size");
    for (std::size_t i = 0; i < n; ++i) {
      const auto& a = arrows_[i];
      if (a.id.value != i) throw Error(ErrorKind::ValidationError, "arrow ids must be dense and ordered");
      if (a.source.index >= num_objects_ || a.target.index >= num_objects_)
        throw Error(ErrorKind::ValidationError, "arrow " + std::to_string(i) + " has an unknown endpoint");
      if (inverse_[i].value >= n) throw Error(ErrorKind::ValidationError, "inverse of an arrow is unknown");
    }
    for (auto e : identities_)
      if (e.value >= n) throw Error(ErrorKind::ValidationError, "identity arrow is unknown");
    for (auto v : table_)
      if (v != kUndefined && (v < 0 || static_cast<std::size_t>(v) >= n))
        throw Error(ErrorKind::ValidationError, "composition table entry out of range");
  }

  std::size_t num_objects() const noexcept { return num_objects_; }
  std::size_t num_arrows() const noexcept { return arrows_.size(); }
  const std::vector<Arrow>& arrows() const noexcept { return arrows_; }

  const Arrow& arrow(ArrowId a) const {
    check_arrow(a);
    return arrows_[a.value];
  }
  ObjectId source(ArrowId a) const { return arrow(a).source; }
  ObjectId target(ArrowId a) const { return arrow(a).target; }

  /// Raw table lookup, never throws for in-range ids.
  std::optional<ArrowId> product_entry(ArrowId g, ArrowId f) const {
    const auto v = table_[g.value * arrows_.size() + f.value];
    if (v == kUndefined) return std::nullopt;
    return ArrowId{static_cast<std::uint32_t>(v)};
  }
  const std::vector<std::int64_t>& table() const noexcept { return table_; }
  const std::vector<ArrowId>& inverse_map() const noexcept { return inverse_; }
  const std::vector<ArrowId>& identity_map() const noexcept { return identities_; }

  ArrowId compose(ArrowId g, ArrowId f) const {
    check_arrow(g);
    check_arrow(f);
    if (arrows_[f.value].target != arrows_[g.value].source)
      throw Error(ErrorKind::NotComposable, "target of arrow " + std::to_string(f.value) + " is not the source of arrow " +
                                                std::to_string(g.value));
    auto r = product_entry(g, f);
    if (!r)
      throw Error(ErrorKind::MissingProduct,
                  "no product registered for (" + std::to_string(g.value) + ", " + std::to_string(f.value) + ")");
    return *r;
  }

  ArrowId inverse(ArrowId f) const {
    check_arrow(f);
    return inverse_[f.value];
  }

  ArrowId identity_at(ObjectId m) const {
    check_object(m);
    return identities_[m.index];
  }

  std::vector<ArrowId> hom_set(ObjectId m, ObjectId n) const {
    check_object(m);
    check_object(n);
    std::vector<ArrowId> out;
    for (const auto& a : arrows_)
      if (a.source == m && a.target == n) out.push_back(a.id);
    return out;
  }

  VertexGroup vertex_group(ObjectId m) const {
    VertexGroup g{m, identity_at(m), hom_set(m, m)};
    const auto& el = g.elements;
    if (!g.contains(g.unit)) throw Error(ErrorKind::AxiomViolation, "unit is not a loop at its object");
    for (auto a : el) {
      if (compose(a, g.unit) != a || compose(g.unit, a) != a)
        throw Error(ErrorKind::AxiomViolation, "unit law fails in vertex group");
      const auto ai = inverse(a);
      if (!g.contains(ai) || compose(ai, a) != g.unit || compose(a, ai) != g.unit)
        throw Error(ErrorKind::AxiomViolation, "inverse law fails in vertex group");
      for (auto b : el) {
        const auto ab = compose(a, b);
        if (!g.contains(ab)) throw Error(ErrorKind::AxiomViolation, "vertex group is not closed");
        for (auto c : el)
          if (compose(ab, c) != compose(a, compose(b, c)))
            throw Error(ErrorKind::AxiomViolation, "vertex group is not associative");
      }
    }
    return g;
  }

  OrbitDecomposition orbit_decomposition() const {
    std::vector<std::uint32_t> parent(num_objects_);
    std::iota(parent.begin(), parent.end(), 0u);
    auto find = [&](std::uint32_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const auto& a : arrows_) {
      const auto r1 = find(a.source.index), r2 = find(a.target.index);
      if (r1 != r2) parent[std::max(r1, r2)] = std::min(r1, r2);
    }
    std::map<std::uint32_t, std::vector<ObjectId>> blocks;
    for (std::uint32_t m = 0; m < num_objects_; ++m) blocks[find(m)].push_back(ObjectId{m});
    OrbitDecomposition out;
    for (auto& [root, members] : blocks) out.blocks.push_back(std::move(members));
    out.is_transitive = out.blocks.size() == 1;
    return out;
  }

  ArrowId conjugate(ArrowId z, ArrowId g) const { return compose(compose(z, g), inverse(z)); }

  /// An arrow z: m -> n with z G_m z^-1 == G_n. In a valid groupoid every
  /// arrow of hom(m, n) qualifies; the first one that passes is returned,
  /// trying id_m first when m == n.
  ArrowId vertex_conjugacy_witness(ObjectId m, ObjectId n) const {
    auto candidates = hom_set(m, n);
    if (m == n) std::stable_partition(candidates.begin(), candidates.end(), [&](ArrowId a) { return a == identity_at(m); });
    if (candidates.empty())
      throw Error(ErrorKind::NoArrow,
                  "no arrow from object " + std::to_string(m.index) + " to " + std::to_string(n.index));
    const auto gm = vertex_group(m);
    const auto gn = vertex_group(n);
    for (auto z : candidates) {
      std::vector<ArrowId> image;
      image.reserve(gm.order());
      for (auto g : gm.elements) image.push_back(conjugate(z, g));
      std::sort(image.begin(), image.end());
      if (image == gn.elements) return z;
    }
    throw Error(ErrorKind::AxiomViolation, "no arrow conjugates the vertex groups");
  }

  PrincipalSlice principal_slice(ObjectId m) const {
    check_object(m);
    PrincipalSlice s;
    s.origin = m;
    s.structure_group = vertex_group(m);
    for (const auto& a : arrows_)
      if (a.source == m) {
        s.arrows.push_back(a.id);
        s.fibres[a.target].push_back(a.id);
      }
    s.orbit_restricted = s.fibres.size() != num_objects_;
    for (auto z : s.arrows)
      for (auto g : s.structure_group.elements) {
        const auto zg = compose(z, g);
        if (target(zg) != target(z)) throw Error(ErrorKind::AxiomViolation, "right action is not fibre preserving");
        if (zg == z && g != s.structure_group.unit) throw Error(ErrorKind::AxiomViolation, "right action is not free");
      }
    return s;
  }

  ArrowId right_action(const PrincipalSlice& s, ArrowId g, ArrowId z) const {
    if (!s.structure_group.contains(g))
      throw Error(ErrorKind::NotInGroup, "arrow " + std::to_string(g.value) + " is not in the structure group");
    if (!s.contains(z)) throw Error(ErrorKind::NotInSlice, "arrow " + std::to_string(z.value) + " is not in the slice");
    return compose(z, g);
  }

  /// Exhaustive check of the groupoid axioms. Never throws; every failure is
  /// reported with the table entries that exposed it.
  ValidationReport validate_axioms() const {
    ValidationReport rep;
    const auto n = static_cast<std::uint32_t>(arrows_.size());
    auto add = [&](ViolationKind k, std::vector<std::pair<ArrowId, ArrowId>> entries, std::string msg) {
      rep.violations.push_back(Violation{k, std::move(entries), std::move(msg)});
    };
    auto name = [](ArrowId a) { return std::to_string(a.value); };
    auto src = [&](ArrowId a) { return arrows_[a.value].source; };
    auto tgt = [&](ArrowId a) { return arrows_[a.value].target; };
    auto composable = [&](ArrowId g, ArrowId f) { return tgt(f) == src(g); };

    for (std::uint32_t gi = 0; gi < n; ++gi)
      for (std::uint32_t fi = 0; fi < n; ++fi) {
        const ArrowId g{gi}, f{fi};
        const auto r = product_entry(g, f);
        if (composable(g, f) != r.has_value()) {
          add(ViolationKind::Composability, {{g, f}},
              r ? "product defined for non-composable pair (" + name(g) + ", " + name(f) + ")"
                : "product missing for composable pair (" + name(g) + ", " + name(f) + ")");
          continue;
        }
        if (r && (src(*r) != src(f) || tgt(*r) != tgt(g)))
          add(ViolationKind::Endpoints, {{g, f}}, "product (" + name(g) + ", " + name(f) + ") has wrong endpoints");
      }

    // (h g) f == h (g f) for every composable triple whose partial products exist.
    for (std::uint32_t fi = 0; fi < n; ++fi)
      for (std::uint32_t gi = 0; gi < n; ++gi) {
        const ArrowId f{fi}, g{gi};
        if (!composable(g, f)) continue;
        const auto gf = product_entry(g, f);
        if (!gf) continue;
        for (std::uint32_t hi = 0; hi < n; ++hi) {
          const ArrowId h{hi};
          if (!composable(h, g)) continue;
          const auto hg = product_entry(h, g);
          if (!hg) continue;
          const auto left = product_entry(*hg, f);
          const auto right = product_entry(h, *gf);
          if (left != right)
            add(ViolationKind::Associativity, {{h, g}, {*hg, f}, {g, f}, {h, *gf}},
                "associativity fails on (" + name(h) + ", " + name(g) + ", " + name(f) + ")");
        }
      }

    for (std::uint32_t m = 0; m < num_objects_; ++m) {
      const auto e = identities_[m];
      if (src(e).index != m || tgt(e).index != m)
        add(ViolationKind::UnitLaw, {}, "identity at object " + std::to_string(m) + " is not a loop at it");
    }
    for (std::uint32_t zi = 0; zi < n; ++zi) {
      const ArrowId z{zi};
      const auto ea = identities_[src(z).index];
      const auto eb = identities_[tgt(z).index];
      if (product_entry(z, ea) != std::optional<ArrowId>(z))
        add(ViolationKind::UnitLaw, {{z, ea}}, "right unit law fails for arrow " + name(z));
      if (product_entry(eb, z) != std::optional<ArrowId>(z))
        add(ViolationKind::UnitLaw, {{eb, z}}, "left unit law fails for arrow " + name(z));

      const auto zi_ = inverse_[zi];
      if (inverse_[zi_.value] != z) add(ViolationKind::InverseLaw, {}, "inverse is not an involution at " + name(z));
      if (src(zi_) != tgt(z) || tgt(zi_) != src(z))
        add(ViolationKind::InverseLaw, {}, "inverse of " + name(z) + " does not swap endpoints");
      if (product_entry(zi_, z) != std::optional<ArrowId>(ea))
        add(ViolationKind::InverseLaw, {{zi_, z}}, "z^-1 z is not the source identity for " + name(z));
      if (product_entry(z, zi_) != std::optional<ArrowId>(eb))
        add(ViolationKind::InverseLaw, {{z, zi_}}, "z z^-1 is not the target identity for " + name(z));
    }
    return rep;
  }

 private:
  void check_arrow(ArrowId a) const {
    if (a.value >= arrows_.size()) throw Error(ErrorKind::UnknownArrow, "arrow " + std::to_string(a.value));
  }
  void check_object(ObjectId m) const {
    if (m.index >= num_objects_) throw Error(ErrorKind::UnknownObject, "object " + std::to_string(m.index));
  }

  std::size_t num_objects_;
  std::vector<Arrow> arrows_;
  std::vector<ArrowId> inverse_;
  std::vector<ArrowId> identities_;
  std::vector<std::int64_t> table_;
};

// ---------------------------------------------------------------------------
// Constructors for the canonical small instances.

/// Incrementally registers arrows and products; used by all constructors.
class GroupoidBuilder {
 public:
  explicit GroupoidBuilder(std::size_t num_objects) : num_objects_(num_objects), identities_(num_objects) {}

  ArrowId add_arrow(ObjectId s, ObjectId t, std::string label = {}) {
    ArrowId id{static_cast<std::uint32_t>(arrows_.size())};
    arrows_.push_back(Arrow{id, s, t, std::move(label)});
    return id;
  }
  void set_inverse(ArrowId a, ArrowId b) {
    if (inverse_.size() < arrows_.size()) inverse_.resize(arrows_.size());
    inverse_[a.value] = b;
  }
  void set_identity(ObjectId m, ArrowId e) { identities_[m.index] = e; }
  void set_product(ArrowId g, ArrowId f, ArrowId r) { products_.push_back({g, f, r}); }

  FiniteGroupoid build() && {
    const auto n = arrows_.size();
    inverse_.resize(n);
    std::vector<std::int64_t> table(n * n, FiniteGroupoid::kUndefined);
    for (const auto& p : products_) table[p.g.value * n + p.f.value] = p.r.value;
    return FiniteGroupoid(num_objects_, std::move(arrows_), std::move(inverse_), std::move(identities_),
                          std::move(table));
  }

 private:
  struct Product {
    ArrowId g, f, r;
  };
  std::size_t num_objects_;
  std::vector<Arrow> arrows_;
  std::vector<ArrowId> inverse_;
  std::vector<ArrowId> identities_;
  std::vector<Product> products_;
};

/// Trivial groupoid M x G x M: arrow (m, g, n) runs m -> n; (n, h, p)(m, g, n) = (m, h g, p).
inline FiniteGroupoid trivial_groupoid(std::size_t num_objects, const FiniteGroup& group) {
  const auto k = group.order();
  GroupoidBuilder b(num_objects);
  auto id_of = [&](std::size_t m, std::size_t g, std::size_t n) {
    return ArrowId{static_cast<std::uint32_t>((m * k + g) * num_objects + n)};
  };
  for (std::size_t m = 0; m < num_objects; ++m)
    for (std::size_t g = 0; g < k; ++g)
      for (std::size_t n = 0; n < num_objects; ++n)
        b.add_arrow(ObjectId{static_cast<std::uint32_t>(m)}, ObjectId{static_cast<std::uint32_t>(n)},
                    "(" + std::to_string(m) + "," + std::to_string(g) + "," + std::to_string(n) + ")");
  for (std::size_t m = 0; m < num_objects; ++m) {
    b.set_identity(ObjectId{static_cast<std::uint32_t>(m)}, id_of(m, group.identity(), m));
    for (std::size_t g = 0; g < k; ++g)
      for (std::size_t n = 0; n < num_objects; ++n) {
        b.set_inverse(id_of(m, g, n), id_of(n, group.inverse(static_cast<std::uint32_t>(g)), m));
        for (std::size_t h = 0; h < k; ++h)
          for (std::size_t p = 0; p < num_objects; ++p)
            b.set_product(id_of(n, h, p), id_of(m, g, n),
                          id_of(m, group.mul(static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(g)), p));
      }
  }
  return std::move(b).build();
}

/// Pair groupoid: exactly one arrow (a, b) for each ordered pair of objects.
inline FiniteGroupoid pair_groupoid(std::size_t num_objects) {
  return trivial_groupoid(num_objects, FiniteGroup::trivial());
}

/// Totally intransitive groupoid: identities only.
inline FiniteGroupoid identities_only_groupoid(std::size_t num_objects) {
  GroupoidBuilder b(num_objects);
  for (std::uint32_t m = 0; m < num_objects; ++m) {
    const auto e = b.add_arrow(ObjectId{m}, ObjectId{m}, "id" + std::to_string(m));
    b.set_identity(ObjectId{m}, e);
    b.set_inverse(e, e);
    b.set_product(e, e, e);
  }
  return std::move(b).build();
}

inline FiniteGroupoid disjoint_union(const FiniteGroupoid& a, const FiniteGroupoid& c) {
  GroupoidBuilder b(a.num_objects() + c.num_objects());
  const auto obj_off = static_cast<std::uint32_t>(a.num_objects());
  const auto arr_off = static_cast<std::uint32_t>(a.num_arrows());
  for (const auto& x : a.arrows()) b.add_arrow(x.source, x.target, x.label);
  for (const auto& x : c.arrows())
    b.add_arrow(ObjectId{x.source.index + obj_off}, ObjectId{x.target.index + obj_off}, x.label);
  auto copy = [&](const FiniteGroupoid& g, std::uint32_t ao, std::uint32_t oo) {
    const auto n = static_cast<std::uint32_t>(g.num_arrows());
    for (std::uint32_t i = 0; i < n; ++i) b.set_inverse(ArrowId{i + ao}, ArrowId{g.inverse_map()[i].value + ao});
    for (std::uint32_t m = 0; m < g.num_objects(); ++m)
      b.set_identity(ObjectId{m + oo}, ArrowId{g.identity_map()[m].value + ao});
    for (std::uint32_t gi = 0; gi < n; ++gi)
      for (std::uint32_t fi = 0; fi < n; ++fi)
        if (auto r = g.product_entry(ArrowId{gi}, ArrowId{fi}))
          b.set_product(ArrowId{gi + ao}, ArrowId{fi + ao}, ArrowId{r->value + ao});
  };
  copy(a, 0, 0);
  copy(c, arr_off, obj_off);
  return std::move(b).build();
}

/// Action groupoid of a group acting on {0..n-1}; action[g * n + x] = g.x.
/// Arrow (g, x) runs x -> g.x and (h, g.x)(g, x) = (h g, x).
inline FiniteGroupoid action_groupoid(const FiniteGroup& group, std::size_t num_points,
                                      const std::vector<std::uint32_t>& action) {
  const auto k = group.order();
  if (action.size() != k * num_points) throw Error(ErrorKind::BadDescriptor, "action table has wrong size");
  auto act = [&](std::size_t g, std::size_t x) { return action[g * num_points + x]; };
  auto id_of = [&](std::size_t g, std::size_t x) { return ArrowId{static_cast<std::uint32_t>(g * num_points + x)}; };
  GroupoidBuilder b(num_points);
  for (std::size_t g = 0; g < k; ++g)
    for (std::size_t x = 0; x < num_points; ++x)
      b.add_arrow(ObjectId{static_cast<std::uint32_t>(x)}, ObjectId{act(g, x)},
                  "(" + std::to_string(g) + "," + std::to_string(x) + ")");
  for (std::size_t x = 0; x < num_points; ++x) b.set_identity(ObjectId{static_cast<std::uint32_t>(x)}, id_of(group.identity(), x));
  for (std::uint32_t g = 0; g < k; ++g)
    for (std::size_t x = 0; x < num_points; ++x) {
      b.set_inverse(id_of(g, x), id_of(group.inverse(g), act(g, x)));
      for (std::uint32_t h = 0; h < k; ++h) b.set_product(id_of(h, act(g, x)), id_of(g, x), id_of(group.mul(h, g), x));
    }
  return std::move(b).build();
}

/// Action of a group on itself by left multiplication, the usual transitive example.
inline std::vector<std::uint32_t> left_regular_action(const FiniteGroup& group) {
  const auto k = group.order();
  std::vector<std::uint32_t> act(k * k);
  for (std::uint32_t g = 0; g < k; ++g)
    for (std::uint32_t x = 0; x < k; ++x) act[g * k + x] = group.mul(g, x);
  return act;
}

/// Returns a copy with arrow ids permuted: new id of old arrow i is perm[i].
inline FiniteGroupoid relabel_arrows(const FiniteGroupoid& g, const std::vector<std::uint32_t>& perm) {
  const auto n = g.num_arrows();
  if (perm.size() != n) throw Error(ErrorKind::BadDescriptor, "permutation has wrong size");
  std::vector<Arrow> arrows(n);
  std::vector<ArrowId> inv(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = g.arrows()[i];
    arrows[perm[i]] = Arrow{ArrowId{perm[i]}, a.source, a.target, a.label};
    inv[perm[i]] = ArrowId{perm[g.inverse_map()[i].value]};
  }
  std::vector<ArrowId> ids;
  for (auto e : g.identity_map()) ids.push_back(ArrowId{perm[e.value]});
  std::vector<std::int64_t> table(n * n, FiniteGroupoid::kUndefined);
  for (std::size_t gi = 0; gi < n; ++gi)
    for (std::size_t fi = 0; fi < n; ++fi)
      if (auto r = g.product_entry(ArrowId{static_cast<std::uint32_t>(gi)}, ArrowId{static_cast<std::uint32_t>(fi)}))
        table[perm[gi] * n + perm[fi]] = perm[r->value];
  return FiniteGroupoid(g.num_objects(), std::move(arrows), std::move(inv), std::move(ids), std::move(table));
}

}  // namespace matgroupoid
