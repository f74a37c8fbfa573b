#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "matgroupoid/errors.hpp"

namespace matgroupoid {

/// A finite group given by its multiplication table. Elements are 0..order-1;
/// mul(a, b) is the product "a b" (apply b, then a when read as maps).
class FiniteGroup {
 public:
  FiniteGroup(std::size_t order, std::vector<std::uint32_t> table, std::string name = {})
      : order_(order), table_(std::move(table)), name_(std::move(name)) {
    if (order_ == 0 || table_.size() != order_ * order_)
      throw Error(ErrorKind::BadDescriptor, "group table size does not match order");
    for (auto v : table_)
      if (v >= order_) throw Error(ErrorKind::BadDescriptor, "group table entry out of range");
    find_identity();
    inverse_.assign(order_, order_);
    for (std::uint32_t a = 0; a < order_; ++a)
      for (std::uint32_t b = 0; b < order_; ++b)
        if (mul(a, b) == identity_) inverse_[a] = b;
    for (auto v : inverse_)
      if (v == order_) throw Error(ErrorKind::BadDescriptor, "group table lacks inverses");
  }

  std::size_t order() const noexcept { return order_; }
  std::uint32_t identity() const noexcept { return identity_; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const { return table_[a * order_ + b]; }
  std::uint32_t inverse(std::uint32_t a) const { return inverse_[a]; }
  const std::string& name() const noexcept { return name_; }

  static FiniteGroup trivial() { return cyclic(1); }

  static FiniteGroup cyclic(std::size_t n) {
    std::vector<std::uint32_t> t(n * n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) t[a * n + b] = static_cast<std::uint32_t>((a + b) % n);
    return FiniteGroup(n, std::move(t), "Z" + std::to_string(n));
  }

  static FiniteGroup direct_product(const FiniteGroup& g, const FiniteGroup& h) {
    const std::size_t n = g.order() * h.order();
    std::vector<std::uint32_t> t(n * n);
    for (std::uint32_t a = 0; a < n; ++a)
      for (std::uint32_t b = 0; b < n; ++b) {
        const auto ga = a / h.order(), ha = a % h.order();
        const auto gb = b / h.order(), hb = b % h.order();
        t[a * n + b] = static_cast<std::uint32_t>(g.mul(ga, gb) * h.order() + h.mul(ha, hb));
      }
    return FiniteGroup(n, std::move(t), g.name() + "x" + h.name());
  }

  /// Symmetric group on k letters (k <= 5), elements in lexicographic order
  /// of their one-line notation; element 0 is the identity permutation.
  static FiniteGroup symmetric(std::size_t k) {
    if (k == 0 || k > 5) throw Error(ErrorKind::BadDescriptor, "symmetric group degree must be 1..5");
    std::vector<std::vector<std::uint32_t>> perms;
    std::vector<std::uint32_t> p(k);
    std::iota(p.begin(), p.end(), 0u);
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    const std::size_t n = perms.size();
    auto index_of = [&](const std::vector<std::uint32_t>& q) {
      return static_cast<std::uint32_t>(std::lower_bound(perms.begin(), perms.end(), q) - perms.begin());
    };
    std::vector<std::uint32_t> t(n * n);
    std::vector<std::uint32_t> c(k);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t i = 0; i < k; ++i) c[i] = perms[a][perms[b][i]];
        t[a * n + b] = index_of(c);
      }
    return FiniteGroup(n, std::move(t), "S" + std::to_string(k));
  }

 private:
  void find_identity() {
    for (std::uint32_t e = 0; e < order_; ++e) {
      bool ok = true;
      for (std::uint32_t a = 0; a < order_ && ok; ++a) ok = mul(e, a) == a && mul(a, e) == a;
      if (ok) {
        identity_ = e;
        return;
      }
    }
    throw Error(ErrorKind::BadDescriptor, "group table has no identity");
  }

  std::size_t order_;
  std::vector<std::uint32_t> table_;
  std::vector<std::uint32_t> inverse_;
  std::uint32_t identity_ = 0;
  std::string name_;
};

}  // namespace matgroupoid
