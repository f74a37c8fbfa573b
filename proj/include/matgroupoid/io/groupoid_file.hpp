#pragma once

// Groupoid interchange files: objects, arrows, inverses, identities and the
// defined entries of the composition table. See docs/FORMATS.md.

#include <sstream>
#include <string>
#include <vector>

#include "matgroupoid/groupoid.hpp"
#include "matgroupoid/io/text.hpp"

namespace matgroupoid::io {

inline std::string save_groupoid(const FiniteGroupoid& g) {
  std::ostringstream out;
  out << "matgroupoid-groupoid 1\n";
  out << "objects " << g.num_objects() << '\n';
  for (const auto& a : g.arrows()) {
    out << "arrow " << a.id.value << ' ' << a.source.index << ' ' << a.target.index;
    if (!a.label.empty()) out << ' ' << a.label;
    out << '\n';
  }
  for (std::size_t i = 0; i < g.num_arrows(); ++i) out << "inverse " << i << ' ' << g.inverse_map()[i].value << '\n';
  for (std::size_t m = 0; m < g.num_objects(); ++m) out << "identity " << m << ' ' << g.identity_map()[m].value << '\n';
  const auto n = static_cast<std::uint32_t>(g.num_arrows());
  for (std::uint32_t gi = 0; gi < n; ++gi)
    for (std::uint32_t fi = 0; fi < n; ++fi)
      if (auto r = g.product_entry(ArrowId{gi}, ArrowId{fi})) out << "compose " << gi << ' ' << fi << ' ' << r->value << '\n';
  out << "end\n";
  return out.str();
}

/// Parses a groupoid file. Structural errors (unknown ids, missing inverse or
/// identity lines) are reported; the axioms themselves are left to
/// FiniteGroupoid::validate_axioms.
inline FiniteGroupoid parse_groupoid(std::istream& in) {
  LineReader r(in);
  check_header(r, "matgroupoid-groupoid");
  std::size_t num_objects = 0;
  bool have_objects = false;
  std::vector<Arrow> arrows;
  std::vector<std::int64_t> inverse;
  std::vector<std::int64_t> identities;
  struct Entry {
    std::uint32_t g, f, r;
    std::size_t line;
  };
  std::vector<Entry> products;

  auto id = [&](const std::string& tok) { return parse_int<std::uint32_t>(tok, r.line()); };
  for (;;) {
    const auto line = r.require("'end'");
    if (line == "end") break;
    const auto toks = split_ws(line);
    const auto& kw = toks[0];
    auto need = [&](std::size_t n) {
      if (toks.size() < n) throw ParseError(r.line(), "'" + kw + "' expects " + std::to_string(n - 1) + " fields");
    };
    if (kw == "objects") {
      need(2);
      num_objects = parse_int<std::size_t>(toks[1], r.line());
      identities.assign(num_objects, -1);
      have_objects = true;
    } else if (kw == "arrow") {
      need(4);
      if (!have_objects) throw ParseError(r.line(), "'objects' must precede arrows");
      const auto a = id(toks[1]);
      if (a != arrows.size()) throw ParseError(r.line(), "arrow ids must be listed densely from 0");
      const auto s = id(toks[2]), t = id(toks[3]);
      if (s >= num_objects || t >= num_objects) throw ParseError(r.line(), "arrow endpoint out of range");
      std::string label;
      if (toks.size() > 4) {
        std::istringstream rest(line);
        std::string skip;
        for (int i = 0; i < 4; ++i) rest >> skip;
        std::getline(rest, label);
        label = std::string(trim(label));
      }
      arrows.push_back(Arrow{ArrowId{a}, ObjectId{s}, ObjectId{t}, std::move(label)});
      inverse.push_back(-1);
    } else if (kw == "inverse") {
      need(3);
      const auto a = id(toks[1]), b = id(toks[2]);
      if (a >= arrows.size() || b >= arrows.size()) throw ParseError(r.line(), "inverse names an unknown arrow");
      inverse[a] = b;
    } else if (kw == "identity") {
      need(3);
      const auto m = id(toks[1]), e = id(toks[2]);
      if (m >= num_objects || e >= arrows.size()) throw ParseError(r.line(), "identity names an unknown object or arrow");
      identities[m] = e;
    } else if (kw == "compose") {
      need(4);
      products.push_back(Entry{id(toks[1]), id(toks[2]), id(toks[3]), r.line()});
    } else {
      throw ParseError(r.line(), "unknown keyword '" + kw + "'");
    }
  }
  if (!have_objects) throw Error(ErrorKind::ValidationError, "missing 'objects' line");
  const auto n = arrows.size();
  std::vector<ArrowId> inv(n), ids(num_objects);
  for (std::size_t i = 0; i < n; ++i) {
    if (inverse[i] < 0) throw Error(ErrorKind::ValidationError, "arrow " + std::to_string(i) + " has no inverse line");
    inv[i] = ArrowId{static_cast<std::uint32_t>(inverse[i])};
  }
  for (std::size_t m = 0; m < num_objects; ++m) {
    if (identities[m] < 0) throw Error(ErrorKind::ValidationError, "object " + std::to_string(m) + " has no identity line");
    ids[m] = ArrowId{static_cast<std::uint32_t>(identities[m])};
  }
  std::vector<std::int64_t> table(n * n, FiniteGroupoid::kUndefined);
  for (const auto& p : products) {
    if (p.g >= n || p.f >= n || p.r >= n) throw ParseError(p.line, "compose names an unknown arrow");
    table[p.g * n + p.f] = p.r;
  }
  return FiniteGroupoid(num_objects, std::move(arrows), std::move(inv), std::move(ids), std::move(table));
}

inline FiniteGroupoid load_groupoid_text(const std::string& text) {
  std::istringstream in(text);
  return parse_groupoid(in);
}

inline FiniteGroupoid load_groupoid(const std::string& path) { return load_groupoid_text(read_file(path)); }

}  // namespace matgroupoid::io
