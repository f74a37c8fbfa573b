#pragma once

// Columnar dumps of Christoffel and torsion fields for external plotting:
// one row per node with its grid index, coordinates and 27 components.

#include <sstream>
#include <string>
#include <vector>

#include "matgroupoid/connection.hpp"
#include "matgroupoid/io/report.hpp"
#include "matgroupoid/io/text.hpp"

namespace matgroupoid::io {

namespace detail {

inline std::string format_dump(const char* kind, char prefix, const BodyGrid& grid,
                               const std::vector<Component27>& values, ChristoffelConvention conv,
                               DifferenceScheme scheme) {
  std::ostringstream out;
  out << "matgroupoid-field 1\n";
  out << "kind = " << kind << '\n';
  out << "convention = " << to_string(conv) << '\n';
  out << "scheme = " << to_string(scheme) << '\n';
  write_grid(out, grid);
  out << "columns = node i j k X1 X2 X3";
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) out << ' ' << prefix << component_label(i, j, k);
  out << "\nbegin rows\n";
  for (std::size_t n = 0; n < values.size(); ++n) {
    const NodeId id{n};
    const auto c = grid.ijk(id);
    const auto x = grid.coords(id);
    out << n << ' ' << c[0] << ' ' << c[1] << ' ' << c[2] << ' ' << format_double(x[0]) << ' ' << format_double(x[1])
        << ' ' << format_double(x[2]) << ' ' << join_doubles(values[n]) << '\n';
  }
  out << "end rows\nend\n";
  return out.str();
}

}  // namespace detail

inline std::string format_christoffel_dump(const ChristoffelField& gamma) {
  return detail::format_dump("christoffel", 'G', gamma.grid, gamma.values, gamma.convention, gamma.scheme);
}

inline std::string format_torsion_dump(const TorsionField& t, const ChristoffelField& from) {
  return detail::format_dump("torsion", 'T', t.grid, t.values, from.convention, from.scheme);
}

struct FieldDump {
  std::string kind;
  BodyGrid grid;
  std::vector<Component27> values;
};

inline FieldDump parse_field_dump(const std::string& text) {
  std::istringstream in(text);
  LineReader r(in);
  check_header(r, "matgroupoid-field");
  FieldDump d;
  for (;;) {
    const auto line = r.require("'begin rows'");
    if (line == "begin rows") break;
    const auto [key, value] = split_key_value(line, r.line());
    const auto toks = split_ws(value);
    if (key == "kind") {
      d.kind = value;
    } else if (key == "grid.dims" && toks.size() == 3) {
      for (int a = 0; a < 3; ++a) d.grid.dims[a] = parse_int<std::size_t>(toks[a], r.line());
    } else if (key == "grid.spacing" && toks.size() == 3) {
      for (int a = 0; a < 3; ++a) d.grid.spacing[a] = parse_double(toks[a], r.line());
    } else if (key == "grid.origin" && toks.size() == 3) {
      for (int a = 0; a < 3; ++a) d.grid.origin[a] = parse_double(toks[a], r.line());
    } else if (key != "convention" && key != "scheme" && key != "columns") {
      throw ParseError(r.line(), "unexpected line '" + line + "'");
    }
  }
  for (;;) {
    const auto line = r.require("'end rows'");
    if (line == "end rows") break;
    const auto toks = split_ws(line);
    if (toks.size() != 34) throw ParseError(r.line(), "row needs 34 columns, got " + std::to_string(toks.size()));
    Component27 c{};
    for (int i = 0; i < 27; ++i) c[i] = parse_double(toks[7 + i], r.line());
    d.values.push_back(c);
  }
  if (r.require("'end'") != "end") throw ParseError(r.line(), "expected 'end'");
  return d;
}

}  // namespace matgroupoid::io
