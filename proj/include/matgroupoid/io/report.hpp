#pragma once

// Analysis reports and gauge files. A report is a sequence of [section]
// blocks of "key = value" lines; the [gauge] block doubles as a gauge file
// body so `connection --gauge` accepts either. See docs/FORMATS.md.

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "matgroupoid/connection.hpp"
#include "matgroupoid/io/text.hpp"
#include "matgroupoid/uniformity.hpp"

namespace matgroupoid::io {

using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

struct ConnectionSummary {
  Homogeneity homogeneity = Homogeneity::Homogeneous;
  double tolerance = 0.0;
  double max_abs = 0.0;
  Component27 component_max{};
  bool right_invariant = true;
  ChristoffelConvention convention = ChristoffelConvention::DerivativeTimesInverse;
  DifferenceScheme scheme = DifferenceScheme::FourthOrder;
};

inline ConnectionSummary summarize_connection(const ChristoffelField& gamma, const TorsionField& t,
                                              Homogeneity verdict, double tol, bool right_invariant) {
  return ConnectionSummary{verdict, tol, t.max_abs, t.component_max, right_invariant, gamma.convention, gamma.scheme};
}

/// Component label with 1-based indices, e.g. "123" for (0, 1, 2).
inline std::string component_label(int i, int j, int k) {
  return std::to_string(i + 1) + std::to_string(j + 1) + std::to_string(k + 1);
}

namespace detail {

inline void write_grid(std::ostream& out, const BodyGrid& g) {
  out << "grid.dims = " << g.dims[0] << ' ' << g.dims[1] << ' ' << g.dims[2] << '\n';
  out << "grid.spacing = " << join_doubles(g.spacing) << '\n';
  out << "grid.origin = " << join_doubles(g.origin) << '\n';
}

inline void write_gauge_body(std::ostream& out, const GaugeField& gauge) {
  write_grid(out, gauge.p.grid);
  out << "continuity_defect = " << format_double(gauge.continuity_defect) << '\n';
  for (std::size_t n = 0; n < gauge.p.values.size(); ++n)
    out << "p = " << n << ' ' << join_doubles(flatten(gauge.p.values[n])) << '\n';
}

inline void write_connection(std::ostream& out, const ConnectionSummary& c) {
  out << "[connection]\n";
  out << "convention = " << to_string(c.convention) << '\n';
  out << "scheme = " << to_string(c.scheme) << '\n';
  out << "homogeneity = " << to_string(c.homogeneity) << '\n';
  out << "tol_torsion = " << format_double(c.tolerance) << '\n';
  out << "torsion.max_abs = " << format_double(c.max_abs) << '\n';
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = j + 1; k < 3; ++k)
        out << "torsion.T" << component_label(i, j, k) << " = " << format_double(c.component_max[gamma_index(i, j, k)])
            << '\n';
  out << "right_invariant = " << (c.right_invariant ? "true" : "false") << '\n';
}

}  // namespace detail

inline std::string format_report(const ConfigEntries& config, const UniformityReport& rep,
                                 const std::optional<ConnectionSummary>& connection) {
  std::ostringstream out;
  out << "matgroupoid-report 1\n[config]\n";
  for (const auto& [k, v] : config) out << k << " = " << v << '\n';

  const auto n = rep.accepted.size();
  std::size_t accepted = 0;
  for (auto a : rep.accepted) accepted += a;
  out << "[result]\n";
  out << "verdict = " << to_string(rep.verdict) << '\n';
  out << "archetype = " << rep.archetype.index << '\n';
  out << "nodes = " << n << '\n';
  out << "accepted = " << accepted << '\n';
  out << "residual.max = " << format_double(rep.residual_stats.max) << '\n';
  out << "residual.mean = " << format_double(rep.residual_stats.mean) << '\n';
  out << "residual.p95 = " << format_double(rep.residual_stats.p95) << '\n';
  out << "continuity_defect = " << format_double(rep.gauge.continuity_defect) << '\n';

  const auto& s = rep.symmetry;
  out << "[symmetry]\n";
  out << "point = " << s.point.index << '\n';
  out << "continuous_dimension = " << s.continuous_dimension << '\n';
  out << "discrete_count = " << s.discrete_elements.size() << '\n';
  out << "closed = " << (s.closed ? "true" : "false") << '\n';
  out << "normal_spectrum = " << join_doubles(s.normal_spectrum) << '\n';
  for (std::size_t i = 0; i < s.discrete_elements.size(); ++i)
    out << "element = " << i << ' ' << format_double(s.residuals[i]) << ' ' << join_doubles(flatten(s.discrete_elements[i]))
        << '\n';
  for (const auto& g : s.generators) out << "generator = " << join_doubles(flatten(g)) << '\n';
  for (auto i : s.non_unimodular) out << "non_unimodular = " << i << '\n';

  if (connection) detail::write_connection(out, *connection);

  out << "[failures]\n";
  out << "count = " << rep.failures.size() << '\n';
  for (const auto& f : rep.failures)
    out << "pair = " << f.source.index << ' ' << f.target.index << ' ' << format_double(f.best_residual) << ' '
        << (f.diverged ? "diverged" : "converged") << '\n';

  out << "[spot_checks]\n";
  out << "count = " << rep.spot_checks.size() << '\n';
  for (const auto& c : rep.spot_checks)
    out << "pair = " << c.source.index << ' ' << c.target.index << ' ' << format_double(c.residual) << '\n';

  out << "[nodes]\n";
  for (std::size_t i = 0; i < n; ++i)
    out << "node = " << i << ' ' << rep.shell[i] << ' ' << (rep.accepted[i] ? 1 : 0) << ' '
        << format_double(rep.node_residuals[i]) << '\n';

  out << "[gauge]\n";
  detail::write_gauge_body(out, rep.gauge);
  out << "end\n";
  return out.str();
}

/// Report of the `connection` command: config and connection sections only.
inline std::string format_connection_report(const ConfigEntries& config, const ConnectionSummary& connection) {
  std::ostringstream out;
  out << "matgroupoid-report 1\n[config]\n";
  for (const auto& [k, v] : config) out << k << " = " << v << '\n';
  detail::write_connection(out, connection);
  out << "end\n";
  return out.str();
}

inline std::string format_gauge(const GaugeField& gauge) {
  std::ostringstream out;
  out << "matgroupoid-gauge 1\n";
  detail::write_gauge_body(out, gauge);
  out << "end\n";
  return out.str();
}

/// Reads a gauge file or the [gauge] section of a report.
inline GaugeField parse_gauge(const std::string& text) {
  std::istringstream in(text);
  LineReader r(in);
  std::string first;
  if (!r.next(first)) throw ParseError(r.line(), "empty file");
  const auto head = split_ws(first);
  const bool is_report = head.size() == 2 && head[0] == "matgroupoid-report";
  if (!(head.size() == 2 && (head[0] == "matgroupoid-gauge" || is_report)))
    throw ParseError(r.line(), "expected header 'matgroupoid-gauge 1' or 'matgroupoid-report 1'");
  if (head[1] != "1") throw ParseError(r.line(), "unsupported format version " + head[1]);
  if (is_report)
    for (;;)
      if (r.require("'[gauge]' section") == "[gauge]") break;

  BodyGrid grid;
  bool have_dims = false, have_spacing = false;
  std::vector<std::pair<std::size_t, Mat3>> entries;
  for (;;) {
    const auto line = r.require("'end'");
    if (line == "end") break;
    const auto [key, value] = split_key_value(line, r.line());
    const auto toks = split_ws(value);
    auto expect = [&](std::size_t k) {
      if (toks.size() != k) throw ParseError(r.line(), key + " expects " + std::to_string(k) + " values");
    };
    if (key == "grid.dims") {
      expect(3);
      for (int a = 0; a < 3; ++a) grid.dims[a] = parse_int<std::size_t>(toks[a], r.line());
      have_dims = true;
    } else if (key == "grid.spacing") {
      expect(3);
      for (int a = 0; a < 3; ++a) grid.spacing[a] = parse_double(toks[a], r.line());
      have_spacing = true;
    } else if (key == "grid.origin") {
      expect(3);
      for (int a = 0; a < 3; ++a) grid.origin[a] = parse_double(toks[a], r.line());
    } else if (key == "continuity_defect") {
      expect(1);
    } else if (key == "p") {
      expect(10);
      std::array<double, 9> v{};
      for (int i = 0; i < 9; ++i) v[i] = parse_double(toks[i + 1], r.line());
      entries.emplace_back(parse_int<std::size_t>(toks[0], r.line()), unflatten(v));
    } else {
      throw ParseError(r.line(), "unknown key '" + key + "'");
    }
  }
  if (!have_dims || !have_spacing) throw Error(ErrorKind::ValidationError, "gauge is missing grid.dims or grid.spacing");
  grid.validate();
  if (entries.size() != grid.num_nodes())
    throw Error(ErrorKind::ValidationError, "gauge lists " + std::to_string(entries.size()) + " nodes, grid has " +
                                                std::to_string(grid.num_nodes()));
  GridMat3Field p(grid, Mat3::Identity());
  std::vector<unsigned char> seen(grid.num_nodes(), 0);
  for (const auto& [idx, m] : entries) {
    if (idx >= grid.num_nodes() || seen[idx]) throw Error(ErrorKind::ValidationError, "gauge node index repeated or out of range");
    seen[idx] = 1;
    p.values[idx] = m;
  }
  return make_gauge(std::move(p));
}

inline GaugeField load_gauge(const std::string& path) { return parse_gauge(read_file(path)); }

/// Flat view of a report: "section.key" -> values in file order. Used by
/// tests and scripts that check individual fields.
class ReportView {
 public:
  explicit ReportView(const std::string& text) {
    std::istringstream in(text);
    LineReader r(in);
    check_header(r, "matgroupoid-report");
    std::string section, line;
    while (r.next(line)) {
      if (line == "end") return;
      if (line.front() == '[' && line.back() == ']') {
        section = line.substr(1, line.size() - 2);
        continue;
      }
      const auto [k, v] = split_key_value(line, r.line());
      values_[section + "." + k].push_back(v);
    }
    throw ParseError(r.line(), "unexpected end of file, expected 'end'");
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  const std::string& get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw Error(ErrorKind::ValidationError, "report has no field '" + key + "'");
    return it->second.front();
  }

  double number(const std::string& key) const { return parse_double(get(key), 0); }

  const std::vector<std::string>& all(const std::string& key) const {
    static const std::vector<std::string> empty;
    const auto it = values_.find(key);
    return it == values_.end() ? empty : it->second;
  }

 private:
  std::map<std::string, std::vector<std::string>> values_;
};

}  // namespace matgroupoid::io
