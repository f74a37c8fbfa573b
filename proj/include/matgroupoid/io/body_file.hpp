#pragma once

// Body specification files: grid, constitutive model, optional ground-truth
// sidecar. See docs/FORMATS.md.

#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "matgroupoid/constitutive.hpp"
#include "matgroupoid/io/text.hpp"

namespace matgroupoid::io {

struct BodySpec {
  BodyGrid grid;
  ModelDescriptor model;
  /// Ground truth recorded by the synthesizer; ordered key/value pairs.
  std::vector<std::pair<std::string, std::string>> truth;

  friend bool operator==(const BodySpec&, const BodySpec&) = default;

  std::optional<std::string> truth_value(const std::string& key) const {
    for (const auto& [k, v] : truth)
      if (k == key) return v;
    return std::nullopt;
  }
};

struct LoadedBody {
  BodySpec spec;
  MaterialModel model;
};

namespace detail {

inline const char* implant_name(ImplantKind k) {
  switch (k) {
    case ImplantKind::Identity: return "identity";
    case ImplantKind::DiagX1: return "diag-x1";
    case ImplantKind::ShearX3: return "shear-x3";
    case ImplantKind::ExpDiagX1: return "exp-diag-x1";
    case ImplantKind::IntegrableX2: return "integrable-x2";
    case ImplantKind::Values: return "values";
  }
  return "?";
}

inline std::optional<ImplantKind> implant_from_name(std::string_view s) {
  for (auto k : {ImplantKind::Identity, ImplantKind::DiagX1, ImplantKind::ShearX3, ImplantKind::ExpDiagX1,
                 ImplantKind::IntegrableX2, ImplantKind::Values})
    if (s == implant_name(k)) return k;
  return std::nullopt;
}

inline const char* stiffness_name(StiffnessKind k) {
  switch (k) {
    case StiffnessKind::Isotropic: return "isotropic";
    case StiffnessKind::TransverselyIsotropic: return "transversely_isotropic";
    case StiffnessKind::Generic: return "generic";
    case StiffnessKind::Monoclinic: return "monoclinic";
    case StiffnessKind::Explicit: return "values";
  }
  return "?";
}

inline std::optional<ModelKind> model_kind_from_name(std::string_view s) {
  for (auto k : {ModelKind::NeoHookeanIsotropic, ModelKind::SvkAnisotropic, ModelKind::ImplantedArchetype,
                 ModelKind::FgmExponential})
    if (s == to_string(k)) return k;
  return std::nullopt;
}

inline bool uses_mu(const ModelDescriptor& d) {
  return d.kind == ModelKind::NeoHookeanIsotropic || d.kind == ModelKind::FgmExponential ||
         (d.kind == ModelKind::ImplantedArchetype && d.archetype_kind == ModelKind::NeoHookeanIsotropic);
}

inline bool uses_stiffness(const ModelDescriptor& d) {
  return d.kind == ModelKind::SvkAnisotropic ||
         (d.kind == ModelKind::ImplantedArchetype && d.archetype_kind == ModelKind::SvkAnisotropic);
}

}  // namespace detail

/// Resets descriptor fields the model kind does not read, so equality
/// compares only what a body file can carry.
inline ModelDescriptor canonical(ModelDescriptor d) {
  if (!detail::uses_mu(d)) d.mu = ModulusProfile::constant(1.0);
  if (!detail::uses_stiffness(d)) d.stiffness = StiffnessSpec{};
  auto& s = d.stiffness;
  const StiffnessSpec blank;
  if (s.kind == StiffnessKind::Explicit) {
    s.lambda = blank.lambda;
    s.mu = blank.mu;
  } else {
    s.values.clear();
  }
  if (s.kind != StiffnessKind::TransverselyIsotropic) s.fiber = blank.fiber;
  if (s.kind != StiffnessKind::Generic && s.kind != StiffnessKind::Monoclinic) {
    s.amplitude = blank.amplitude;
    s.seed = blank.seed;
  }
  if (d.implant.kind != ImplantKind::Values) d.implant.values.clear();
  if (d.implant.kind == ImplantKind::Identity || d.implant.kind == ImplantKind::Values) d.implant.beta = 0.0;
  if (d.mu.shape != ModulusProfile::Shape::Values) d.mu.values.clear();
  if (d.mu.shape == ModulusProfile::Shape::Values) d.mu.a = 1.0;
  if (d.mu.shape == ModulusProfile::Shape::Constant || d.mu.shape == ModulusProfile::Shape::Values) {
    d.mu.b = 0.0;
    d.mu.axis = 0;
  }
  if (d.kind != ModelKind::ImplantedArchetype) {
    d.archetype_kind = ModelKind::SvkAnisotropic;
    d.implant = ImplantSpec{};
  }
  return d;
}

inline std::string save_body(const BodySpec& body) {
  const auto& g = body.grid;
  const auto d = canonical(body.model);
  std::ostringstream out;
  out << "matgroupoid-body 1\n";
  out << "grid.dims = " << g.dims[0] << ' ' << g.dims[1] << ' ' << g.dims[2] << '\n';
  out << "grid.spacing = " << join_doubles(g.spacing) << '\n';
  out << "grid.origin = " << join_doubles(g.origin) << '\n';
  out << "model.kind = " << to_string(d.kind) << '\n';
  if (d.kind == ModelKind::ImplantedArchetype) out << "archetype.kind = " << to_string(d.archetype_kind) << '\n';
  if (detail::uses_mu(d)) {
    const auto& m = d.mu;
    switch (m.shape) {
      case ModulusProfile::Shape::Constant: out << "mu = constant " << format_double(m.a) << '\n'; break;
      case ModulusProfile::Shape::Linear:
        out << "mu = linear " << format_double(m.a) << ' ' << format_double(m.b) << ' ' << m.axis << '\n';
        break;
      case ModulusProfile::Shape::Exponential:
        out << "mu = exponential " << format_double(m.a) << ' ' << format_double(m.b) << ' ' << m.axis << '\n';
        break;
      case ModulusProfile::Shape::Values:
        out << "mu = values\nbegin mu.values\n";
        for (double v : m.values) out << format_double(v) << '\n';
        out << "end mu.values\n";
        break;
    }
  }
  if (detail::uses_stiffness(d)) {
    const auto& s = d.stiffness;
    out << "stiffness = " << detail::stiffness_name(s.kind);
    switch (s.kind) {
      case StiffnessKind::Isotropic: out << ' ' << format_double(s.lambda) << ' ' << format_double(s.mu) << '\n'; break;
      case StiffnessKind::TransverselyIsotropic:
        out << ' ' << format_double(s.lambda) << ' ' << format_double(s.mu) << ' ' << format_double(s.fiber) << '\n';
        break;
      case StiffnessKind::Generic:
      case StiffnessKind::Monoclinic:
        out << ' ' << format_double(s.lambda) << ' ' << format_double(s.mu) << ' ' << format_double(s.amplitude) << ' '
            << s.seed << '\n';
        break;
      case StiffnessKind::Explicit: {
        out << "\nbegin stiffness.values\n";
        for (std::size_t r = 0; r < 9; ++r) {
          for (std::size_t c = 0; c < 9; ++c) out << (c ? " " : "") << format_double(s.values.at(9 * r + c));
          out << '\n';
        }
        out << "end stiffness.values\n";
        break;
      }
    }
  }
  if (d.kind == ModelKind::ImplantedArchetype) {
    const auto& im = d.implant;
    out << "implant = " << detail::implant_name(im.kind);
    if (im.kind == ImplantKind::Values) {
      out << "\nbegin implant.values\n";
      for (const auto& p : im.values) out << join_doubles(p) << '\n';
      out << "end implant.values\n";
    } else if (im.kind != ImplantKind::Identity) {
      out << ' ' << format_double(im.beta) << '\n';
    } else {
      out << '\n';
    }
  }
  if (!body.truth.empty()) {
    out << "begin truth\n";
    for (const auto& [k, v] : body.truth) out << k << " = " << v << '\n';
    out << "end truth\n";
  }
  out << "end\n";
  return out.str();
}

inline BodySpec parse_body(std::istream& in) {
  LineReader r(in);
  check_header(r, "matgroupoid-body");
  BodySpec body;
  ModelDescriptor& d = body.model;
  bool have_dims = false, have_spacing = false, have_kind = false, have_arch = false, have_mu = false,
       have_stiffness = false, have_implant = false;
  bool mu_values = false, stiffness_values = false, implant_values = false;
  bool got_mu_block = false, got_stiffness_block = false, got_implant_block = false;

  auto expect_count = [&](const std::vector<std::string>& toks, std::size_t n, const std::string& key) {
    if (toks.size() != n)
      throw ParseError(r.line(), key + " expects " + std::to_string(n) + " values, got " + std::to_string(toks.size()));
  };

  auto read_block = [&](const std::string& name, auto&& on_line) {
    for (;;) {
      const auto line = r.require("'end " + name + "'");
      if (line == "end " + name) return;
      on_line(line);
    }
  };

  for (;;) {
    const auto line = r.require("'end'");
    if (line == "end") break;
    if (line.rfind("begin ", 0) == 0) {
      const std::string name(trim(std::string_view(line).substr(6)));
      if (name == "truth") {
        read_block(name, [&](const std::string& l) { body.truth.push_back(split_key_value(l, r.line())); });
      } else if (name == "mu.values") {
        got_mu_block = true;
        read_block(name, [&](const std::string& l) { d.mu.values.push_back(parse_double(l, r.line())); });
      } else if (name == "stiffness.values") {
        got_stiffness_block = true;
        read_block(name, [&](const std::string& l) {
          for (const auto& t : split_ws(l)) d.stiffness.values.push_back(parse_double(t, r.line()));
        });
      } else if (name == "implant.values") {
        got_implant_block = true;
        read_block(name, [&](const std::string& l) {
          const auto toks = split_ws(l);
          expect_count(toks, 9, "implant.values row");
          std::array<double, 9> p{};
          for (int i = 0; i < 9; ++i) p[i] = parse_double(toks[i], r.line());
          d.implant.values.push_back(p);
        });
      } else {
        throw ParseError(r.line(), "unknown block '" + name + "'");
      }
      continue;
    }
    const auto [key, value] = split_key_value(line, r.line());
    const auto toks = split_ws(value);
    if (key == "grid.dims") {
      expect_count(toks, 3, key);
      for (int a = 0; a < 3; ++a) body.grid.dims[a] = parse_int<std::size_t>(toks[a], r.line());
      have_dims = true;
    } else if (key == "grid.spacing") {
      expect_count(toks, 3, key);
      for (int a = 0; a < 3; ++a) body.grid.spacing[a] = parse_double(toks[a], r.line());
      have_spacing = true;
    } else if (key == "grid.origin") {
      expect_count(toks, 3, key);
      for (int a = 0; a < 3; ++a) body.grid.origin[a] = parse_double(toks[a], r.line());
    } else if (key == "model.kind" || key == "archetype.kind") {
      expect_count(toks, 1, key);
      const auto k = detail::model_kind_from_name(toks[0]);
      if (!k) throw Error(ErrorKind::ValidationError, key + ": unknown kind '" + toks[0] + "'");
      (key == "model.kind" ? d.kind : d.archetype_kind) = *k;
      (key == "model.kind" ? have_kind : have_arch) = true;
    } else if (key == "mu") {
      if (toks.empty()) throw ParseError(r.line(), "mu needs a profile");
      have_mu = true;
      if (toks[0] == "constant") {
        expect_count(toks, 2, key);
        d.mu = ModulusProfile::constant(parse_double(toks[1], r.line()));
      } else if (toks[0] == "linear" || toks[0] == "exponential") {
        expect_count(toks, 4, key);
        const double a = parse_double(toks[1], r.line()), b = parse_double(toks[2], r.line());
        const int axis = parse_int<int>(toks[3], r.line());
        d.mu = toks[0] == "linear" ? ModulusProfile::linear(a, b, axis) : ModulusProfile::exponential(a, b, axis);
      } else if (toks[0] == "values") {
        expect_count(toks, 1, key);
        d.mu.shape = ModulusProfile::Shape::Values;
        mu_values = true;
      } else {
        throw Error(ErrorKind::ValidationError, "mu: unknown profile '" + toks[0] + "'");
      }
    } else if (key == "stiffness") {
      if (toks.empty()) throw ParseError(r.line(), "stiffness needs a kind");
      have_stiffness = true;
      auto& s = d.stiffness;
      if (toks[0] == "isotropic") {
        expect_count(toks, 3, key);
        s.kind = StiffnessKind::Isotropic;
      } else if (toks[0] == "transversely_isotropic") {
        expect_count(toks, 4, key);
        s.kind = StiffnessKind::TransverselyIsotropic;
        s.fiber = parse_double(toks[3], r.line());
      } else if (toks[0] == "generic" || toks[0] == "monoclinic") {
        expect_count(toks, 5, key);
        s.kind = toks[0] == "generic" ? StiffnessKind::Generic : StiffnessKind::Monoclinic;
        s.amplitude = parse_double(toks[3], r.line());
        s.seed = parse_int<std::uint64_t>(toks[4], r.line());
      } else if (toks[0] == "values") {
        expect_count(toks, 1, key);
        s.kind = StiffnessKind::Explicit;
        stiffness_values = true;
      } else {
        throw Error(ErrorKind::ValidationError, "stiffness: unknown kind '" + toks[0] + "'");
      }
      if (s.kind != StiffnessKind::Explicit) {
        s.lambda = parse_double(toks[1], r.line());
        s.mu = parse_double(toks[2], r.line());
      }
    } else if (key == "implant") {
      if (toks.empty()) throw ParseError(r.line(), "implant needs a kind");
      const auto k = detail::implant_from_name(toks[0]);
      if (!k) throw Error(ErrorKind::ValidationError, "implant: unknown kind '" + toks[0] + "'");
      have_implant = true;
      d.implant.kind = *k;
      if (*k == ImplantKind::Values || *k == ImplantKind::Identity) {
        expect_count(toks, 1, key);
        implant_values = *k == ImplantKind::Values;
      } else {
        expect_count(toks, 2, key);
        d.implant.beta = parse_double(toks[1], r.line());
      }
    } else {
      throw ParseError(r.line(), "unknown key '" + key + "'");
    }
  }

  auto missing = [](const std::string& key) { return Error(ErrorKind::ValidationError, "missing key '" + key + "'"); };
  if (!have_dims) throw missing("grid.dims");
  if (!have_spacing) throw missing("grid.spacing");
  if (!have_kind) throw missing("model.kind");
  if (d.kind == ModelKind::ImplantedArchetype) {
    if (!have_arch) throw missing("archetype.kind");
    if (!have_implant) throw missing("implant");
  }
  if (detail::uses_mu(d) && !have_mu) throw missing("mu");
  if (detail::uses_stiffness(d) && !have_stiffness) throw missing("stiffness");
  if (mu_values != got_mu_block) throw missing(mu_values ? "mu.values block" : "mu = values");
  if (stiffness_values != got_stiffness_block)
    throw missing(stiffness_values ? "stiffness.values block" : "stiffness = values");
  if (implant_values != got_implant_block) throw missing(implant_values ? "implant.values block" : "implant = values");
  return body;
}

/// Parses and validates: the model invariants are checked by building it.
inline LoadedBody load_body_text(const std::string& text) {
  std::istringstream in(text);
  auto spec = parse_body(in);
  spec.grid.validate();
  if (detail::uses_mu(spec.model) && spec.model.mu.shape != ModulusProfile::Shape::Values &&
      spec.model.mu.shape != ModulusProfile::Shape::Linear && !(spec.model.mu.a > 0.0))
    throw Error(ErrorKind::ValidationError, "mu: must be positive, got " + format_double(spec.model.mu.a));
  MaterialModel model(spec.model, spec.grid);
  return LoadedBody{std::move(spec), std::move(model)};
}

inline LoadedBody load_body(const std::string& path) { return load_body_text(read_file(path)); }

}  // namespace matgroupoid::io
