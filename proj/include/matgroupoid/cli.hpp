#pragma once

// Command implementations behind tools/matgroupoid. Each run_* function
// takes a resolved RunConfig, writes its files, prints a short summary and
// returns the process exit status.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "matgroupoid/connection.hpp"
#include "matgroupoid/groupoid.hpp"
#include "matgroupoid/io/body_file.hpp"
#include "matgroupoid/io/field_dump.hpp"
#include "matgroupoid/io/groupoid_file.hpp"
#include "matgroupoid/io/report.hpp"
#include "matgroupoid/uniformity.hpp"

namespace matgroupoid::cli {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kNonUniform = 2;
inline constexpr int kIndeterminate = 3;
inline constexpr int kInvalidGroupoid = 4;
inline constexpr int kUsage = 10;
inline constexpr int kParse = 11;
inline constexpr int kValidation = 12;
inline constexpr int kIo = 13;
inline constexpr int kDiverged = 14;
inline constexpr int kNotUniform = 15;
inline constexpr int kOther = 19;
}  // namespace exit_code

inline int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::ParseError: return exit_code::kParse;
    case ErrorKind::ValidationError:
    case ErrorKind::BadDescriptor:
    case ErrorKind::InvalidF:
    case ErrorKind::InvalidP:
    case ErrorKind::GridTooSmall:
    case ErrorKind::SingularGauge: return exit_code::kValidation;
    case ErrorKind::IoError: return exit_code::kIo;
    case ErrorKind::SolverDiverged: return exit_code::kDiverged;
    case ErrorKind::NotUniform: return exit_code::kNotUniform;
    default: return exit_code::kOther;
  }
}

struct RunConfig {
  std::string command;
  std::string input;
  std::string output;
  std::string gauge;

  std::optional<double> eps_iso;
  std::optional<double> eps_reject;
  std::optional<double> tol_torsion;
  std::optional<std::uint64_t> seed;
  std::optional<int> starts;

  // synthesize
  std::string kind = "constant";
  std::string implant = "shear-x3";
  std::string archetype = "svk";
  double beta = 0.2;
  double rate = 0.5;
  std::size_t n = 11;
  std::optional<std::array<std::size_t, 3>> dims;
  double h = 0.1;
  std::uint64_t stiffness_seed = 7;
};

inline UniformityOptions uniformity_options(const RunConfig& cfg) {
  UniformityOptions o;
  if (cfg.eps_iso) o.solver.eps_iso = *cfg.eps_iso;
  if (cfg.seed) o.solver.seed = *cfg.seed;
  if (cfg.starts) o.solver.starts = *cfg.starts;
  if (cfg.eps_reject) o.eps_reject = *cfg.eps_reject;
  o.solver.validate();
  if (!(o.eps_reject > o.solver.eps_iso))
    throw Error(ErrorKind::ValidationError, "eps_reject must exceed eps_iso");
  return o;
}

inline io::ConfigEntries resolved_config(const RunConfig& cfg, const UniformityOptions& o, NodeId archetype,
                                         double tol_torsion, const ProbeSet& probes, std::uint64_t probe_seed) {
  using io::format_double;
  const auto& s = o.solver;
  return {
      {"command", cfg.command},
      {"input", cfg.input},
      {"eps_iso", format_double(s.eps_iso)},
      {"eps_reject", format_double(o.eps_reject)},
      {"tol_torsion", format_double(tol_torsion)},
      {"seed", std::to_string(s.seed)},
      {"starts", std::to_string(s.starts)},
      {"max_iters", std::to_string(s.max_iters)},
      {"parameterization", to_string(s.parameterization)},
      {"det_barrier", format_double(s.det_barrier)},
      {"start_spread", format_double(s.start_spread)},
      {"cluster_radius", format_double(s.cluster_radius)},
      {"eps_rank", format_double(s.eps_rank)},
      {"eps_group", format_double(s.eps_group)},
      {"spot_checks", std::to_string(o.spot_checks)},
      {"archetype", std::to_string(archetype.index)},
      {"smooth", o.smooth ? "true" : "false"},
      {"probe_seed", std::to_string(probe_seed)},
      {"probe_count", std::to_string(probes.gradients.size())},
      {"scheme", to_string(ConnectionOptions{}.scheme)},
  };
}

inline std::filesystem::path prepare_out_dir(const std::string& dir) {
  if (dir.empty()) throw Error(ErrorKind::ValidationError, "--out is required");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create " + dir + ": " + ec.message());
  return dir;
}

inline bool connection_possible(const BodyGrid& g) { return g.dims[0] >= 3 && g.dims[1] >= 3 && g.dims[2] >= 3; }

struct ConnectionRun {
  ChristoffelField gamma;
  TorsionField torsion;
  io::ConnectionSummary summary;
};

inline ConnectionRun analyze_connection(const GaugeField& gauge, const SymmetryGroupEstimate& symmetry, double tol) {
  ConnectionRun r;
  r.gamma = material_connection(gauge);
  r.torsion = torsion(r.gamma);
  const auto verdict = homogeneity_verdict(r.torsion, symmetry, tol);
  double scale = 1.0;
  for (const auto& node : r.gamma.values)
    for (double v : node) scale = std::max(scale, std::abs(v));
  const bool invariant = right_invariance_check(r.gamma, gauge.p, symmetry, 1e-9 * scale);
  r.summary = io::summarize_connection(r.gamma, r.torsion, verdict, tol, invariant);
  return r;
}

inline int run_analyze(const RunConfig& cfg, std::ostream& out = std::cout) {
  const auto body = io::load_body(cfg.input);
  const auto opts = uniformity_options(cfg);
  const auto dir = prepare_out_dir(cfg.output);
  const auto& grid = body.model.grid();
  const double tol = cfg.tol_torsion.value_or(default_torsion_tolerance(grid));
  if (!(tol > 0.0)) throw Error(ErrorKind::ValidationError, "tol_torsion must be positive");
  const std::uint64_t probe_seed = 20240601;
  const auto probes = ProbeSet::standard(probe_seed);

  const auto rep = assemble_material_groupoid(body.model, opts, probes);
  std::optional<io::ConnectionSummary> summary;
  if (rep.verdict == Verdict::Uniform && connection_possible(grid)) {
    const auto conn = analyze_connection(rep.gauge, rep.symmetry, tol);
    summary = conn.summary;
    io::write_file((dir / "christoffel.txt").string(), io::format_christoffel_dump(conn.gamma));
    io::write_file((dir / "torsion.txt").string(), io::format_torsion_dump(conn.torsion, conn.gamma));
  }
  const auto config = resolved_config(cfg, opts, rep.archetype, tol, probes, probe_seed);
  io::write_file((dir / "report.txt").string(), io::format_report(config, rep, summary));

  out << "verdict: " << to_string(rep.verdict) << '\n';
  if (summary) {
    out << "homogeneity: " << to_string(summary->homogeneity) << '\n';
    out << "torsion max: " << io::format_double(summary->max_abs) << '\n';
  }
  if (!rep.failures.empty()) out << "failures: " << rep.failures.size() << '\n';
  out << "report: " << (dir / "report.txt").string() << '\n';
  switch (rep.verdict) {
    case Verdict::Uniform: return exit_code::kOk;
    case Verdict::NonUniform: return exit_code::kNonUniform;
    case Verdict::Indeterminate: return exit_code::kIndeterminate;
  }
  return exit_code::kOther;
}

inline int run_connection(const RunConfig& cfg, std::ostream& out = std::cout) {
  const auto body = io::load_body(cfg.input);
  if (cfg.gauge.empty()) throw Error(ErrorKind::ValidationError, "--gauge is required");
  const auto gauge = io::load_gauge(cfg.gauge);
  const auto& grid = body.model.grid();
  if (gauge.p.grid.dims != grid.dims || gauge.p.grid.spacing != grid.spacing || gauge.p.grid.origin != grid.origin)
    throw Error(ErrorKind::ValidationError, "gauge grid does not match the body grid");
  const auto opts = uniformity_options(cfg);
  const auto dir = prepare_out_dir(cfg.output);
  const double tol = cfg.tol_torsion.value_or(default_torsion_tolerance(grid));
  if (!(tol > 0.0)) throw Error(ErrorKind::ValidationError, "tol_torsion must be positive");
  const std::uint64_t probe_seed = 20240601;
  const auto probes = ProbeSet::standard(probe_seed);
  const NodeId archetype = grid.center();
  const auto symmetry = symmetry_group_estimate(body.model, archetype, opts.solver, probes);
  const auto conn = analyze_connection(gauge, symmetry, tol);

  auto config = resolved_config(cfg, opts, archetype, tol, probes, probe_seed);
  config.insert(config.begin() + 2, {"gauge", cfg.gauge});
  io::write_file((dir / "report.txt").string(), io::format_connection_report(config, conn.summary));
  io::write_file((dir / "christoffel.txt").string(), io::format_christoffel_dump(conn.gamma));
  io::write_file((dir / "torsion.txt").string(), io::format_torsion_dump(conn.torsion, conn.gamma));
  out << "homogeneity: " << to_string(conn.summary.homogeneity) << '\n';
  out << "torsion max: " << io::format_double(conn.summary.max_abs) << '\n';
  out << "report: " << (dir / "report.txt").string() << '\n';
  return exit_code::kOk;
}

/// Builds a test body from a named family and records its expected analysis
/// outcome in the truth block.
inline io::BodySpec synthesize_body(const RunConfig& cfg) {
  using io::format_double;
  io::BodySpec body;
  if (!(cfg.h > 0.0)) throw Error(ErrorKind::BadDescriptor, "--h must be positive");
  const auto dims = cfg.dims.value_or(std::array<std::size_t, 3>{cfg.n, cfg.n, cfg.n});
  for (auto d : dims)
    if (d < 1) throw Error(ErrorKind::BadDescriptor, "grid dimensions must be positive");
  body.grid = BodyGrid{dims, {cfg.h, cfg.h, cfg.h}, {0.0, 0.0, 0.0}};
  auto& d = body.model;
  auto& t = body.truth;
  const auto svk = [&] { return generic_stiffness(cfg.stiffness_seed); };
  const auto center = body.grid.center();

  if (cfg.kind == "constant") {
    d.kind = ModelKind::SvkAnisotropic;
    d.stiffness = svk();
    t = {{"verdict", "uniform"}, {"gauge", "identity"}, {"homogeneity", "homogeneous"}, {"torsion.max_abs", "0"}};
  } else if (cfg.kind == "isotropic") {
    d.kind = ModelKind::NeoHookeanIsotropic;
    d.mu = ModulusProfile::constant(1.0);
    t = {{"verdict", "uniform"}, {"continuous_dimension", "3"}};
  } else if (cfg.kind == "implanted") {
    d.kind = ModelKind::ImplantedArchetype;
    if (cfg.archetype == "svk") {
      d.archetype_kind = ModelKind::SvkAnisotropic;
      d.stiffness = svk();
    } else if (cfg.archetype == "neo-hookean") {
      d.archetype_kind = ModelKind::NeoHookeanIsotropic;
      d.mu = ModulusProfile::constant(1.0);
    } else {
      throw Error(ErrorKind::BadDescriptor, "--archetype must be svk or neo-hookean");
    }
    const auto k = io::detail::implant_from_name(cfg.implant);
    if (!k || *k == ImplantKind::Values) throw Error(ErrorKind::BadDescriptor, "unknown --implant '" + cfg.implant + "'");
    d.implant.kind = *k;
    d.implant.beta = *k == ImplantKind::Identity ? 0.0 : cfg.beta;
    const double t123 = *k == ImplantKind::ShearX3 ? d.implant.beta : 0.0;
    t = {{"verdict", "uniform"}, {"gauge", "implant P(X) P(archetype)^-1"}};
    t.emplace_back("implant", cfg.implant + " " + format_double(d.implant.beta));
    if (d.archetype_kind == ModelKind::SvkAnisotropic)
      t.emplace_back("homogeneity", t123 != 0.0 ? "defective" : "homogeneous");
    t.emplace_back("torsion.T123", format_double(t123));
    t.emplace_back("torsion.max_abs", format_double(std::abs(t123)));
  } else if (cfg.kind == "fgm") {
    if (!(cfg.rate != 0.0)) throw Error(ErrorKind::BadDescriptor, "--rate must be nonzero");
    d.kind = ModelKind::FgmExponential;
    d.mu = ModulusProfile::exponential(1.0, cfg.rate, 0);
    const auto near = body.grid.node(0, dims[1] / 2, dims[2] / 2);
    const auto far = body.grid.node(dims[0] - 1, dims[1] / 2, dims[2] / 2);
    t = {{"verdict", "non_uniform"},
         {"witness.source", std::to_string(near.index)},
         {"witness.target", std::to_string(far.index)},
         {"witness.min_residual", "0.05"}};
  } else if (cfg.kind == "linear") {
    d.kind = ModelKind::NeoHookeanIsotropic;
    d.mu = ModulusProfile::linear(1.0, cfg.rate, 0);
    t = {{"verdict", "non_uniform"}};
  } else {
    throw Error(ErrorKind::BadDescriptor, "unknown --kind '" + cfg.kind + "'");
  }
  t.emplace_back("archetype", std::to_string(center.index));
  MaterialModel check(d, body.grid);
  return body;
}

inline int run_synthesize(const RunConfig& cfg, std::ostream& out = std::cout) {
  if (cfg.output.empty()) throw Error(ErrorKind::ValidationError, "--out is required");
  const auto body = synthesize_body(cfg);
  io::write_file(cfg.output, io::save_body(body));
  out << "wrote " << cfg.output << " (" << body.grid.num_nodes() << " nodes, " << to_string(body.model.kind) << ")\n";
  return exit_code::kOk;
}

inline int run_validate_groupoid(const RunConfig& cfg, std::ostream& out = std::cout) {
  const auto g = io::load_groupoid(cfg.input);
  const auto report = g.validate_axioms();
  out << "objects: " << g.num_objects() << '\n';
  out << "arrows: " << g.num_arrows() << '\n';
  out << "valid: " << (report.ok() ? "true" : "false") << '\n';
  for (const auto& v : report.violations) {
    out << "violation: " << to_string(v.kind) << ':';
    for (const auto& [a, b] : v.entries) out << " (" << a.value << ',' << b.value << ')';
    out << ' ' << v.message << '\n';
  }
  const auto orbits = g.orbit_decomposition();
  out << "orbits: " << orbits.blocks.size() << '\n';
  out << "transitive: " << (orbits.is_transitive ? "true" : "false") << '\n';
  if (!report.ok()) return exit_code::kInvalidGroupoid;
  for (std::size_t i = 0; i < orbits.blocks.size(); ++i) {
    const auto& block = orbits.blocks[i];
    out << "orbit " << i << ": objects";
    for (auto m : block) out << ' ' << m.index;
    out << "; vertex group order " << g.vertex_group(block.front()).order() << '\n';
  }
  return exit_code::kOk;
}

/// Dispatches by command name and maps library errors to exit codes.
inline int run(const RunConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  try {
    if (cfg.command == "analyze") return run_analyze(cfg, out);
    if (cfg.command == "connection") return run_connection(cfg, out);
    if (cfg.command == "synthesize") return run_synthesize(cfg, out);
    if (cfg.command == "validate-groupoid") return run_validate_groupoid(cfg, out);
    err << "error: unknown command '" << cfg.command << "'\n";
    return exit_code::kUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::kParse;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::kOther;
  }
}

}  // namespace matgroupoid::cli
