#include <CLI11.hpp>

#include "matgroupoid/cli.hpp"

int main(int argc, char** argv) {
  using matgroupoid::cli::RunConfig;
  RunConfig cfg;
  CLI::App app{"Material uniformity and homogeneity analysis on discretized bodies"};
  app.require_subcommand(1);

  auto add_solver_flags = [&](CLI::App* sub) {
    sub->add_option("--eps-iso", cfg.eps_iso, "Acceptance threshold for material isomorphisms");
    sub->add_option("--eps-reject", cfg.eps_reject, "Residual above which a pair is reported non-isomorphic");
    sub->add_option("--tol-torsion", cfg.tol_torsion, "Homogeneity tolerance on max |T| (default 10 h^2)");
    sub->add_option("--seed", cfg.seed, "Seed for the multi-start solver and spot checks");
    sub->add_option("--starts", cfg.starts, "Solver starts per pair");
  };

  auto* analyze = app.add_subcommand("analyze", "Decide uniformity and homogeneity of a body");
  analyze->add_option("--input", cfg.input, "Body file")->required();
  analyze->add_option("--out", cfg.output, "Output directory")->required();
  add_solver_flags(analyze);

  auto* connection = app.add_subcommand("connection", "Christoffel and torsion fields from a given gauge");
  connection->add_option("--input", cfg.input, "Body file")->required();
  connection->add_option("--gauge", cfg.gauge, "Gauge file or analyze report")->required();
  connection->add_option("--out", cfg.output, "Output directory")->required();
  add_solver_flags(connection);

  auto* synthesize = app.add_subcommand("synthesize", "Write a test body with recorded ground truth");
  synthesize->set_help_flag("--help", "Print this help message and exit");
  synthesize->add_option("--kind", cfg.kind, "constant | isotropic | implanted | fgm | linear");
  synthesize->add_option("--implant", cfg.implant, "identity | diag-x1 | shear-x3 | exp-diag-x1 | integrable-x2");
  synthesize->add_option("--archetype", cfg.archetype, "svk | neo-hookean");
  synthesize->add_option("--beta", cfg.beta, "Implant strength");
  synthesize->add_option("--rate", cfg.rate, "Modulus gradient for fgm and linear bodies");
  synthesize->add_option("--n", cfg.n, "Nodes per axis");
  synthesize->add_option("--dims", cfg.dims, "Nodes along each axis, overrides --n");
  synthesize->add_option("--h", cfg.h, "Grid spacing");
  synthesize->add_option("--stiffness-seed", cfg.stiffness_seed, "Seed of the anisotropic archetype stiffness");
  synthesize->add_option("--out", cfg.output, "Body file to write")->required();

  auto* validate = app.add_subcommand("validate-groupoid", "Check the groupoid axioms of an interchange file");
  validate->add_option("--input", cfg.input, "Groupoid file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : matgroupoid::cli::exit_code::kUsage;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  return matgroupoid::cli::run(cfg);
}
