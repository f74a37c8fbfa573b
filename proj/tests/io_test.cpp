#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <limits>

#include "matgroupoid/io/body_file.hpp"
#include "matgroupoid/io/field_dump.hpp"
#include "matgroupoid/io/groupoid_file.hpp"
#include "matgroupoid/io/report.hpp"
#include "test_support.hpp"

namespace mg = matgroupoid;
namespace io = matgroupoid::io;
using mg::BodyGrid;
using mg::Mat3;
using mg::ModelDescriptor;
using mg::ModelKind;
using mg::NodeId;

namespace {

using mg::testing::error_kind_of;

std::uint64_t bits(double v) {
  std::uint64_t b;
  std::memcpy(&b, &v, sizeof b);
  return b;
}

/// One body per format branch: every modulus profile, stiffness kind and
/// implant kind, values blocks included.
std::vector<io::BodySpec> body_specs() {
  const BodyGrid grid{{3, 2, 4}, {0.1, 1.0 / 3.0, 0.25}, {-0.5, 0.0, 1e-3}};
  std::vector<ModelDescriptor> d;
  d.push_back(mg::testing::neo_hookean(0.7));
  d.push_back(mg::testing::neo_hookean(1.0));
  d.back().mu = mg::ModulusProfile::linear(1.0, 0.3, 2);
  d.push_back(mg::testing::fgm(0.5));
  d.push_back(mg::testing::neo_hookean(1.0));
  d.back().mu.shape = mg::ModulusProfile::Shape::Values;
  d.back().mu.a = 9.0;  // ignored by a values profile
  for (std::size_t n = 0; n < grid.num_nodes(); ++n) d.back().mu.values.push_back(1.0 + std::sqrt(static_cast<double>(n)));
  d.push_back(mg::testing::svk(mg::generic_stiffness(11, 0.25)));
  auto mono = mg::generic_stiffness(3);
  mono.kind = mg::StiffnessKind::Monoclinic;
  d.push_back(mg::testing::svk(mono));
  mg::StiffnessSpec ti;
  ti.kind = mg::StiffnessKind::TransverselyIsotropic;
  ti.lambda = 0.6;
  ti.mu = 1.1;
  ti.fiber = 2.5;
  d.push_back(mg::testing::svk(ti));
  mg::StiffnessSpec ex;
  ex.kind = mg::StiffnessKind::Explicit;
  const auto c = mg::build_stiffness(mg::generic_stiffness(5));
  ex.values.assign(c.begin(), c.end());
  ex.lambda = ex.mu = 0.0;
  d.push_back(mg::testing::svk(ex));
  for (auto kind : {mg::ImplantKind::Identity, mg::ImplantKind::DiagX1, mg::ImplantKind::ShearX3,
                    mg::ImplantKind::ExpDiagX1, mg::ImplantKind::IntegrableX2})
    d.push_back(mg::testing::implanted(ModelKind::SvkAnisotropic, kind, kind == mg::ImplantKind::Identity ? 0.0 : 0.3));
  d.push_back(mg::testing::implanted(ModelKind::NeoHookeanIsotropic, mg::ImplantKind::ShearX3, -0.2));
  d.push_back(mg::testing::implanted(ModelKind::SvkAnisotropic, mg::ImplantKind::Values, 0.0));
  mg::Rng rng(2);
  for (std::size_t n = 0; n < grid.num_nodes(); ++n) d.back().implant.values.push_back(mg::flatten(mg::testing::random_near_identity(rng, 0.2, 0.5)));

  std::vector<io::BodySpec> out;
  for (const auto& m : d) out.push_back(io::BodySpec{grid, io::canonical(m), {}});
  out.back().truth = {{"verdict", "uniform"}, {"torsion.T123", "0.3"}, {"note", "free text = allowed"}};
  return out;
}

const char* kMinimalBody =
    "matgroupoid-body 1\n"
    "# a comment\n"
    "grid.dims = 3 3 3\n"
    "grid.spacing = 0.5 0.5 0.5\n"
    "model.kind = neo_hookean_isotropic\n"
    "mu = constant 1\n"
    "end\n";

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  EXPECT_NE(pos, std::string::npos) << from;
  return s.replace(pos, from.size(), to);
}

}  // namespace

TEST(TextFormat, DoublesRoundTripBitExactly) {
  mg::Rng rng(1);
  std::vector<double> values{0.1, 1.0 / 3.0, -2.5e-300, 1e308, std::numeric_limits<double>::denorm_min(), -0.0, 0.0};
  for (int i = 0; i < 2000; ++i) values.push_back(rng.normal() * std::pow(10.0, rng.uniform(-20.0, 20.0)));
  for (double v : values) ASSERT_EQ(bits(io::parse_double(io::format_double(v), 1)), bits(v)) << io::format_double(v);
  EXPECT_EQ(io::format_double(0.5), "0.5");
  EXPECT_TRUE(std::isinf(io::parse_double(io::format_double(INFINITY), 1)));
  EXPECT_EQ(error_kind_of([] { io::parse_double("1.5x", 4); }), mg::ErrorKind::ParseError);
}

TEST(BodyFile, RoundTripIsBitExact) {
  for (const auto& spec : body_specs()) {
    const auto text = io::save_body(spec);
    std::istringstream in(text);
    const auto back = io::parse_body(in);
    ASSERT_EQ(back, spec) << text;
    ASSERT_EQ(io::save_body(back), text);
    const auto loaded = io::load_body_text(text);
    EXPECT_EQ(loaded.model.descriptor(), spec.model);
  }
}

TEST(BodyFile, TruthSidecar) {
  const auto spec = body_specs().back();
  const auto loaded = io::load_body_text(io::save_body(spec));
  EXPECT_EQ(loaded.spec.truth_value("verdict"), "uniform");
  EXPECT_EQ(loaded.spec.truth_value("note"), "free text = allowed");
  EXPECT_FALSE(loaded.spec.truth_value("missing").has_value());
}

TEST(BodyFile, SavingDropsUnusedFields) {
  auto d = mg::testing::neo_hookean(2.0);
  d.stiffness = mg::generic_stiffness();
  d.implant = {mg::ImplantKind::ShearX3, 0.4, {}};
  const io::BodySpec spec{BodyGrid::cube(3, 0.5), d, {}};
  const auto text = io::save_body(spec);
  EXPECT_EQ(text.find("stiffness"), std::string::npos);
  EXPECT_EQ(text.find("implant"), std::string::npos);
  EXPECT_EQ(io::load_body_text(text).spec.model, io::canonical(d));
}

TEST(BodyFile, MinimalFileWithComments) {
  const auto body = io::load_body_text(kMinimalBody);
  EXPECT_EQ(body.spec.grid.num_nodes(), 27u);
  EXPECT_EQ(body.spec.grid.origin, (std::array<double, 3>{0.0, 0.0, 0.0}));
  EXPECT_EQ(body.model.kind(), ModelKind::NeoHookeanIsotropic);
}

TEST(BodyFile, NonPositiveModulusIsRejected) {
  try {
    io::load_body_text(replace(kMinimalBody, "mu = constant 1", "mu = constant -1"));
    FAIL();
  } catch (const mg::Error& e) {
    EXPECT_EQ(e.kind(), mg::ErrorKind::ValidationError);
    EXPECT_NE(std::string(e.what()).find("mu"), std::string::npos);
  }
  EXPECT_EQ(error_kind_of([] { io::load_body_text(replace(kMinimalBody, "mu = constant 1", "mu = constant 0")); }),
            mg::ErrorKind::ValidationError);
  EXPECT_EQ(error_kind_of([] { io::load_body_text(replace(kMinimalBody, "mu = constant 1", "mu = linear 0.5 -2 0")); }),
            mg::ErrorKind::ValidationError);
}

TEST(BodyFile, TruncationReportsTheLine) {
  const std::string text = kMinimalBody;
  const std::string cut = text.substr(0, text.find("end\n"));
  try {
    io::load_body_text(cut);
    FAIL();
  } catch (const mg::ParseError& e) {
    EXPECT_EQ(e.line(), 7u);
    EXPECT_NE(std::string(e.what()).find("line 7"), std::string::npos);
  }
  const auto block = io::save_body(body_specs()[3]);
  const auto cut_block = block.substr(0, block.find("end mu.values"));
  EXPECT_EQ(error_kind_of([&] { io::load_body_text(cut_block); }), mg::ErrorKind::ParseError);
}

TEST(BodyFile, StructuralErrors) {
  const std::string t = kMinimalBody;
  try {
    io::load_body_text(replace(t, "neo_hookean_isotropic", "rubber"));
    FAIL();
  } catch (const mg::Error& e) {
    EXPECT_EQ(e.kind(), mg::ErrorKind::ValidationError);
    EXPECT_NE(std::string(e.what()).find("model.kind: unknown kind 'rubber'"), std::string::npos);
  }
  EXPECT_EQ(error_kind_of([&] { io::load_body_text(replace(t, "mu = constant 1\n", "colour = red\n")); }),
            mg::ErrorKind::ParseError);
  EXPECT_EQ(error_kind_of([&] { io::load_body_text(replace(t, "mu = constant 1\n", "")); }),
            mg::ErrorKind::ValidationError);
  EXPECT_EQ(error_kind_of([&] { io::load_body_text(replace(t, "grid.dims = 3 3 3\n", "")); }),
            mg::ErrorKind::ValidationError);
  EXPECT_EQ(error_kind_of([&] { io::load_body_text(replace(t, "grid.dims = 3 3 3", "grid.dims = 3 3")); }),
            mg::ErrorKind::ParseError);
  EXPECT_EQ(error_kind_of([&] { io::load_body_text(replace(t, "matgroupoid-body 1", "matgroupoid-body 2")); }),
            mg::ErrorKind::ParseError);
  EXPECT_EQ(error_kind_of([&] { io::load_body_text(replace(t, "matgroupoid-body 1", "something-else 1")); }),
            mg::ErrorKind::ParseError);
  EXPECT_EQ(error_kind_of([&] { io::load_body_text(replace(t, "grid.spacing = 0.5 0.5 0.5", "grid.spacing = 0.5 0 0.5")); }),
            mg::ErrorKind::ValidationError);
  EXPECT_EQ(error_kind_of([] { io::load_body("/nonexistent/body.txt"); }), mg::ErrorKind::IoError);
}

TEST(GroupoidFile, RoundTripPreservesEveryTable) {
  std::vector<mg::FiniteGroupoid> all = mg::testing::named_groupoids();
  for (std::uint64_t s = 0; s < 20; ++s) all.push_back(mg::testing::random_groupoid(s));
  for (const auto& g : all) {
    const auto text = io::save_groupoid(g);
    const auto back = io::load_groupoid_text(text);
    ASSERT_EQ(back.num_objects(), g.num_objects());
    ASSERT_EQ(back.table(), g.table());
    ASSERT_EQ(back.inverse_map(), g.inverse_map());
    ASSERT_EQ(back.identity_map(), g.identity_map());
    for (std::size_t a = 0; a < g.num_arrows(); ++a) {
      ASSERT_EQ(back.arrows()[a].source, g.arrows()[a].source);
      ASSERT_EQ(back.arrows()[a].target, g.arrows()[a].target);
      ASSERT_EQ(back.arrows()[a].label, g.arrows()[a].label);
    }
    ASSERT_EQ(io::save_groupoid(back), text);
  }
}

TEST(GroupoidFile, CorruptedProductLoadsButFailsValidation) {
  const auto g = mg::pair_groupoid(2);
  auto text = io::save_groupoid(g);
  // In the pair groupoid on {0, 1}, arrow 1 is 0 -> 1 and arrow 2 is 1 -> 0.
  text = replace(text, "compose 2 1 0", "compose 2 1 3");
  const auto bad = io::load_groupoid_text(text);
  const auto report = bad.validate_axioms();
  EXPECT_FALSE(report.ok());
}

TEST(GroupoidFile, StructuralErrors) {
  const auto text = io::save_groupoid(mg::pair_groupoid(2));
  EXPECT_EQ(error_kind_of([&] { io::load_groupoid_text(replace(text, "inverse 1 2\n", "")); }), mg::ErrorKind::ValidationError);
  EXPECT_EQ(error_kind_of([&] { io::load_groupoid_text(replace(text, "identity 1 3\n", "")); }), mg::ErrorKind::ValidationError);
  EXPECT_EQ(error_kind_of([&] { io::load_groupoid_text(replace(text, "arrow 1 0 1", "arrow 7 0 1")); }), mg::ErrorKind::ParseError);
  EXPECT_EQ(error_kind_of([&] { io::load_groupoid_text(replace(text, "arrow 1 0 1", "arrow 1 0 5")); }), mg::ErrorKind::ParseError);
  EXPECT_EQ(error_kind_of([&] { io::load_groupoid_text(replace(text, "compose 2 1 0", "compose 2 1 9")); }), mg::ErrorKind::ParseError);
  EXPECT_EQ(error_kind_of([&] { io::load_groupoid_text(replace(text, "compose 2 1 0", "glue 2 1 0")); }), mg::ErrorKind::ParseError);
  EXPECT_EQ(error_kind_of([&] { io::load_groupoid_text(replace(text, "end\n", "")); }), mg::ErrorKind::ParseError);
}

TEST(GaugeFile, RoundTripIsBitExact) {
  const BodyGrid grid{{3, 4, 2}, {0.3, 0.2, 0.7}, {1.0, -1.0, 0.0}};
  mg::Rng rng(6);
  mg::GridMat3Field p(grid, Mat3::Identity());
  for (auto& v : p.values) v = mg::testing::random_near_identity(rng);
  const auto gauge = mg::make_gauge(p);
  const auto back = io::parse_gauge(io::format_gauge(gauge));
  EXPECT_EQ(back.p.values, gauge.p.values);
  EXPECT_EQ(back.p.grid.dims, grid.dims);
  EXPECT_EQ(back.p.grid.spacing, grid.spacing);
  EXPECT_EQ(back.p.grid.origin, grid.origin);
  EXPECT_EQ(back.continuity_defect, gauge.continuity_defect);
  auto text = io::format_gauge(gauge);
  EXPECT_EQ(error_kind_of([&] { io::parse_gauge(text.substr(0, text.rfind("p = "))); }), mg::ErrorKind::ParseError);
  text = replace(text, "p = 0 ", "p = 1 ");
  EXPECT_EQ(error_kind_of([&] { io::parse_gauge(text); }), mg::ErrorKind::ValidationError);
}

TEST(Report, SectionsAndGaugeAreReadable) {
  const auto grid = BodyGrid::cube(5, 0.25);
  const mg::MaterialModel m(mg::testing::implanted(ModelKind::SvkAnisotropic, mg::ImplantKind::ShearX3, 0.8), grid);
  const auto rep = mg::assemble_material_groupoid(m, mg::UniformityOptions{});
  const auto gamma = mg::material_connection(rep.gauge);
  const auto t = mg::torsion(gamma);
  const double tol = mg::default_torsion_tolerance(grid);
  const auto summary = io::summarize_connection(gamma, t, mg::homogeneity_verdict(t, rep.symmetry, tol), tol, true);
  const io::ConfigEntries config{{"command", "analyze"}, {"input", "body.txt"}};
  const auto text = io::format_report(config, rep, summary);

  const io::ReportView view(text);
  EXPECT_EQ(view.get("config.command"), "analyze");
  EXPECT_EQ(view.get("result.verdict"), "uniform");
  EXPECT_EQ(view.number("result.nodes"), 125.0);
  EXPECT_EQ(view.number("result.accepted"), 125.0);
  EXPECT_EQ(view.get("connection.homogeneity"), "defective");
  EXPECT_EQ(view.get("connection.convention"), "dP_Pinv");
  EXPECT_EQ(view.get("connection.scheme"), "fourth_order");
  EXPECT_NEAR(view.number("connection.torsion.T123"), 0.8, 1e-6);
  EXPECT_EQ(view.all("nodes.node").size(), 125u);
  EXPECT_EQ(view.number("symmetry.discrete_count"), 2.0);
  EXPECT_EQ(view.number("failures.count"), 0.0);
  EXPECT_FALSE(view.has("connection.torsion.T132"));

  const auto gauge = io::parse_gauge(text);
  EXPECT_EQ(gauge.p.values, rep.gauge.p.values);
  EXPECT_EQ(error_kind_of([&] { view.get("result.nothing"); }), mg::ErrorKind::ValidationError);
  EXPECT_EQ(error_kind_of([&] { io::ReportView(text.substr(0, text.size() - 4)); }), mg::ErrorKind::ParseError);

  const auto conn_only = io::ReportView(io::format_connection_report(config, summary));
  EXPECT_EQ(conn_only.get("connection.homogeneity"), "defective");
  EXPECT_FALSE(conn_only.has("result.verdict"));
  EXPECT_EQ(io::component_label(0, 1, 2), "123");
}

TEST(FieldDump, ChristoffelAndTorsionRoundTrip) {
  const auto grid = BodyGrid::cube(5, 0.25);
  const mg::ImplantSpec spec{mg::ImplantKind::ExpDiagX1, 0.3, {}};
  const auto p = mg::GridMat3Field::generate(grid, [&](const mg::Vec3& x) { return spec.at(x, NodeId{}); });
  const auto gamma = mg::material_connection(p);
  const auto t = mg::torsion(gamma);
  const auto g = io::parse_field_dump(io::format_christoffel_dump(gamma));
  EXPECT_EQ(g.kind, "christoffel");
  EXPECT_EQ(g.grid.dims, grid.dims);
  EXPECT_EQ(g.values, gamma.values);
  const auto tt = io::parse_field_dump(io::format_torsion_dump(t, gamma));
  EXPECT_EQ(tt.kind, "torsion");
  EXPECT_EQ(tt.values, t.values);
  const auto text = io::format_christoffel_dump(gamma);
  EXPECT_NE(text.find("columns = node i j k X1 X2 X3 G111"), std::string::npos);
  EXPECT_EQ(error_kind_of([&] { io::parse_field_dump(text.substr(0, text.find("end rows"))); }), mg::ErrorKind::ParseError);
}
