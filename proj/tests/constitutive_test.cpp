#include <gtest/gtest.h>

#include <cmath>

#include "matgroupoid/constitutive.hpp"
#include "test_support.hpp"

namespace mg = matgroupoid;
using mg::BodyGrid;
using mg::Mat3;
using mg::MaterialModel;
using mg::ModelDescriptor;
using mg::ModelKind;
using mg::NodeId;

namespace {

using mg::testing::error_kind_of;

using mg::testing::diag;
using mg::testing::implanted;
using mg::testing::neo_hookean;
using mg::testing::svk;

}  // namespace

TEST(NeoHookean, ReferenceStateIsStressFree) {
  const MaterialModel m(neo_hookean(1.0), BodyGrid::cube(3, 0.5));
  EXPECT_EQ(m.cauchy_stress(Mat3::Identity(), NodeId{0}), Mat3::Zero());
}

TEST(NeoHookean, IsochoricStretchExample) {
  const MaterialModel m(neo_hookean(2.0), BodyGrid::cube(3, 0.5));
  const Mat3 t = m.cauchy_stress(diag(1.2, 1.0, 1.0 / 1.2), NodeId{4});
  const Mat3 expected = 2.0 * diag(0.44, 0.0, 1.0 / 1.44 - 1.0);
  EXPECT_LT((t - expected).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(NeoHookean, ClosedFormOnRandomGradients) {
  mg::Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    const Mat3 f = mg::testing::random_near_identity(rng, 0.3, 0.4);
    const Mat3 b = f * f.transpose();
    const Mat3 expected = 1.7 / f.determinant() * (b - Mat3::Identity());
    ASSERT_LT((mg::neo_hookean_stress(1.7, f) - expected).norm(), 1e-13);
  }
}

TEST(SvkStress, IsotropicStiffnessMatchesLameForm) {
  mg::StiffnessSpec s;
  s.lambda = 0.8;
  s.mu = 1.3;
  const auto c = mg::build_stiffness(s);
  mg::Rng rng(8);
  for (int t = 0; t < 100; ++t) {
    const Mat3 f = mg::testing::random_near_identity(rng, 0.3, 0.4);
    const Mat3 e = 0.5 * (f.transpose() * f - Mat3::Identity());
    const Mat3 second_pk = s.lambda * e.trace() * Mat3::Identity() + 2.0 * s.mu * e;
    const Mat3 expected = f * second_pk * f.transpose() / f.determinant();
    ASSERT_LT((mg::svk_stress(c, f) - expected).norm(), 1e-12);
  }
}

TEST(SvkStress, StiffnessComponents) {
  mg::StiffnessSpec s;
  s.kind = mg::StiffnessKind::TransverselyIsotropic;
  s.lambda = 1.0;
  s.mu = 0.5;
  s.fiber = 3.0;
  const auto c = mg::build_stiffness(s);
  EXPECT_NEAR(mg::c4(c, 0, 0, 0, 0), 2.0, 1e-14);
  EXPECT_NEAR(mg::c4(c, 2, 2, 2, 2), 5.0, 1e-14);
  EXPECT_NEAR(mg::c4(c, 0, 0, 1, 1), 1.0, 1e-14);
  EXPECT_NEAR(mg::c4(c, 0, 1, 0, 1), 0.5, 1e-14);
  EXPECT_NEAR(mg::c4(c, 0, 1, 1, 0), 0.5, 1e-14);
  EXPECT_NEAR(mg::c4(c, 0, 1, 2, 2), 0.0, 1e-14);
}

TEST(SvkStress, BuiltStiffnessesAreSymmetricAndPositive) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto s = mg::generic_stiffness(seed);
    EXPECT_NO_THROW(mg::validate_stiffness(mg::build_stiffness(s)));
    s.kind = mg::StiffnessKind::Monoclinic;
    const auto c = mg::build_stiffness(s);
    EXPECT_NO_THROW(mg::validate_stiffness(c));
    // Half-turn invariance: components with an odd number of indices 3 vanish.
    EXPECT_NEAR(mg::c4(c, 0, 0, 0, 2), 0.0, 1e-14);
    EXPECT_NEAR(mg::c4(c, 1, 2, 0, 0), 0.0, 1e-14);
  }
}

TEST(SvkStress, ValidationRejectsBrokenStiffness) {
  mg::StiffnessSpec s;
  s.lambda = 1.0;
  s.mu = 1.0;
  auto c = mg::build_stiffness(s);
  auto broken = c;
  mg::c4(broken, 0, 1, 2, 2) += 0.1;
  EXPECT_EQ(error_kind_of([&] { mg::validate_stiffness(broken); }), mg::ErrorKind::ValidationError);
  s.lambda = -5.0;  // bulk modulus negative
  EXPECT_EQ(error_kind_of([&] { mg::validate_stiffness(mg::build_stiffness(s)); }), mg::ErrorKind::ValidationError);
  s.mu = -1.0;
  s.lambda = 1.0;
  EXPECT_EQ(error_kind_of([&] { MaterialModel(svk(s), BodyGrid::cube(3, 0.5)); }), mg::ErrorKind::ValidationError);
}

TEST(Response, CauchyStressIsSymmetricForEveryBuiltin) {
  const auto grid = BodyGrid::cube(4, 0.3);
  std::vector<ModelDescriptor> descs{neo_hookean(1.2), svk(mg::generic_stiffness()),
                                     implanted(ModelKind::SvkAnisotropic, mg::ImplantKind::ShearX3, 0.2),
                                     implanted(ModelKind::NeoHookeanIsotropic, mg::ImplantKind::DiagX1, 0.1)};
  descs.push_back(mg::testing::fgm(0.5));
  mg::Rng rng(9);
  for (const auto& d : descs) {
    const MaterialModel m(d, grid);
    for (int t = 0; t < 50; ++t) {
      const Mat3 f = mg::testing::random_near_identity(rng, 0.3, 0.4);
      const Mat3 s = m.cauchy_stress(f, NodeId{rng.index(grid.num_nodes())});
      ASSERT_LT((s - s.transpose()).norm(), 1e-12 * (1.0 + s.norm()));
    }
  }
}

TEST(Response, IdentityImplantReproducesArchetype) {
  const auto grid = BodyGrid::cube(3, 0.5);
  for (auto arch : {ModelKind::SvkAnisotropic, ModelKind::NeoHookeanIsotropic}) {
    const MaterialModel imp(implanted(arch, mg::ImplantKind::Identity, 0.0), grid);
    auto plain_desc = arch == ModelKind::SvkAnisotropic ? svk(mg::generic_stiffness()) : neo_hookean(1.5);
    const MaterialModel plain(plain_desc, grid);
    mg::Rng rng(10);
    for (int t = 0; t < 20; ++t) {
      const Mat3 f = mg::testing::random_near_identity(rng, 0.3, 0.4);
      const NodeId x{rng.index(grid.num_nodes())};
      ASSERT_EQ(imp.cauchy_stress(f, x), plain.cauchy_stress(f, x));
    }
  }
}

TEST(Response, ImplantedStressIsArchetypeOfProduct) {
  const auto grid = BodyGrid::cube(5, 0.25);
  const MaterialModel m(implanted(ModelKind::SvkAnisotropic, mg::ImplantKind::ShearX3, 0.4), grid);
  const Mat3 f = diag(1.1, 0.95, 1.0);
  for (std::size_t n = 0; n < grid.num_nodes(); ++n) {
    const NodeId x{n};
    Mat3 p = Mat3::Identity();
    p(0, 1) = 0.4 * grid.coords(x)[2];
    ASSERT_EQ(m.implant(x), p);
    ASSERT_EQ(m.cauchy_stress(f, x), m.archetype_stress(f * p));
  }
}

TEST(Response, InvalidInputs) {
  const MaterialModel m(neo_hookean(1.0), BodyGrid::cube(3, 0.5));
  EXPECT_EQ(error_kind_of([&] { m.cauchy_stress(diag(1.0, 1.0, -1.0), NodeId{0}); }), mg::ErrorKind::InvalidF);
  EXPECT_EQ(error_kind_of([&] { m.cauchy_stress(Mat3::Zero(), NodeId{0}); }), mg::ErrorKind::InvalidF);
  EXPECT_EQ(error_kind_of([&] { m.cauchy_stress(Mat3::Constant(NAN), NodeId{0}); }), mg::ErrorKind::InvalidF);
  EXPECT_EQ(error_kind_of([&] { m.cauchy_stress(Mat3::Identity(), NodeId{27}); }), mg::ErrorKind::UnknownNode);
}

TEST(Response, DescriptorValidation) {
  const auto grid = BodyGrid::cube(3, 0.5);
  EXPECT_EQ(error_kind_of([&] { MaterialModel(neo_hookean(0.0), grid); }), mg::ErrorKind::ValidationError);
  auto lin = neo_hookean(1.0);
  lin.mu = mg::ModulusProfile::linear(0.5, -1.0);  // reaches zero at X1 = 0.5
  EXPECT_EQ(error_kind_of([&] { MaterialModel(lin, grid); }), mg::ErrorKind::ValidationError);
  ModelDescriptor fgm;
  fgm.kind = ModelKind::FgmExponential;
  fgm.mu = mg::ModulusProfile::constant(1.0);
  EXPECT_EQ(error_kind_of([&] { MaterialModel(fgm, grid); }), mg::ErrorKind::BadDescriptor);
  auto neg = implanted(ModelKind::SvkAnisotropic, mg::ImplantKind::DiagX1, -2.0);  // 1 - 2 X1 vanishes
  EXPECT_EQ(error_kind_of([&] { MaterialModel(neg, grid); }), mg::ErrorKind::ValidationError);
  auto vals = implanted(ModelKind::SvkAnisotropic, mg::ImplantKind::Values, 0.0);
  vals.implant.values.resize(3);
  EXPECT_EQ(error_kind_of([&] { MaterialModel(vals, grid); }), mg::ErrorKind::ValidationError);
  auto bad_arch = implanted(ModelKind::FgmExponential, mg::ImplantKind::Identity, 0.0);
  EXPECT_EQ(error_kind_of([&] { MaterialModel(bad_arch, grid); }), mg::ErrorKind::BadDescriptor);
}

TEST(ProbeSet, StandardSetIsDeterministicAndWellConditioned) {
  const auto a = mg::ProbeSet::standard();
  const auto b = mg::ProbeSet::standard();
  ASSERT_EQ(a.gradients.size(), 12u);
  EXPECT_NO_THROW(a.validate());
  for (std::size_t i = 0; i < a.gradients.size(); ++i) {
    EXPECT_EQ(a.gradients[i], b.gradients[i]);
    const double d = a.gradients[i].determinant();
    EXPECT_GE(d, 0.5);
    EXPECT_LE(d, 2.0);
  }
  const auto c = mg::ProbeSet::standard(99);
  EXPECT_NE(a.gradients[11], c.gradients[11]);
  EXPECT_EQ(a.gradients[0], c.gradients[0]);
}

TEST(ProbeSet, ValidationRejectsBadSets) {
  mg::ProbeSet p;
  EXPECT_THROW(p.validate(), mg::Error);
  p.gradients = {Mat3::Identity(), 3.0 * Mat3::Identity()};
  EXPECT_THROW(p.validate(), mg::Error);
  p.gradients = {Mat3::Identity(), Mat3::Identity()};
  EXPECT_THROW(p.validate(), mg::Error);
}

TEST(IsoResidual, ZeroOnTheDiagonalWithIdentity) {
  const auto grid = BodyGrid::cube(4, 0.3);
  const auto probes = mg::ProbeSet::standard();
  const MaterialModel m(implanted(ModelKind::SvkAnisotropic, mg::ImplantKind::ShearX3, 0.3), grid);
  for (std::size_t n = 0; n < grid.num_nodes(); ++n)
    ASSERT_EQ(mg::iso_residual(m, NodeId{n}, NodeId{n}, Mat3::Identity(), probes), 0.0);
}

TEST(IsoResidual, ImplantedBodyIsExactlyUniform) {
  const auto grid = BodyGrid::cube(5, 0.25);
  const auto probes = mg::ProbeSet::standard();
  for (auto kind : {mg::ImplantKind::ShearX3, mg::ImplantKind::DiagX1, mg::ImplantKind::ExpDiagX1}) {
    const MaterialModel m(implanted(ModelKind::SvkAnisotropic, kind, 0.3), grid);
    double worst = 0.0;
    for (std::size_t x = 0; x < grid.num_nodes(); ++x)
      for (std::size_t y = 0; y < grid.num_nodes(); ++y) {
        const Mat3 p = m.implant(NodeId{y}) * mg::invert3(m.implant(NodeId{x}));
        worst = std::max(worst, mg::iso_residual(m, NodeId{x}, NodeId{y}, p, probes));
      }
    EXPECT_LT(worst, 1e-10);
  }
}

TEST(IsoResidual, ReversedPairUsesInverseMap) {
  // T(F P, X) = T(F, Y) for all F gives T(F P^-1, Y) = T(F, X), so the
  // residuals of (X, Y, P) and (Y, X, P^-1) vanish together and are of the
  // same order when they do not.
  const auto grid = BodyGrid::cube(3, 0.5);
  const auto probes = mg::ProbeSet::standard();
  const MaterialModel m(implanted(ModelKind::SvkAnisotropic, mg::ImplantKind::DiagX1, 0.4), grid);
  mg::Rng rng(12);
  for (int t = 0; t < 50; ++t) {
    const NodeId x{rng.index(grid.num_nodes())}, y{rng.index(grid.num_nodes())};
    const Mat3 exact = m.implant(y) * mg::invert3(m.implant(x));
    const Mat3 p = exact + mg::testing::random_matrix(rng, 1e-3);
    const double fwd = mg::iso_residual(m, x, y, p, probes);
    const double back = mg::iso_residual(m, y, x, mg::invert3(p), probes);
    ASSERT_LT(mg::iso_residual(m, y, x, mg::invert3(exact), probes), 1e-12);
    ASSERT_GT(back, fwd / 2.0);
    ASSERT_LT(back, fwd * 2.0);
  }
}

TEST(IsoResidual, SignOfPIsInvisible) {
  const auto grid = BodyGrid::cube(3, 0.5);
  const auto probes = mg::ProbeSet::standard();
  const MaterialModel m(svk(mg::generic_stiffness()), grid);
  EXPECT_EQ(mg::iso_residual(m, NodeId{0}, NodeId{5}, -Mat3::Identity(), probes), 0.0);
}

TEST(IsoResidual, FgmPairsAreFarFromIsomorphic) {
  const auto grid = BodyGrid::cube(3, 0.5);
  const auto probes = mg::ProbeSet::standard();
  ModelDescriptor d = neo_hookean(1.0);
  d.mu = mg::ModulusProfile::linear(1.0, 1.0);
  const MaterialModel m(d, grid);
  const NodeId x = grid.node(0, 1, 1), y = grid.node(2, 1, 1);
  EXPECT_GT(mg::iso_residual(m, x, y, Mat3::Identity(), probes), 0.05);
  EXPECT_EQ(mg::iso_residual(m, x, grid.node(0, 2, 0), Mat3::Identity(), probes), 0.0);
}

TEST(IsoResidual, RejectsSingularP) {
  const MaterialModel m(neo_hookean(1.0), BodyGrid::cube(3, 0.5));
  const auto probes = mg::ProbeSet::standard();
  EXPECT_EQ(error_kind_of([&] { mg::iso_residual(m, NodeId{0}, NodeId{1}, Mat3::Zero(), probes); }), mg::ErrorKind::InvalidP);
  EXPECT_EQ(error_kind_of([&] { mg::iso_residual(m, NodeId{0}, NodeId{1}, Mat3::Constant(INFINITY), probes); }),
            mg::ErrorKind::InvalidP);
  EXPECT_EQ(error_kind_of([&] { mg::iso_residual(m, NodeId{0}, NodeId{99}, Mat3::Identity(), probes); }),
            mg::ErrorKind::UnknownNode);
}
