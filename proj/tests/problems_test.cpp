#include "cone_fixpoint/problems.hpp"

#include <set>

#include <gtest/gtest.h>

#include "cone_fixpoint/engine.hpp"
#include "cone_fixpoint/error.hpp"
#include "test_support.hpp"

namespace cone_fixpoint {
namespace {

TEST(Catalog, ContainsRequiredInstances) {
  std::set<std::string> names;
  for (const auto& p : builtin_catalog()) {
    names.insert(p.name);
    EXPECT_NO_THROW(validate_contraction(p.spec)) << p.name;
    EXPECT_TRUE(p.reference.has_value()) << p.name;
    EXPECT_FALSE(p.provenance.empty());
  }
  for (const char* required :
       {"AFFINE_1D", "CONSTANT", "ROTATION_2D", "KEPLER", "FIXED_START", "NEAR_ONE"}) {
    EXPECT_TRUE(names.contains(required)) << required;
  }
  EXPECT_EQ(builtin_problem("NEAR_ONE").spec.lambda(), 0.999);
}

TEST(Catalog, UnknownName) {
  try {
    builtin_problem("NOPE");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("AFFINE_1D"), std::string::npos);
  }
}

TEST(Reference, Affine1D) { EXPECT_EQ(reference_fixed_point(builtin_problem("AFFINE_1D")), (Vector{2})); }

TEST(Reference, Constant) {
  EXPECT_EQ(reference_fixed_point(builtin_problem("CONSTANT")), (Vector{3, 7}));
}

TEST(Reference, FixedStartIsItsOwnStart) {
  const auto p = builtin_problem("FIXED_START");
  EXPECT_EQ(reference_fixed_point(p), p.x0);
  EXPECT_EQ(distance(evaluate(p.spec, p.x0), p.x0), 0.0);
}

TEST(Reference, Rotation2D) {
  // (I - 0.5 R(90))^{-1} (1, 0) with det 1.25: (1/1.25, 0.5/1.25).
  const auto x = reference_fixed_point(builtin_problem("ROTATION_2D"));
  EXPECT_NEAR(x[0], 1.0 / 1.25, 1e-15);
  EXPECT_NEAR(x[1], 0.5 / 1.25, 1e-15);
}

TEST(Reference, KeplerAgreesWithNewton) {
  const auto x = reference_fixed_point(builtin_problem("KEPLER"));
  EXPECT_NEAR(x[0], 1.4987, 1e-4);
  EXPECT_NEAR(x[0], testing::kepler_newton(0.5, 1.0), 1e-14);
}

TEST(Reference, NearOne) {
  const auto x = reference_fixed_point(builtin_problem("NEAR_ONE"));
  EXPECT_NEAR(x[0], 1000.0, 1e-9);
}

TEST(Reference, ResidualInvariant) {
  for (const auto& p : builtin_catalog()) {
    const Vector x = reference_fixed_point(p);
    EXPECT_LE(distance(evaluate(p.spec, x), x), 1e-12 * (1.0 + x.norm())) << p.name;
  }
}

TEST(Reference, SingularSystemUnsupported) {
  const auto spec = ContractionSpec::affine(0.5, Eigen::MatrixXd::Identity(2, 2), Vector{1, 1});
  try {
    reference_fixed_point(spec);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUnsupportedInstance);
  }
}

TEST(Catalog, APrioriRunsLandNearReference) {
  for (const auto& p : builtin_catalog()) {
    for (double eps : {1e-4, 1e-8}) {
      const auto trace = run(p.spec, p.x0, StoppingRule::a_priori(eps));
      EXPECT_NE(trace.stop_reason, StopReason::kMaxIterations);
      EXPECT_LE(distance(trace.final_point().x(), reference_fixed_point(p)), eps) << p.name;
    }
  }
}

}  // namespace
}  // namespace cone_fixpoint
