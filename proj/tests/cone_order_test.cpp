#include "cone_fixpoint/cone_order.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

#include <gtest/gtest.h>

#include "cone_fixpoint/error.hpp"
#include "test_support.hpp"

namespace cone_fixpoint {
namespace {

using testing::LatticeGenerator;

const TolerancePolicy kStrict = TolerancePolicy::strict_policy();

TEST(LorentzContains, BoundaryOfThreeFourFive) {
  EXPECT_TRUE(lorentz_contains({Vector{3, 4}, 5.0}));
  EXPECT_TRUE(lorentz_contains({Vector{3, 4}, 5.0}, kStrict));
}

TEST(LorentzContains, StrictRejectsJustInside) {
  EXPECT_FALSE(lorentz_contains({Vector{3, 4}, 4.9}, kStrict));
}

TEST(LorentzContains, Apex) { EXPECT_TRUE(lorentz_contains({Vector{0, 0}, 0.0})); }

TEST(LorentzContains, ToleranceAbsorbsRounding) {
  const double t = 5.0 - 1e-13;
  EXPECT_FALSE(lorentz_contains({Vector{3, 4}, t}, kStrict));
  EXPECT_TRUE(lorentz_contains({Vector{3, 4}, t}));
  EXPECT_FALSE(lorentz_contains({Vector{3, 4}, 5.0 - 1e-9}));
}

TEST(LorentzContains, NonFiniteInputRejected) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_THROW(AugmentedPoint(Vector{0.0}, nan), Error);
  EXPECT_THROW(AugmentedPoint(Vector{0.0}, inf), Error);
  EXPECT_THROW(Vector({1.0, nan}), Error);
  EXPECT_THROW(Vector(std::vector<double>{}), Error);
  try {
    Vector{inf};
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidInput);
  }
}

TEST(LeqLorentz, Examples) {
  EXPECT_TRUE(leq_lorentz({Vector{0}, 0}, {Vector{1}, 1}));
  EXPECT_FALSE(leq_lorentz({Vector{0}, 0}, {Vector{1}, 0.5}));
  EXPECT_TRUE(leq_lorentz({Vector{2, 3}, 7}, {Vector{2, 3}, 7}, kStrict));
}

TEST(LeqLorentz, DimensionMismatch) {
  try {
    leq_lorentz({Vector{0}, 0}, {Vector{1, 2}, 5});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidInput);
  }
}

TEST(EuclideanNorm, ExactOnIntegers) {
  LatticeGenerator gen(11);
  for (int i = 0; i < 2000; ++i) {
    const Vector v = gen.vector(gen.dim(8), 1000);
    double sq = 0.0;
    for (double c : v.coords()) sq += c * c;  // exact: < 2^53
    EXPECT_EQ(v.norm(), std::sqrt(sq));
  }
}

TEST(EuclideanNorm, NoOverflowOrUnderflow) {
  EXPECT_DOUBLE_EQ(euclidean_norm(std::vector<double>{3e200, 4e200}), 5e200);
  EXPECT_DOUBLE_EQ(euclidean_norm(std::vector<double>{3e-200, 4e-200}), 5e-200);
  EXPECT_EQ(euclidean_norm(std::vector<double>{0.0, -0.0}), 0.0);
}

// Cone axioms on the lattice, strict policy.
TEST(ConeProperties, ClosedUnderNonnegativeCombination) {
  LatticeGenerator gen(1);
  for (int i = 0; i < 2000; ++i) {
    const auto m = gen.dim();
    const auto u = gen.cone_member(m);
    const auto v = gen.cone_member(m);
    ASSERT_TRUE(lorentz_contains(u, kStrict));
    ASSERT_TRUE(lorentz_contains(v, kStrict));
    const double s = static_cast<double>(gen.integer(0, 9));
    const double t = static_cast<double>(gen.integer(0, 9));
    EXPECT_TRUE(lorentz_contains(s * u + t * v, kStrict));
  }
}

TEST(ConeProperties, Pointed) {
  LatticeGenerator gen(2);
  for (int i = 0; i < 2000; ++i) {
    const auto m = gen.dim();
    const auto u = i % 10 == 0 ? AugmentedPoint(Vector::zeros(m), 0.0) : gen.cone_member(m, 3);
    if (lorentz_contains(-u, kStrict)) {
      EXPECT_EQ(u, AugmentedPoint(Vector::zeros(m), 0.0));
    }
  }
}

TEST(OrderProperties, ReflexiveTransitiveAntisymmetric) {
  LatticeGenerator gen(3);
  for (int i = 0; i < 2000; ++i) {
    const auto m = gen.dim();
    const auto a = gen.point(m);
    EXPECT_TRUE(leq_lorentz(a, a, kStrict));

    const auto b = a + gen.cone_member(m);
    const auto c = b + gen.cone_member(m);
    ASSERT_TRUE(leq_lorentz(a, b, kStrict));
    ASSERT_TRUE(leq_lorentz(b, c, kStrict));
    EXPECT_TRUE(leq_lorentz(a, c, kStrict));

    if (leq_lorentz(b, a, kStrict)) EXPECT_EQ(a, b);
    const auto other = gen.point(m, 2);
    if (leq_lorentz(a, other, kStrict) && leq_lorentz(other, a, kStrict)) EXPECT_EQ(a, other);
  }
}

TEST(OrderProperties, CompatibleWithLinearStructure) {
  LatticeGenerator gen(4);
  for (int i = 0; i < 2000; ++i) {
    const auto m = gen.dim();
    const auto a = gen.point(m);
    const auto b = a + gen.cone_member(m);
    const auto z = gen.point(m);
    const double mu = static_cast<double>(gen.integer(0, 12));
    EXPECT_TRUE(leq_lorentz(mu * a + z, mu * b + z, kStrict));
  }
}

TEST(TolerancePolicy, LooserPolicyNeverRejectsWhatStrictAccepts) {
  LatticeGenerator gen(5);
  std::uniform_real_distribution<double> tol(0.0, 1e-3);
  for (int i = 0; i < 2000; ++i) {
    const auto m = gen.dim();
    const auto a = gen.point(m, 4);
    const auto b = gen.point(m, 4);
    const auto loose = TolerancePolicy::with(tol(gen.rng()), tol(gen.rng()));
    if (leq_lorentz(a, b, kStrict)) EXPECT_TRUE(leq_lorentz(a, b, loose));
    if (lorentz_contains(a, kStrict)) EXPECT_TRUE(lorentz_contains(a, loose));
  }
}

TEST(TolerancePolicy, StrictIgnoresTolerances) {
  TolerancePolicy policy{1.0, 1.0, true};
  EXPECT_EQ(policy.slack(100.0), 0.0);
  EXPECT_FALSE(lorentz_contains({Vector{1}, 0.5}, policy));
}

TEST(TolerancePolicy, SlackScalesWithT) {
  const TolerancePolicy policy;
  EXPECT_DOUBLE_EQ(policy.slack(0.5), 2e-12);
  EXPECT_DOUBLE_EQ(policy.slack(-1000.0), 1e-12 + 1e-9);
}

TEST(TolerancePolicy, Environment) {
  ::setenv("CONE_FIXPOINT_TOL", "1e-6", 1);
  auto policy = TolerancePolicy::from_environment();
  EXPECT_EQ(policy.atol, 1e-6);
  EXPECT_EQ(policy.rtol, 1e-6);
  ::setenv("CONE_FIXPOINT_TOL", "tiny", 1);
  EXPECT_THROW(TolerancePolicy::from_environment(), Error);
  ::setenv("CONE_FIXPOINT_TOL", "-1", 1);
  EXPECT_THROW(TolerancePolicy::from_environment(), Error);
  ::unsetenv("CONE_FIXPOINT_TOL");
  policy = TolerancePolicy::from_environment();
  EXPECT_EQ(policy.atol, 1e-12);
}

}  // namespace
}  // namespace cone_fixpoint
