#include <gtest/gtest.h>

#include <vector>

#include "rrc/core.hpp"
#include "rrc/rng.hpp"
#include "test_util.hpp"

using namespace rrc;

namespace {

Quat about_z(double deg) { return Quat(Eigen::AngleAxisd(deg * kPi / 180.0, Vec3::UnitZ())); }

}  // namespace

TEST(Kernel, IsOneAtZeroDistance) {
  for (double a : {1.0, 30.0, 250.0})
    for (double b : {0.0, 1.0, 7.5}) EXPECT_EQ(kernel(0.0, KernelParams{a, b}), 1.0);
}

TEST(Kernel, MatchesHighPrecisionOracle) {
  // mpmath, 40 digits: 3 / (e^3 + 1 + e^-3)
  EXPECT_NEAR(kernel(0.1, KernelParams{30.0, 1.0}), 0.14194246566547211, 1e-15);
}

TEST(Kernel, EvenInDisplacement) {
  const KernelParams p;
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const Vec3 x(uniform(rng, -0.2, 0.2), uniform(rng, -0.2, 0.2), uniform(rng, -0.2, 0.2));
    EXPECT_EQ(push_reward<double>(x, Vec3::Zero(), p), push_reward<double>(-x, Vec3::Zero(), p));
    EXPECT_EQ(kernel(x.norm(), p), kernel(-x.norm(), p));
  }
}

TEST(Kernel, StrictlyDecreasingOnGrid) {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const KernelParams p{uniform(rng, 1.0, 100.0), uniform(rng, 0.0, 5.0)};
    double prev = kernel(0.0, p);
    for (int i = 1; i <= 1000; ++i) {
      const double k = kernel(0.3 * i / 1000.0, p);
      ASSERT_LT(k, prev) << "a=" << p.a << " b=" << p.b << " i=" << i;
      ASSERT_GT(k, 0.0);
      prev = k;
    }
  }
}

TEST(Kernel, RejectsInvalidParameters) {
  EXPECT_THROW(kernel(0.1, KernelParams{0.0, 1.0}), ParameterError);
  EXPECT_THROW(kernel(0.1, KernelParams{-1.0, 1.0}), ParameterError);
  EXPECT_THROW(kernel(0.1, KernelParams{30.0, -0.5}), ParameterError);
}

TEST(CubeCorners, IdentityPoseGivesSignCombinations) {
  const auto c = cube_corners(CubePose{}, kCubeHalfExtent);
  for (int i = 0; i < 8; ++i) {
    EXPECT_EQ(c[i].x(), (i & 4) ? kCubeHalfExtent : -kCubeHalfExtent);
    EXPECT_EQ(c[i].y(), (i & 2) ? kCubeHalfExtent : -kCubeHalfExtent);
    EXPECT_EQ(c[i].z(), (i & 1) ? kCubeHalfExtent : -kCubeHalfExtent);
  }
}

TEST(CubeCorners, TranslationShiftsEveryCorner) {
  CubePose p;
  p.position = Vec3(0.01, -0.04, 0.2);
  const auto base = cube_corners(CubePose{}, kCubeHalfExtent);
  const auto moved = cube_corners(p, kCubeHalfExtent);
  for (int i = 0; i < 8; ++i) EXPECT_LT((moved[i] - base[i] - p.position).norm(), 1e-15);
}

TEST(CubeCorners, QuarterTurnPermutesCorners) {
  CubePose p;
  p.orientation = about_z(90.0);
  const auto base = cube_corners(CubePose{}, kCubeHalfExtent);
  const auto rot = cube_corners(p, kCubeHalfExtent);
  const Mat3 r = about_z(90.0).toRotationMatrix();
  for (int i = 0; i < 8; ++i) {
    const Vec3 expected = r * base[i];
    int matches = 0;
    for (int j = 0; j < 8; ++j) matches += (rot[j] - expected).norm() < 1e-12;
    EXPECT_EQ(matches, 1);
    EXPECT_LT((rot[i] - expected).norm(), 1e-12);
  }
}

TEST(CubeCorners, MinCornerHeight) {
  CubePose p;
  p.position.z() = kCubeHalfExtent;
  EXPECT_NEAR(min_corner_z(p, kCubeHalfExtent), 0.0, 1e-15);
  p.orientation = Quat(Eigen::AngleAxisd(kPi / 4, Vec3::UnitX()));
  EXPECT_NEAR(min_corner_z(p, kCubeHalfExtent), kCubeHalfExtent * (1.0 - std::sqrt(2.0)), 1e-15);
}

TEST(PushReward, OneAtGoalAndOracleOffGoal) {
  const KernelParams p;
  const Vec3 g(0.05, 0.02, kCubeHalfExtent);
  EXPECT_EQ(push_reward<double>(g, g, p), 1.0);
  EXPECT_NEAR(push_reward<double>(g + Vec3(0.1, 0, 0), g, p), 0.14194246566547211, 1e-15);
}

TEST(PushReward, InvariantUnderRotationAboutVerticalAxis) {
  const KernelParams p;
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const Vec3 a(uniform(rng, -0.1, 0.1), uniform(rng, -0.1, 0.1), 0.03);
    const Vec3 g(uniform(rng, -0.1, 0.1), uniform(rng, -0.1, 0.1), 0.03);
    const Mat3 r = about_z(uniform(rng, 0.0, 360.0)).toRotationMatrix();
    EXPECT_NEAR(push_reward<double>(r * a, r * g, p), push_reward<double>(a, g, p), 1e-12);
  }
}

TEST(LiftReward, TranslationMatchesKernelOfOffset) {
  const KernelParams p;
  Rng rng(9);
  for (int i = 0; i < 100; ++i) {
    CubePose goal;
    goal.position = Vec3(0.0, 0.0, 0.1);
    goal.orientation = test::random_quat(rng);
    CubePose achieved = goal;
    const Vec3 t(uniform(rng, -0.05, 0.05), uniform(rng, -0.05, 0.05), uniform(rng, -0.05, 0.05));
    achieved.position += t;
    EXPECT_NEAR(lift_reward(achieved, goal, kCubeHalfExtent, p), kernel(t.norm(), p), 1e-12);
  }
  CubePose same;
  EXPECT_EQ(lift_reward(same, same, kCubeHalfExtent, p), 1.0);
}

TEST(LiftReward, HalfTurnAboutZMatchesCornerOracle) {
  const KernelParams p;
  CubePose achieved;
  achieved.position = Vec3(0.02, 0.01, kCubeHalfExtent);
  CubePose goal = achieved;
  goal.orientation = about_z(180.0);
  // Every corner moves by 2*sqrt(2)*h; oracle kernel value from mpmath.
  const double r = lift_reward(achieved, goal, kCubeHalfExtent, p);
  EXPECT_NEAR(r, 0.17828234808468733, 1e-14);
  EXPECT_LT(r, push_reward<double>(achieved.position, goal.position, p));
}

TEST(AngularDistance, BasicCases) {
  Rng rng(2);
  const Quat q = test::random_quat(rng);
  EXPECT_NEAR(angular_distance_deg(q, q), 0.0, 1e-6);
  const Quat neg(-q.w(), -q.x(), -q.y(), -q.z());
  EXPECT_NEAR(angular_distance_deg(q, neg), 0.0, 1e-6);
  EXPECT_NEAR(angular_distance_deg(Quat::Identity(), about_z(90.0)), 90.0, 1e-9);
  EXPECT_NEAR(angular_distance_deg(Quat::Identity(), about_z(180.0)), 180.0, 1e-9);
}

TEST(IsSuccess, ThresholdCases) {
  const SuccessThresholds th;
  CubePose goal;
  CubePose a;
  a.position = Vec3(0.019, 0, 0);
  a.orientation = about_z(20.0);
  EXPECT_TRUE(is_success(a, goal, th, Task::Lift));
  a.position = Vec3(0.021, 0, 0);
  a.orientation = Quat::Identity();
  EXPECT_FALSE(is_success(a, goal, th, Task::Lift));
  a.position = Vec3(0.0, 0.01, 0);
  a.orientation = about_z(180.0);
  EXPECT_TRUE(is_success(a, goal, th, Task::Push));
  EXPECT_FALSE(is_success(a, goal, th, Task::Lift));
}

TEST(IsSuccess, RejectsNonPositiveThresholds) {
  EXPECT_THROW((SuccessThresholds{0.0, 22.0}.validate()), ParameterError);
  EXPECT_THROW((SuccessThresholds{0.02, -1.0}.validate()), ParameterError);
}

namespace {

std::vector<Vec3> random_cloud(Rng& rng, int n) {
  std::vector<Vec3> pts;
  for (int i = 0; i < n; ++i) pts.emplace_back(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1));
  return pts;
}

double residual(const RigidTransform& t, const std::vector<Vec3>& before, const std::vector<Vec3>& after) {
  double s = 0.0;
  for (std::size_t i = 0; i < before.size(); ++i) s += (t.apply(before[i]) - after[i]).squaredNorm();
  return s;
}

}  // namespace

TEST(RigidFit, IdentityForUnchangedPoints) {
  Rng rng(1);
  const auto pts = random_cloud(rng, 6);
  const RigidTransform t = rigid_fit<double>(pts, pts);
  EXPECT_NEAR(angular_distance_deg(t.rotation, Quat::Identity()), 0.0, 1e-6);
  EXPECT_LT(t.translation.norm(), 1e-12);
}

TEST(RigidFit, RecoversKnownMotion) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto before = random_cloud(rng, 3 + trial % 5);
    const Quat q = test::random_quat(rng);
    const Vec3 t(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1));
    std::vector<Vec3> after;
    for (const auto& p : before) after.push_back(q * p + t);
    const RigidTransform fit = rigid_fit<double>(before, after);
    EXPECT_LT((fit.rotation.toRotationMatrix() - q.toRotationMatrix()).norm(), 1e-9);
    EXPECT_LT((fit.translation - t).norm(), 1e-9);
    EXPECT_GE(fit.rotation.w(), 0.0);
  }
}

TEST(RigidFit, NoisyFitBeatsRandomTransforms) {
  Rng rng(8);
  const auto before = random_cloud(rng, 10);
  const Quat q = test::random_quat(rng);
  std::vector<Vec3> after;
  for (const auto& p : before)
    after.push_back(q * p + Vec3(0.3, -0.1, 0.2) + Vec3(gaussian(rng, 0.05), gaussian(rng, 0.05), gaussian(rng, 0.05)));
  const double best = residual(rigid_fit<double>(before, after), before, after);
  for (int i = 0; i < 100; ++i) {
    RigidTransform r;
    r.rotation = test::random_quat(rng);
    r.translation = Vec3(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1));
    EXPECT_LE(best, residual(r, before, after));
  }
}

TEST(RigidFit, RejectsDegenerateInput) {
  const std::vector<Vec3> two{Vec3(0, 0, 0), Vec3(1, 0, 0)};
  EXPECT_THROW(rigid_fit<double>(two, two), DegeneracyError);
  const std::vector<Vec3> line{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(2, 0, 0)};
  EXPECT_THROW(rigid_fit<double>(line, line), DegeneracyError);
  const std::vector<Vec3> three{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};
  EXPECT_THROW(rigid_fit<double>(three, two), InputError);
}

TEST(Canonical, FlipsOntoPositiveHemisphere) {
  const Quat q = canonical(Quat(-0.5, 0.5, 0.5, 0.5));
  EXPECT_GE(q.w(), 0.0);
  EXPECT_NEAR(q.norm(), 1.0, 1e-15);
  EXPECT_NEAR(angular_distance_deg(q, Quat(-0.5, 0.5, 0.5, 0.5)), 0.0, 1e-6);
}

TEST(Task, ParsesNames) {
  EXPECT_EQ(parse_task("push"), Task::Push);
  EXPECT_EQ(parse_task("lift"), Task::Lift);
  EXPECT_THROW(parse_task("throw"), InputError);
  EXPECT_EQ(steps_per_episode(Task::Push), 750);
  EXPECT_EQ(steps_per_episode(Task::Lift), 1500);
}
