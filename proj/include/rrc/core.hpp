#pragma once

// Geometry primitives, the logistic reward kernel, cube keypoints and the
// success criterion. Everything here is pure and header-only; the templates
// accept any Eigen-compatible floating scalar.

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "rrc/errors.hpp"

namespace rrc {

template <typename Scalar>
using Vec3T = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Mat3T = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar>
using QuatT = Eigen::Quaternion<Scalar>;

using Vec3 = Vec3T<double>;
using Mat3 = Mat3T<double>;
using Quat = QuatT<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kCubeHalfExtent = 0.0325;

enum class Task : std::uint8_t { Push = 0, Lift = 1 };

inline std::string_view task_name(Task t) { return t == Task::Push ? "push" : "lift"; }

inline Task parse_task(std::string_view s) {
  if (s == "push") return Task::Push;
  if (s == "lift") return Task::Lift;
  throw InputError("unknown task '" + std::string(s) + "' (expected push|lift)");
}

// Episode length in control steps at 50 Hz: 15 s push, 30 s lift.
inline constexpr int steps_per_episode(Task t) { return t == Task::Push ? 750 : 1500; }

/// Normalizes q and flips it onto the w >= 0 hemisphere.
template <typename Scalar>
QuatT<Scalar> canonical(QuatT<Scalar> q) {
  q.normalize();
  if (q.w() < Scalar(0)) q.coeffs() = -q.coeffs();
  return q;
}

template <typename Scalar>
struct CubePoseT {
  Vec3T<Scalar> position = Vec3T<Scalar>::Zero();
  QuatT<Scalar> orientation = QuatT<Scalar>::Identity();
};
using CubePose = CubePoseT<double>;

struct KernelParams {
  double a = 30.0;  // 1/m
  double b = 1.0;

  void validate() const {
    if (!(a > 0.0) || !std::isfinite(a)) throw ParameterError("kernel parameter a must be > 0");
    if (!(b >= 0.0) || !std::isfinite(b)) throw ParameterError("kernel parameter b must be >= 0");
  }
};

struct SuccessThresholds {
  double pos_tol = 0.02;       // m
  double ori_tol_deg = 22.0;   // degrees

  void validate() const {
    if (!(pos_tol > 0.0) || !(ori_tol_deg > 0.0))
      throw ParameterError("success thresholds must be strictly positive");
  }
};

/// Logistic kernel (b + 2) / (exp(a d) + b + exp(-a d)), written with cosh so
/// that d = 0 evaluates to exactly 1.
template <typename Scalar>
Scalar kernel(Scalar d, const KernelParams& p) {
  p.validate();
  using std::cosh;
  const Scalar b = Scalar(p.b);
  return (b + Scalar(2)) / (b + Scalar(2) * cosh(Scalar(p.a) * d));
}

/// The eight cube vertices. Index bits (x, y, z) = (4, 2, 1) select the sign,
/// so the order runs (-,-,-), (-,-,+), (-,+,-), ... , (+,+,+).
template <typename Scalar>
std::array<Vec3T<Scalar>, 8> cube_corners(const CubePoseT<Scalar>& pose, Scalar half_extent) {
  const Mat3T<Scalar> r = pose.orientation.normalized().toRotationMatrix();
  std::array<Vec3T<Scalar>, 8> out;
  for (int i = 0; i < 8; ++i) {
    const Vec3T<Scalar> local((i & 4) ? half_extent : -half_extent,
                              (i & 2) ? half_extent : -half_extent,
                              (i & 1) ? half_extent : -half_extent);
    out[i] = pose.position + r * local;
  }
  return out;
}

template <typename Scalar>
Scalar min_corner_z(const CubePoseT<Scalar>& pose, Scalar half_extent) {
  // |R row 2| summed gives the largest downward reach of any vertex.
  const Mat3T<Scalar> r = pose.orientation.normalized().toRotationMatrix();
  return pose.position.z() - half_extent * r.row(2).cwiseAbs().sum();
}

template <typename Scalar>
Scalar push_reward(const Vec3T<Scalar>& achieved, const Vec3T<Scalar>& goal,
                   const KernelParams& p) {
  return kernel<Scalar>((achieved - goal).norm(), p);
}

/// Mean of the per-corner kernels between achieved and desired vertices.
template <typename Scalar>
Scalar lift_reward(const CubePoseT<Scalar>& achieved, const CubePoseT<Scalar>& goal,
                   Scalar half_extent, const KernelParams& p) {
  const auto ca = cube_corners(achieved, half_extent);
  const auto cg = cube_corners(goal, half_extent);
  Scalar sum(0);
  for (int i = 0; i < 8; ++i) sum += kernel<Scalar>((ca[i] - cg[i]).norm(), p);
  return sum / Scalar(8);
}

/// Geodesic angle between two orientations in degrees, in [0, 180]. q and -q
/// are the same rotation.
template <typename Scalar>
Scalar angular_distance_deg(const QuatT<Scalar>& q1, const QuatT<Scalar>& q2) {
  using std::abs;
  using std::atan2;
  const QuatT<Scalar> rel = q1.normalized().conjugate() * q2.normalized();
  const Scalar half = atan2(rel.vec().norm(), abs(rel.w()));
  return Scalar(2) * half * Scalar(180.0 / kPi);
}

template <typename Scalar>
bool is_success(const CubePoseT<Scalar>& achieved, const CubePoseT<Scalar>& goal,
                const SuccessThresholds& th, Task task) {
  const bool pos_ok = (achieved.position - goal.position).norm() <= Scalar(th.pos_tol);
  if (task == Task::Push) return pos_ok;
  return pos_ok &&
         angular_distance_deg(achieved.orientation, goal.orientation) <= Scalar(th.ori_tol_deg);
}

template <typename Scalar>
struct RigidTransformT {
  QuatT<Scalar> rotation = QuatT<Scalar>::Identity();
  Vec3T<Scalar> translation = Vec3T<Scalar>::Zero();

  Vec3T<Scalar> apply(const Vec3T<Scalar>& x) const { return rotation * x + translation; }
};
using RigidTransform = RigidTransformT<double>;

/// Least-squares rigid motion (Kabsch) with after_i ~= R before_i + t and
/// det(R) = +1. Throws DegeneracyError for fewer than three points or
/// collinear/coincident configurations.
template <typename Scalar>
RigidTransformT<Scalar> rigid_fit(std::span<const Vec3T<Scalar>> before,
                                  std::span<const Vec3T<Scalar>> after) {
  if (before.size() != after.size())
    throw InputError("rigid_fit: point lists differ in length");
  if (before.size() < 3) throw DegeneracyError("rigid_fit: need at least 3 points");

  const Scalar n = Scalar(before.size());
  Vec3T<Scalar> cb = Vec3T<Scalar>::Zero(), ca = Vec3T<Scalar>::Zero();
  for (std::size_t i = 0; i < before.size(); ++i) {
    cb += before[i];
    ca += after[i];
  }
  cb /= n;
  ca /= n;

  Mat3T<Scalar> spread = Mat3T<Scalar>::Zero();
  Mat3T<Scalar> cov = Mat3T<Scalar>::Zero();
  for (std::size_t i = 0; i < before.size(); ++i) {
    const Vec3T<Scalar> p = before[i] - cb;
    spread += p * p.transpose();
    cov += (after[i] - ca) * p.transpose();
  }

  // Rank of the before-cloud: the second principal variance must not vanish.
  Eigen::SelfAdjointEigenSolver<Mat3T<Scalar>> es(spread, Eigen::EigenvaluesOnly);
  const Scalar largest = es.eigenvalues()(2);
  if (!(largest > Scalar(0)) || es.eigenvalues()(1) <= largest * Scalar(1e-12))
    throw DegeneracyError("rigid_fit: points are collinear or coincident");

  Eigen::JacobiSVD<Mat3T<Scalar>> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Mat3T<Scalar> u = svd.matrixU();
  const Mat3T<Scalar> v = svd.matrixV();
  Mat3T<Scalar> d = Mat3T<Scalar>::Identity();
  if ((u * v.transpose()).determinant() < Scalar(0)) d(2, 2) = Scalar(-1);
  const Mat3T<Scalar> r = u * d * v.transpose();

  RigidTransformT<Scalar> out;
  out.rotation = canonical(QuatT<Scalar>(r));
  out.translation = ca - r * cb;
  return out;
}

}  // namespace rrc
