#include <algorithm>
#include <cmath>
#include <limits>

#include "rrc/env.hpp"

namespace rrc {

namespace {

constexpr double kHoldRadius = 0.01;     // push: stop once the estimate is this close
constexpr double kStandoff = 0.005;      // gap kept while lining up behind the cube
constexpr double kAlignTol = 0.012;
constexpr double kGripRadius = 0.036;    // fingertip distance from the grip centroid
constexpr double kPreGraspRadius = 0.075;
constexpr double kRotateMinHeight = 0.065;
constexpr double kMaxRotateStep = 4.0 * kPi / 180.0;
constexpr double kSettleAngle = 10.0 * kPi / 180.0;

Vec3 horizontal(Vec3 v) {
  v.z() = 0.0;
  return v;
}

Vec3 toward(const Vec3& tip, const Vec3& target, double gain, const ArenaSpec& arena) {
  return gain * (target - tip) / arena.max_tip_step;
}

// Clears the cube vertically before travelling home.
Vec3 retreat_target(const Vec3& tip, const Vec3& home, const Vec3& cube, double travel_z,
                    const ArenaSpec& arena) {
  const bool near = horizontal(tip - cube).norm() < arena.contact_radius + 0.03;
  if (near && tip.z() < travel_z - 0.01) return {tip.x(), tip.y(), travel_z};
  return home;
}

Action push_expert(const Observation& obs, const ArenaSpec& arena, const ExpertGains& gains) {
  Action act = Action::Zero();
  const Vec3 c = obs.cube.position;
  const Vec3 e = horizontal(obs.goal.pose.position - c);
  const double dist = e.norm();
  if (dist < kHoldRadius) return act;

  const Vec3 u = e / dist;
  const double push_z = arena.cube_half_extent;
  const double rc = arena.contact_radius;
  const double travel_z = c.z() + rc + 0.02;
  Vec3 behind = c - u * (rc + kStandoff);
  behind.z() = push_z;

  int pusher = 0;
  for (int i = 1; i < kNumFingers; ++i)
    if ((obs.tips[i] - behind).norm() < (obs.tips[pusher] - behind).norm()) pusher = i;

  for (int i = 0; i < kNumFingers; ++i) {
    const Vec3& tip = obs.tips[i];
    Vec3 target;
    if (i != pusher) {
      target = retreat_target(tip, arena.home_tip(i), c, travel_z, arena);
    } else {
      const Vec3 rel = horizontal(tip - c);
      const double s = rel.dot(u);
      const double lateral = (rel - s * u).norm();
      const bool lined_up = tip.z() < push_z + kAlignTol && s < 0.0 && lateral < kAlignTol &&
                            -s < rc + 0.03;
      if (lined_up) {
        // Aim a little inside the contact sphere; the penetration depth is
        // what the cube moves this step.
        target = c - u * (rc - gains.push * dist);
        target.z() = push_z;
      } else if (horizontal(tip - behind).norm() > 0.01) {
        target = tip.z() < travel_z - 0.01 ? Vec3(tip.x(), tip.y(), travel_z)
                                            : Vec3(behind.x(), behind.y(), travel_z);
      } else {
        target = behind;
      }
    }
    act.segment<3>(3 * i) = toward(tip, target, gains.move, arena);
  }
  return act;
}

Action lift_expert(const Observation& obs, const ArenaSpec& arena, const ExpertGains& gains) {
  Action act = Action::Zero();
  const Vec3 c = obs.cube.position;
  Vec3 centroid = Vec3::Zero();
  for (const auto& t : obs.tips) centroid += t;
  centroid /= double(kNumFingers);

  bool closed = (centroid - c).norm() < 0.02;
  for (const auto& t : obs.tips)
    closed = closed && (t - c).norm() < arena.grasp_radius + 0.01 &&
             (t - centroid).norm() < kGripRadius + kAlignTol;

  if (closed) {
    const Quat err = canonical(Quat(obs.goal.pose.orientation * obs.cube.orientation.conjugate()));
    const Eigen::AngleAxisd aa(err);
    const double phi = aa.angle();
    const Vec3 goal = obs.goal.pose.position;
    const double target_z = phi > kSettleAngle ? std::max(goal.z(), kRotateMinHeight + 0.005)
                                               : goal.z();
    Vec3 dp = gains.lift * (Vec3(goal.x(), goal.y(), target_z) - c);
    const double cap = 0.6 * arena.max_tip_step;
    if (dp.norm() > cap) dp *= cap / dp.norm();
    const double dtheta =
        (c.z() >= kRotateMinHeight && phi > 1e-9) ? std::min(gains.rotate * phi, kMaxRotateStep)
                                                  : 0.0;
    const Mat3 rot =
        dtheta > 0.0 ? Eigen::AngleAxisd(dtheta, aa.axis()).toRotationMatrix() : Mat3::Identity();
    for (int i = 0; i < kNumFingers; ++i) {
      Vec3 rel = rot * (obs.tips[i] - centroid);
      const double len = rel.norm();
      if (len > 1e-9) rel *= 1.0 + gains.grip * (kGripRadius / len - 1.0);
      const Vec3 target = centroid + dp + rel;
      act.segment<3>(3 * i) = toward(obs.tips[i], target, gains.move, arena);
    }
    return act;
  }

  const double approach_z = c.z() + 0.06;
  std::array<bool, kNumFingers> aligned{};
  for (int i = 0; i < kNumFingers; ++i) {
    const Vec3 dir = arena.finger_direction(i);
    const Vec3 rel = horizontal(obs.tips[i] - c);
    const double radial = rel.dot(dir);
    const double lateral = (rel - radial * dir).norm();
    aligned[i] = lateral < kAlignTol && std::abs(obs.tips[i].z() - c.z()) < kAlignTol &&
                 radial > kGripRadius - kAlignTol && radial < kPreGraspRadius + kAlignTol;
  }
  const bool all_aligned = aligned[0] && aligned[1] && aligned[2];

  for (int i = 0; i < kNumFingers; ++i) {
    const Vec3& tip = obs.tips[i];
    const Vec3 dir = arena.finger_direction(i);
    const Vec3 grip = c + kGripRadius * dir;
    const Vec3 pre = c + kPreGraspRadius * dir;
    Vec3 target;
    if (aligned[i]) {
      target = all_aligned ? grip : pre;
    } else if (horizontal(tip - pre).norm() > kAlignTol) {
      target = tip.z() < approach_z - 0.01 ? Vec3(tip.x(), tip.y(), approach_z)
                                            : Vec3(pre.x(), pre.y(), approach_z);
    } else {
      target = pre;
    }
    act.segment<3>(3 * i) = toward(tip, target, gains.move, arena);
  }
  return act;
}

}  // namespace

Action cap_finger_blocks(Action a) {
  for (int i = 0; i < kNumFingers; ++i) {
    auto block = a.segment<3>(3 * i);
    const double n = block.norm();
    if (n > 1.0 + 8 * std::numeric_limits<double>::epsilon()) block /= n;
  }
  return a;
}

Action expert_policy(const Observation& obs, Task task, const ArenaSpec& arena,
                     const ExpertGains& gains) {
  const Action raw =
      task == Task::Push ? push_expert(obs, arena, gains) : lift_expert(obs, arena, gains);
  return cap_finger_blocks(raw);
}

Action weak_policy(const Observation& obs, Task task, const ArenaSpec& arena, Rng& rng,
                   const WeakParams& params, const ExpertGains& gains) {
  ExpertGains scaled = gains;
  scaled.push *= params.gain_scale;
  scaled.lift *= params.gain_scale;
  scaled.rotate *= params.gain_scale;
  scaled.grip *= params.gain_scale;
  Action a = params.gain_scale * expert_policy(obs, task, arena, scaled);
  if (params.sigma > 0.0)
    for (int k = 0; k < kActionDim; ++k) a(k) += gaussian(rng, params.sigma);
  return cap_finger_blocks(a);
}

}  // namespace rrc
