#include <algorithm>
#include <cmath>

#include "rrc/env.hpp"

namespace rrc {

void ArenaSpec::validate() const {
  const double vals[] = {radius,         cube_half_extent, dt,           gravity,
                         max_tip_step,   contact_radius,   grasp_radius, workspace_radius,
                         home_radius,    home_height};
  for (double v : vals)
    if (!(v > 0.0) || !std::isfinite(v)) throw ParameterError("arena parameters must be positive");
  if (workspace_offset < 0.0) throw ParameterError("workspace_offset must be >= 0");
  if (cube_half_extent >= radius) throw ParameterError("cube does not fit in the arena");
}

Vec3 ArenaSpec::finger_direction(int i) const {
  const double ang = 2.0 * kPi * double(i) / 3.0;
  return {std::cos(ang), std::sin(ang), 0.0};
}

Vec3 ArenaSpec::workspace_center(int i) const { return workspace_offset * finger_direction(i); }

Vec3 ArenaSpec::home_tip(int i) const {
  Vec3 p = home_radius * finger_direction(i);
  p.z() = home_height;
  return p;
}

Quat arena_rotation(int j) {
  return Quat(Eigen::AngleAxisd(2.0 * kPi * double(j) / 3.0, Vec3::UnitZ()));
}

namespace {

Vec3 confine_tip(Vec3 p, int finger, const ArenaSpec& arena) {
  const Vec3 c = arena.workspace_center(finger);
  const Vec3 d = p - c;
  const double n = d.norm();
  if (n > arena.workspace_radius) p = c + d * (arena.workspace_radius / n);
  if (p.z() < 0.0) p.z() = 0.0;
  return p;
}

// Horizontal clamp into the arena cylinder, then lift until no vertex is
// below the ground plane.
void keep_in_arena(CubePose& cube, const ArenaSpec& arena) {
  const double rmax = arena.cube_max_radius();
  const double rh = std::hypot(cube.position.x(), cube.position.y());
  if (rh > rmax) {
    cube.position.x() *= rmax / rh;
    cube.position.y() *= rmax / rh;
  }
  const double mz = min_corner_z(cube, arena.cube_half_extent);
  if (mz < 0.0) cube.position.z() -= mz;
}

bool grasp_closed(const std::array<Vec3, kNumFingers>& tips, const Vec3& center,
                  const ArenaSpec& arena) {
  Vec3 centroid = Vec3::Zero();
  for (const auto& t : tips) {
    if ((t - center).norm() > arena.grasp_radius) return false;
    centroid += t;
  }
  centroid /= double(kNumFingers);
  return (centroid - center).norm() <= arena.cube_half_extent;
}

}  // namespace

EnvState advance(const EnvState& state, const Action& action, const ArenaSpec& arena) {
  if (!action.allFinite()) throw InputError("action contains non-finite values");

  EnvState next = state;
  next.step_index = state.step_index + 1;

  for (int i = 0; i < kNumFingers; ++i) {
    Vec3 d = action.segment<3>(3 * i) * arena.max_tip_step;
    const double n = d.norm();
    if (n > arena.max_tip_step) d *= arena.max_tip_step / n;
    next.tips[i] = confine_tip(state.tips[i] + d, i, arena);
  }

  if (next.attached) {
    RigidTransform motion;
    try {
      motion = rigid_fit<double>(state.tips, next.tips);
    } catch (const DegeneracyError&) {
      Vec3 shift = Vec3::Zero();
      for (int i = 0; i < kNumFingers; ++i) shift += next.tips[i] - state.tips[i];
      motion.translation = shift / double(kNumFingers);
    }
    next.cube.position = motion.apply(state.cube.position);
    next.cube.orientation = canonical(Quat(motion.rotation * state.cube.orientation));
    keep_in_arena(next.cube, arena);
    for (const auto& t : next.tips)
      if ((t - next.cube.position).norm() > 1.5 * arena.grasp_radius) next.attached = false;
    if (next.attached) return next;
  }

  // Quasi-static contact: every penetrating fingertip shoves the cube out of
  // the contact sphere along the contact normal.
  Vec3 shove = Vec3::Zero();
  for (const auto& t : next.tips) {
    const Vec3 d = next.cube.position - t;
    const double r = d.norm();
    if (r < arena.contact_radius && r > 1e-12) shove += (arena.contact_radius - r) / r * d;
  }
  next.cube.position += shove;
  keep_in_arena(next.cube, arena);

  if (grasp_closed(next.tips, next.cube.position, arena)) {
    next.attached = true;
    return next;
  }

  const double mz = min_corner_z(next.cube, arena.cube_half_extent);
  if (mz > 0.0) next.cube.position.z() -= std::min(arena.fall_per_step(), mz);
  return next;
}

EnvState rotate_state(const EnvState& s, int j) {
  j = ((j % 3) + 3) % 3;
  const Quat r = arena_rotation(j);
  EnvState out = s;
  out.cube.position = r * s.cube.position;
  out.cube.orientation = canonical(Quat(r * s.cube.orientation));
  for (int i = 0; i < kNumFingers; ++i) out.tips[(i + j) % kNumFingers] = r * s.tips[i];
  return out;
}

Action rotate_action(const Action& a, int j) {
  j = ((j % 3) + 3) % 3;
  const Mat3 r = arena_rotation(j).toRotationMatrix();
  Action out;
  for (int i = 0; i < kNumFingers; ++i)
    out.segment<3>(3 * ((i + j) % kNumFingers)) = r * a.segment<3>(3 * i);
  return out;
}

bool state_invariants_hold(const EnvState& s, const ArenaSpec& arena, double tol) {
  if (std::abs(s.cube.orientation.norm() - 1.0) > 1e-6) return false;
  if (std::hypot(s.cube.position.x(), s.cube.position.y()) > arena.cube_max_radius() + tol)
    return false;
  if (!s.attached && min_corner_z(s.cube, arena.cube_half_extent) < -tol) return false;
  for (int i = 0; i < kNumFingers; ++i) {
    if ((s.tips[i] - arena.workspace_center(i)).norm() > arena.workspace_radius + tol) return false;
    if (s.tips[i].z() < -tol) return false;
  }
  return true;
}

EnvState object_reset_trajectory(const EnvState& state, Rng& rng, const ArenaSpec& arena) {
  EnvState out = state;
  // Uniform on the 5 cm disk around the center.
  const double r = 0.05 * std::sqrt(uniform(rng));
  const double phi = uniform(rng, 0.0, 2.0 * kPi);
  const double yaw = uniform(rng, -kPi, kPi);
  out.cube.position = Vec3(r * std::cos(phi), r * std::sin(phi), arena.cube_half_extent);
  out.cube.orientation = canonical(Quat(Eigen::AngleAxisd(yaw, Vec3::UnitZ())));
  for (int i = 0; i < kNumFingers; ++i) out.tips[i] = arena.home_tip(i);
  out.attached = false;
  out.step_index = 0;
  return out;
}

EnvState reset_episode(Rng& rng, const ArenaSpec& arena) {
  return object_reset_trajectory(EnvState{}, rng, arena);
}

}  // namespace rrc
