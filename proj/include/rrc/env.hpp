#pragma once

// Simplified tri-fingertip cube simulator: kinematic fingertips, quasi-static
// pushing, attach-and-follow grasping, a noisy/delayed pose tracker, goal
// sampling, and the scripted behavior controllers.

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <deque>
#include <memory>
#include <string>
#include <vector>

#include "rrc/core.hpp"
#include "rrc/rng.hpp"

namespace rrc {

inline constexpr int kNumFingers = 3;
inline constexpr int kActionDim = 9;

using Action = Eigen::Matrix<double, kActionDim, 1>;

struct ArenaSpec {
  double radius = 0.19;
  double cube_half_extent = kCubeHalfExtent;
  double dt = 0.02;
  double gravity = 9.81;
  double max_tip_step = 0.008;
  double contact_radius = 0.04;
  double grasp_radius = 0.05;
  // Each fingertip is confined to a sphere whose center sits slightly toward
  // that finger's base, and to z >= 0.
  double workspace_offset = 0.06;
  double workspace_radius = 0.28;
  double home_radius = 0.08;
  double home_height = 0.10;

  void validate() const;

  /// Unit horizontal direction of finger i's base (i * 120 degrees).
  Vec3 finger_direction(int i) const;
  Vec3 workspace_center(int i) const;
  Vec3 home_tip(int i) const;
  double fall_per_step() const { return gravity * dt * dt; }
  /// Largest admissible horizontal distance of the cube center from the axis.
  double cube_max_radius() const { return radius - cube_half_extent; }
};

struct EnvState {
  CubePose cube;
  std::array<Vec3, kNumFingers> tips;
  bool attached = false;
  int step_index = 0;
};

struct ObservationModel {
  double sigma_pos = 0.005;      // m
  double sigma_ori_deg = 3.0;
  int max_delay = 5;             // steps
  double delay_prob = 0.1;
  double low_conf_prob = 0.05;
  double low_conf_noise_scale = 4.0;

  void validate() const;
  static ObservationModel noiseless() { return {0.0, 0.0, 0, 0.0, 0.0, 1.0}; }
};

struct Goal {
  Task task = Task::Push;
  CubePose pose;  // push goals keep the identity orientation

  std::array<double, 7> to_record() const;
  static Goal from_record(Task task, const std::array<double, 7>& rec);
};

// Flat observation layout (shared by datasets, augmentation and policies):
//   [0, 9)    fingertip positions, finger-major
//   [9, 12)   estimated cube position
//   [12, 16)  estimated cube orientation (w, x, y, z), w >= 0
//   [16, 16+g) goal: push (x, y, z), lift (x, y, z, w, qx, qy, qz)
//   then pose confidence, then pose delay in steps.
namespace obs_layout {
inline constexpr int kTips = 0;
inline constexpr int kCubePos = 9;
inline constexpr int kCubeQuat = 12;
inline constexpr int kGoal = 16;
inline constexpr int goal_dim(Task t) { return t == Task::Push ? 3 : 7; }
inline constexpr int confidence(Task t) { return kGoal + goal_dim(t); }
inline constexpr int delay(Task t) { return kGoal + goal_dim(t) + 1; }
inline constexpr int dim(Task t) { return kGoal + goal_dim(t) + 2; }
}  // namespace obs_layout

struct Observation {
  std::array<Vec3, kNumFingers> tips;
  CubePose cube;  // estimate
  Goal goal;
  double confidence = 1.0;
  int delay = 0;

  Eigen::VectorXd to_vector() const;
  static Observation from_vector(Task task, const Eigen::Ref<const Eigen::VectorXd>& v);
};

struct EnvConfig {
  ArenaSpec arena;
  ObservationModel obs_model;
  KernelParams kernel;
  SuccessThresholds success;
};

double task_reward(Task task, const CubePose& cube, const Goal& goal, const EnvConfig& cfg);

Goal sample_goal_push(Rng& rng, const ArenaSpec& arena);
Goal sample_goal_lift(Rng& rng, const ArenaSpec& arena);
Goal sample_goal(Task task, Rng& rng, const ArenaSpec& arena);

/// Uniformly distributed rotation (Shoemake's subgroup algorithm).
Quat sample_uniform_rotation(Rng& rng);

/// Cube flat near the center (offset <= 0.05 m, uniform yaw), fingertips at
/// home, not attached.
EnvState object_reset_trajectory(const EnvState& state, Rng& rng, const ArenaSpec& arena);
EnvState reset_episode(Rng& rng, const ArenaSpec& arena);

/// Noise-free state transition. Throws InputError on non-finite actions.
EnvState advance(const EnvState& state, const Action& action, const ArenaSpec& arena);

/// 120 degree rotation j times about the vertical axis, with finger i mapped to
/// slot (i + j) mod 3.
EnvState rotate_state(const EnvState& s, int j);
Action rotate_action(const Action& a, int j);
Quat arena_rotation(int j);

bool state_invariants_hold(const EnvState& s, const ArenaSpec& arena, double tol = 1e-9);

struct StepResult {
  EnvState state;
  Observation observation;
  double reward = 0.0;
};

/// One environment instance: true state plus the pose tracker's delay line
/// and noise generator. Single-threaded; create one per episode runner.
class Env {
 public:
  Env(Task task, EnvConfig cfg, std::uint64_t noise_seed);

  Observation reset(const EnvState& initial, const Goal& goal);
  StepResult step(const Action& action);

  Task task() const { return task_; }
  const EnvState& state() const { return state_; }
  const Goal& goal() const { return goal_; }
  const EnvConfig& config() const { return cfg_; }

 private:
  Observation observe();

  Task task_;
  EnvConfig cfg_;
  Rng rng_;
  EnvState state_;
  Goal goal_;
  std::deque<CubePose> pose_history_;  // front = newest
  int delay_ = 0;
};

// Scripted behavior controllers.

struct ExpertGains {
  double move = 1.0;   // fraction of the remaining fingertip error closed per step
  double push = 0.5;   // fraction of the cube-goal distance pushed per step
  double lift = 0.3;   // fraction of the grasped-cube position error per step
  double rotate = 0.3; // fraction of the orientation error per step
  double grip = 0.5;   // pull of each grasping fingertip back to the grip radius
};

struct WeakParams {
  double sigma = 0.4;
  double gain_scale = 0.5;
};

Action expert_policy(const Observation& obs, Task task, const ArenaSpec& arena,
                     const ExpertGains& gains = {});
Action weak_policy(const Observation& obs, Task task, const ArenaSpec& arena, Rng& rng,
                   const WeakParams& params = {}, const ExpertGains& gains = {});

/// Caps every fingertip block at unit norm, which also keeps each component
/// within [-1, 1].
Action cap_finger_blocks(Action a);

}  // namespace rrc
