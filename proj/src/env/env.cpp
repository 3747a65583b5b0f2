#include <algorithm>
#include <cmath>

#include "rrc/env.hpp"

namespace rrc {

void ObservationModel::validate() const {
  if (sigma_pos < 0.0 || sigma_ori_deg < 0.0 || max_delay < 0 || delay_prob < 0.0 ||
      delay_prob > 1.0 || low_conf_prob < 0.0 || low_conf_prob > 1.0 ||
      low_conf_noise_scale < 0.0)
    throw ParameterError("observation model parameters must be non-negative probabilities/scales");
}

std::array<double, 7> Goal::to_record() const {
  const Quat q = canonical(pose.orientation);
  return {pose.position.x(), pose.position.y(), pose.position.z(), q.w(), q.x(), q.y(), q.z()};
}

Goal Goal::from_record(Task task, const std::array<double, 7>& rec) {
  Goal g;
  g.task = task;
  g.pose.position = Vec3(rec[0], rec[1], rec[2]);
  g.pose.orientation = Quat(rec[3], rec[4], rec[5], rec[6]);
  if (g.pose.orientation.norm() < 1e-12) g.pose.orientation = Quat::Identity();
  g.pose.orientation = canonical(g.pose.orientation);
  return g;
}

Eigen::VectorXd Observation::to_vector() const {
  namespace L = obs_layout;
  const Task task = goal.task;
  Eigen::VectorXd v(L::dim(task));
  for (int i = 0; i < kNumFingers; ++i) v.segment<3>(L::kTips + 3 * i) = tips[i];
  v.segment<3>(L::kCubePos) = cube.position;
  const Quat q = canonical(cube.orientation);
  v.segment<4>(L::kCubeQuat) << q.w(), q.x(), q.y(), q.z();
  v.segment<3>(L::kGoal) = goal.pose.position;
  if (task == Task::Lift) {
    const Quat g = canonical(goal.pose.orientation);
    v.segment<4>(L::kGoal + 3) << g.w(), g.x(), g.y(), g.z();
  }
  v(L::confidence(task)) = confidence;
  v(L::delay(task)) = double(delay);
  return v;
}

Observation Observation::from_vector(Task task, const Eigen::Ref<const Eigen::VectorXd>& v) {
  namespace L = obs_layout;
  if (v.size() != L::dim(task)) throw FormatError("observation vector has wrong dimension");
  Observation o;
  for (int i = 0; i < kNumFingers; ++i) o.tips[i] = v.segment<3>(L::kTips + 3 * i);
  o.cube.position = v.segment<3>(L::kCubePos);
  Quat q(v(L::kCubeQuat), v(L::kCubeQuat + 1), v(L::kCubeQuat + 2), v(L::kCubeQuat + 3));
  o.cube.orientation = q.norm() > 1e-12 ? canonical(q) : Quat::Identity();
  o.goal.task = task;
  o.goal.pose.position = v.segment<3>(L::kGoal);
  if (task == Task::Lift) {
    Quat g(v(L::kGoal + 3), v(L::kGoal + 4), v(L::kGoal + 5), v(L::kGoal + 6));
    o.goal.pose.orientation = g.norm() > 1e-12 ? canonical(g) : Quat::Identity();
  }
  o.confidence = v(L::confidence(task));
  o.delay = int(std::lround(v(L::delay(task))));
  return o;
}

double task_reward(Task task, const CubePose& cube, const Goal& goal, const EnvConfig& cfg) {
  if (task == Task::Push) return push_reward<double>(cube.position, goal.pose.position, cfg.kernel);
  return lift_reward<double>(cube, goal.pose, cfg.arena.cube_half_extent, cfg.kernel);
}

Quat sample_uniform_rotation(Rng& rng) {
  const double u1 = uniform(rng), u2 = uniform(rng), u3 = uniform(rng);
  const double a = std::sqrt(1.0 - u1), b = std::sqrt(u1);
  const double t2 = 2.0 * kPi * u2, t3 = 2.0 * kPi * u3;
  // (x, y, z, w) = (a sin t2, a cos t2, b sin t3, b cos t3)
  return canonical(Quat(b * std::cos(t3), a * std::sin(t2), a * std::cos(t2), b * std::sin(t3)));
}

namespace {

Vec3 sample_disk(Rng& rng, double radius) {
  const double r = radius * std::sqrt(uniform(rng));
  const double phi = uniform(rng, 0.0, 2.0 * kPi);
  return {r * std::cos(phi), r * std::sin(phi), 0.0};
}

constexpr double kLiftMaxHeight = 0.10;

}  // namespace

Goal sample_goal_push(Rng& rng, const ArenaSpec& arena) {
  Goal g;
  g.task = Task::Push;
  g.pose.position = sample_disk(rng, arena.cube_max_radius());
  g.pose.position.z() = arena.cube_half_extent;
  return g;
}

Goal sample_goal_lift(Rng& rng, const ArenaSpec& arena) {
  Goal g;
  g.task = Task::Lift;
  g.pose.orientation = sample_uniform_rotation(rng);
  // Only the position is resampled on ground intersection, so the accepted
  // orientations stay exactly uniform.
  do {
    g.pose.position = sample_disk(rng, arena.cube_max_radius());
    g.pose.position.z() = uniform(rng, 0.0, kLiftMaxHeight);
  } while (min_corner_z(g.pose, arena.cube_half_extent) < 0.0);
  return g;
}

Goal sample_goal(Task task, Rng& rng, const ArenaSpec& arena) {
  return task == Task::Push ? sample_goal_push(rng, arena) : sample_goal_lift(rng, arena);
}

Env::Env(Task task, EnvConfig cfg, std::uint64_t noise_seed)
    : task_(task), cfg_(std::move(cfg)), rng_(noise_seed) {
  cfg_.arena.validate();
  cfg_.obs_model.validate();
  cfg_.kernel.validate();
  cfg_.success.validate();
}

Observation Env::reset(const EnvState& initial, const Goal& goal) {
  if (goal.task != task_) throw InputError("goal task does not match environment task");
  state_ = initial;
  goal_ = goal;
  pose_history_.clear();
  pose_history_.push_front(state_.cube);
  delay_ = 0;
  return observe();
}

StepResult Env::step(const Action& action) {
  StepResult out;
  state_ = advance(state_, action, cfg_.arena);
  pose_history_.push_front(state_.cube);
  while (int(pose_history_.size()) > cfg_.obs_model.max_delay + 1) pose_history_.pop_back();
  out.state = state_;
  out.reward = task_reward(task_, state_.cube, goal_, cfg_);
  out.observation = observe();
  return out;
}

Observation Env::observe() {
  const ObservationModel& m = cfg_.obs_model;
  // Delay grows by one step with probability delay_prob, otherwise the
  // tracker catches up.
  if (m.delay_prob > 0.0 && uniform(rng_) < m.delay_prob)
    delay_ = std::min({delay_ + 1, m.max_delay, int(pose_history_.size()) - 1});
  else
    delay_ = 0;

  double confidence = 1.0;
  double scale = 1.0;
  if (m.low_conf_prob > 0.0 && uniform(rng_) < m.low_conf_prob) {
    confidence = uniform(rng_, 0.0, 0.3);
    scale = m.low_conf_noise_scale;
  } else if (m.low_conf_prob > 0.0 || m.sigma_pos > 0.0 || m.sigma_ori_deg > 0.0) {
    confidence = uniform(rng_, 0.7, 1.0);
  }

  CubePose est = pose_history_[std::size_t(delay_)];
  if (m.sigma_pos > 0.0) {
    for (int k = 0; k < 3; ++k) est.position(k) += gaussian(rng_, m.sigma_pos * scale);
  }
  if (m.sigma_ori_deg > 0.0) {
    const double s = m.sigma_ori_deg * scale * kPi / 180.0;
    const Vec3 rv(gaussian(rng_, s), gaussian(rng_, s), gaussian(rng_, s));
    const double ang = rv.norm();
    if (ang > 0.0) est.orientation = Quat(Eigen::AngleAxisd(ang, rv / ang)) * est.orientation;
  }
  est.orientation = canonical(est.orientation);

  Observation o;
  o.tips = state_.tips;
  o.cube = est;
  o.goal = goal_;
  o.confidence = confidence;
  o.delay = delay_;
  return o;
}

}  // namespace rrc
