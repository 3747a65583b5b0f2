#include <string>

#include "rrc/data.hpp"

namespace rrc {

namespace {

Vec3 rotated(const Mat3& r, const Eigen::Ref<const Eigen::VectorXd>& v, int at) {
  return r * Vec3(v(at), v(at + 1), v(at + 2));
}

Quat read_quat(const Eigen::Ref<const Eigen::VectorXd>& v, int at) {
  return Quat(v(at), v(at + 1), v(at + 2), v(at + 3));
}

// Sign flip onto w >= 0 without renormalizing, so that stored float
// quaternions survive repeated rotation unchanged.
void write_quat(Eigen::Ref<Eigen::VectorXd> v, int at, const Quat& q) {
  const double s = q.w() < 0.0 ? -1.0 : 1.0;
  v.segment<4>(at) << s * q.w(), s * q.x(), s * q.y(), s * q.z();
}

}  // namespace

Eigen::VectorXd rotate_observation(Task task, const Eigen::Ref<const Eigen::VectorXd>& obs, int j) {
  namespace L = obs_layout;
  if (obs.size() != L::dim(task)) throw FormatError("observation does not follow the environment layout");
  j = ((j % 3) + 3) % 3;
  const Quat rq = arena_rotation(j);
  const Mat3 r = rq.toRotationMatrix();
  Eigen::VectorXd out = obs;
  for (int i = 0; i < kNumFingers; ++i)
    out.segment<3>(L::kTips + 3 * ((i + j) % kNumFingers)) = rotated(r, obs, L::kTips + 3 * i);
  out.segment<3>(L::kCubePos) = rotated(r, obs, L::kCubePos);
  write_quat(out, L::kCubeQuat, rq * read_quat(obs, L::kCubeQuat));
  out.segment<3>(L::kGoal) = rotated(r, obs, L::kGoal);
  if (task == Task::Lift) write_quat(out, L::kGoal + 3, rq * read_quat(obs, L::kGoal + 3));
  return out;
}

Dataset rotational_augment(const Dataset& d, int k) {
  if (k < 1 || k > 3) throw InputError("rotation count must be 1, 2 or 3");
  if (d.obs_dim() != obs_layout::dim(d.task()) || d.act_dim() != kActionDim)
    throw FormatError("dataset does not follow the environment observation/action layout");
  const Eigen::Index n = d.num_transitions();
  const int steps = d.steps_per_episode();
  MatrixRf obs(n * k, d.obs_dim());
  MatrixRf act(n * k, d.act_dim());
  Eigen::VectorXf rew(n * k);
  std::vector<EpisodeInfo> infos;
  infos.reserve(std::size_t(d.num_episodes()) * std::size_t(k));
  for (int j = 0; j < k; ++j) {
    const Eigen::Index base = n * j;
    rew.segment(base, n) = d.rewards();
    if (j == 0) {
      obs.middleRows(0, n) = d.observations();
      act.middleRows(0, n) = d.actions();
      infos.insert(infos.end(), d.episodes().begin(), d.episodes().end());
      continue;
    }
    for (Eigen::Index t = 0; t < n; ++t) {
      const Eigen::VectorXd o = d.observations().row(t).transpose().cast<double>();
      obs.row(base + t) = rotate_observation(d.task(), o, j).cast<float>().transpose();
      const Action a = d.actions().row(t).transpose().cast<double>();
      act.row(base + t) = rotate_action(a, j).cast<float>().transpose();
    }
    const Quat rq = arena_rotation(j);
    for (const auto& e : d.episodes()) {
      Goal g = Goal::from_record(d.task(), e.goal);
      g.pose.position = rq * g.pose.position;
      if (d.task() == Task::Lift) g.pose.orientation = canonical(Quat(rq * g.pose.orientation));
      infos.push_back({e.behavior, g.to_record()});
    }
  }
  return Dataset::assemble(d.task(), Quality::Augmented, steps, std::move(infos), std::move(obs),
                           std::move(act), std::move(rew));
}

}  // namespace rrc
