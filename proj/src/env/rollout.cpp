#include "rrc/policy.hpp"

namespace rrc {

namespace {

class ScriptedSession final : public PolicySession {
 public:
  ScriptedSession(BehaviorKind kind, Task task, const ArenaSpec& arena, const WeakParams& weak,
                  const ExpertGains& gains, std::uint64_t seed)
      : kind_(kind), task_(task), arena_(arena), weak_(weak), gains_(gains), rng_(seed) {}

  Action act(const Eigen::VectorXd& observation) override {
    const Observation obs = Observation::from_vector(task_, observation);
    if (kind_ == BehaviorKind::Expert) return expert_policy(obs, task_, arena_, gains_);
    return weak_policy(obs, task_, arena_, rng_, weak_, gains_);
  }

 private:
  BehaviorKind kind_;
  Task task_;
  ArenaSpec arena_;
  WeakParams weak_;
  ExpertGains gains_;
  Rng rng_;
};

}  // namespace

std::unique_ptr<PolicySession> ScriptedPolicy::start(const EpisodeContext& ctx) const {
  return std::make_unique<ScriptedSession>(kind_, ctx.task, arena_, weak_, gains_, ctx.seed);
}

std::unique_ptr<PolicySession> BehaviorPolicy::start(const EpisodeContext& ctx) const {
  if (mixed_ && ctx.episode_index % 2 == 0) return weak_.start(ctx);
  return expert_.start(ctx);
}

EpisodeOutcome run_episode(Env& env, const EnvState& initial, const Goal& goal,
                           PolicySession& session, EpisodeTrace* trace) {
  EpisodeOutcome out;
  Eigen::VectorXd obs = env.reset(initial, goal).to_vector();
  const int steps = steps_per_episode(env.task());
  if (trace) {
    trace->observations.reserve(std::size_t(steps));
    trace->actions.reserve(std::size_t(steps));
    trace->rewards.reserve(std::size_t(steps));
  }
  for (int t = 0; t < steps; ++t) {
    Action a;
    try {
      a = session.act(obs);
    } catch (const std::exception& e) {
      out.failed = true;
      out.error = e.what();
    }
    if (!out.failed && !a.allFinite()) {
      out.failed = true;
      out.error = "non-finite action";
    }
    if (out.failed) {
      out.episode_return = 0.0;
      out.success = false;
      out.final_cube = env.state().cube;
      return out;
    }
    const StepResult r = env.step(a);
    if (trace) {
      trace->observations.push_back(obs);
      trace->actions.push_back(a);
      trace->rewards.push_back(r.reward);
    }
    out.episode_return += r.reward;
    obs = r.observation.to_vector();
  }
  out.final_cube = env.state().cube;
  out.success = is_success(out.final_cube, goal.pose, env.config().success, env.task());
  return out;
}

}  // namespace rrc
