#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "rrc/env.hpp"

namespace rrc {

struct EpisodeContext {
  Task task = Task::Push;
  std::uint64_t seed = 0;   // for stochastic controllers
  int episode_index = 0;
};

/// Per-episode controller. Holds whatever history a policy needs; never
/// shared between episode runners.
class PolicySession {
 public:
  virtual ~PolicySession() = default;
  virtual Action act(const Eigen::VectorXd& observation) = 0;
};

/// Immutable policy description. start() may be called concurrently.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::unique_ptr<PolicySession> start(const EpisodeContext& ctx) const = 0;
};

enum class BehaviorKind : std::uint8_t { Expert = 0, Weak = 1 };

class ScriptedPolicy final : public Policy {
 public:
  ScriptedPolicy(BehaviorKind kind, ArenaSpec arena, WeakParams weak = {}, ExpertGains gains = {})
      : kind_(kind), arena_(arena), weak_(weak), gains_(gains) {}
  std::unique_ptr<PolicySession> start(const EpisodeContext& ctx) const override;

 private:
  BehaviorKind kind_;
  ArenaSpec arena_;
  WeakParams weak_;
  ExpertGains gains_;
};

/// The policy that generated a dataset: the expert, or for mixed data a
/// half/half alternation of weak (even episode index) and expert episodes.
class BehaviorPolicy final : public Policy {
 public:
  BehaviorPolicy(bool mixed, ArenaSpec arena, WeakParams weak = {}, ExpertGains gains = {})
      : mixed_(mixed), expert_(BehaviorKind::Expert, arena, weak, gains),
        weak_(BehaviorKind::Weak, arena, weak, gains) {}
  std::unique_ptr<PolicySession> start(const EpisodeContext& ctx) const override;

 private:
  bool mixed_;
  ScriptedPolicy expert_;
  ScriptedPolicy weak_;
};

struct EpisodeTrace {
  std::vector<Eigen::VectorXd> observations;
  std::vector<Action> actions;
  std::vector<double> rewards;
};

struct EpisodeOutcome {
  double episode_return = 0.0;
  bool success = false;
  bool failed = false;   // policy threw or produced a non-finite action
  std::string error;
  CubePose final_cube;
};

/// Runs one full episode. A failed episode stops early and scores 0.
EpisodeOutcome run_episode(Env& env, const EnvState& initial, const Goal& goal,
                           PolicySession& session, EpisodeTrace* trace = nullptr);

}  // namespace rrc
