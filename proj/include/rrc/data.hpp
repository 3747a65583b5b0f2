#pragma once

// Episodic datasets: in-memory representation, the "RRCB" file format,
// generation from the scripted controllers, rotational augmentation,
// iterative expert filtering, pose smoothing, normalization and history
// stacking.

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "rrc/env.hpp"
#include "rrc/norm.hpp"
#include "rrc/policy.hpp"

namespace rrc {

enum class Quality : std::uint8_t { Expert = 0, Mixed = 1, Filtered = 2, Augmented = 3 };

std::string quality_name(Quality q);
Quality parse_quality(std::string_view s);

using MatrixRf = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct EpisodeInfo {
  BehaviorKind behavior = BehaviorKind::Expert;
  std::array<double, 7> goal{};
};

/// Fixed-horizon episodes stored back to back: episode e owns rows
/// [e*T, (e+1)*T) of every array.
class Dataset {
 public:
  static constexpr std::uint32_t kVersion = 1;

  Dataset() = default;
  Dataset(Task task, Quality quality, int steps_per_episode, int obs_dim, int act_dim);

  Task task() const { return task_; }
  Quality quality() const { return quality_; }
  void set_quality(Quality q) { quality_ = q; }
  int steps_per_episode() const { return steps_; }
  int obs_dim() const { return int(observations_.cols()); }
  int act_dim() const { return int(actions_.cols()); }
  int num_episodes() const { return int(episodes_.size()); }
  Eigen::Index num_transitions() const { return rewards_.size(); }

  const std::vector<EpisodeInfo>& episodes() const { return episodes_; }
  const MatrixRf& observations() const { return observations_; }
  const MatrixRf& actions() const { return actions_; }
  const Eigen::VectorXf& rewards() const { return rewards_; }
  Eigen::Index first_row(int episode) const { return Eigen::Index(episode) * steps_; }

  /// Takes ownership of complete arrays (E*T rows each).
  static Dataset assemble(Task task, Quality quality, int steps_per_episode, std::vector<EpisodeInfo> episodes,
                          MatrixRf observations, MatrixRf actions, Eigen::VectorXf rewards);

  /// Appends one episode of exactly steps_per_episode rows. Copies the
  /// arrays; use assemble() for bulk construction.
  void append_episode(const EpisodeInfo& info, const Eigen::Ref<const MatrixRf>& obs,
                      const Eigen::Ref<const MatrixRf>& act, const Eigen::Ref<const Eigen::VectorXf>& rew);

  /// Cached at append time, summed in double.
  double episode_return(int episode) const { return returns_.at(std::size_t(episode)); }
  const std::vector<double>& episode_returns() const { return returns_; }
  double recompute_return(int episode) const;
  int count_behavior(BehaviorKind k) const;

  Dataset select(const std::vector<int>& episode_indices) const;

  /// Structural checks; throws FormatError.
  void validate() const;

  friend bool operator==(const Dataset& a, const Dataset& b);

 private:
  Task task_ = Task::Push;
  Quality quality_ = Quality::Expert;
  int steps_ = 0;
  std::vector<EpisodeInfo> episodes_;
  MatrixRf observations_;
  MatrixRf actions_;
  Eigen::VectorXf rewards_;
  std::vector<double> returns_;
};

std::string serialize_dataset(const Dataset& d);
Dataset deserialize_dataset(std::string_view bytes);
void save_dataset(const Dataset& d, const std::filesystem::path& path);
Dataset load_dataset(const std::filesystem::path& path);

struct GenerateConfig {
  Task task = Task::Push;
  Quality quality = Quality::Expert;  // Expert or Mixed
  int episodes = 10;
  std::uint64_t seed = 0;
  EnvConfig env;
  WeakParams weak;
  ExpertGains gains;
  int workers = 1;
};

struct GenerateResult {
  Dataset data;
  std::vector<bool> success;  // per stored episode, judged on the true final pose
};

GenerateResult generate_dataset(const GenerateConfig& cfg);

/// Originals plus rotated copies for j = 1..k-1 (j * 120 degrees).
Dataset rotational_augment(const Dataset& d, int k);

/// Applies the j-th arena rotation to one observation / action vector.
Eigen::VectorXd rotate_observation(Task task, const Eigen::Ref<const Eigen::VectorXd>& obs, int j);

struct EpisodeFeatures {
  static constexpr int kDim = 4;
  // return, mean |action|, terminal cube-goal distance, action variance
  Eigen::Matrix<double, kDim, Eigen::Dynamic> values;
};

EpisodeFeatures episode_features(const Dataset& d);

struct FilterConfig {
  double init_frac = 0.1;
  int stop_eps = 1;
  int max_iterations = 20;
  std::vector<int> hidden{16, 16};
  int train_steps = 300;
  double lr = 1e-2;
  std::uint64_t seed = 0;
};

struct FilterIteration {
  int iteration = 0;
  int selected = 0;
  int negatives = 0;
  int added = 0;
  double train_loss = 0.0;
};

struct FilterResult {
  Dataset subset;
  std::vector<int> selected;  // ascending episode indices into the input
  std::vector<FilterIteration> log;
};

FilterResult filter_expert_iterative(const Dataset& d, const FilterConfig& cfg);

struct PoseFilterConfig {
  double alpha = 0.7;
  double confidence_threshold = 0.5;
  int delay_threshold = 3;
  void validate() const;
};

struct PoseEstimate {
  CubePose pose;
  double confidence = 1.0;
  int delay = 0;
};

/// Streaming moving-average filter over tracker estimates.
class PoseSmoother {
 public:
  explicit PoseSmoother(PoseFilterConfig cfg = {});
  CubePose update(const PoseEstimate& e);
  void reset() { started_ = false; }

 private:
  PoseFilterConfig cfg_;
  bool started_ = false;
  CubePose out_;
};

std::vector<CubePose> smooth_pose_stream(const std::vector<PoseEstimate>& stream,
                                         const PoseFilterConfig& cfg = {});

/// Wraps a policy so that it sees smoothed cube poses instead of raw ones.
class SmoothedPolicy final : public Policy {
 public:
  SmoothedPolicy(std::shared_ptr<const Policy> inner, Task task, PoseFilterConfig cfg = {});
  std::unique_ptr<PolicySession> start(const EpisodeContext& ctx) const override;

 private:
  std::shared_ptr<const Policy> inner_;
  Task task_;
  PoseFilterConfig cfg_;
};

NormStats compute_norm_stats(const Dataset& d);

/// Each observation becomes [o_t, ..., o_{t-H+1}, a_{t-1}, ..., a_{t-H+1}],
/// zero-padded before the episode start.
Dataset history_stack(const Dataset& d, int history);

/// Incremental form of history_stack for rollouts.
class HistoryBuffer {
 public:
  HistoryBuffer(int history, int obs_dim, int act_dim);
  Eigen::VectorXd push(const Eigen::Ref<const Eigen::VectorXd>& obs);
  void record_action(const Eigen::Ref<const Eigen::VectorXd>& act);
  int output_dim() const { return h_ * obs_dim_ + (h_ - 1) * act_dim_; }

 private:
  int h_, obs_dim_, act_dim_;
  std::vector<Eigen::VectorXd> obs_;  // newest first
  std::vector<Eigen::VectorXd> act_;  // newest first
};

}  // namespace rrc
