#pragma once

// Offline learners: BC, CRR, AWAC, CQL, IQL and TD3+BC with a spatial
// smoothness regularizer. Each consumes a Dataset and produces a
// PolicyArtifact plus a training log.

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <memory>
#include <vector>

#include "rrc/artifact.hpp"
#include "rrc/data.hpp"
#include "rrc/nn.hpp"
#include "rrc/policy.hpp"

namespace rrc {

enum class CrrWeight : std::uint8_t { Indicator = 0, Exponential = 1 };

struct TrainConfig {
  Algo algo = Algo::BC;
  int steps = 20000;
  int batch = 256;
  double actor_lr = 3e-4;
  double critic_lr = 3e-4;
  double gamma = 0.99;
  double target_rate = 0.005;
  std::vector<int> hidden{256, 256};
  int history = 1;
  int log_every = 500;
  std::uint64_t seed = 0;
  double initial_log_std = -1.0;

  // CRR
  CrrWeight crr_weight = CrrWeight::Indicator;
  double crr_temperature = 1.0;
  int crr_samples = 4;
  double crr_clip = 20.0;
  // AWAC
  double awac_lambda = 1.0;
  double awac_clip = 100.0;
  // CQL
  double cql_penalty = 1.0;
  int cql_random_actions = 10;
  double cql_entropy = 0.01;
  // IQL
  double iql_tau = 0.7;
  double iql_beta = 3.0;
  double iql_clip = 100.0;
  // TD3+BC
  double td3_alpha = 2.5;
  double smooth_beta = 0.0;
  double smooth_sigma = 0.05;
  double policy_noise = 0.2;
  double noise_clip = 0.5;
  int policy_delay = 2;

  /// Throws ParameterError.
  void validate() const;
  /// Stable hash of every field, stored in the artifact.
  std::uint64_t fingerprint() const;
};

struct TrainLogRow {
  int step = 0;
  double actor_loss = 0.0;
  double critic_loss = 0.0;
  double value_loss = 0.0;
  double q_mean = 0.0;
  double grad_norm = 0.0;
};

struct TrainLog {
  std::vector<TrainLogRow> rows;
  double wall_seconds = 0.0;  // not written to the CSV so that outputs stay reproducible

  bool all_finite() const;
  void write_csv(const std::filesystem::path& path) const;
};

struct TrainResult {
  PolicyArtifact policy;
  TrainLog log;
  // Learned critics for inspection; empty for BC.
  nn::Mlp q1, q2, value;
  NormStats norm;
  double initial_loss = 0.0;  // actor loss at the first step
  double final_loss = 0.0;    // actor loss averaged over the last logged interval

  /// Q(s, a) for raw (unnormalized, unstacked-if-H=1) inputs, columns = samples.
  Eigen::RowVectorXd q_values(const Eigen::Ref<const Eigen::MatrixXd>& states,
                              const Eigen::Ref<const Eigen::MatrixXd>& actions) const;
  Eigen::RowVectorXd v_values(const Eigen::Ref<const Eigen::MatrixXd>& states) const;
};

TrainResult train(const Dataset& data, const TrainConfig& cfg);

TrainResult train_bc(const Dataset& data, TrainConfig cfg);
TrainResult train_crr(const Dataset& data, TrainConfig cfg);
TrainResult train_awac(const Dataset& data, TrainConfig cfg);
TrainResult train_cql(const Dataset& data, TrainConfig cfg);
TrainResult train_iql(const Dataset& data, TrainConfig cfg);
TrainResult train_td3bc(const Dataset& data, TrainConfig cfg);

/// CRR/AWAC weighting functions, exposed for property tests.
Eigen::VectorXd crr_weights(const Eigen::Ref<const Eigen::VectorXd>& advantage, CrrWeight mode,
                            double temperature, double clip);
Eigen::VectorXd awac_weights(const Eigen::Ref<const Eigen::VectorXd>& advantage, double lambda, double clip);

/// Rollout adapter: keeps the history buffer and feeds the artifact.
class ArtifactPolicy final : public Policy {
 public:
  explicit ArtifactPolicy(std::shared_ptr<const PolicyArtifact> artifact);
  std::unique_ptr<PolicySession> start(const EpisodeContext& ctx) const override;
  const PolicyArtifact& artifact() const { return *artifact_; }

 private:
  std::shared_ptr<const PolicyArtifact> artifact_;
};

}  // namespace rrc
