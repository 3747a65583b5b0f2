#pragma once

// Trained-policy file ("RRCP"): algorithm id, architecture, normalization
// statistics and f64 parameters in layer order.

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "rrc/core.hpp"
#include "rrc/nn.hpp"
#include "rrc/norm.hpp"

namespace rrc {

enum class Algo : std::uint8_t { BC = 0, CRR = 1, AWAC = 2, CQL = 3, IQL = 4, TD3BC = 5 };

std::string algo_name(Algo a);
Algo parse_algo(std::string_view s);

enum class HeadKind : std::uint8_t { Deterministic = 0, Gaussian = 1 };

struct PolicyArtifact {
  static constexpr std::uint32_t kVersion = 1;

  Algo algo = Algo::BC;
  Task task = Task::Push;
  HeadKind head = HeadKind::Deterministic;
  int history = 1;        // H used by history_stack; 1 = plain observations
  int base_obs_dim = 0;   // environment observation size before stacking
  int act_dim = 0;
  std::uint64_t config_fingerprint = 0;
  NormStats norm;         // over the stacked network input
  nn::Mlp actor;          // outputs the (pre-clip) action mean
  Eigen::VectorXd log_std;  // Gaussian head only

  int input_dim() const { return history * base_obs_dim + (history - 1) * act_dim; }

  /// Throws FormatError when dimensions disagree.
  void validate() const;

  /// Deterministic action (clipped mean) for a stacked, unnormalized input.
  Eigen::VectorXd act(const Eigen::Ref<const Eigen::VectorXd>& stacked_obs) const;

  friend bool operator==(const PolicyArtifact& a, const PolicyArtifact& b);
};

std::string serialize_policy(const PolicyArtifact& p);
PolicyArtifact deserialize_policy(std::string_view bytes);
void save_policy(const PolicyArtifact& p, const std::filesystem::path& path);
PolicyArtifact load_policy(const std::filesystem::path& path);

}  // namespace rrc
