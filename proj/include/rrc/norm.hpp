#pragma once

#include <Eigen/Dense>

namespace rrc {

/// Per-dimension observation standardization plus the action box. Actions are
/// already scaled to [-1, 1] and pass through unchanged.
struct NormStats {
  static constexpr double kStdFloor = 1e-6;

  Eigen::VectorXd obs_mean;
  Eigen::VectorXd obs_std;
  Eigen::VectorXd act_low;
  Eigen::VectorXd act_high;

  static NormStats identity(int obs_dim, int act_dim) {
    NormStats s;
    s.obs_mean = Eigen::VectorXd::Zero(obs_dim);
    s.obs_std = Eigen::VectorXd::Ones(obs_dim);
    s.act_low = Eigen::VectorXd::Constant(act_dim, -1.0);
    s.act_high = Eigen::VectorXd::Constant(act_dim, 1.0);
    return s;
  }

  int obs_dim() const { return int(obs_mean.size()); }
  int act_dim() const { return int(act_low.size()); }

  /// Columns are samples.
  Eigen::MatrixXd normalize(const Eigen::Ref<const Eigen::MatrixXd>& obs) const {
    return (obs.colwise() - obs_mean).array().colwise() / obs_std.array();
  }
  Eigen::MatrixXd denormalize(const Eigen::Ref<const Eigen::MatrixXd>& z) const {
    return (z.array().colwise() * obs_std.array()).matrix().colwise() + obs_mean;
  }
  Eigen::VectorXd clip_action(const Eigen::Ref<const Eigen::VectorXd>& a) const {
    return a.cwiseMax(act_low).cwiseMin(act_high);
  }
};

}  // namespace rrc
