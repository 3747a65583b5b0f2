#pragma once

#include <Eigen/Dense>

#include <vector>

#include "rrc/data.hpp"
#include "rrc/norm.hpp"
#include "rrc/rng.hpp"

namespace rrc::detail {

struct Batch {
  Eigen::MatrixXd s, a, s2;
  Eigen::RowVectorXd r;
  Eigen::RowVectorXd not_last;  // 1 where s2 is a real successor
};

/// Transition table in training layout: normalized states as columns.
class Replay {
 public:
  Replay(const Dataset& d, const NormStats& norm);
  Batch sample(Rng& rng, int batch) const;
  Eigen::Index size() const { return s_.cols(); }
  int state_dim() const { return int(s_.rows()); }
  int action_dim() const { return int(a_.rows()); }

 private:
  Eigen::MatrixXd s_, a_;
  Eigen::VectorXd r_;
  std::vector<Eigen::Index> next_;  // -1 at the last step of an episode
};

inline Eigen::MatrixXd concat_rows(const Eigen::Ref<const Eigen::MatrixXd>& top,
                                   const Eigen::Ref<const Eigen::MatrixXd>& bottom) {
  Eigen::MatrixXd out(top.rows() + bottom.rows(), top.cols());
  out << top, bottom;
  return out;
}

}  // namespace rrc::detail
