#include "rrc/data.hpp"

namespace rrc {

NormStats compute_norm_stats(const Dataset& d) {
  if (d.num_transitions() == 0) throw InputError("cannot compute statistics of an empty dataset");
  const Eigen::MatrixXd x = d.observations().cast<double>();
  const double n = double(x.rows());
  NormStats s = NormStats::identity(d.obs_dim(), d.act_dim());
  s.obs_mean = x.colwise().sum().transpose() / n;
  const Eigen::MatrixXd centered = x.rowwise() - s.obs_mean.transpose();
  s.obs_std = (centered.array().square().colwise().sum().transpose() / n).sqrt().matrix();
  s.obs_std = s.obs_std.cwiseMax(NormStats::kStdFloor);
  return s;
}

Dataset history_stack(const Dataset& d, int history) {
  if (history < 1) throw InputError("history length must be at least 1");
  if (history == 1) return d;
  const int od = d.obs_dim(), ad = d.act_dim(), steps = d.steps_per_episode();
  const int width = history * od + (history - 1) * ad;
  MatrixRf obs = MatrixRf::Zero(d.num_transitions(), width);
  for (int e = 0; e < d.num_episodes(); ++e) {
    const Eigen::Index r0 = d.first_row(e);
    for (int t = 0; t < steps; ++t) {
      for (int k = 0; k < history && k <= t; ++k)
        obs.block(r0 + t, k * od, 1, od) = d.observations().row(r0 + t - k);
      for (int k = 1; k < history && k <= t; ++k)
        obs.block(r0 + t, history * od + (k - 1) * ad, 1, ad) = d.actions().row(r0 + t - k);
    }
  }
  return Dataset::assemble(d.task(), d.quality(), steps, d.episodes(), std::move(obs), d.actions(), d.rewards());
}

HistoryBuffer::HistoryBuffer(int history, int obs_dim, int act_dim)
    : h_(history), obs_dim_(obs_dim), act_dim_(act_dim) {
  if (history < 1 || obs_dim < 1 || act_dim < 1) throw InputError("history buffer dimensions must be positive");
}

Eigen::VectorXd HistoryBuffer::push(const Eigen::Ref<const Eigen::VectorXd>& obs) {
  if (obs.size() != obs_dim_) throw InputError("observation has the wrong dimension");
  obs_.insert(obs_.begin(), obs);
  if (int(obs_.size()) > h_) obs_.pop_back();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(output_dim());
  for (int k = 0; k < int(obs_.size()); ++k) out.segment(k * obs_dim_, obs_dim_) = obs_[std::size_t(k)];
  for (int k = 0; k < int(act_.size()) && k < h_ - 1; ++k)
    out.segment(h_ * obs_dim_ + k * act_dim_, act_dim_) = act_[std::size_t(k)];
  return out;
}

void HistoryBuffer::record_action(const Eigen::Ref<const Eigen::VectorXd>& act) {
  if (act.size() != act_dim_) throw InputError("action has the wrong dimension");
  if (h_ == 1) return;
  act_.insert(act_.begin(), act);
  if (int(act_.size()) > h_ - 1) act_.pop_back();
}

}  // namespace rrc
