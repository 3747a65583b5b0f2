#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rrc/data.hpp"
#include "rrc/nn.hpp"

namespace rrc {

EpisodeFeatures episode_features(const Dataset& d) {
  const int steps = d.steps_per_episode();
  const bool env_layout = d.obs_dim() == obs_layout::dim(d.task());
  EpisodeFeatures f;
  f.values.resize(EpisodeFeatures::kDim, d.num_episodes());
  for (int e = 0; e < d.num_episodes(); ++e) {
    const Eigen::Index r0 = d.first_row(e);
    const Eigen::MatrixXd a = d.actions().middleRows(r0, steps).cast<double>();
    const Eigen::RowVectorXd mean = a.colwise().mean();
    const double variance = (a.rowwise() - mean).array().square().colwise().mean().mean();
    double terminal = 0.0;
    if (env_layout) {
      const auto last = d.observations().row(r0 + steps - 1);
      const auto& g = d.episodes()[std::size_t(e)].goal;
      const Vec3 c(last(obs_layout::kCubePos), last(obs_layout::kCubePos + 1), last(obs_layout::kCubePos + 2));
      terminal = (c - Vec3(g[0], g[1], g[2])).norm();
    }
    f.values.col(e) << d.episode_return(e), a.cwiseAbs().mean(), terminal, variance;
  }
  return f;
}

FilterResult filter_expert_iterative(const Dataset& d, const FilterConfig& cfg) {
  if (!(cfg.init_frac > 0.0 && cfg.init_frac <= 1.0)) throw InputError("init_frac must lie in (0, 1]");
  if (cfg.stop_eps < 1 || cfg.max_iterations < 1 || cfg.train_steps < 0)
    throw ParameterError("filter stop_eps, max_iterations must be positive");
  const int n = d.num_episodes();
  if (n == 0) throw InputError("cannot filter an empty dataset");

  // Ranking by return, ties broken by index.
  const auto& ret = d.episode_returns();
  std::vector<int> by_return(static_cast<std::size_t>(n));
  std::iota(by_return.begin(), by_return.end(), 0);
  std::stable_sort(by_return.begin(), by_return.end(),
                   [&](int a, int b) { return ret[std::size_t(a)] > ret[std::size_t(b)]; });

  const int n0 = std::clamp(int(std::ceil(cfg.init_frac * n - 1e-9)), 1, n);
  std::vector<char> in_set(std::size_t(n), 0);
  for (int k = 0; k < n0; ++k) in_set[std::size_t(by_return[std::size_t(k)])] = 1;
  int selected = n0;

  EpisodeFeatures feats = episode_features(d);
  Eigen::MatrixXd x = feats.values;
  const Eigen::VectorXd mu = x.rowwise().mean();
  x.colwise() -= mu;
  const Eigen::VectorXd sd =
      (x.array().square().rowwise().mean()).sqrt().matrix().cwiseMax(NormStats::kStdFloor);
  x = x.array().colwise() / sd.array();

  FilterResult res;
  for (int it = 0; it < cfg.max_iterations; ++it) {
    FilterIteration log;
    log.iteration = it;
    // Outside episodes, lowest return first.
    std::vector<int> outside;
    for (auto e = by_return.rbegin(); e != by_return.rend(); ++e)
      if (!in_set[std::size_t(*e)]) outside.push_back(*e);
    if (outside.empty()) {
      log.selected = selected;
      res.log.push_back(log);
      break;
    }
    const int n_neg = std::min<int>(selected, int(outside.size()));
    std::vector<int> train_idx;
    for (int e = 0; e < n; ++e)
      if (in_set[std::size_t(e)]) train_idx.push_back(e);
    train_idx.insert(train_idx.end(), outside.begin(), outside.begin() + n_neg);

    Eigen::MatrixXd xb(EpisodeFeatures::kDim, Eigen::Index(train_idx.size()));
    Eigen::MatrixXd yb(1, Eigen::Index(train_idx.size()));
    for (std::size_t k = 0; k < train_idx.size(); ++k) {
      xb.col(Eigen::Index(k)) = x.col(train_idx[k]);
      yb(0, Eigen::Index(k)) = k < std::size_t(selected) ? 1.0 : 0.0;
    }

    Rng rng(derive_seed(cfg.seed, {0x66696c74ULL, std::uint64_t(it)}));
    nn::Mlp net(nn::make_dims(EpisodeFeatures::kDim, cfg.hidden, 1), rng);
    nn::Adam opt({cfg.lr});
    nn::Tape tape;
    double loss = 0.0;
    for (int s = 0; s < cfg.train_steps; ++s) {
      const Eigen::MatrixXd logits = net.forward(xb, tape);
      const nn::loss::Head h = nn::loss::bce_logits(logits, yb);
      loss = h.value;
      const nn::Gradients g = net.backward(tape, h.grad);
      nn::ParamViews pv;
      nn::GradViews gv;
      nn::append_views(pv, net);
      nn::append_views(gv, g);
      opt.step(pv, gv);
    }

    // Promote outside episodes scored as expert and strictly above every
    // negative used for training; the second condition keeps a classifier
    // that cannot separate the classes from growing the set.
    const Eigen::MatrixXd logits = net.forward(x);
    double neg_max = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < n_neg; ++k) neg_max = std::max(neg_max, logits(0, outside[std::size_t(k)]));
    int added = 0;
    for (int e : outside) {
      const double z = logits(0, e);
      if (z > 0.0 && z > neg_max) {
        in_set[std::size_t(e)] = 1;
        ++added;
      }
    }
    selected += added;
    log.selected = selected;
    log.negatives = n_neg;
    log.added = added;
    log.train_loss = loss;
    res.log.push_back(log);
    if (added < cfg.stop_eps) break;
  }

  for (int e = 0; e < n; ++e)
    if (in_set[std::size_t(e)]) res.selected.push_back(e);
  res.subset = d.select(res.selected);
  res.subset.set_quality(Quality::Filtered);
  return res;
}

}  // namespace rrc
