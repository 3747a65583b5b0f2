#include "replay.hpp"

namespace rrc::detail {

Replay::Replay(const Dataset& d, const NormStats& norm) {
  const Eigen::Index n = d.num_transitions();
  if (n == 0) throw InputError("cannot train on an empty dataset");
  s_ = norm.normalize(d.observations().cast<double>().transpose());
  a_ = d.actions().cast<double>().transpose();
  r_ = d.rewards().cast<double>();
  next_.resize(std::size_t(n));
  const int steps = d.steps_per_episode();
  for (Eigen::Index i = 0; i < n; ++i) next_[std::size_t(i)] = (i + 1) % steps == 0 ? -1 : i + 1;
}

Batch Replay::sample(Rng& rng, int batch) const {
  Batch b;
  b.s.resize(s_.rows(), batch);
  b.s2.resize(s_.rows(), batch);
  b.a.resize(a_.rows(), batch);
  b.r.resize(batch);
  b.not_last.resize(batch);
  const auto n = std::uint64_t(s_.cols());
  for (int j = 0; j < batch; ++j) {
    const auto i = Eigen::Index(rng() % n);
    const Eigen::Index nx = next_[std::size_t(i)];
    b.s.col(j) = s_.col(i);
    b.a.col(j) = a_.col(i);
    b.r(j) = r_(i);
    b.not_last(j) = nx >= 0 ? 1.0 : 0.0;
    b.s2.col(j) = s_.col(nx >= 0 ? nx : i);
  }
  return b;
}

}  // namespace rrc::detail
