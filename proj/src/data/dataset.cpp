#include <algorithm>
#include <array>
#include <cstring>
#include <numeric>
#include <string>

#include "binio.hpp"
#include "rrc/data.hpp"

namespace rrc {

namespace {

constexpr std::string_view kMagic = "RRCB";
constexpr std::array<std::string_view, 4> kQualityNames{"expert", "mixed", "filtered", "augmented"};
constexpr std::uint32_t kMaxDim = 1u << 16;

}  // namespace

std::string quality_name(Quality q) {
  const auto i = std::size_t(q);
  if (i >= kQualityNames.size()) throw InputError("unknown quality id");
  return std::string(kQualityNames[i]);
}

Quality parse_quality(std::string_view s) {
  for (std::size_t i = 0; i < kQualityNames.size(); ++i)
    if (kQualityNames[i] == s) return Quality(i);
  throw InputError("unknown dataset quality '" + std::string(s) + "'");
}

Dataset::Dataset(Task task, Quality quality, int steps_per_episode, int obs_dim, int act_dim)
    : task_(task), quality_(quality), steps_(steps_per_episode),
      observations_(0, obs_dim), actions_(0, act_dim) {
  if (steps_per_episode < 1) throw InputError("episodes need at least one step");
  if (obs_dim < 1 || act_dim < 1) throw InputError("dataset dimensions must be positive");
}

Dataset Dataset::assemble(Task task, Quality quality, int steps_per_episode, std::vector<EpisodeInfo> episodes,
                          MatrixRf observations, MatrixRf actions, Eigen::VectorXf rewards) {
  Dataset d(task, quality, steps_per_episode, int(observations.cols()), int(actions.cols()));
  d.episodes_ = std::move(episodes);
  d.observations_ = std::move(observations);
  d.actions_ = std::move(actions);
  d.rewards_ = std::move(rewards);
  const Eigen::Index n = Eigen::Index(d.episodes_.size()) * steps_per_episode;
  if (d.observations_.rows() != n || d.actions_.rows() != n || d.rewards_.size() != n)
    throw InputError("episode table does not partition the transition arrays");
  d.returns_.resize(d.episodes_.size());
  for (int e = 0; e < d.num_episodes(); ++e) d.returns_[std::size_t(e)] = d.recompute_return(e);
  return d;
}

void Dataset::append_episode(const EpisodeInfo& info, const Eigen::Ref<const MatrixRf>& obs,
                             const Eigen::Ref<const MatrixRf>& act,
                             const Eigen::Ref<const Eigen::VectorXf>& rew) {
  if (obs.rows() != steps_ || act.rows() != steps_ || rew.size() != steps_)
    throw InputError("episode length must equal the dataset's steps per episode");
  if (obs.cols() != observations_.cols() || act.cols() != actions_.cols())
    throw InputError("episode dimensions do not match the dataset");
  const Eigen::Index r0 = rewards_.size();
  observations_.conservativeResize(r0 + steps_, Eigen::NoChange);
  actions_.conservativeResize(r0 + steps_, Eigen::NoChange);
  rewards_.conservativeResize(r0 + steps_);
  observations_.middleRows(r0, steps_) = obs;
  actions_.middleRows(r0, steps_) = act;
  rewards_.segment(r0, steps_) = rew;
  episodes_.push_back(info);
  returns_.push_back(recompute_return(int(episodes_.size()) - 1));
}

double Dataset::recompute_return(int episode) const {
  if (episode < 0 || episode >= num_episodes()) throw InputError("episode index out of range");
  double s = 0.0;
  const Eigen::Index r0 = first_row(episode);
  for (int t = 0; t < steps_; ++t) s += double(rewards_(r0 + t));
  return s;
}

int Dataset::count_behavior(BehaviorKind k) const {
  return int(std::count_if(episodes_.begin(), episodes_.end(),
                           [k](const EpisodeInfo& e) { return e.behavior == k; }));
}

Dataset Dataset::select(const std::vector<int>& episode_indices) const {
  Dataset out(task_, quality_, steps_, obs_dim(), act_dim());
  const Eigen::Index n = Eigen::Index(episode_indices.size()) * steps_;
  out.observations_.resize(n, obs_dim());
  out.actions_.resize(n, act_dim());
  out.rewards_.resize(n);
  Eigen::Index r = 0;
  for (int e : episode_indices) {
    if (e < 0 || e >= num_episodes()) throw InputError("episode index out of range");
    out.observations_.middleRows(r, steps_) = observations_.middleRows(first_row(e), steps_);
    out.actions_.middleRows(r, steps_) = actions_.middleRows(first_row(e), steps_);
    out.rewards_.segment(r, steps_) = rewards_.segment(first_row(e), steps_);
    out.episodes_.push_back(episodes_[std::size_t(e)]);
    out.returns_.push_back(returns_[std::size_t(e)]);
    r += steps_;
  }
  return out;
}

void Dataset::validate() const {
  const Eigen::Index n = Eigen::Index(episodes_.size()) * steps_;
  if (observations_.rows() != n || actions_.rows() != n || rewards_.size() != n)
    throw FormatError("episode table does not partition the transition arrays");
  if (returns_.size() != episodes_.size()) throw FormatError("cached returns out of sync");
  for (const auto& e : episodes_)
    if (std::uint8_t(e.behavior) > 1) throw FormatError("unknown behavior tag");
  if (quality_ == Quality::Mixed && 2 * count_behavior(BehaviorKind::Weak) != num_episodes())
    throw FormatError("mixed dataset must have exactly half of its episodes tagged weak");
}

bool operator==(const Dataset& a, const Dataset& b) {
  return serialize_dataset(a) == serialize_dataset(b);
}

std::string serialize_dataset(const Dataset& d) {
  d.validate();
  binio::Writer w;
  w.put_bytes(kMagic);
  w.put<std::uint32_t>(Dataset::kVersion);
  w.put<std::uint8_t>(std::uint8_t(d.task()));
  w.put<std::uint8_t>(std::uint8_t(d.quality()));
  w.put<std::uint32_t>(std::uint32_t(d.num_episodes()));
  w.put<std::uint32_t>(std::uint32_t(d.steps_per_episode()));
  w.put<std::uint32_t>(std::uint32_t(d.obs_dim()));
  w.put<std::uint32_t>(std::uint32_t(d.act_dim()));
  for (const auto& e : d.episodes()) {
    w.put<std::uint8_t>(std::uint8_t(e.behavior));
    w.put_array(e.goal.data(), e.goal.size());
  }
  w.put_array(d.observations().data(), std::size_t(d.observations().size()));
  w.put_array(d.actions().data(), std::size_t(d.actions().size()));
  w.put_array(d.rewards().data(), std::size_t(d.rewards().size()));
  return w.take();
}

Dataset deserialize_dataset(std::string_view bytes) {
  binio::Reader r(bytes);
  if (r.get_bytes(kMagic.size()) != kMagic) throw FormatError("not a dataset file (bad magic)");
  const auto version = r.get<std::uint32_t>();
  if (version != Dataset::kVersion) throw FormatError("unsupported dataset version " + std::to_string(version));
  const auto task = r.get<std::uint8_t>();
  const auto quality = r.get<std::uint8_t>();
  if (task > 1) throw FormatError("dataset: unknown task id");
  if (quality >= kQualityNames.size()) throw FormatError("dataset: unknown quality id");
  const auto n_ep = r.get<std::uint32_t>();
  const auto steps = r.get<std::uint32_t>();
  const auto obs_dim = r.get<std::uint32_t>();
  const auto act_dim = r.get<std::uint32_t>();
  if (steps < 1 || steps > (1u << 24) || obs_dim < 1 || obs_dim > kMaxDim || act_dim < 1 || act_dim > kMaxDim)
    throw FormatError("dataset: implausible header dimensions");
  // Exact size check before allocating anything large.
  const std::uint64_t rows = std::uint64_t(n_ep) * steps;
  const std::uint64_t expected = std::uint64_t(n_ep) * (1 + 7 * sizeof(double)) +
                                 rows * (std::uint64_t(obs_dim) + act_dim + 1) * sizeof(float);
  if (r.remaining() < expected) throw TruncationError("dataset file is truncated");
  if (r.remaining() > expected)
    throw FormatError("dataset file is longer than its header declares (episode count inconsistent)");

  std::vector<EpisodeInfo> episodes(n_ep);
  for (auto& e : episodes) {
    const auto tag = r.get<std::uint8_t>();
    if (tag > 1) throw FormatError("dataset: unknown behavior tag");
    e.behavior = BehaviorKind(tag);
    r.get_array(e.goal.data(), e.goal.size());
  }
  MatrixRf obs(Eigen::Index(rows), obs_dim);
  MatrixRf act(Eigen::Index(rows), act_dim);
  Eigen::VectorXf rew(static_cast<Eigen::Index>(rows));
  r.get_array(obs.data(), std::size_t(obs.size()));
  r.get_array(act.data(), std::size_t(act.size()));
  r.get_array(rew.data(), std::size_t(rew.size()));
  Dataset d = Dataset::assemble(Task(task), Quality(quality), int(steps), std::move(episodes), std::move(obs),
                                std::move(act), std::move(rew));
  d.validate();
  return d;
}

void save_dataset(const Dataset& d, const std::filesystem::path& path) {
  binio::write_file(path, serialize_dataset(d));
}

Dataset load_dataset(const std::filesystem::path& path) { return deserialize_dataset(binio::read_file(path)); }

GenerateResult generate_dataset(const GenerateConfig& cfg) {
  if (cfg.episodes < 1) throw InputError("episode count must be positive");
  if (cfg.quality != Quality::Expert && cfg.quality != Quality::Mixed)
    throw InputError("only expert or mixed datasets can be generated");
  if (cfg.quality == Quality::Mixed && cfg.episodes % 2 != 0)
    throw InputError("mixed datasets need an even episode count");
  cfg.env.arena.validate();
  cfg.env.obs_model.validate();

  const int n = cfg.episodes;
  const int steps = steps_per_episode(cfg.task);
  const int obs_dim = obs_layout::dim(cfg.task);
  std::vector<BehaviorKind> kinds(std::size_t(n), BehaviorKind::Expert);
  if (cfg.quality == Quality::Mixed)
    std::fill(kinds.begin(), kinds.begin() + n / 2, BehaviorKind::Weak);

  struct Slot {
    EpisodeInfo info;
    MatrixRf obs, act;
    Eigen::VectorXf rew;
    bool success = false;
  };
  std::vector<Slot> slots(static_cast<std::size_t>(n));
  const ScriptedPolicy expert(BehaviorKind::Expert, cfg.env.arena, cfg.weak, cfg.gains);
  const ScriptedPolicy weak(BehaviorKind::Weak, cfg.env.arena, cfg.weak, cfg.gains);
  const auto tk = std::uint64_t(cfg.task);

  parallel_for(n, cfg.workers, [&](int i) {
    const auto ui = std::uint64_t(i);
    Rng reset_rng(derive_seed(cfg.seed, {tk, 1, ui}));
    const EnvState initial = reset_episode(reset_rng, cfg.env.arena);
    const Goal goal = sample_goal(cfg.task, reset_rng, cfg.env.arena);
    Env env(cfg.task, cfg.env, derive_seed(cfg.seed, {tk, 2, ui}));
    const Policy& pol = kinds[std::size_t(i)] == BehaviorKind::Weak ? static_cast<const Policy&>(weak)
                                                                     : static_cast<const Policy&>(expert);
    auto session = pol.start({cfg.task, derive_seed(cfg.seed, {tk, 3, ui}), i});
    EpisodeTrace trace;
    const EpisodeOutcome out = run_episode(env, initial, goal, *session, &trace);
    if (out.failed) throw std::runtime_error("scripted controller failed: " + out.error);
    Slot& s = slots[std::size_t(i)];
    s.info.behavior = kinds[std::size_t(i)];
    s.info.goal = goal.to_record();
    s.obs.resize(steps, obs_dim);
    s.act.resize(steps, kActionDim);
    s.rew.resize(steps);
    for (int t = 0; t < steps; ++t) {
      s.obs.row(t) = trace.observations[std::size_t(t)].cast<float>().transpose();
      s.act.row(t) = trace.actions[std::size_t(t)].cast<float>().transpose();
      s.rew(t) = float(trace.rewards[std::size_t(t)]);
    }
    s.success = out.success;
  });

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  if (cfg.quality == Quality::Mixed) {
    Rng shuffle_rng(derive_seed(cfg.seed, {tk, 4}));
    // Fisher-Yates with our own draws; std::shuffle is implementation-defined.
    for (int i = n - 1; i > 0; --i) {
      const int j = int(std::uniform_int_distribution<std::uint64_t>(0, std::uint64_t(i))(shuffle_rng));
      std::swap(order[std::size_t(i)], order[std::size_t(j)]);
    }
  }

  std::vector<EpisodeInfo> infos;
  MatrixRf obs(Eigen::Index(n) * steps, obs_dim);
  MatrixRf act(Eigen::Index(n) * steps, kActionDim);
  Eigen::VectorXf rew(Eigen::Index(n) * steps);
  GenerateResult res;
  Eigen::Index row = 0;
  for (int i : order) {
    Slot& s = slots[std::size_t(i)];
    infos.push_back(s.info);
    obs.middleRows(row, steps) = s.obs;
    act.middleRows(row, steps) = s.act;
    rew.segment(row, steps) = s.rew;
    res.success.push_back(s.success);
    row += steps;
    s = Slot{};
  }
  res.data = Dataset::assemble(cfg.task, cfg.quality, steps, std::move(infos), std::move(obs), std::move(act),
                               std::move(rew));
  res.data.validate();
  return res;
}

}  // namespace rrc
