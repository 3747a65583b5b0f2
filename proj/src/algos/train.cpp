#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>

#include "binio.hpp"
#include "replay.hpp"
#include "rrc/algos.hpp"

namespace rrc {

using detail::Batch;
using detail::concat_rows;
using detail::Replay;

void TrainConfig::validate() const {
  if (steps < 1 || batch < 1) throw ParameterError("steps and batch must be positive");
  if (!(actor_lr > 0.0) || !(critic_lr > 0.0)) throw ParameterError("learning rates must be positive");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ParameterError("gamma must lie in (0, 1]");
  if (!(target_rate > 0.0 && target_rate <= 1.0)) throw ParameterError("target_rate must lie in (0, 1]");
  if (!(iql_tau > 0.0 && iql_tau < 1.0)) throw ParameterError("iql_tau must lie in (0, 1)");
  if (history < 1 || log_every < 1) throw ParameterError("history and log_every must be positive");
  for (int h : hidden)
    if (h < 1) throw ParameterError("hidden widths must be positive");
  if (crr_temperature <= 0.0 || awac_lambda <= 0.0) throw ParameterError("temperatures must be positive");
  if (crr_samples < 1 || cql_random_actions < 1 || policy_delay < 1)
    throw ParameterError("sample counts and policy_delay must be positive");
  for (double w : {crr_clip, awac_clip, cql_penalty, cql_entropy, iql_beta, iql_clip, td3_alpha, smooth_beta,
                   smooth_sigma, policy_noise, noise_clip})
    if (!(w >= 0.0)) throw ParameterError("weights, clips and noise scales must be non-negative");
}

std::uint64_t TrainConfig::fingerprint() const {
  binio::Writer w;
  w.put<std::uint8_t>(std::uint8_t(algo));
  w.put(steps);
  w.put(batch);
  w.put(actor_lr);
  w.put(critic_lr);
  w.put(gamma);
  w.put(target_rate);
  for (int h : hidden) w.put(h);
  w.put(history);
  w.put(seed);
  w.put(initial_log_std);
  w.put<std::uint8_t>(std::uint8_t(crr_weight));
  for (double v : {crr_temperature, crr_clip, awac_lambda, awac_clip, cql_penalty, cql_entropy, iql_tau, iql_beta,
                   iql_clip, td3_alpha, smooth_beta, smooth_sigma, policy_noise, noise_clip})
    w.put(v);
  w.put(crr_samples);
  w.put(cql_random_actions);
  w.put(policy_delay);
  // FNV-1a
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : w.bytes()) h = (h ^ c) * 0x100000001b3ULL;
  return h;
}

bool TrainLog::all_finite() const {
  for (const auto& r : rows)
    if (!std::isfinite(r.actor_loss) || !std::isfinite(r.critic_loss) || !std::isfinite(r.value_loss) ||
        !std::isfinite(r.q_mean) || !std::isfinite(r.grad_norm))
      return false;
  return true;
}

void TrainLog::write_csv(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "step,actor_loss,critic_loss,value_loss,q_mean,grad_norm\n" << std::setprecision(17);
  for (const auto& r : rows)
    out << r.step << ',' << r.actor_loss << ',' << r.critic_loss << ',' << r.value_loss << ',' << r.q_mean << ','
        << r.grad_norm << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

Eigen::VectorXd crr_weights(const Eigen::Ref<const Eigen::VectorXd>& advantage, CrrWeight mode,
                            double temperature, double clip) {
  if (mode == CrrWeight::Indicator) return (advantage.array() > 0.0).cast<double>().matrix();
  return (advantage.array() / temperature).exp().min(clip).matrix();
}

Eigen::VectorXd awac_weights(const Eigen::Ref<const Eigen::VectorXd>& advantage, double lambda, double clip) {
  return (advantage.array() / lambda).exp().min(clip).matrix();
}

Eigen::RowVectorXd TrainResult::q_values(const Eigen::Ref<const Eigen::MatrixXd>& states,
                                         const Eigen::Ref<const Eigen::MatrixXd>& actions) const {
  if (q1.dims().empty()) throw UsageError("this trainer has no critic");
  return q1.forward(concat_rows(norm.normalize(states), actions));
}

Eigen::RowVectorXd TrainResult::v_values(const Eigen::Ref<const Eigen::MatrixXd>& states) const {
  if (value.dims().empty()) throw UsageError("this trainer has no value network");
  return value.forward(norm.normalize(states));
}

namespace {

void adam_step(nn::Adam& opt, nn::Mlp& net, const nn::Gradients& g) {
  nn::ParamViews pv;
  nn::GradViews gv;
  nn::append_views(pv, net);
  nn::append_views(gv, g);
  opt.step(pv, gv);
}

void adam_step(nn::Adam& opt, nn::GaussianPolicy& pi, const nn::Gradients& g, const Eigen::VectorXd& g_log_std) {
  nn::ParamViews pv;
  nn::GradViews gv;
  nn::append_views(pv, pi.mean);
  nn::append_views(gv, g);
  pv.emplace_back(pi.log_std.data(), std::size_t(pi.log_std.size()));
  gv.emplace_back(g_log_std.data(), std::size_t(g_log_std.size()));
  opt.step(pv, gv);
  pi.clamp_log_std();
}

Eigen::MatrixXd gaussian_noise(Rng& rng, Eigen::Index rows, Eigen::Index cols, double sigma) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = gaussian(rng, sigma);
  return m;
}

/// Shared trainer state: data, normalization, RNG, log accumulation.
struct Context {
  const TrainConfig& cfg;
  Dataset stacked;
  NormStats norm;
  std::unique_ptr<Replay> replay;
  Rng rng;
  TrainResult result;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  TrainLogRow acc;
  int acc_n = 0;

  Context(const Dataset& data, const TrainConfig& c)
      : cfg(c), stacked(history_stack(data, c.history)), norm(compute_norm_stats(stacked)),
        rng(derive_seed(c.seed, {0x747261696eULL, std::uint64_t(c.algo)})) {
    replay = std::make_unique<Replay>(stacked, norm);
    result.norm = norm;
    result.policy.algo = c.algo;
    result.policy.task = data.task();
    result.policy.history = c.history;
    result.policy.base_obs_dim = data.obs_dim();
    result.policy.act_dim = data.act_dim();
    result.policy.config_fingerprint = c.fingerprint();
    result.policy.norm = norm;
  }

  int sdim() const { return replay->state_dim(); }
  int adim() const { return replay->action_dim(); }
  std::vector<int> dims(int in, int out) const { return nn::make_dims(in, cfg.hidden, out); }

  void record(int step, double actor, double critic, double value, double q_mean, double grad_norm) {
    if (step == 0) result.initial_loss = actor;
    acc.actor_loss += actor;
    acc.critic_loss += critic;
    acc.value_loss += value;
    acc.q_mean += q_mean;
    acc.grad_norm += grad_norm;
    ++acc_n;
    if ((step + 1) % cfg.log_every == 0 || step + 1 == cfg.steps) {
      TrainLogRow row = acc;
      row.step = step + 1;
      const double k = double(acc_n);
      row.actor_loss /= k;
      row.critic_loss /= k;
      row.value_loss /= k;
      row.q_mean /= k;
      row.grad_norm /= k;
      if (!std::isfinite(row.actor_loss) || !std::isfinite(row.critic_loss) || !std::isfinite(row.value_loss))
        throw std::runtime_error("training diverged: non-finite loss at step " + std::to_string(row.step));
      result.log.rows.push_back(row);
      result.final_loss = row.actor_loss;
      acc = {};
      acc_n = 0;
    }
  }

  TrainResult finish() {
    result.log.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.policy.validate();
    return std::move(result);
  }
};

/// Bellman step on one critic toward fixed targets y.
double critic_step(nn::Mlp& q, nn::Adam& opt, const Eigen::MatrixXd& sa, const Eigen::RowVectorXd& y,
                   double* q_mean = nullptr, const nn::Gradients* extra = nullptr) {
  nn::Tape tape;
  const Eigen::MatrixXd qv = q.forward(sa, tape);
  const nn::loss::Head h = nn::loss::bellman(qv, y);
  nn::Gradients g = q.backward(tape, h.grad);
  if (extra) nn::add_into(g, *extra);
  adam_step(opt, q, g);
  if (q_mean) *q_mean = qv.mean();
  return h.value;
}

/// Gaussian actor-critic family sharing the critic: CRR, AWAC, CQL.
TrainResult train_stochastic_ac(const Dataset& data, const TrainConfig& cfg) {
  Context ctx(data, cfg);
  const int sd = ctx.sdim(), ad = ctx.adim();
  Rng& rng = ctx.rng;
  nn::GaussianPolicy pi(nn::Mlp(ctx.dims(sd, ad), rng), cfg.initial_log_std);
  nn::Mlp q(ctx.dims(sd + ad, 1), rng);
  nn::Mlp q_target = q;
  nn::Adam actor_opt({cfg.actor_lr}), critic_opt({cfg.critic_lr});

  for (int step = 0; step < cfg.steps; ++step) {
    const Batch b = ctx.replay->sample(rng, cfg.batch);
    const Eigen::Index B = b.s.cols();

    // Critic.
    const Eigen::MatrixXd a2 = pi.sample(b.s2, rng);
    const Eigen::RowVectorXd q_next = q_target.forward(concat_rows(b.s2, a2));
    const Eigen::RowVectorXd y = b.r + cfg.gamma * b.not_last.cwiseProduct(q_next);
    const Eigen::MatrixXd sa = concat_rows(b.s, b.a);
    double critic_loss = 0.0, q_mean = 0.0;
    if (cfg.algo == Algo::CQL && cfg.cql_penalty > 0.0) {
      const int k = cfg.cql_random_actions;
      Eigen::MatrixXd s_rep(sd, B * k), a_rand(ad, B * k);
      for (int r = 0; r < k; ++r) s_rep.middleCols(r * B, B) = b.s;
      for (Eigen::Index j = 0; j < a_rand.cols(); ++j)
        for (int i = 0; i < ad; ++i) a_rand(i, j) = uniform(rng, -1.0, 1.0);
      nn::Tape tape_d, tape_r;
      const Eigen::MatrixXd q_data = q.forward(sa, tape_d);
      const Eigen::MatrixXd q_rand_flat = q.forward(concat_rows(s_rep, a_rand), tape_r);
      Eigen::MatrixXd q_rand(k, B);
      for (int r = 0; r < k; ++r) q_rand.row(r) = q_rand_flat.middleCols(r * B, B);
      const nn::loss::Head td = nn::loss::bellman(q_data, y);
      const nn::loss::ConservativeHead cons = nn::loss::conservative(q_rand, q_data);
      Eigen::MatrixXd g_rand_flat(1, B * k);
      for (int r = 0; r < k; ++r) g_rand_flat.middleCols(r * B, B) = cfg.cql_penalty * cons.grad_random.row(r);
      nn::Gradients g = q.backward(tape_d, td.grad + cfg.cql_penalty * cons.grad_data);
      nn::add_into(g, q.backward(tape_r, g_rand_flat));
      adam_step(critic_opt, q, g);
      critic_loss = td.value + cfg.cql_penalty * cons.value;
      q_mean = q_data.mean();
    } else {
      critic_loss = critic_step(q, critic_opt, sa, y, &q_mean);
    }
    nn::soft_update(q_target, q, cfg.target_rate);

    // Actor.
    double actor_loss = 0.0, grad_norm = 0.0;
    nn::Tape tape;
    const Eigen::MatrixXd mean = pi.mean.forward(b.s, tape);
    if (cfg.algo == Algo::CQL) {
      const Eigen::VectorXd sigma = pi.log_std.array().exp();
      const Eigen::MatrixXd eps = gaussian_noise(rng, ad, B, 1.0);
      const Eigen::MatrixXd a_raw = mean + (eps.array().colwise() * sigma.array()).matrix();
      const auto [a_pi, mask] = nn::clamp_unit(a_raw);
      nn::Tape tq;
      const Eigen::MatrixXd qv = q.forward(concat_rows(b.s, a_pi), tq);
      Eigen::MatrixXd dx;
      q.backward(tq, Eigen::MatrixXd::Constant(1, B, 1.0 / double(B)), &dx);
      const Eigen::MatrixXd dq_da = dx.bottomRows(ad).cwiseProduct(mask);
      const Eigen::VectorXd logp = nn::gaussian_logprob(mean, pi.log_std, a_raw);
      actor_loss = cfg.cql_entropy * logp.mean() - qv.mean();
      // Reparameterized: d logp / d mean = 0, d logp / d log_std = -1 per dimension.
      const Eigen::MatrixXd g_mean = -dq_da;
      Eigen::VectorXd g_log_std =
          -(dq_da.array() * (eps.array().colwise() * sigma.array())).rowwise().sum().matrix();
      g_log_std.array() -= cfg.cql_entropy;
      const nn::Gradients g = pi.mean.backward(tape, g_mean);
      grad_norm = std::sqrt(nn::squared_norm(g) + g_log_std.squaredNorm());
      adam_step(actor_opt, pi, g, g_log_std);
    } else {
      const Eigen::RowVectorXd q_data = q.forward(sa);
      Eigen::RowVectorXd baseline = Eigen::RowVectorXd::Zero(B);
      for (int k = 0; k < cfg.crr_samples; ++k) {
        const Eigen::MatrixXd a_k = pi.sample(b.s, rng);
        baseline += q.forward(concat_rows(b.s, a_k));
      }
      baseline /= double(cfg.crr_samples);
      const Eigen::VectorXd adv = (q_data - baseline).transpose();
      const Eigen::VectorXd w = cfg.algo == Algo::CRR
                                    ? crr_weights(adv, cfg.crr_weight, cfg.crr_temperature, cfg.crr_clip)
                                    : awac_weights(adv, cfg.awac_lambda, cfg.awac_clip);
      const nn::loss::LogProbHead h = nn::loss::weighted_logprob(mean, pi.log_std, b.a, w);
      actor_loss = h.value;
      const nn::Gradients g = pi.mean.backward(tape, h.grad_mean);
      grad_norm = std::sqrt(nn::squared_norm(g) + h.grad_log_std.squaredNorm());
      adam_step(actor_opt, pi, g, h.grad_log_std);
    }
    ctx.record(step, actor_loss, critic_loss, 0.0, q_mean, grad_norm);
  }

  ctx.result.policy.head = HeadKind::Gaussian;
  ctx.result.policy.actor = pi.mean;
  ctx.result.policy.log_std = pi.log_std;
  ctx.result.q1 = q;
  return ctx.finish();
}

}  // namespace

TrainResult train_bc(const Dataset& data, TrainConfig cfg) {
  cfg.algo = Algo::BC;
  cfg.validate();
  Context ctx(data, cfg);
  nn::Mlp actor(ctx.dims(ctx.sdim(), ctx.adim()), ctx.rng);
  nn::Adam opt({cfg.actor_lr});
  for (int step = 0; step < cfg.steps; ++step) {
    const Batch b = ctx.replay->sample(ctx.rng, cfg.batch);
    nn::Tape tape;
    const nn::loss::Head h = nn::loss::mse(actor.forward(b.s, tape), b.a);
    const nn::Gradients g = actor.backward(tape, h.grad);
    adam_step(opt, actor, g);
    ctx.record(step, h.value, 0.0, 0.0, 0.0, std::sqrt(nn::squared_norm(g)));
  }
  ctx.result.policy.head = HeadKind::Deterministic;
  ctx.result.policy.actor = std::move(actor);
  return ctx.finish();
}

TrainResult train_crr(const Dataset& data, TrainConfig cfg) {
  cfg.algo = Algo::CRR;
  cfg.validate();
  return train_stochastic_ac(data, cfg);
}

TrainResult train_awac(const Dataset& data, TrainConfig cfg) {
  cfg.algo = Algo::AWAC;
  cfg.validate();
  return train_stochastic_ac(data, cfg);
}

TrainResult train_cql(const Dataset& data, TrainConfig cfg) {
  cfg.algo = Algo::CQL;
  cfg.validate();
  return train_stochastic_ac(data, cfg);
}

TrainResult train_iql(const Dataset& data, TrainConfig cfg) {
  cfg.algo = Algo::IQL;
  cfg.validate();
  Context ctx(data, cfg);
  const int sd = ctx.sdim(), ad = ctx.adim();
  Rng& rng = ctx.rng;
  nn::GaussianPolicy pi(nn::Mlp(ctx.dims(sd, ad), rng), cfg.initial_log_std);
  nn::Mlp q(ctx.dims(sd + ad, 1), rng);
  nn::Mlp v(ctx.dims(sd, 1), rng);
  nn::Mlp q_target = q;
  nn::Adam actor_opt({cfg.actor_lr}), q_opt({cfg.critic_lr}), v_opt({cfg.critic_lr});

  for (int step = 0; step < cfg.steps; ++step) {
    const Batch b = ctx.replay->sample(rng, cfg.batch);
    const Eigen::MatrixXd sa = concat_rows(b.s, b.a);

    // Value: expectile of the target critic.
    const Eigen::RowVectorXd q_t = q_target.forward(sa);
    nn::Tape tv;
    const Eigen::RowVectorXd v_s = v.forward(b.s, tv);
    const nn::loss::Head hv = nn::loss::expectile(q_t - v_s, cfg.iql_tau);
    adam_step(v_opt, v, v.backward(tv, -hv.grad));

    // Critic toward r + gamma V(s').
    const Eigen::RowVectorXd v_next = v.forward(b.s2);
    const Eigen::RowVectorXd y = b.r + cfg.gamma * b.not_last.cwiseProduct(v_next);
    double q_mean = 0.0;
    const double critic_loss = critic_step(q, q_opt, sa, y, &q_mean);
    nn::soft_update(q_target, q, cfg.target_rate);

    // Advantage-weighted extraction.
    const Eigen::VectorXd adv = (q_t - v_s).transpose();
    const Eigen::VectorXd w = (cfg.iql_beta * adv.array()).exp().min(cfg.iql_clip).matrix();
    nn::Tape tape;
    const Eigen::MatrixXd mean = pi.mean.forward(b.s, tape);
    const nn::loss::LogProbHead h = nn::loss::weighted_logprob(mean, pi.log_std, b.a, w);
    const nn::Gradients g = pi.mean.backward(tape, h.grad_mean);
    adam_step(actor_opt, pi, g, h.grad_log_std);
    ctx.record(step, h.value, critic_loss, hv.value, q_mean,
               std::sqrt(nn::squared_norm(g) + h.grad_log_std.squaredNorm()));
  }

  ctx.result.policy.head = HeadKind::Gaussian;
  ctx.result.policy.actor = pi.mean;
  ctx.result.policy.log_std = pi.log_std;
  ctx.result.q1 = q;
  ctx.result.value = v;
  return ctx.finish();
}

TrainResult train_td3bc(const Dataset& data, TrainConfig cfg) {
  cfg.algo = Algo::TD3BC;
  cfg.validate();
  Context ctx(data, cfg);
  const int sd = ctx.sdim(), ad = ctx.adim();
  Rng& rng = ctx.rng;
  nn::Mlp actor(ctx.dims(sd, ad), rng);
  nn::Mlp q1(ctx.dims(sd + ad, 1), rng), q2(ctx.dims(sd + ad, 1), rng);
  nn::Mlp actor_t = actor, q1_t = q1, q2_t = q2;
  nn::Adam actor_opt({cfg.actor_lr}), q1_opt({cfg.critic_lr}), q2_opt({cfg.critic_lr});
  const bool use_q = cfg.td3_alpha > 0.0;
  const bool use_smooth = cfg.smooth_beta > 0.0 && cfg.smooth_sigma > 0.0;
  double actor_loss = 0.0, grad_norm = 0.0;

  for (int step = 0; step < cfg.steps; ++step) {
    const Batch b = ctx.replay->sample(rng, cfg.batch);
    const Eigen::Index B = b.s.cols();
    const Eigen::MatrixXd sa = concat_rows(b.s, b.a);

    double critic_loss = 0.0, q_mean = 0.0;
    if (use_q) {
      Eigen::MatrixXd noise = gaussian_noise(rng, ad, B, cfg.policy_noise);
      noise = noise.cwiseMax(-cfg.noise_clip).cwiseMin(cfg.noise_clip);
      const Eigen::MatrixXd a2 = nn::clamp_unit(actor_t.forward(b.s2) + noise).first;
      const Eigen::MatrixXd sa2 = concat_rows(b.s2, a2);
      const Eigen::RowVectorXd q_next = q1_t.forward(sa2).cwiseMin(q2_t.forward(sa2));
      const Eigen::RowVectorXd y = b.r + cfg.gamma * b.not_last.cwiseProduct(q_next);
      critic_loss = critic_step(q1, q1_opt, sa, y, &q_mean) + critic_step(q2, q2_opt, sa, y);
    }

    if (step % cfg.policy_delay == 0) {
      nn::Tape tape;
      const Eigen::MatrixXd pi = actor.forward(b.s, tape);
      const nn::loss::Head bc = nn::loss::mse(pi, b.a);
      Eigen::MatrixXd g_out = bc.grad;
      actor_loss = bc.value;
      if (use_q) {
        const auto [pa, mask] = nn::clamp_unit(pi);
        nn::Tape tq;
        const Eigen::RowVectorXd qv = q1.forward(concat_rows(b.s, pa), tq);
        const double lambda = cfg.td3_alpha / std::max(qv.cwiseAbs().mean(), 1e-6);
        Eigen::MatrixXd dx;
        q1.backward(tq, Eigen::MatrixXd::Constant(1, B, 1.0 / double(B)), &dx);
        g_out -= lambda * dx.bottomRows(ad).cwiseProduct(mask);
        actor_loss -= lambda * qv.mean();
      }
      nn::Gradients g = actor.backward(tape, g_out);
      if (use_smooth) {
        const Eigen::MatrixXd s_pert = b.s + gaussian_noise(rng, sd, B, cfg.smooth_sigma);
        nn::Tape tp;
        const Eigen::MatrixXd pi_pert = actor.forward(s_pert, tp);
        const nn::loss::PairHead sm = nn::loss::smoothness(pi, pi_pert);
        actor_loss += cfg.smooth_beta * sm.value;
        nn::add_into(g, actor.backward(tape, cfg.smooth_beta * sm.grad_a));
        nn::add_into(g, actor.backward(tp, cfg.smooth_beta * sm.grad_b));
      }
      grad_norm = std::sqrt(nn::squared_norm(g));
      adam_step(actor_opt, actor, g);
      nn::soft_update(actor_t, actor, cfg.target_rate);
      if (use_q) {
        nn::soft_update(q1_t, q1, cfg.target_rate);
        nn::soft_update(q2_t, q2, cfg.target_rate);
      }
    }
    ctx.record(step, actor_loss, critic_loss, 0.0, q_mean, grad_norm);
  }

  ctx.result.policy.head = HeadKind::Deterministic;
  ctx.result.policy.actor = std::move(actor);
  if (use_q) {
    ctx.result.q1 = q1;
    ctx.result.q2 = q2;
  }
  return ctx.finish();
}

TrainResult train(const Dataset& data, const TrainConfig& cfg) {
  switch (cfg.algo) {
    case Algo::BC: return train_bc(data, cfg);
    case Algo::CRR: return train_crr(data, cfg);
    case Algo::AWAC: return train_awac(data, cfg);
    case Algo::CQL: return train_cql(data, cfg);
    case Algo::IQL: return train_iql(data, cfg);
    case Algo::TD3BC: return train_td3bc(data, cfg);
  }
  throw InputError("unknown algorithm");
}

namespace {

class ArtifactSession final : public PolicySession {
 public:
  explicit ArtifactSession(std::shared_ptr<const PolicyArtifact> p)
      : p_(std::move(p)), history_(p_->history, p_->base_obs_dim, p_->act_dim) {}

  Action act(const Eigen::VectorXd& observation) override {
    if (observation.size() != p_->base_obs_dim || p_->act_dim != kActionDim)
      throw FormatError("policy was trained for a different observation/action layout");
    const Eigen::VectorXd a = p_->act(history_.push(observation));
    history_.record_action(a);
    return a;
  }

 private:
  std::shared_ptr<const PolicyArtifact> p_;
  HistoryBuffer history_;
};

}  // namespace

ArtifactPolicy::ArtifactPolicy(std::shared_ptr<const PolicyArtifact> artifact) : artifact_(std::move(artifact)) {
  if (!artifact_) throw InputError("artifact policy needs an artifact");
  artifact_->validate();
}

std::unique_ptr<PolicySession> ArtifactPolicy::start(const EpisodeContext&) const {
  return std::make_unique<ArtifactSession>(artifact_);
}

}  // namespace rrc
