#include <cmath>

#include "rrc/nn.hpp"

namespace rrc::nn {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

void require_same_shape(const Eigen::Ref<const Eigen::MatrixXd>& a,
                        const Eigen::Ref<const Eigen::MatrixXd>& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw InputError(std::string(what) + ": operand shapes differ");
  if (a.cols() == 0) throw InputError(std::string(what) + ": empty batch");
}

}  // namespace

GaussianPolicy::GaussianPolicy(Mlp mean_net, double initial_log_std)
    : mean(std::move(mean_net)),
      log_std(Eigen::VectorXd::Constant(mean.output_dim(), initial_log_std)) {
  clamp_log_std();
}

void GaussianPolicy::clamp_log_std() { log_std = log_std.cwiseMax(kMinLogStd).cwiseMin(kMaxLogStd); }

Eigen::MatrixXd GaussianPolicy::sample(const Eigen::Ref<const Eigen::MatrixXd>& states, Rng& rng) const {
  Eigen::MatrixXd out = mean.forward(states);
  const Eigen::VectorXd sd = log_std.array().exp();
  for (Eigen::Index j = 0; j < out.cols(); ++j)
    for (Eigen::Index i = 0; i < out.rows(); ++i) out(i, j) += gaussian(rng, sd(i));
  return out.cwiseMax(-1.0).cwiseMin(1.0);
}

Eigen::VectorXd gaussian_logprob(const Eigen::Ref<const Eigen::MatrixXd>& mean,
                                 const Eigen::Ref<const Eigen::VectorXd>& log_std,
                                 const Eigen::Ref<const Eigen::MatrixXd>& actions) {
  if (mean.rows() != log_std.size() || mean.rows() != actions.rows() || mean.cols() != actions.cols())
    throw InputError("gaussian_logprob: dimension mismatch");
  const Eigen::ArrayXd inv_var = (-2.0 * log_std.array()).exp();
  const double norm = -0.5 * double(mean.rows()) * kLog2Pi - log_std.sum();
  Eigen::VectorXd out(mean.cols());
  for (Eigen::Index j = 0; j < mean.cols(); ++j) {
    const Eigen::ArrayXd d = (actions.col(j) - mean.col(j)).array();
    out(j) = norm - 0.5 * (d.square() * inv_var).sum();
  }
  return out;
}

double gaussian_logprob(const GaussianPolicy& pi, const Eigen::Ref<const Eigen::VectorXd>& state,
                        const Eigen::Ref<const Eigen::VectorXd>& action) {
  const Eigen::MatrixXd mu = pi.mean.forward(state);
  const Eigen::VectorXd clipped = action.cwiseMax(-1.0).cwiseMin(1.0);
  return gaussian_logprob(mu, pi.log_std, clipped)(0);
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> clamp_unit(const Eigen::Ref<const Eigen::MatrixXd>& x) {
  Eigen::MatrixXd y = x.cwiseMax(-1.0).cwiseMin(1.0);
  Eigen::MatrixXd mask = (x.array().abs() <= 1.0).cast<double>();
  return {std::move(y), std::move(mask)};
}

double logsumexp(const Eigen::Ref<const Eigen::VectorXd>& v) {
  if (v.size() == 0) throw InputError("logsumexp of an empty vector");
  const double m = v.maxCoeff();
  if (!std::isfinite(m)) return m;
  return m + std::log((v.array() - m).exp().sum());
}

namespace loss {

Head mse(const Eigen::Ref<const Eigen::MatrixXd>& pred, const Eigen::Ref<const Eigen::MatrixXd>& target) {
  require_same_shape(pred, target, "mse");
  const double n = double(pred.cols());
  const Eigen::MatrixXd d = pred - target;
  return {d.squaredNorm() / n, 2.0 * d / n};
}

Head bellman(const Eigen::Ref<const Eigen::MatrixXd>& q, const Eigen::Ref<const Eigen::MatrixXd>& target) {
  return mse(q, target);
}

double expectile_value(double u, double tau) { return std::abs(tau - (u < 0.0 ? 1.0 : 0.0)) * u * u; }

Head expectile(const Eigen::Ref<const Eigen::MatrixXd>& u, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw ParameterError("expectile tau must lie in (0, 1)");
  if (u.size() == 0) throw InputError("expectile: empty batch");
  const double n = double(u.cols());
  Head h;
  h.grad.resize(u.rows(), u.cols());
  for (Eigen::Index j = 0; j < u.cols(); ++j)
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
      const double w = u(i, j) < 0.0 ? 1.0 - tau : tau;
      h.value += w * u(i, j) * u(i, j);
      h.grad(i, j) = 2.0 * w * u(i, j) / n;
    }
  h.value /= n;
  return h;
}

LogProbHead weighted_logprob(const Eigen::Ref<const Eigen::MatrixXd>& mean,
                             const Eigen::Ref<const Eigen::VectorXd>& log_std,
                             const Eigen::Ref<const Eigen::MatrixXd>& actions,
                             const Eigen::Ref<const Eigen::VectorXd>& weights) {
  require_same_shape(mean, actions, "weighted_logprob");
  if (weights.size() != mean.cols()) throw InputError("weighted_logprob: one weight per sample required");
  const double n = double(mean.cols());
  const Eigen::VectorXd lp = gaussian_logprob(mean, log_std, actions);
  const Eigen::ArrayXd inv_var = (-2.0 * log_std.array()).exp();
  LogProbHead h;
  h.value = -weights.dot(lp) / n;
  h.grad_mean.resize(mean.rows(), mean.cols());
  h.grad_log_std = Eigen::VectorXd::Zero(log_std.size());
  for (Eigen::Index j = 0; j < mean.cols(); ++j) {
    const Eigen::ArrayXd d = (actions.col(j) - mean.col(j)).array();
    const double w = weights(j) / n;
    // d(-log p)/d(mu) = -(a - mu)/sigma^2 ; d(-log p)/d(log sigma) = 1 - (a - mu)^2/sigma^2
    h.grad_mean.col(j) = (-w * d * inv_var).matrix();
    h.grad_log_std.array() += w * (1.0 - d.square() * inv_var);
  }
  return h;
}

ConservativeHead conservative(const Eigen::Ref<const Eigen::MatrixXd>& q_random,
                              const Eigen::Ref<const Eigen::MatrixXd>& q_data) {
  if (q_data.rows() != 1 || q_random.cols() != q_data.cols() || q_random.rows() < 1 || q_data.cols() == 0)
    throw InputError("conservative: expected k x B random values and 1 x B data values");
  const double n = double(q_data.cols());
  ConservativeHead h;
  h.grad_random.resize(q_random.rows(), q_random.cols());
  h.grad_data = Eigen::MatrixXd::Constant(1, q_data.cols(), -1.0 / n);
  for (Eigen::Index j = 0; j < q_data.cols(); ++j) {
    const double lse = logsumexp(q_random.col(j));
    h.value += lse - q_data(0, j);
    h.grad_random.col(j) = (q_random.col(j).array() - lse).exp().matrix() / n;
  }
  h.value /= n;
  return h;
}

PairHead smoothness(const Eigen::Ref<const Eigen::MatrixXd>& a, const Eigen::Ref<const Eigen::MatrixXd>& b) {
  require_same_shape(a, b, "smoothness");
  const double n = double(a.cols());
  const Eigen::MatrixXd d = a - b;
  return {d.squaredNorm() / n, 2.0 * d / n, -2.0 * d / n};
}

Head bce_logits(const Eigen::Ref<const Eigen::MatrixXd>& logits,
                const Eigen::Ref<const Eigen::MatrixXd>& labels) {
  require_same_shape(logits, labels, "bce_logits");
  const double n = double(logits.cols());
  Head h;
  h.grad.resize(logits.rows(), logits.cols());
  for (Eigen::Index j = 0; j < logits.cols(); ++j)
    for (Eigen::Index i = 0; i < logits.rows(); ++i) {
      const double z = logits(i, j), y = labels(i, j);
      // log(1 + exp(-|z|)) + max(z, 0) - y z
      h.value += std::log1p(std::exp(-std::abs(z))) + std::max(z, 0.0) - y * z;
      h.grad(i, j) = (1.0 / (1.0 + std::exp(-z)) - y) / n;
    }
  h.value /= n;
  return h;
}

}  // namespace loss

}  // namespace rrc::nn
