#pragma once

// Feed-forward networks with hand-written reverse mode, Adam, a diagonal
// Gaussian policy head and the loss heads used by the offline learners.
//
// Batches are column-major: every column of an input matrix is one sample.

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

#include "rrc/errors.hpp"
#include "rrc/rng.hpp"

namespace rrc::nn {

struct Layer {
  Eigen::MatrixXd weight;  // out x in
  Eigen::VectorXd bias;
};

using Gradients = std::vector<Layer>;

/// Activations recorded by a forward pass, consumed by Mlp::backward.
struct Tape {
  std::vector<Eigen::MatrixXd> inputs;  // input of every layer
  std::vector<Eigen::MatrixXd> pre;     // pre-activation of every layer
  bool empty() const { return inputs.empty(); }
};

/// ReLU on hidden layers, identity on the output.
class Mlp {
 public:
  Mlp() = default;
  /// PyTorch-style init: weights and biases ~ U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
  Mlp(std::vector<int> dims, Rng& rng);
  static Mlp zeros(std::vector<int> dims);

  const std::vector<int>& dims() const { return dims_; }
  int input_dim() const { return dims_.front(); }
  int output_dim() const { return dims_.back(); }
  std::vector<Layer>& layers() { return layers_; }
  const std::vector<Layer>& layers() const { return layers_; }
  std::size_t parameter_count() const;

  Eigen::MatrixXd forward(const Eigen::Ref<const Eigen::MatrixXd>& x) const;
  Eigen::MatrixXd forward(const Eigen::Ref<const Eigen::MatrixXd>& x, Tape& tape) const;

  /// Reverse pass for dL/d(output) = dy. Writes dL/d(input) into dx if given.
  Gradients backward(const Tape& tape, const Eigen::Ref<const Eigen::MatrixXd>& dy,
                     Eigen::MatrixXd* dx = nullptr) const;

  Gradients zero_gradients() const;
  bool all_finite() const;

  friend bool operator==(const Mlp& a, const Mlp& b);

 private:
  std::vector<int> dims_;
  std::vector<Layer> layers_;
};

/// Standard hidden-layer presets; the 400/300 one mirrors the TD3-style actor.
inline std::vector<int> preset_400_300(int in, int out) { return {in, 400, 300, out}; }
std::vector<int> make_dims(int in, const std::vector<int>& hidden, int out);

void add_into(Gradients& acc, const Gradients& g);
double squared_norm(const Gradients& g);
/// target <- (1 - rate) * target + rate * online
void soft_update(Mlp& target, const Mlp& online, double rate);

using ParamViews = std::vector<std::span<double>>;
using GradViews = std::vector<std::span<const double>>;

void append_views(ParamViews& out, Mlp& net);
void append_views(GradViews& out, const Gradients& g);

struct AdamConfig {
  double lr = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Adam with bias correction. The parameter list must keep its order and
/// shapes across calls.
class Adam {
 public:
  explicit Adam(AdamConfig cfg = {}) : cfg_(cfg) {}
  void step(const ParamViews& params, const GradViews& grads);
  long steps() const { return t_; }
  const AdamConfig& config() const { return cfg_; }

 private:
  AdamConfig cfg_;
  long t_ = 0;
  std::vector<Eigen::VectorXd> m_, v_;
};

/// Diagonal Gaussian with a state-independent log standard deviation.
struct GaussianPolicy {
  static constexpr double kMinLogStd = -5.0;
  static constexpr double kMaxLogStd = 2.0;

  Mlp mean;
  Eigen::VectorXd log_std;

  GaussianPolicy() = default;
  GaussianPolicy(Mlp mean_net, double initial_log_std = 0.0);
  void clamp_log_std();
  /// Clipped samples, one column per state column.
  Eigen::MatrixXd sample(const Eigen::Ref<const Eigen::MatrixXd>& states, Rng& rng) const;
};

/// Per-column log density of actions under N(mean, diag(exp(log_std))^2).
Eigen::VectorXd gaussian_logprob(const Eigen::Ref<const Eigen::MatrixXd>& mean,
                                 const Eigen::Ref<const Eigen::VectorXd>& log_std,
                                 const Eigen::Ref<const Eigen::MatrixXd>& actions);
double gaussian_logprob(const GaussianPolicy& pi, const Eigen::Ref<const Eigen::VectorXd>& state,
                        const Eigen::Ref<const Eigen::VectorXd>& action);

/// Elementwise clamp into [-1, 1]; the returned mask is 1 where the input was
/// inside the box (gradient pass-through) and 0 where it was clipped.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> clamp_unit(const Eigen::Ref<const Eigen::MatrixXd>& x);

double logsumexp(const Eigen::Ref<const Eigen::VectorXd>& v);

namespace loss {

struct Head {
  double value = 0.0;
  Eigen::MatrixXd grad;
};

/// mean_j ||pred_j - target_j||^2
Head mse(const Eigen::Ref<const Eigen::MatrixXd>& pred, const Eigen::Ref<const Eigen::MatrixXd>& target);

/// mean_j (q_j - y_j)^2 with y held fixed.
Head bellman(const Eigen::Ref<const Eigen::MatrixXd>& q, const Eigen::Ref<const Eigen::MatrixXd>& target);

/// mean_j |tau - 1[u_j < 0]| u_j^2
Head expectile(const Eigen::Ref<const Eigen::MatrixXd>& u, double tau);
double expectile_value(double u, double tau);

struct LogProbHead {
  double value = 0.0;
  Eigen::MatrixXd grad_mean;
  Eigen::VectorXd grad_log_std;
};

/// -mean_j w_j log pi(a_j | s_j)
LogProbHead weighted_logprob(const Eigen::Ref<const Eigen::MatrixXd>& mean,
                             const Eigen::Ref<const Eigen::VectorXd>& log_std,
                             const Eigen::Ref<const Eigen::MatrixXd>& actions,
                             const Eigen::Ref<const Eigen::VectorXd>& weights);

struct ConservativeHead {
  double value = 0.0;
  Eigen::MatrixXd grad_random;  // k x B
  Eigen::MatrixXd grad_data;    // 1 x B
};

/// mean_j (logsumexp_k q_random(k, j) - q_data(j))
ConservativeHead conservative(const Eigen::Ref<const Eigen::MatrixXd>& q_random,
                              const Eigen::Ref<const Eigen::MatrixXd>& q_data);

struct PairHead {
  double value = 0.0;
  Eigen::MatrixXd grad_a;
  Eigen::MatrixXd grad_b;
};

/// mean_j ||a_j - b_j||^2, differentiable in both arguments.
PairHead smoothness(const Eigen::Ref<const Eigen::MatrixXd>& a, const Eigen::Ref<const Eigen::MatrixXd>& b);

/// Binary cross-entropy on logits, labels in {0, 1}.
Head bce_logits(const Eigen::Ref<const Eigen::MatrixXd>& logits,
                const Eigen::Ref<const Eigen::MatrixXd>& labels);

}  // namespace loss

}  // namespace rrc::nn
