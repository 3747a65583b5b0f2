#include <cmath>
#include <string>

#include "rrc/nn.hpp"

namespace rrc::nn {

namespace {

void check_dims(const std::vector<int>& dims) {
  if (dims.size() < 2) throw ParameterError("mlp needs at least an input and an output dimension");
  for (int d : dims)
    if (d < 1) throw ParameterError("mlp layer dimensions must be positive");
}

}  // namespace

Mlp::Mlp(std::vector<int> dims, Rng& rng) : dims_(std::move(dims)) {
  check_dims(dims_);
  layers_.resize(dims_.size() - 1);
  for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
    const int in = dims_[l], out = dims_[l + 1];
    const double bound = 1.0 / std::sqrt(double(in));
    Layer& layer = layers_[l];
    layer.weight.resize(out, in);
    layer.bias.resize(out);
    // Column-major fill order keeps the draw sequence fixed.
    for (Eigen::Index j = 0; j < layer.weight.cols(); ++j)
      for (Eigen::Index i = 0; i < layer.weight.rows(); ++i) layer.weight(i, j) = uniform(rng, -bound, bound);
    for (Eigen::Index i = 0; i < layer.bias.size(); ++i) layer.bias(i) = uniform(rng, -bound, bound);
  }
}

Mlp Mlp::zeros(std::vector<int> dims) {
  check_dims(dims);
  Mlp m;
  m.dims_ = std::move(dims);
  m.layers_.resize(m.dims_.size() - 1);
  for (std::size_t l = 0; l + 1 < m.dims_.size(); ++l) {
    m.layers_[l].weight = Eigen::MatrixXd::Zero(m.dims_[l + 1], m.dims_[l]);
    m.layers_[l].bias = Eigen::VectorXd::Zero(m.dims_[l + 1]);
  }
  return m;
}

std::size_t Mlp::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += std::size_t(l.weight.size() + l.bias.size());
  return n;
}

Eigen::MatrixXd Mlp::forward(const Eigen::Ref<const Eigen::MatrixXd>& x) const {
  if (layers_.empty()) throw UsageError("forward on an empty network");
  if (x.rows() != input_dim())
    throw InputError("mlp input has " + std::to_string(x.rows()) + " rows, expected " +
                     std::to_string(input_dim()));
  Eigen::MatrixXd h = x;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    Eigen::MatrixXd z = layers_[l].weight * h;
    z.colwise() += layers_[l].bias;
    if (l + 1 < layers_.size()) z = z.cwiseMax(0.0);
    h = std::move(z);
  }
  return h;
}

Eigen::MatrixXd Mlp::forward(const Eigen::Ref<const Eigen::MatrixXd>& x, Tape& tape) const {
  if (layers_.empty()) throw UsageError("forward on an empty network");
  if (x.rows() != input_dim())
    throw InputError("mlp input has " + std::to_string(x.rows()) + " rows, expected " +
                     std::to_string(input_dim()));
  tape.inputs.resize(layers_.size());
  tape.pre.resize(layers_.size());
  Eigen::MatrixXd h = x;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    tape.inputs[l] = h;
    Eigen::MatrixXd z = layers_[l].weight * h;
    z.colwise() += layers_[l].bias;
    tape.pre[l] = z;
    h = l + 1 < layers_.size() ? Eigen::MatrixXd(z.cwiseMax(0.0)) : z;
  }
  return h;
}

Gradients Mlp::backward(const Tape& tape, const Eigen::Ref<const Eigen::MatrixXd>& dy,
                        Eigen::MatrixXd* dx) const {
  if (tape.empty() || tape.inputs.size() != layers_.size())
    throw UsageError("backward called without a recorded forward pass");
  const Eigen::Index batch = tape.inputs.front().cols();
  if (dy.rows() != output_dim() || dy.cols() != batch)
    throw InputError("output gradient shape does not match the recorded forward pass");
  Gradients g(layers_.size());
  Eigen::MatrixXd delta = dy;
  for (std::size_t k = layers_.size(); k-- > 0;) {
    if (k + 1 < layers_.size()) delta.array() *= (tape.pre[k].array() > 0.0).cast<double>();
    g[k].weight = delta * tape.inputs[k].transpose();
    g[k].bias = delta.rowwise().sum();
    if (k > 0 || dx) delta = layers_[k].weight.transpose() * delta;
  }
  if (dx) *dx = std::move(delta);
  return g;
}

Gradients Mlp::zero_gradients() const {
  Gradients g(layers_.size());
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    g[l].weight = Eigen::MatrixXd::Zero(layers_[l].weight.rows(), layers_[l].weight.cols());
    g[l].bias = Eigen::VectorXd::Zero(layers_[l].bias.size());
  }
  return g;
}

bool Mlp::all_finite() const {
  for (const auto& l : layers_)
    if (!l.weight.allFinite() || !l.bias.allFinite()) return false;
  return true;
}

bool operator==(const Mlp& a, const Mlp& b) {
  if (a.dims_ != b.dims_) return false;
  for (std::size_t l = 0; l < a.layers_.size(); ++l)
    if (a.layers_[l].weight != b.layers_[l].weight || a.layers_[l].bias != b.layers_[l].bias) return false;
  return true;
}

std::vector<int> make_dims(int in, const std::vector<int>& hidden, int out) {
  std::vector<int> dims{in};
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(out);
  return dims;
}

void add_into(Gradients& acc, const Gradients& g) {
  if (acc.size() != g.size()) throw InputError("gradient lists differ in length");
  for (std::size_t l = 0; l < g.size(); ++l) {
    acc[l].weight += g[l].weight;
    acc[l].bias += g[l].bias;
  }
}

double squared_norm(const Gradients& g) {
  double s = 0.0;
  for (const auto& l : g) s += l.weight.squaredNorm() + l.bias.squaredNorm();
  return s;
}

void soft_update(Mlp& target, const Mlp& online, double rate) {
  if (!(rate > 0.0 && rate <= 1.0)) throw ParameterError("target update rate must lie in (0, 1]");
  if (target.dims() != online.dims()) throw InputError("target and online networks differ in shape");
  for (std::size_t l = 0; l < online.layers().size(); ++l) {
    Layer& t = target.layers()[l];
    const Layer& o = online.layers()[l];
    t.weight = (1.0 - rate) * t.weight + rate * o.weight;
    t.bias = (1.0 - rate) * t.bias + rate * o.bias;
  }
}

void append_views(ParamViews& out, Mlp& net) {
  for (auto& l : net.layers()) {
    out.emplace_back(l.weight.data(), std::size_t(l.weight.size()));
    out.emplace_back(l.bias.data(), std::size_t(l.bias.size()));
  }
}

void append_views(GradViews& out, const Gradients& g) {
  for (const auto& l : g) {
    out.emplace_back(l.weight.data(), std::size_t(l.weight.size()));
    out.emplace_back(l.bias.data(), std::size_t(l.bias.size()));
  }
}

void Adam::step(const ParamViews& params, const GradViews& grads) {
  if (params.size() != grads.size()) throw InputError("adam: parameter and gradient lists differ");
  if (m_.empty()) {
    m_.reserve(params.size());
    v_.reserve(params.size());
    for (const auto& p : params) {
      m_.push_back(Eigen::VectorXd::Zero(Eigen::Index(p.size())));
      v_.push_back(Eigen::VectorXd::Zero(Eigen::Index(p.size())));
    }
  }
  if (m_.size() != params.size()) throw InputError("adam: parameter list changed between steps");
  ++t_;
  const double c1 = 1.0 - std::pow(cfg_.beta1, double(t_));
  const double c2 = 1.0 - std::pow(cfg_.beta2, double(t_));
  for (std::size_t k = 0; k < params.size(); ++k) {
    if (params[k].size() != grads[k].size() || Eigen::Index(params[k].size()) != m_[k].size())
      throw InputError("adam: shape mismatch");
    Eigen::Map<Eigen::ArrayXd> p(params[k].data(), Eigen::Index(params[k].size()));
    Eigen::Map<const Eigen::ArrayXd> g(grads[k].data(), Eigen::Index(grads[k].size()));
    auto m = m_[k].array();
    auto v = v_[k].array();
    m = cfg_.beta1 * m + (1.0 - cfg_.beta1) * g;
    v = cfg_.beta2 * v + (1.0 - cfg_.beta2) * g.square();
    p -= cfg_.lr * (m / c1) / ((v / c2).sqrt() + cfg_.eps);
  }
}

}  // namespace rrc::nn
