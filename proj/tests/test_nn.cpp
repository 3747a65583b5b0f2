#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gradcheck.hpp"
#include "rrc/artifact.hpp"
#include "rrc/nn.hpp"
#include "test_util.hpp"

using namespace rrc;
using rrc::test::random_matrix;

namespace {

constexpr double kGradTol = 1e-4;

void adam_step_on(nn::Mlp& net, nn::Adam& opt, const nn::Gradients& g) {
  nn::ParamViews p;
  nn::GradViews gv;
  nn::append_views(p, net);
  nn::append_views(gv, g);
  opt.step(p, gv);
}

PolicyArtifact small_artifact(HeadKind head) {
  Rng rng(5);
  PolicyArtifact p;
  p.algo = head == HeadKind::Gaussian ? Algo::IQL : Algo::BC;
  p.task = Task::Lift;
  p.head = head;
  p.history = 2;
  p.base_obs_dim = 3;
  p.act_dim = 2;
  p.config_fingerprint = 0xfeedbeefULL;
  p.norm = NormStats::identity(p.input_dim(), p.act_dim);
  p.norm.obs_mean.setLinSpaced(-1.0, 1.0);
  p.norm.obs_std.setConstant(2.0);
  p.actor = nn::Mlp(nn::make_dims(p.input_dim(), {8, 8}, p.act_dim), rng);
  if (head == HeadKind::Gaussian) p.log_std = Eigen::VectorXd::Constant(2, -0.5);
  return p;
}

}  // namespace

TEST(Gradcheck, MlpParametersAndInput) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int in = 1 + int(rng() % 5), out = 1 + int(rng() % 4);
    const std::vector<int> dims = trial % 2 ? std::vector<int>{in, 7, 5, out} : std::vector<int>{in, 6, out};
    EXPECT_LT(test::check_mlp(rng, dims, 4), kGradTol) << "trial " << trial;
  }
}

TEST(Gradcheck, LossHeads) {
  Rng rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    EXPECT_LT(test::check_mse(rng), kGradTol);
    EXPECT_LT(test::check_bellman(rng), kGradTol);
    EXPECT_LT(test::check_expectile(rng, 0.5), kGradTol);
    EXPECT_LT(test::check_expectile(rng, 0.9), kGradTol);
    EXPECT_LT(test::check_weighted_logprob(rng), kGradTol);
    EXPECT_LT(test::check_conservative(rng), kGradTol);
    EXPECT_LT(test::check_smoothness(rng), kGradTol);
    EXPECT_LT(test::check_bce(rng), kGradTol);
  }
}

TEST(Mlp, ZeroWeightsOutputFinalBias) {
  nn::Mlp net = nn::Mlp::zeros({3, 4, 2});
  net.layers().back().bias << 0.25, -1.5;
  Rng rng(1);
  const Eigen::MatrixXd y = net.forward(random_matrix(rng, 3, 6));
  for (Eigen::Index j = 0; j < y.cols(); ++j) {
    EXPECT_DOUBLE_EQ(y(0, j), 0.25);
    EXPECT_DOUBLE_EQ(y(1, j), -1.5);
  }
}

TEST(Mlp, SingleLayerIsAffine) {
  Rng rng(2);
  nn::Mlp net({3, 2}, rng);
  const Eigen::MatrixXd x = random_matrix(rng, 3, 5);
  const Eigen::MatrixXd expected = (net.layers()[0].weight * x).colwise() + net.layers()[0].bias;
  EXPECT_LT((net.forward(x) - expected).norm(), 1e-14);
}

TEST(Mlp, IdentityLayersPassPositiveInput) {
  nn::Mlp net = nn::Mlp::zeros({3, 3, 3});
  for (auto& l : net.layers()) l.weight.setIdentity();
  Eigen::MatrixXd x(3, 2);
  x << 0.1, 2.0, 0.5, 3.0, 1.0, 0.25;
  EXPECT_EQ(net.forward(x), x);
}

TEST(Mlp, LinearInputGradientIsTransposedWeight) {
  Rng rng(3);
  nn::Mlp net({4, 3}, rng);
  const Eigen::MatrixXd x = random_matrix(rng, 4, 2), dy = random_matrix(rng, 3, 2);
  nn::Tape tape;
  net.forward(x, tape);
  Eigen::MatrixXd dx;
  net.backward(tape, dy, &dx);
  EXPECT_LT((dx - net.layers()[0].weight.transpose() * dy).norm(), 1e-14);
}

TEST(Mlp, ZeroUpstreamGivesZeroGradients) {
  Rng rng(4);
  nn::Mlp net({4, 8, 3}, rng);
  nn::Tape tape;
  net.forward(random_matrix(rng, 4, 5), tape);
  const nn::Gradients g = net.backward(tape, Eigen::MatrixXd::Zero(3, 5));
  EXPECT_EQ(nn::squared_norm(g), 0.0);
}

TEST(Mlp, ShapeErrors) {
  Rng rng(5);
  nn::Mlp net({4, 8, 3}, rng);
  EXPECT_THROW(net.forward(Eigen::MatrixXd::Zero(5, 1)), InputError);
  nn::Tape tape;
  EXPECT_THROW(net.backward(tape, Eigen::MatrixXd::Zero(3, 1)), UsageError);
  net.forward(Eigen::MatrixXd::Zero(4, 2), tape);
  EXPECT_THROW(net.backward(tape, Eigen::MatrixXd::Zero(3, 1)), InputError);
  EXPECT_THROW(nn::Mlp({4}, rng), ParameterError);
  EXPECT_THROW(nn::Mlp({4, 0, 2}, rng), ParameterError);
}

TEST(Mlp, PresetParameterCount) {
  Rng rng(6);
  for (auto [n, m] : {std::pair{21, 9}, std::pair{25, 9}, std::pair{1, 1}}) {
    nn::Mlp net(nn::preset_400_300(n, m), rng);
    EXPECT_EQ(net.parameter_count(), std::size_t(n * 400 + 400 + 400 * 300 + 300 + 300 * m + m));
  }
}

TEST(Mlp, InitWithinFanInBound) {
  Rng rng(7);
  nn::Mlp net({16, 32, 4}, rng);
  for (const auto& l : net.layers()) {
    const double bound = 1.0 / std::sqrt(double(l.weight.cols()));
    EXPECT_LE(l.weight.cwiseAbs().maxCoeff(), bound);
    EXPECT_LE(l.bias.cwiseAbs().maxCoeff(), bound);
  }
}

TEST(Mlp, SoftUpdate) {
  Rng rng(8);
  nn::Mlp a({3, 4, 2}, rng), b({3, 4, 2}, rng);
  nn::Mlp t = a;
  nn::soft_update(t, b, 0.25);
  const Eigen::MatrixXd expect = 0.75 * a.layers()[0].weight + 0.25 * b.layers()[0].weight;
  EXPECT_LT((t.layers()[0].weight - expect).norm(), 1e-15);
  nn::soft_update(t, b, 1.0);
  EXPECT_TRUE(t == b);
  EXPECT_THROW(nn::soft_update(t, b, 0.0), ParameterError);
  EXPECT_THROW(nn::soft_update(t, nn::Mlp({3, 5, 2}, rng), 0.5), InputError);
}

TEST(Adam, ZeroGradientLeavesParameters) {
  Rng rng(9);
  nn::Mlp net({3, 4, 2}, rng);
  const nn::Mlp before = net;
  nn::Adam opt({.lr = 0.1});
  for (int i = 0; i < 10; ++i) adam_step_on(net, opt, net.zero_gradients());
  EXPECT_TRUE(net == before);
  EXPECT_EQ(opt.steps(), 10);
}

TEST(Adam, MinimizesQuadraticBowl) {
  Rng rng(10);
  nn::Mlp net({3, 4, 2}, rng);
  nn::Adam opt({.lr = 1e-2});
  double loss = 0.0;
  int steps = 0;
  for (; steps < 2000; ++steps) {
    nn::Gradients g = net.zero_gradients();
    loss = 0.0;
    for (std::size_t l = 0; l < g.size(); ++l) {
      loss += net.layers()[l].weight.squaredNorm() + net.layers()[l].bias.squaredNorm();
      g[l].weight = 2 * net.layers()[l].weight;
      g[l].bias = 2 * net.layers()[l].bias;
    }
    if (loss < 1e-3) break;
    adam_step_on(net, opt, g);
  }
  EXPECT_LT(loss, 1e-3) << "after " << steps << " steps";
}

TEST(Adam, Deterministic) {
  const auto run = [] {
    Rng rng(11);
    nn::Mlp net({3, 8, 2}, rng);
    nn::Adam opt({.lr = 1e-3});
    const Eigen::MatrixXd x = random_matrix(rng, 3, 16), y = random_matrix(rng, 2, 16);
    for (int i = 0; i < 50; ++i) {
      nn::Tape tape;
      const auto head = nn::loss::mse(net.forward(x, tape), y);
      adam_step_on(net, opt, net.backward(tape, head.grad));
    }
    return net;
  };
  EXPECT_TRUE(run() == run());
}

TEST(Adam, RejectsChangedParameterList) {
  Rng rng(12);
  nn::Mlp a({3, 4, 2}, rng), b({3, 4, 4, 2}, rng);
  nn::Adam opt;
  adam_step_on(a, opt, a.zero_gradients());
  EXPECT_THROW(adam_step_on(b, opt, b.zero_gradients()), InputError);
}

TEST(Gaussian, LogDensityAtMean) {
  for (int d : {1, 3, 9}) {
    const Eigen::MatrixXd mu = Eigen::MatrixXd::Constant(d, 1, 0.3);
    const double lp = nn::gaussian_logprob(mu, Eigen::VectorXd::Zero(d), mu)(0);
    EXPECT_NEAR(lp, -0.5 * d * std::log(2 * std::numbers::pi), 1e-12);
  }
}

TEST(Gaussian, DecreasesAwayFromMean) {
  const Eigen::MatrixXd mu = Eigen::MatrixXd::Zero(2, 1);
  const Eigen::VectorXd ls = Eigen::VectorXd::Constant(2, -0.3);
  double prev = 0.0;
  for (int k = 0; k <= 10; ++k) {
    const Eigen::MatrixXd a = Eigen::MatrixXd::Constant(2, 1, 0.1 * k);
    const double lp = nn::gaussian_logprob(mu, ls, a)(0);
    if (k > 0) {
      EXPECT_LT(lp, prev);
    }
    prev = lp;
  }
}

TEST(Gaussian, DensityIntegratesToOne) {
  const double mu = 0.2, log_std = -0.7;
  const int n = 20001;
  const double lo = -3.0, hi = 3.0, h = (hi - lo) / (n - 1);
  Eigen::MatrixXd a(1, n), m = Eigen::MatrixXd::Constant(1, n, mu);
  for (int i = 0; i < n; ++i) a(0, i) = lo + i * h;
  const Eigen::VectorXd lp = nn::gaussian_logprob(m, Eigen::VectorXd::Constant(1, log_std), a);
  double total = 0.0;
  for (int i = 0; i < n; ++i) total += (i == 0 || i == n - 1 ? 0.5 : 1.0) * std::exp(lp(i));
  EXPECT_NEAR(total * h, 1.0, 1e-3);
}

TEST(Gaussian, PolicyClampsLogStdAndSamplesInBox) {
  Rng rng(13);
  nn::GaussianPolicy pi(nn::Mlp({2, 4, 3}, rng), 10.0);
  EXPECT_EQ(pi.log_std.maxCoeff(), nn::GaussianPolicy::kMaxLogStd);
  pi.log_std.setConstant(-100.0);
  pi.clamp_log_std();
  EXPECT_EQ(pi.log_std.minCoeff(), nn::GaussianPolicy::kMinLogStd);
  pi.log_std.setConstant(1.0);
  const Eigen::MatrixXd s = pi.sample(random_matrix(rng, 2, 50), rng);
  EXPECT_LE(s.cwiseAbs().maxCoeff(), 1.0);
}

TEST(Helpers, ClampUnitMask) {
  Eigen::MatrixXd x(1, 4);
  x << -2.0, -0.5, 0.9, 1.5;
  const auto [y, mask] = nn::clamp_unit(x);
  EXPECT_EQ(y(0), -1.0);
  EXPECT_EQ(y(3), 1.0);
  EXPECT_EQ(mask.sum(), 2.0);
  EXPECT_EQ(mask(1), 1.0);
}

TEST(Helpers, LogSumExp) {
  for (int k : {1, 4, 10})
    EXPECT_NEAR(nn::logsumexp(Eigen::VectorXd::Constant(k, 3.5)), 3.5 + std::log(double(k)), 1e-12);
  Eigen::VectorXd big(2);
  big << 1000.0, 1000.0;
  EXPECT_NEAR(nn::logsumexp(big), 1000.0 + std::log(2.0), 1e-9);
  EXPECT_THROW(nn::logsumexp(Eigen::VectorXd()), InputError);
}

TEST(Loss, ExpectileValues) {
  for (double u : {-2.0, -0.3, 0.7, 1.5}) EXPECT_NEAR(nn::loss::expectile_value(u, 0.5), 0.5 * u * u, 1e-15);
  EXPECT_NEAR(nn::loss::expectile_value(1.0, 0.7), 0.7, 1e-15);
  EXPECT_NEAR(nn::loss::expectile_value(-1.0, 0.7), 0.3, 1e-15);
}

TEST(Loss, HeadValues) {
  Eigen::MatrixXd p(2, 2), t(2, 2);
  p << 1, 0, 0, 2;
  t << 0, 0, 0, 0;
  EXPECT_DOUBLE_EQ(nn::loss::mse(p, t).value, 2.5);
  EXPECT_DOUBLE_EQ(nn::loss::smoothness(p, t).value, 2.5);
  Eigen::MatrixXd qd = Eigen::MatrixXd::Zero(1, 1), qr = Eigen::MatrixXd::Zero(4, 1);
  EXPECT_NEAR(nn::loss::conservative(qr, qd).value, std::log(4.0), 1e-15);
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(1, 2), y(1, 2);
  y << 0, 1;
  EXPECT_NEAR(nn::loss::bce_logits(z, y).value, std::log(2.0), 1e-15);
  EXPECT_THROW(nn::loss::mse(p, Eigen::MatrixXd::Zero(2, 3)), InputError);
}

TEST(Loss, BceStableForLargeLogits) {
  Eigen::MatrixXd z(1, 2), y(1, 2);
  z << 800.0, -800.0;
  y << 1, 0;
  const auto h = nn::loss::bce_logits(z, y);
  EXPECT_TRUE(std::isfinite(h.value));
  EXPECT_NEAR(h.value, 0.0, 1e-12);
  EXPECT_TRUE(h.grad.allFinite());
}

TEST(Artifact, RoundTrip) {
  for (HeadKind head : {HeadKind::Deterministic, HeadKind::Gaussian}) {
    const PolicyArtifact p = small_artifact(head);
    const std::string bytes = serialize_policy(p);
    const PolicyArtifact q = deserialize_policy(bytes);
    EXPECT_TRUE(p == q);
    EXPECT_EQ(q.config_fingerprint, p.config_fingerprint);
    Rng rng(1);
    const Eigen::VectorXd x = random_matrix(rng, p.input_dim(), 1);
    EXPECT_EQ(p.act(x), q.act(x));
    EXPECT_LE(q.act(x).cwiseAbs().maxCoeff(), 1.0);
  }
}

TEST(Artifact, FileRoundTrip) {
  test::TempDir dir("nn");
  const PolicyArtifact p = small_artifact(HeadKind::Gaussian);
  save_policy(p, dir / "p.rrcp");
  EXPECT_TRUE(load_policy(dir / "p.rrcp") == p);
  EXPECT_THROW(load_policy(dir / "missing.rrcp"), IoError);
}

TEST(Artifact, RejectsCorruption) {
  const std::string good = serialize_policy(small_artifact(HeadKind::Deterministic));
  std::string bad = good;
  bad[0] = 'X';
  EXPECT_THROW(deserialize_policy(bad), FormatError);
  bad = good;
  bad[4] = 9;  // version
  EXPECT_THROW(deserialize_policy(bad), FormatError);
  bad = good;
  bad[8] = 42;  // algorithm id
  EXPECT_THROW(deserialize_policy(bad), FormatError);
  EXPECT_THROW(deserialize_policy(good.substr(0, good.size() - 3)), FormatError);
  EXPECT_THROW(deserialize_policy(good + "xx"), FormatError);
  EXPECT_THROW(deserialize_policy(""), FormatError);
}

TEST(Artifact, ValidateCatchesShapeErrors) {
  PolicyArtifact p = small_artifact(HeadKind::Deterministic);
  p.log_std = Eigen::VectorXd::Zero(2);
  EXPECT_THROW(p.validate(), FormatError);
  p = small_artifact(HeadKind::Deterministic);
  p.history = 3;
  EXPECT_THROW(serialize_policy(p), FormatError);
  p = small_artifact(HeadKind::Deterministic);
  EXPECT_THROW(p.act(Eigen::VectorXd::Zero(3)), InputError);
}

TEST(Artifact, AlgoNames) {
  for (Algo a : {Algo::BC, Algo::CRR, Algo::AWAC, Algo::CQL, Algo::IQL, Algo::TD3BC})
    EXPECT_EQ(parse_algo(algo_name(a)), a);
  EXPECT_THROW(parse_algo("ppo"), InputError);
}
