#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "ofd/analytics/metrics.hpp"
#include "ofd/lstm/adam.hpp"
#include "ofd/lstm/model_io.hpp"
#include "ofd/lstm/network.hpp"
#include "ofd/lstm/train.hpp"
#include "support.hpp"

namespace ofd {
namespace {

using lstm::Mat;
using lstm::Vec;

std::vector<Mat> random_inputs(int T, int in, int B, std::mt19937_64& g) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<Mat> xs;
  for (int t = 0; t < T; ++t) {
    Mat m(in, B);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n(g);
    xs.push_back(m);
  }
  return xs;
}

// Finite-difference relative error with a floor on the denominator: for
// gradients near zero, central differences carry ~1e-11 absolute round-off.
double relative_error(double a, double n) {
  return std::abs(a - n) / std::max({std::abs(a), std::abs(n), 1e-6});
}

TEST(Activations, Identities) {
  EXPECT_EQ(lstm::tanh(0.0), 0.0);
  EXPECT_EQ(lstm::sigmoid(0.0), 0.5);
  std::mt19937_64 g(1);
  std::uniform_real_distribution<double> u(-20, 20);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(g);
    EXPECT_NEAR(lstm::tanh(x), 2 * lstm::sigmoid(2 * x) - 1, 1e-12);
  }
  EXPECT_EQ(lstm::sigmoid(-1000.0), 0.0);
  EXPECT_EQ(lstm::sigmoid(1000.0), 1.0);
}

TEST(Cell, ZeroWeightsGiveHalfGates) {
  lstm::LayerWeights w{Mat::Zero(8, 2), Mat::Zero(8, 3), Mat::Zero(8, 1)};
  const auto [s, c] = lstm::cell_forward(Vec::Ones(3), {Vec::Zero(2), Vec::Zero(2)}, w);
  for (const Vec* g : {&c.i, &c.f, &c.o}) EXPECT_TRUE(g->isApprox(Vec::Constant(2, 0.5)));
  EXPECT_TRUE(c.g.isZero());
  EXPECT_TRUE(s.c.isZero());
  EXPECT_TRUE(s.h.isZero());
}

TEST(Cell, ForgetGateHalvesCell) {
  lstm::LayerWeights w{Mat::Zero(8, 2), Mat::Zero(8, 3), Mat::Zero(8, 1)};
  const auto [s, c] = lstm::cell_forward(Vec::Zero(3), {Vec::Zero(2), Vec::Ones(2)}, w);
  EXPECT_TRUE(s.c.isApprox(Vec::Constant(2, 0.5)));
  EXPECT_TRUE(s.h.isApprox(Vec::Constant(2, 0.5 * std::tanh(0.5))));
}

TEST(Cell, HiddenStateBounded) {
  std::mt19937_64 g(2);
  std::normal_distribution<double> n(0, 10);
  lstm::LayerWeights w{Mat(16, 4), Mat(16, 3), Mat(16, 1)};
  for (Mat* m : {&w.W, &w.Wx, &w.b})
    for (Eigen::Index i = 0; i < m->size(); ++i) m->data()[i] = n(g);
  lstm::LstmState s{Vec::Zero(4), Vec::Zero(4)};
  for (int t = 0; t < 200; ++t) {
    Vec x(3);
    for (int k = 0; k < 3; ++k) x(k) = n(g) * 100;
    s = lstm::cell_forward(x, s, w).first;
    EXPECT_LE(s.h.cwiseAbs().maxCoeff(), 1.0);
  }
}

TEST(Network, ZeroWeightsPredictZero) {
  lstm::NetworkConfig cfg{{4}, 3, 2, 0.0};
  auto net = lstm::Network::initialize(cfg, 1);
  for (Mat* m : net.params().tensors()) m->setZero();
  EXPECT_TRUE(net.predict(Mat::Ones(5, 3)).isZero());
}

TEST(Network, InferIsDeterministicAndTrainDropoutIsSeeded) {
  lstm::NetworkConfig cfg{{6, 5}, 3, 2, 0.5};
  const auto net = lstm::Network::initialize(cfg, 9);
  std::mt19937_64 g(3);
  const auto xs = random_inputs(4, 3, 7, g);
  EXPECT_TRUE(net.forward(xs, lstm::Mode::Infer, nullptr) == net.forward(xs, lstm::Mode::Infer, nullptr));
  RandomStream r1(5), r2(5);
  const Mat a = net.forward(xs, lstm::Mode::Train, &r1);
  const Mat b = net.forward(xs, lstm::Mode::Train, &r2);
  EXPECT_TRUE(a == b);
  EXPECT_FALSE(a == net.forward(xs, lstm::Mode::Infer, nullptr));
  EXPECT_THROW(net.forward(xs, lstm::Mode::Train, nullptr), DataError);
}

TEST(Network, InitializationFollowsGlorotAndForgetBias) {
  lstm::NetworkConfig cfg{{8}, 5, 1, 0.0};
  const auto net = lstm::Network::initialize(cfg, 4);
  const auto& l = net.params().layers[0];
  EXPECT_TRUE(l.b.middleRows(8, 8).isApprox(Mat::Ones(8, 1)));
  EXPECT_TRUE(l.b.topRows(8).isZero());
  EXPECT_LE(l.Wx.cwiseAbs().maxCoeff(), std::sqrt(6.0 / (5 + 8)));
  EXPECT_LE(l.W.cwiseAbs().maxCoeff(), std::sqrt(6.0 / (8 + 8)));
}

TEST(Loss, MseValues) {
  Mat p(2, 1), t = Mat::Zero(2, 1);
  p << 3, 4;
  EXPECT_EQ(lstm::loss_mse(p, t), 12.5);
  EXPECT_EQ(lstm::loss_mse(p, p), 0.0);
  EXPECT_THROW(lstm::loss_mse(p, Mat::Zero(3, 1)), DataError);
}

TEST(Backward, ZeroLossGivesZeroGradients) {
  lstm::NetworkConfig cfg{{4, 3}, 2, 2, 0.0};
  const auto net = lstm::Network::initialize(cfg, 2);
  std::mt19937_64 g(4);
  const auto xs = random_inputs(3, 2, 5, g);
  lstm::ForwardCache fc;
  const Mat pred = net.forward(xs, lstm::Mode::Infer, nullptr, &fc);
  const auto grads = net.backward(fc, lstm::loss_mse_grad(pred, pred));
  for (const Mat* m : grads.tensors()) EXPECT_TRUE(m->isZero());
}

TEST(Backward, DenseBiasGradientIsMeanErrorSignal) {
  lstm::NetworkConfig cfg{{4}, 2, 3, 0.0};
  const auto net = lstm::Network::initialize(cfg, 2);
  std::mt19937_64 g(5);
  const auto xs = random_inputs(2, 2, 6, g);
  const Mat y = Mat::Random(3, 6);
  lstm::ForwardCache fc;
  const Mat pred = net.forward(xs, lstm::Mode::Infer, nullptr, &fc);
  const Mat d = lstm::loss_mse_grad(pred, y);
  const auto grads = net.backward(fc, d);
  EXPECT_TRUE(grads.head_b.isApprox(d.rowwise().sum()));
}

TEST(Backward, MatchesCentralDifferencesOnRandomConfigurations) {
  std::mt19937_64 g(2024);
  double worst = 0.0;
  for (int trial = 0; trial < 25; ++trial) {
    const int layers = 1 + static_cast<int>(g() % 2);
    std::vector<int> units;
    for (int l = 0; l < layers; ++l) units.push_back(2 + static_cast<int>(g() % 7));
    const int T = 1 + static_cast<int>(g() % 4);
    const int in = 1 + static_cast<int>(g() % 4);
    const int out = 1 + static_cast<int>(g() % 3);
    const int B = 1 + static_cast<int>(g() % 4);
    auto net = lstm::Network::initialize({units, in, out, 0.0}, g());
    const auto xs = random_inputs(T, in, B, g);
    const Mat y = Mat::Random(out, B);

    lstm::ForwardCache fc;
    const Mat pred = net.forward(xs, lstm::Mode::Infer, nullptr, &fc);
    const auto grads = net.backward(fc, lstm::loss_mse_grad(pred, y));
    auto P = net.params().tensors();
    const auto G = grads.tensors();
    const double h = 1e-5;
    for (std::size_t k = 0; k < P.size(); ++k)
      for (Eigen::Index i = 0; i < P[k]->size(); ++i) {
        double& w = P[k]->data()[i];
        const double w0 = w;
        w = w0 + h;
        const double lp = lstm::loss_mse(net.forward(xs, lstm::Mode::Infer, nullptr), y);
        w = w0 - h;
        const double lm = lstm::loss_mse(net.forward(xs, lstm::Mode::Infer, nullptr), y);
        w = w0;
        worst = std::max(worst, relative_error(G[k]->data()[i], (lp - lm) / (2 * h)));
      }
  }
  EXPECT_LT(worst, 1e-4);
}

TEST(Dropout, ExpectedTrainOutputMatchesInfer) {
  // Linear readout of the layer-2 input: E[mask * x] = x under inverted dropout.
  lstm::NetworkConfig cfg{{5, 4}, 3, 1, 0.3};
  const auto net = lstm::Network::initialize(cfg, 12);
  std::mt19937_64 g(6);
  const auto xs = random_inputs(3, 3, 1, g);
  lstm::ForwardCache ref;
  net.forward(xs, lstm::Mode::Infer, nullptr, &ref);
  const Mat h1 = ref.layers[0].H;
  RandomStream rng(77);
  Mat sum = Mat::Zero(h1.rows(), h1.cols());
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    lstm::ForwardCache fc;
    net.forward(xs, lstm::Mode::Train, &rng, &fc);
    sum += fc.layers[1].X;
  }
  const Mat avg = sum / n;
  for (Eigen::Index i = 0; i < h1.size(); ++i)
    EXPECT_NEAR(avg.data()[i], h1.data()[i], 0.02 * std::abs(h1.data()[i]) + 1e-3);
}

TEST(Adam, ZeroGradientLeavesParameters) {
  auto net = lstm::Network::initialize({{3}, 2, 1, 0.0}, 1);
  const auto before = net.params();
  auto state = lstm::AdamState::for_params(net.params());
  lstm::adam_step(net.params(), before.zeros_like(), state, 0.01);
  const auto a = before.tensors();
  const auto b = net.params().tensors();
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_TRUE(*a[k] == *b[k]);
}

TEST(Adam, FirstStepMovesBySignTimesLearningRate) {
  auto net = lstm::Network::initialize({{3}, 2, 1, 0.0}, 1);
  const auto before = net.params();
  auto grads = before.zeros_like();
  grads.head_b(0, 0) = 0.37;
  grads.head_W(0, 1) = -2.5;
  auto state = lstm::AdamState::for_params(net.params());
  lstm::adam_step(net.params(), grads, state, 0.01);
  EXPECT_NEAR(net.params().head_b(0, 0) - before.head_b(0, 0), -0.01, 1e-8);
  EXPECT_NEAR(net.params().head_W(0, 1) - before.head_W(0, 1), 0.01, 1e-8);
}

TEST(Adam, ClonedStatesAgree) {
  auto n1 = lstm::Network::initialize({{3}, 2, 1, 0.0}, 1);
  auto n2 = n1;
  auto g = n1.params().zeros_like();
  for (Mat* m : g.tensors()) m->setConstant(0.1);
  auto s1 = lstm::AdamState::for_params(n1.params());
  auto s2 = s1;
  lstm::adam_step(n1.params(), g, s1, 0.005);
  lstm::adam_step(n2.params(), g, s2, 0.005);
  const auto a = n1.params().tensors();
  const auto b = n2.params().tensors();
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_TRUE(*a[k] == *b[k]);
}

TEST(Adam, GlobalNormClipping) {
  auto net = lstm::Network::initialize({{3}, 2, 1, 0.0}, 1);
  auto g = net.params().zeros_like();
  g.head_b(0, 0) = 30.0;
  g.head_W(0, 0) = 40.0;
  EXPECT_NEAR(lstm::clip_global_norm(g, 5.0), 50.0, 1e-12);
  EXPECT_NEAR(std::sqrt(lstm::squared_norm(g)), 5.0, 1e-12);
}

// Windows of a noiseless sinusoid: predict the next value from the last 5.
WindowedDataset sine_windows(std::size_t samples, std::size_t offset) {
  WindowedDataset w;
  w.X = Tensor3(samples, 5, 1);
  w.Y = RowMatrix(static_cast<Eigen::Index>(samples), 1);
  for (std::size_t i = 0; i < samples; ++i) {
    for (std::size_t t = 0; t < 5; ++t) w.X(i, t, 0) = std::sin(0.3 * double(i + offset + t));
    w.Y(static_cast<Eigen::Index>(i), 0) = std::sin(0.3 * double(i + offset + 5));
    w.timestamps.push_back(Date(2024, 1, 1).plus_days(static_cast<long>(i)));
  }
  return w;
}

TEST(Training, LearnsNoiselessSine) {
  const auto tr = sine_windows(200, 0), va = sine_windows(50, 200);
  HyperParams hp{100, 32, 16, 0.0, 0.01, 1};
  const auto res = train(tr, va, hp, 7);
  const auto seq = SequenceData::from(tr);
  const Mat pred = predict_all(res.network, seq);
  const std::vector<double> p(pred.data(), pred.data() + pred.size());
  const std::vector<double> y(seq.Y.data(), seq.Y.data() + seq.Y.size());
  EXPECT_GT(r2(y, p), 0.95);
  // Loss trend: median of the last 10 epochs below the median of the first 10.
  auto median10 = [](std::vector<double> v) {
    std::nth_element(v.begin(), v.begin() + 5, v.end());
    return v[5];
  };
  const auto& L = res.report.train_loss;
  EXPECT_LT(median10({L.end() - 10, L.end()}), median10({L.begin(), L.begin() + 10}));
  ASSERT_EQ(L.size(), 100u);
  ASSERT_EQ(res.report.val_loss.size(), 100u);
}

TEST(Training, DeterministicForSameSeed) {
  const auto tr = sine_windows(60, 0), va = sine_windows(20, 60);
  HyperParams hp{5, 8, 16, 0.2, 0.005, 2};
  const auto a = train(tr, va, hp, 99);
  const auto b = train(tr, va, hp, 99);
  EXPECT_EQ(a.report.train_loss, b.report.train_loss);
  EXPECT_EQ(a.report.val_loss, b.report.val_loss);
  EXPECT_EQ(a.report.snapshot_id, b.report.snapshot_id);
  const auto c = train(tr, va, hp, 100);
  EXPECT_NE(a.report.snapshot_id, c.report.snapshot_id);
}

TEST(Training, ZeroEpochsReturnsInitialWeights) {
  const auto tr = sine_windows(30, 0), va = sine_windows(10, 30);
  HyperParams hp{0, 8, 16, 0.0, 0.005, 1};
  const auto res = train(tr, va, hp, 3);
  const auto init = lstm::Network::initialize(network_config_for(hp, 1, 1), 3);
  EXPECT_EQ(res.report.snapshot_id, params_snapshot_id(init.params()));
  EXPECT_TRUE(res.report.train_loss.empty());
}

TEST(Training, NonFiniteLossRaisesWithContext) {
  auto tr = sine_windows(30, 0);
  const auto va = sine_windows(10, 30);
  tr.Y(3, 0) = std::numeric_limits<double>::quiet_NaN();
  try {
    train(tr, va, HyperParams{3, 4, 16, 0.0, 0.001, 1}, 1);
    FAIL();
  } catch (const TrainingError& e) {
    EXPECT_EQ(e.epoch(), 1);
    EXPECT_GE(e.batch(), 1);
  }
}

TEST(Training, RejectsEmptySets) {
  const auto tr = sine_windows(30, 0);
  EXPECT_THROW(train(tr, WindowedDataset{}, HyperParams{}, 1), DataError);
}

TEST(ModelIo, SaveLoadIsBitExact) {
  testing::TempDir dir("model");
  const auto tr = sine_windows(40, 0), va = sine_windows(10, 40);
  HyperParams hp{3, 6, 16, 0.1, 0.01, 2};
  const auto res = train(tr, va, hp, 5);
  ModelBundle b{res.network, hp, 5, 2, "zomato", Scaler{{"demand"}, {1.0}, {2.0}, "train"},
                Scaler{{"demand"}, {3.0}, {4.0}, "train"}, {"x"}};
  save_model(b, dir.path() / "m.json");
  const auto back = load_model(dir.path() / "m.json");
  const auto seq = SequenceData::from(va);
  EXPECT_TRUE(predict_all(back.network, seq) == predict_all(res.network, seq));
  EXPECT_EQ(back.hyperparams, hp);
  EXPECT_EQ(back.target_scaler.mean, b.target_scaler.mean);
  EXPECT_EQ(back.feature_names, b.feature_names);
}

TEST(ModelIo, RejectsCorruptShapes) {
  const auto net = lstm::Network::initialize({{3}, 2, 1, 0.0}, 1);
  ModelBundle b{net, HyperParams{}, 1, 1, "swiggy", {}, {}, {}};
  auto j = model_to_json(b);
  j["parameters"][0]["rows"] = 5;
  EXPECT_THROW(model_from_json(j), DataError);
  auto k = model_to_json(b);
  k["format_version"] = 99;
  EXPECT_THROW(model_from_json(k), DataError);
}

}  // namespace
}  // namespace ofd
