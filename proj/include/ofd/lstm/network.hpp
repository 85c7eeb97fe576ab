#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ofd/core/error.hpp"
#include "ofd/core/rng.hpp"

namespace ofd::lstm {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

inline double tanh(double x) { return std::tanh(x); }

// Gate blocks are stacked row-wise in this order in every 4U-row matrix.
enum class Gate { Input = 0, Forget = 1, Output = 2, Candidate = 3 };

struct LayerWeights {
  Mat W;   // 4U x U recurrent
  Mat Wx;  // 4U x input_dim
  Mat b;   // 4U x 1

  int units() const { return static_cast<int>(W.cols()); }
  int input_dim() const { return static_cast<int>(Wx.cols()); }
  auto gate_W(Gate g) { return W.middleRows(int(g) * units(), units()); }
  auto gate_Wx(Gate g) { return Wx.middleRows(int(g) * units(), units()); }
  auto gate_b(Gate g) { return b.middleRows(int(g) * units(), units()); }
};

struct LstmState {
  Vec h;
  Vec c;
};

struct GateCache {
  Vec pre;  // 4U pre-activations
  Vec i, f, o, g;
  Vec c_prev, h_prev, x;
  Vec c, tanh_c;
};

// One LSTM step for a single sample.
inline std::pair<LstmState, GateCache> cell_forward(const Vec& x, const LstmState& prev,
                                                    const LayerWeights& w) {
  const int U = w.units();
  if (x.size() != w.input_dim() || prev.h.size() != U || prev.c.size() != U)
    throw DataError("cell_forward: shape mismatch");
  GateCache cache;
  cache.x = x;
  cache.h_prev = prev.h;
  cache.c_prev = prev.c;
  cache.pre = w.W * prev.h + w.Wx * x + w.b.col(0);
  cache.i = cache.pre.segment(0, U).unaryExpr([](double v) { return sigmoid(v); });
  cache.f = cache.pre.segment(U, U).unaryExpr([](double v) { return sigmoid(v); });
  cache.o = cache.pre.segment(2 * U, U).unaryExpr([](double v) { return sigmoid(v); });
  cache.g = cache.pre.segment(3 * U, U).unaryExpr([](double v) { return std::tanh(v); });
  cache.c = cache.f.cwiseProduct(prev.c) + cache.i.cwiseProduct(cache.g);
  cache.tanh_c = cache.c.unaryExpr([](double v) { return std::tanh(v); });
  LstmState next{cache.o.cwiseProduct(cache.tanh_c), cache.c};
  return {std::move(next), std::move(cache)};
}

struct NetworkConfig {
  std::vector<int> layer_sizes{32};
  int input_dim = 1;
  int output_dim = 1;
  double dropout_rate = 0.0;
};

inline void validate(const NetworkConfig& c) {
  if (c.layer_sizes.empty() || c.layer_sizes.size() > 3)
    throw ConfigError("network: 1 to 3 layers required");
  for (int u : c.layer_sizes)
    if (u < 1) throw ConfigError("network: unit counts must be positive");
  if (c.input_dim < 1) throw ConfigError("network: input_dim must be positive");
  if (c.output_dim < 1) throw ConfigError("network: output_dim must be positive");
  if (!(c.dropout_rate >= 0.0 && c.dropout_rate < 1.0))
    throw ConfigError("network: dropout_rate must lie in [0, 1)");
}

// All trainable tensors. Gradients and Adam moments use the same type.
struct Params {
  std::vector<LayerWeights> layers;
  Mat head_W;  // output_dim x last_units
  Mat head_b;  // output_dim x 1

  std::vector<Mat*> tensors() {
    std::vector<Mat*> out;
    for (auto& l : layers) {
      out.push_back(&l.W);
      out.push_back(&l.Wx);
      out.push_back(&l.b);
    }
    out.push_back(&head_W);
    out.push_back(&head_b);
    return out;
  }
  std::vector<const Mat*> tensors() const {
    std::vector<const Mat*> out;
    for (const auto& l : layers) {
      out.push_back(&l.W);
      out.push_back(&l.Wx);
      out.push_back(&l.b);
    }
    out.push_back(&head_W);
    out.push_back(&head_b);
    return out;
  }

  Params zeros_like() const {
    Params z = *this;
    for (Mat* m : z.tensors()) m->setZero();
    return z;
  }

  std::size_t size() const {
    std::size_t n = 0;
    for (const Mat* m : tensors()) n += static_cast<std::size_t>(m->size());
    return n;
  }

  bool all_finite() const {
    for (const Mat* m : tensors())
      if (!m->allFinite()) return false;
    return true;
  }
};

inline double squared_norm(const Params& p) {
  double s = 0.0;
  for (const Mat* m : p.tensors()) s += m->squaredNorm();
  return s;
}

enum class Mode { Train, Infer };

// Per-layer activations for a batch over T timesteps; column block t holds step t.
struct LayerCache {
  Mat X;   // layer input (after dropout), in x (T*B)
  Mat G;   // gate activations i, f, o, g: 4U x (T*B)
  Mat C;   // cell states: U x (T*B)
  Mat TC;  // tanh(C)
  Mat H;   // hidden states
  Mat mask;  // dropout scale applied to X (empty for the first layer or when unused)
};

struct ForwardCache {
  int timesteps = 0;
  int batch = 0;
  std::vector<LayerCache> layers;
  Mat output;  // output_dim x B
};

class Network {
 public:
  Network() = default;

  static Network initialize(const NetworkConfig& cfg, std::uint64_t seed) {
    validate(cfg);
    Network net;
    net.config_ = cfg;
    RandomStream rng(seed, "lstm-init");
    auto glorot = [&rng](Mat& m, Eigen::Index r0, Eigen::Index rows, Eigen::Index cols,
                         double fan_in, double fan_out) {
      const double limit = std::sqrt(6.0 / (fan_in + fan_out));
      for (Eigen::Index r = r0; r < r0 + rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = rng.uniform(-limit, limit);
    };
    int in = cfg.input_dim;
    for (int U : cfg.layer_sizes) {
      LayerWeights w{Mat(4 * U, U), Mat(4 * U, in), Mat::Zero(4 * U, 1)};
      for (int g = 0; g < 4; ++g) {
        glorot(w.W, g * U, U, U, U, U);
        glorot(w.Wx, g * U, U, in, in, U);
      }
      w.gate_b(Gate::Forget).setConstant(1.0);
      net.params_.layers.push_back(std::move(w));
      in = U;
    }
    net.params_.head_W = Mat(cfg.output_dim, in);
    glorot(net.params_.head_W, 0, cfg.output_dim, in, in, cfg.output_dim);
    net.params_.head_b = Mat::Zero(cfg.output_dim, 1);
    return net;
  }

  static Network from_params(const NetworkConfig& cfg, Params p) {
    validate(cfg);
    Network net;
    net.config_ = cfg;
    net.params_ = std::move(p);
    net.check_shapes();
    return net;
  }

  const NetworkConfig& config() const { return config_; }
  const Params& params() const { return params_; }
  Params& params() { return params_; }

  void check_shapes() const {
    const auto& c = config_;
    if (params_.layers.size() != c.layer_sizes.size())
      throw DataError("network: layer count does not match config");
    int in = c.input_dim;
    for (std::size_t l = 0; l < params_.layers.size(); ++l) {
      const int U = c.layer_sizes[l];
      const auto& w = params_.layers[l];
      if (w.W.rows() != 4 * U || w.W.cols() != U || w.Wx.rows() != 4 * U || w.Wx.cols() != in ||
          w.b.rows() != 4 * U || w.b.cols() != 1)
        throw DataError("network: layer " + std::to_string(l) + " has inconsistent shapes");
      in = U;
    }
    if (params_.head_W.rows() != c.output_dim || params_.head_W.cols() != in ||
        params_.head_b.rows() != c.output_dim || params_.head_b.cols() != 1)
      throw DataError("network: dense head has inconsistent shapes");
  }

  // Batched forward pass. xs[t] is input_dim x B. The rng is used for dropout
  // masks in Train mode only.
  Mat forward(const std::vector<Mat>& xs, Mode mode, RandomStream* rng,
              ForwardCache* cache = nullptr) const {
    if (xs.empty()) throw DataError("network_forward: empty sequence");
    const int T = static_cast<int>(xs.size());
    const int B = static_cast<int>(xs[0].cols());
    for (const auto& x : xs)
      if (x.rows() != config_.input_dim || x.cols() != B)
        throw DataError("network_forward: input shape mismatch");
    const bool drop = mode == Mode::Train && config_.dropout_rate > 0.0;
    if (drop && rng == nullptr) throw DataError("network_forward: train-mode dropout needs an rng");

    ForwardCache local;
    ForwardCache& fc = cache ? *cache : local;
    fc.timesteps = T;
    fc.batch = B;
    fc.layers.assign(params_.layers.size(), LayerCache{});

    Mat input(config_.input_dim, static_cast<Eigen::Index>(T) * B);
    for (int t = 0; t < T; ++t) input.middleCols(static_cast<Eigen::Index>(t) * B, B) = xs[t];

    for (std::size_t l = 0; l < params_.layers.size(); ++l) {
      const auto& w = params_.layers[l];
      auto& lc = fc.layers[l];
      const int U = w.units();
      if (l > 0 && drop) {
        const double keep = 1.0 - config_.dropout_rate;
        lc.mask.resize(input.rows(), input.cols());
        for (Eigen::Index j = 0; j < lc.mask.cols(); ++j)
          for (Eigen::Index i = 0; i < lc.mask.rows(); ++i)
            lc.mask(i, j) = rng->unit() < keep ? 1.0 / keep : 0.0;
        input = input.cwiseProduct(lc.mask);
      }
      lc.X = std::move(input);
      lc.G.noalias() = w.Wx * lc.X;
      lc.G.colwise() += w.b.col(0);
      lc.C.resize(U, lc.X.cols());
      lc.TC.resize(U, lc.X.cols());
      lc.H.resize(U, lc.X.cols());
      for (int t = 0; t < T; ++t) {
        const Eigen::Index c0 = static_cast<Eigen::Index>(t) * B;
        auto A = lc.G.middleCols(c0, B);
        if (t > 0) A.noalias() += w.W * lc.H.middleCols(c0 - B, B);
        A.topRows(3 * U) = A.topRows(3 * U).unaryExpr([](double v) { return sigmoid(v); });
        A.bottomRows(U) = A.bottomRows(U).array().tanh();
        auto c = lc.C.middleCols(c0, B);
        c = A.topRows(U).cwiseProduct(A.bottomRows(U));
        if (t > 0) c += A.middleRows(U, U).cwiseProduct(lc.C.middleCols(c0 - B, B));
        lc.TC.middleCols(c0, B) = c.array().tanh();
        lc.H.middleCols(c0, B) = A.middleRows(2 * U, U).cwiseProduct(lc.TC.middleCols(c0, B));
      }
      input = lc.H;
    }
    const auto& top = fc.layers.back();
    fc.output = params_.head_W * top.H.rightCols(B);
    fc.output.colwise() += params_.head_b.col(0);
    return fc.output;
  }

  // Single-sequence convenience: sequence is timesteps x input_dim.
  Vec predict(const Mat& sequence, Mode mode = Mode::Infer, RandomStream* rng = nullptr) const {
    std::vector<Mat> xs;
    for (Eigen::Index t = 0; t < sequence.rows(); ++t) xs.push_back(sequence.row(t).transpose());
    return forward(xs, mode, rng).col(0);
  }

  // Gradients of a loss given dL/d(output) for the cached forward pass.
  Params backward(const ForwardCache& fc, const Mat& d_output) const {
    if (fc.layers.size() != params_.layers.size() || fc.layers.empty() || fc.layers[0].H.size() == 0)
      throw DataError("backward: missing forward cache");
    const int T = fc.timesteps, B = fc.batch;
    if (d_output.rows() != config_.output_dim || d_output.cols() != B)
      throw DataError("backward: output gradient shape mismatch");

    Params grad = params_.zeros_like();
    const auto& top = fc.layers.back();
    grad.head_W.noalias() = d_output * top.H.rightCols(B).transpose();
    grad.head_b = d_output.rowwise().sum();

    Mat dH = Mat::Zero(top.H.rows(), top.H.cols());
    dH.rightCols(B).noalias() = params_.head_W.transpose() * d_output;

    for (std::size_t l = params_.layers.size(); l-- > 0;) {
      const auto& w = params_.layers[l];
      const auto& lc = fc.layers[l];
      auto& g = grad.layers[l];
      const int U = w.units();
      Mat dA(4 * U, lc.G.cols());
      Mat dh_next = Mat::Zero(U, B), dc_next = Mat::Zero(U, B);
      for (int t = T - 1; t >= 0; --t) {
        const Eigen::Index c0 = static_cast<Eigen::Index>(t) * B;
        const auto G = lc.G.middleCols(c0, B);
        const auto i = G.topRows(U).array();
        const auto f = G.middleRows(U, U).array();
        const auto o = G.middleRows(2 * U, U).array();
        const auto gg = G.bottomRows(U).array();
        const auto tc = lc.TC.middleCols(c0, B).array();

        const Mat dh = dH.middleCols(c0, B) + dh_next;
        const Mat dc = (dh.array() * o * (1.0 - tc.square())).matrix() + dc_next;
        auto d = dA.middleCols(c0, B);
        d.topRows(U) = (dc.array() * gg * i * (1.0 - i)).matrix();
        if (t > 0) {
          d.middleRows(U, U) =
              (dc.array() * lc.C.middleCols(c0 - B, B).array() * f * (1.0 - f)).matrix();
        } else {
          d.middleRows(U, U).setZero();
        }
        d.middleRows(2 * U, U) = (dh.array() * tc * o * (1.0 - o)).matrix();
        d.bottomRows(U) = (dc.array() * i * (1.0 - gg.square())).matrix();
        dc_next = (dc.array() * f).matrix();
        if (t > 0) {
          g.W.noalias() += d * lc.H.middleCols(c0 - B, B).transpose();
          dh_next.noalias() = w.W.transpose() * d;
        }
      }
      g.b = dA.rowwise().sum();
      g.Wx.noalias() = dA * lc.X.transpose();
      if (l > 0) {
        dH.noalias() = w.Wx.transpose() * dA;
        if (lc.mask.size() > 0) dH = dH.cwiseProduct(lc.mask);
      }
    }
    return grad;
  }

 private:
  NetworkConfig config_;
  Params params_;
};

// Mean of squared differences over all entries.
inline double loss_mse(const Mat& pred, const Mat& target) {
  if (pred.rows() != target.rows() || pred.cols() != target.cols())
    throw DataError("loss_mse: shape mismatch");
  if (pred.size() == 0) throw DataError("loss_mse: empty input");
  return (pred - target).squaredNorm() / static_cast<double>(pred.size());
}

inline Mat loss_mse_grad(const Mat& pred, const Mat& target) {
  return 2.0 * (pred - target) / static_cast<double>(pred.size());
}

}  // namespace ofd::lstm
