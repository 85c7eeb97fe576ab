#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ofd/core/checksum.hpp"
#include "ofd/core/error.hpp"
#include "ofd/core/rng.hpp"
#include "ofd/lstm/adam.hpp"
#include "ofd/lstm/network.hpp"
#include "ofd/preprocess/windows.hpp"

namespace ofd {

struct HyperParams {
  int epochs = 50;
  int units = 32;
  int batch_size = 32;
  double dropout = 0.1;
  double learning_rate = 0.001;
  int layers = 1;

  bool operator==(const HyperParams&) const = default;
};

inline void to_json(nlohmann::json& j, const HyperParams& h) {
  j = {{"epochs", h.epochs},   {"units", h.units},
       {"batch_size", h.batch_size}, {"dropout", h.dropout},
       {"learning_rate", h.learning_rate}, {"layers", h.layers}};
}
inline void from_json(const nlohmann::json& j, HyperParams& h) {
  h.epochs = j.at("epochs").get<int>();
  h.units = j.at("units").get<int>();
  h.batch_size = j.at("batch_size").get<int>();
  h.dropout = j.at("dropout").get<double>();
  h.learning_rate = j.at("learning_rate").get<double>();
  h.layers = j.at("layers").get<int>();
}

// Ranges of the search space. Values outside are rejected.
inline void validate(const HyperParams& h) {
  auto req = [](bool ok, const char* msg) {
    if (!ok) throw ConfigError(std::string("hyperparameters: ") + msg);
  };
  req(h.epochs >= 0 && h.epochs <= 200, "epochs must lie in [0, 200]");
  req(h.units >= 1 && h.units <= 128, "units must lie in [1, 128]");
  req(h.batch_size >= 1 && h.batch_size <= 64, "batch_size must lie in [1, 64]");
  req(h.dropout >= 0.0 && h.dropout <= 0.5, "dropout must lie in [0, 0.5]");
  req(h.learning_rate > 0.0 && h.learning_rate <= 0.01, "learning_rate must lie in (0, 0.01]");
  req(h.layers >= 1 && h.layers <= 3, "layers must lie in [1, 3]");
}

// Strict check against the grid-search ranges: E in [50,200], U in [32,128],
// B in [16,64], D in [0.1,0.5], lr in [0.001,0.01], layers in [1,3].
inline bool within_search_ranges(const HyperParams& h) {
  return h.epochs >= 50 && h.epochs <= 200 && h.units >= 32 && h.units <= 128 &&
         h.batch_size >= 16 && h.batch_size <= 64 && h.dropout >= 0.1 && h.dropout <= 0.5 &&
         h.learning_rate >= 0.001 && h.learning_rate <= 0.01 && h.layers >= 1 && h.layers <= 3;
}

struct TrainReport {
  std::vector<double> train_loss;
  std::vector<double> val_loss;
  double seconds = 0.0;
  std::string snapshot_id;
  std::uint64_t seed = 0;
};

struct TrainOptions {
  double clip_norm = 5.0;
};

struct TrainResult {
  lstm::Network network;
  TrainReport report;
};

// Sequence tensors laid out per timestep for batched forward passes.
struct SequenceData {
  std::vector<lstm::Mat> X;  // X[t] is features x samples
  lstm::Mat Y;               // outputs x samples

  static SequenceData from(const WindowedDataset& w) {
    SequenceData s;
    const auto N = static_cast<Eigen::Index>(w.X.samples);
    for (std::size_t t = 0; t < w.X.timesteps; ++t) {
      lstm::Mat m(static_cast<Eigen::Index>(w.X.features), N);
      for (Eigen::Index i = 0; i < N; ++i)
        for (std::size_t f = 0; f < w.X.features; ++f)
          m(static_cast<Eigen::Index>(f), i) = w.X(static_cast<std::size_t>(i), t, f);
      s.X.push_back(std::move(m));
    }
    s.Y = w.Y.transpose();
    return s;
  }

  Eigen::Index samples() const { return Y.cols(); }

  std::vector<lstm::Mat> gather_inputs(const std::vector<int>& idx) const {
    std::vector<lstm::Mat> out;
    out.reserve(X.size());
    for (const auto& m : X) out.emplace_back(m(Eigen::all, idx));
    return out;
  }
  lstm::Mat gather_targets(const std::vector<int>& idx) const { return Y(Eigen::all, idx); }
};

inline std::string params_snapshot_id(const lstm::Params& p) {
  Sha256 h;
  for (const lstm::Mat* m : p.tensors())
    h.update(m->data(), static_cast<std::size_t>(m->size()) * sizeof(double));
  return h.hex().substr(0, 16);
}

inline lstm::NetworkConfig network_config_for(const HyperParams& hp, int input_dim, int output_dim) {
  return {std::vector<int>(static_cast<std::size_t>(hp.layers), hp.units), input_dim, output_dim,
          hp.dropout};
}

// Infer-mode predictions (outputs x samples) in chunks.
inline lstm::Mat predict_all(const lstm::Network& net, const SequenceData& data,
                             Eigen::Index chunk = 256) {
  lstm::Mat out(net.config().output_dim, data.samples());
  for (Eigen::Index s = 0; s < data.samples(); s += chunk) {
    const Eigen::Index n = std::min(chunk, data.samples() - s);
    std::vector<lstm::Mat> xs;
    for (const auto& m : data.X) xs.emplace_back(m.middleCols(s, n));
    out.middleCols(s, n) = net.forward(xs, lstm::Mode::Infer, nullptr);
  }
  return out;
}

inline double evaluate_mse(const lstm::Network& net, const SequenceData& data) {
  return lstm::loss_mse(predict_all(net, data), data.Y);
}

// Mini-batch Adam training for exactly hp.epochs epochs. Losses are MSE on
// standardized targets; the training loss of an epoch is the sample-weighted
// mean of its batch losses.
inline TrainResult train(const WindowedDataset& train_set, const WindowedDataset& val_set,
                         const HyperParams& hp, std::uint64_t seed, const TrainOptions& opt = {}) {
  validate(hp);
  if (train_set.samples() == 0) throw DataError("train: empty training set");
  if (val_set.samples() == 0) throw DataError("train: empty validation set");
  if (val_set.X.features != train_set.X.features || val_set.outputs() != train_set.outputs())
    throw DataError("train: training and validation shapes differ");
  const auto t0 = std::chrono::steady_clock::now();

  const SequenceData tr = SequenceData::from(train_set);
  const SequenceData va = SequenceData::from(val_set);
  auto net = lstm::Network::initialize(
      network_config_for(hp, static_cast<int>(train_set.X.features),
                         static_cast<int>(train_set.outputs())),
      seed);
  auto adam = lstm::AdamState::for_params(net.params());
  RandomStream shuffle_rng(seed, "shuffle");
  RandomStream dropout_rng(seed, "dropout");

  TrainReport rep;
  rep.seed = seed;
  const int N = static_cast<int>(tr.samples());
  std::vector<int> order(static_cast<std::size_t>(N));
  lstm::ForwardCache cache;
  for (int epoch = 0; epoch < hp.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), shuffle_rng.engine());
    double loss_sum = 0.0;
    int batch_no = 0;
    for (int s = 0; s < N; s += hp.batch_size, ++batch_no) {
      const std::vector<int> idx(order.begin() + s, order.begin() + std::min(N, s + hp.batch_size));
      const auto xs = tr.gather_inputs(idx);
      const auto y = tr.gather_targets(idx);
      const auto pred = net.forward(xs, lstm::Mode::Train, &dropout_rng, &cache);
      const double loss = lstm::loss_mse(pred, y);
      if (!std::isfinite(loss))
        throw TrainingError("non-finite training loss at epoch " + std::to_string(epoch + 1) +
                                ", batch " + std::to_string(batch_no + 1),
                            epoch + 1, batch_no + 1);
      loss_sum += loss * static_cast<double>(idx.size());
      auto grad = net.backward(cache, lstm::loss_mse_grad(pred, y));
      lstm::clip_global_norm(grad, opt.clip_norm);
      lstm::adam_step(net.params(), grad, adam, hp.learning_rate);
    }
    rep.train_loss.push_back(loss_sum / N);
    const double vl = evaluate_mse(net, va);
    if (!std::isfinite(vl))
      throw TrainingError("non-finite validation loss at epoch " + std::to_string(epoch + 1),
                          epoch + 1, batch_no);
    rep.val_loss.push_back(vl);
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  rep.snapshot_id = params_snapshot_id(net.params());
  return {std::move(net), std::move(rep)};
}

}  // namespace ofd
