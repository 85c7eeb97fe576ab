#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ofd/core/error.hpp"
#include "ofd/core/text.hpp"
#include "ofd/lstm/network.hpp"
#include "ofd/lstm/train.hpp"
#include "ofd/preprocess/scaler.hpp"

namespace ofd {

inline constexpr int kModelFormatVersion = 1;

// Everything needed to rebuild a trained forecaster.
struct ModelBundle {
  lstm::Network network;
  HyperParams hyperparams;
  std::uint64_t seed = 0;
  int phase = 1;
  std::string platform;
  Scaler input_scaler;
  Scaler target_scaler;
  std::vector<std::string> feature_names;
};

inline nlohmann::json model_to_json(const ModelBundle& m) {
  using nlohmann::json;
  const auto& c = m.network.config();
  json params = json::array();
  const auto& p = m.network.params();
  auto add = [&params](const std::string& name, const lstm::Mat& x) {
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(x.size()));
    for (Eigen::Index r = 0; r < x.rows(); ++r)
      for (Eigen::Index k = 0; k < x.cols(); ++k) flat.push_back(x(r, k));
    params.push_back({{"name", name}, {"rows", x.rows()}, {"cols", x.cols()}, {"data", flat}});
  };
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    const std::string pre = "layer" + std::to_string(l) + ".";
    add(pre + "W", p.layers[l].W);
    add(pre + "Wx", p.layers[l].Wx);
    add(pre + "b", p.layers[l].b);
  }
  add("head.W", p.head_W);
  add("head.b", p.head_b);
  return {{"format", "ofd-lstm-model"},
          {"format_version", kModelFormatVersion},
          {"phase", m.phase},
          {"platform", m.platform},
          {"seed", m.seed},
          {"hyperparams", m.hyperparams},
          {"config",
           {{"layer_sizes", c.layer_sizes},
            {"input_dim", c.input_dim},
            {"output_dim", c.output_dim},
            {"dropout_rate", c.dropout_rate}}},
          {"feature_names", m.feature_names},
          {"scalers", {{"input", to_json(m.input_scaler)}, {"target", to_json(m.target_scaler)}}},
          {"parameters", params}};
}

// Validates format, version and every tensor shape before building the network.
inline ModelBundle model_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != "ofd-lstm-model")
      throw DataError("model file: unrecognized format");
    if (j.at("format_version").get<int>() != kModelFormatVersion)
      throw DataError("model file: unsupported format version");
    ModelBundle m;
    m.phase = j.at("phase").get<int>();
    m.platform = j.at("platform").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.hyperparams = j.at("hyperparams").get<HyperParams>();
    m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    m.input_scaler = scaler_from_json(j.at("scalers").at("input"));
    m.target_scaler = scaler_from_json(j.at("scalers").at("target"));
    lstm::NetworkConfig c;
    const auto& cj = j.at("config");
    c.layer_sizes = cj.at("layer_sizes").get<std::vector<int>>();
    c.input_dim = cj.at("input_dim").get<int>();
    c.output_dim = cj.at("output_dim").get<int>();
    c.dropout_rate = cj.at("dropout_rate").get<double>();
    lstm::validate(c);

    const auto& arr = j.at("parameters");
    auto read = [&arr](std::size_t k, const std::string& name, Eigen::Index rows, Eigen::Index cols) {
      if (k >= arr.size()) throw DataError("model file: missing tensor " + name);
      const auto& e = arr[k];
      if (e.at("name").get<std::string>() != name)
        throw DataError("model file: expected tensor " + name);
      if (e.at("rows").get<Eigen::Index>() != rows || e.at("cols").get<Eigen::Index>() != cols)
        throw DataError("model file: tensor " + name + " has the wrong shape");
      const auto flat = e.at("data").get<std::vector<double>>();
      if (static_cast<Eigen::Index>(flat.size()) != rows * cols)
        throw DataError("model file: tensor " + name + " has the wrong element count");
      lstm::Mat x(rows, cols);
      for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index q = 0; q < cols; ++q) x(r, q) = flat[static_cast<std::size_t>(r * cols + q)];
      return x;
    };
    lstm::Params p;
    std::size_t k = 0;
    int in = c.input_dim;
    for (std::size_t l = 0; l < c.layer_sizes.size(); ++l) {
      const int U = c.layer_sizes[l];
      const std::string pre = "layer" + std::to_string(l) + ".";
      lstm::LayerWeights w;
      w.W = read(k++, pre + "W", 4 * U, U);
      w.Wx = read(k++, pre + "Wx", 4 * U, in);
      w.b = read(k++, pre + "b", 4 * U, 1);
      p.layers.push_back(std::move(w));
      in = U;
    }
    p.head_W = read(k++, "head.W", c.output_dim, in);
    p.head_b = read(k++, "head.b", c.output_dim, 1);
    if (k != arr.size()) throw DataError("model file: unexpected extra tensors");
    m.network = lstm::Network::from_params(c, std::move(p));
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("model file: ") + e.what());
  }
}

inline void save_model(const ModelBundle& m, const std::filesystem::path& path) {
  write_file(path, model_to_json(m).dump(1) + "\n");
}

inline ModelBundle load_model(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  return model_from_json(j);
}

}  // namespace ofd
