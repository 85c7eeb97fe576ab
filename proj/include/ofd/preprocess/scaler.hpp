#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "ofd/core/error.hpp"

namespace ofd {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Per-column standardization with population standard deviation.
struct Scaler {
  std::vector<std::string> names;
  std::vector<double> mean;
  std::vector<double> sd;
  std::string segment;

  std::size_t size() const { return mean.size(); }

  double transform_value(std::size_t col, double x) const { return (x - mean[col]) / sd[col]; }
  double inverse_value(std::size_t col, double z) const { return z * sd[col] + mean[col]; }
};

inline Scaler fit_scaler(const RowMatrix& m, std::vector<std::string> names,
                         const std::string& segment) {
  if (m.rows() == 0) throw DataError("fit_scaler: empty matrix");
  if (names.empty())
    for (Eigen::Index c = 0; c < m.cols(); ++c) names.push_back("column " + std::to_string(c));
  if (static_cast<Eigen::Index>(names.size()) != m.cols())
    throw DataError("fit_scaler: one name per column required");
  Scaler s{std::move(names), {}, {}, segment};
  const double n = static_cast<double>(m.rows());
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    const double mu = m.col(c).sum() / n;
    const double var = (m.col(c).array() - mu).square().sum() / n;
    const double sd = std::sqrt(var);
    if (!(sd > 0.0))
      throw DataError("fit_scaler: feature '" + s.names[c] + "' has zero variance on the " +
                      segment + " segment");
    s.mean.push_back(mu);
    s.sd.push_back(sd);
  }
  return s;
}

inline RowMatrix transform(const Scaler& s, const RowMatrix& m) {
  if (static_cast<std::size_t>(m.cols()) != s.size())
    throw DataError("transform: column count does not match scaler");
  RowMatrix out(m.rows(), m.cols());
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    out.col(c) = (m.col(c).array() - s.mean[c]) / s.sd[c];
  return out;
}

inline RowMatrix inverse_transform(const Scaler& s, const RowMatrix& m) {
  if (static_cast<std::size_t>(m.cols()) != s.size())
    throw DataError("inverse_transform: column count does not match scaler");
  RowMatrix out(m.rows(), m.cols());
  for (Eigen::Index c = 0; c < m.cols(); ++c) out.col(c) = m.col(c).array() * s.sd[c] + s.mean[c];
  return out;
}

inline nlohmann::json to_json(const Scaler& s) {
  return {{"names", s.names}, {"mean", s.mean}, {"sd", s.sd}, {"segment", s.segment}};
}

inline Scaler scaler_from_json(const nlohmann::json& j) {
  Scaler s{j.at("names").get<std::vector<std::string>>(), j.at("mean").get<std::vector<double>>(),
           j.at("sd").get<std::vector<double>>(), j.at("segment").get<std::string>()};
  if (s.names.size() != s.mean.size() || s.mean.size() != s.sd.size())
    throw DataError("scaler: inconsistent array lengths");
  return s;
}

}  // namespace ofd
