#pragma once

#include <cmath>

#include "ofd/lstm/network.hpp"

namespace ofd::lstm {

struct AdamState {
  Params m;
  Params v;
  long t = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  static AdamState for_params(const Params& p) { return {p.zeros_like(), p.zeros_like()}; }
};

// Bias-corrected Adam update, in place.
inline void adam_step(Params& params, const Params& grads, AdamState& s, double lr) {
  auto P = params.tensors();
  auto G = grads.tensors();
  auto M = s.m.tensors();
  auto V = s.v.tensors();
  if (P.size() != G.size() || P.size() != M.size())
    throw DataError("adam_step: parameter and gradient shapes differ");
  ++s.t;
  const double c1 = 1.0 - std::pow(s.beta1, static_cast<double>(s.t));
  const double c2 = 1.0 - std::pow(s.beta2, static_cast<double>(s.t));
  for (std::size_t k = 0; k < P.size(); ++k) {
    if (P[k]->rows() != G[k]->rows() || P[k]->cols() != G[k]->cols())
      throw DataError("adam_step: parameter and gradient shapes differ");
    M[k]->array() = s.beta1 * M[k]->array() + (1.0 - s.beta1) * G[k]->array();
    V[k]->array() = s.beta2 * V[k]->array() + (1.0 - s.beta2) * G[k]->array().square();
    P[k]->array() -= lr * (M[k]->array() / c1) / ((V[k]->array() / c2).sqrt() + s.eps);
  }
}

// Scales gradients so their global L2 norm is at most max_norm. Returns the pre-clip norm.
inline double clip_global_norm(Params& grads, double max_norm) {
  const double norm = std::sqrt(squared_norm(grads));
  if (norm > max_norm && norm > 0.0) {
    const double k = max_norm / norm;
    for (Mat* m : grads.tensors()) *m *= k;
  }
  return norm;
}

}  // namespace ofd::lstm
