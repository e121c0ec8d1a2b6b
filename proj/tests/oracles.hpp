/* Copyright 2026 The Saliency Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Reference implementations used only by tests. They share no code with the
// library beyond reading Network parameters: plain loops over std::vector,
// finite differences and dense Eigen solvers on fully assembled matrices.

#ifndef SALIENCY_TESTS_ORACLES_HPP_
#define SALIENCY_TESTS_ORACLES_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "saliency/network.hpp"

namespace oracle {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using saliency::Activation;
using saliency::Network;

// Small seeded generator for test inputs, separate from the library RNG.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double normal() {
    double u1 = uniform(0.0, 1.0);
    while (u1 <= 0.0) u1 = uniform(0.0, 1.0);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586 * uniform(0.0, 1.0));
  }
  int integer(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  VectorXd normal_vector(Eigen::Index n) {
    VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = normal();
    return v;
  }
  MatrixXd normal_matrix(Eigen::Index r, Eigen::Index c) {
    MatrixXd m(r, c);
    for (Eigen::Index j = 0; j < c; ++j)
      for (Eigen::Index i = 0; i < r; ++i) m(i, j) = normal();
    return m;
  }
  // Random probability vector with all entries positive.
  VectorXd simplex(Eigen::Index c, double spread = 2.0) {
    VectorXd z(c);
    for (Eigen::Index i = 0; i < c; ++i) z[i] = spread * normal();
    z = (z.array() - z.maxCoeff()).exp();
    return z / z.sum();
  }

 private:
  std::mt19937_64 engine_;
};

inline double act(Activation a, double z) {
  switch (a) {
    case Activation::kRelu:
      return z > 0.0 ? z : 0.0;
    case Activation::kSigmoid:
      return 1.0 / (1.0 + std::exp(-z));
    case Activation::kIdentity:
      break;
  }
  return z;
}

// Forward pass with explicit loops; returns the logits.
inline std::vector<double> logits(const Network& net, const VectorXd& x) {
  std::vector<double> h(x.data(), x.data() + x.size());
  for (const auto& layer : net.layers()) {
    std::vector<double> next(static_cast<size_t>(layer.out()));
    for (Eigen::Index i = 0; i < layer.out(); ++i) {
      double z = layer.bias[i];
      for (Eigen::Index j = 0; j < layer.in(); ++j)
        z += layer.weight(i, j) * h[static_cast<size_t>(j)];
      next[static_cast<size_t>(i)] = act(layer.activation, z);
    }
    h = std::move(next);
  }
  return h;
}

inline std::vector<double> probabilities(const std::vector<double>& z) {
  const double m = *std::max_element(z.begin(), z.end());
  std::vector<double> p(z.size());
  double s = 0.0;
  for (size_t i = 0; i < z.size(); ++i) s += (p[i] = std::exp(z[i] - m));
  for (double& v : p) v /= s;
  return p;
}

inline double loss(const Network& net, const VectorXd& x, int label) {
  const std::vector<double> z = logits(net, x);
  const double m = *std::max_element(z.begin(), z.end());
  double s = 0.0;
  for (double v : z) s += std::exp(v - m);
  return m + std::log(s) - z[static_cast<size_t>(label)];
}

inline VectorXd fd_gradient(const std::function<double(const VectorXd&)>& f,
                            const VectorXd& x, double h) {
  VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    VectorXd a = x, b = x;
    a[i] += h;
    b[i] -= h;
    g[i] = (f(a) - f(b)) / (2.0 * h);
  }
  return g;
}

// Four-point second difference of f.
inline MatrixXd fd_hessian(const std::function<double(const VectorXd&)>& f,
                           const VectorXd& x, double h) {
  const Eigen::Index d = x.size();
  MatrixXd hess(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i; j < d; ++j) {
      auto at = [&](double si, double sj) {
        VectorXd y = x;
        y[i] += si * h;
        y[j] += sj * h;
        return f(y);
      };
      const double v =
          (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * h * h);
      hess(i, j) = hess(j, i) = v;
    }
  }
  return hess;
}

// Logit Jacobian (d x c) by finite differences of the hand-rolled forward.
inline MatrixXd fd_jacobian(const Network& net, const VectorXd& x, double h) {
  const Eigen::Index d = x.size();
  const Eigen::Index c = net.num_classes();
  MatrixXd w(d, c);
  for (Eigen::Index i = 0; i < d; ++i) {
    VectorXd a = x, b = x;
    a[i] += h;
    b[i] -= h;
    const auto za = logits(net, a);
    const auto zb = logits(net, b);
    for (Eigen::Index k = 0; k < c; ++k)
      w(i, k) = (za[static_cast<size_t>(k)] - zb[static_cast<size_t>(k)]) / (2.0 * h);
  }
  return w;
}

// Assembled d x d Hessian W (diag(p) - p p^T) W^T.
inline MatrixXd dense_hessian(const MatrixXd& w, const VectorXd& p) {
  MatrixXd a = -p * p.transpose();
  a.diagonal() += p;
  return w * a * w.transpose();
}

// Smallest |pre-activation| of any relu unit along the hand-rolled pass.
inline double relu_margin(const Network& net, const VectorXd& x) {
  std::vector<double> h(x.data(), x.data() + x.size());
  double margin = INFINITY;
  for (const auto& layer : net.layers()) {
    std::vector<double> next(static_cast<size_t>(layer.out()));
    for (Eigen::Index i = 0; i < layer.out(); ++i) {
      double z = layer.bias[i];
      for (Eigen::Index j = 0; j < layer.in(); ++j)
        z += layer.weight(i, j) * h[static_cast<size_t>(j)];
      if (layer.activation == Activation::kRelu) margin = std::min(margin, std::abs(z));
      next[static_cast<size_t>(i)] = act(layer.activation, z);
    }
    h = std::move(next);
  }
  return margin;
}

// Point whose relu pre-activations all sit at least `margin` from 0.
inline VectorXd kink_safe_point(const Network& net, Gen& gen, double margin,
                                double scale = 1.0) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    VectorXd x = scale * gen.normal_vector(net.input_dim());
    if (relu_margin(net, x) > margin) return x;
  }
  return VectorXd::Zero(net.input_dim());
}

inline double cosine(const VectorXd& a, const VectorXd& b) {
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return a.dot(b) / (na * nb);
}

// Spearman correlation from explicit rank tables.
inline double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  auto ranks = [](const std::vector<double>& v) {
    const size_t n = v.size();
    std::vector<double> r(n);
    for (size_t i = 0; i < n; ++i) {
      double less = 0, equal = 0;
      for (size_t j = 0; j < n; ++j) {
        if (v[j] < v[i]) ++less;
        if (v[j] == v[i]) ++equal;
      }
      r[i] = less + (equal + 1.0) / 2.0;
    }
    return r;
  };
  const auto ra = ranks(a), rb = ranks(b);
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    ma += ra[i] / n;
    mb += rb[i] / n;
  }
  double sab = 0, saa = 0, sbb = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace oracle

#endif  // SALIENCY_TESTS_ORACLES_HPP_
