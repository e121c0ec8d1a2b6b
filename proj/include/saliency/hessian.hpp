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

// Input Hessian of the softmax cross-entropy loss for piecewise-linear
// networks. With logits = W^T x + b and p = softmax(logits), the Hessian is
//
//   H = W (diag(p) - p p^T) W^T = W A W^T,
//
// which has rank at most c - 1. Everything here works with the d x c
// Jacobian W and the c x c curvature A and never forms a d x d matrix.

#ifndef SALIENCY_HESSIAN_HPP_
#define SALIENCY_HESSIAN_HPP_

#include <cstdint>
#include <functional>

#include "saliency/network.hpp"

namespace saliency {

using LinearOperator = std::function<VectorXd(const VectorXd&)>;

// A = diag(p) - p p^T.
struct SoftmaxCurvature {
  MatrixXd matrix;

  Index classes() const { return matrix.rows(); }
  // A v without forming A.
  static VectorXd apply(const VectorXd& p, const VectorXd& v);
};

// Requires p >= 0 and sum(p) = 1 within 1e-9.
SoftmaxCurvature softmax_curvature(const VectorXd& p);

// Factor L (c x r) with A = L L^T. A is singular, so this is a clamped
// symmetric eigendecomposition with columns for eigenvalues below 1e-12
// dropped. Throws kNumerical on an eigenvalue below -1e-8.
MatrixXd factor_curvature(const SoftmaxCurvature& curvature);

// Factored Hessian with its nonzero spectrum.
struct HessianHandle {
  MatrixXd jacobian;          // W, d x c
  VectorXd probabilities;     // p, c
  MatrixXd curvature_factor;  // L, c x r
  MatrixXd factor;            // B = W L, d x r
  VectorXd eigenvalues;       // descending, all > 1e-10 * max
  MatrixXd eigenvectors;      // d x k, orthonormal columns

  Index dim() const { return jacobian.rows(); }
  double max_eigenvalue() const {
    return eigenvalues.size() > 0 ? eigenvalues[0] : 0.0;
  }
  // B (B^T v).
  VectorXd apply(const VectorXd& v) const;
  LinearOperator as_operator() const;
};

// Eigenpairs of H from the small Gram system C = B^T B = V S^2 V^T, with
// U = B V S^-1 for eigenvalues above 1e-10 of the largest.
HessianHandle hessian_eig(const MatrixXd& jacobian, const VectorXd& p);

// W (A (W^T v)) in O(dc + c).
VectorXd hvp_closed_form(const MatrixXd& jacobian, const VectorXd& p,
                         const VectorXd& v);

struct FiniteDifferenceHvp {
  VectorXd value;
  bool kink_crossed = false;  // relu pattern differs across the stencil
};

// Central difference of the exact input gradient along v:
// (g(x + r v/|v|) - g(x - r v/|v|)) / (2r) * |v| with r = 1e-4 (1 + |x|).
FiniteDifferenceHvp hvp_finite_diff(const Network& net, const VectorXd& x,
                                    int label, const VectorXd& v);

struct PowerConfig {
  int iterations = 10;
  double tolerance = 1e-6;
  std::uint64_t seed = 0;
};

// Power iteration from a seeded Gaussian start; returns the last Rayleigh
// quotient. Stops early when the relative change drops below tolerance.
double largest_eigenvalue(const LinearOperator& op, Index dim,
                          const PowerConfig& config);

// H ~= g g^T / (eps (c - 1)), the high-confidence many-class limit.
struct RankOneApprox {
  VectorXd gradient;
  double eps = 0.0;
  Index classes = 0;
  double eigenvalue = 0.0;  // |g|^2 / (eps (c - 1))
};

RankOneApprox rank_one_approx(const VectorXd& g, double eps, Index classes);

// ||H - g g^T/(eps(c-1))||_F / ||H||_F for H = W A W^T, through c x c Gram
// identities. Throws kNumerical when ||H||_F = 0.
double rank_one_rel_error(const MatrixXd& jacobian, const VectorXd& p,
                          const RankOneApprox& approx);

// ||W A W^T||_F.
double hessian_frobenius_norm(const MatrixXd& jacobian, const VectorXd& p);

}  // namespace saliency

#endif  // SALIENCY_HESSIAN_HPP_
