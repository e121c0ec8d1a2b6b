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

#include "saliency/hessian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "saliency/error.hpp"
#include "saliency/rng.hpp"

namespace saliency {
namespace {

void check_probabilities(const VectorXd& p) {
  require(p.size() >= 1, ErrorCode::kInvalidArgument,
          "probability vector is empty");
  require(p.allFinite(), ErrorCode::kNumerical,
          "probability vector is not finite");
  require(p.minCoeff() >= 0.0, ErrorCode::kInvalidArgument,
          "probabilities must be non-negative");
  if (std::abs(p.sum() - 1.0) > 1e-9)
    fail(ErrorCode::kInvalidArgument,
         "probabilities sum to " + std::to_string(p.sum()) + ", expected 1");
}

// A G with A = diag(p) - p p^T, in O(c^2).
MatrixXd curvature_times(const VectorXd& p, const MatrixXd& g) {
  MatrixXd m = p.asDiagonal() * g;
  m.noalias() -= p * (g.transpose() * p).transpose();
  return m;
}

// tr(A G A G) = ||W A W^T||_F^2 with G = W^T W.
double frobenius_sq_from_gram(const VectorXd& p, const MatrixXd& gram) {
  const MatrixXd m = curvature_times(p, gram);
  return m.cwiseProduct(m.transpose()).sum();
}

}  // namespace

VectorXd SoftmaxCurvature::apply(const VectorXd& p, const VectorXd& v) {
  return p.cwiseProduct(v) - p * p.dot(v);
}

SoftmaxCurvature softmax_curvature(const VectorXd& p) {
  check_probabilities(p);
  SoftmaxCurvature a;
  a.matrix = MatrixXd(p.asDiagonal());
  a.matrix.noalias() -= p * p.transpose();
  return a;
}

MatrixXd factor_curvature(const SoftmaxCurvature& curvature) {
  const Index c = curvature.classes();
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(curvature.matrix);
  require(eig.info() == Eigen::Success, ErrorCode::kNumerical,
          "eigendecomposition of the softmax curvature failed");
  const VectorXd& values = eig.eigenvalues();  // ascending
  if (c > 0 && values[0] < -1e-8)
    fail(ErrorCode::kNumerical,
         "softmax curvature has eigenvalue " + std::to_string(values[0]) +
             " < 0; probabilities are corrupted");
  Index first = 0;
  while (first < c && values[first] < 1e-12) ++first;
  const Index rank = c - first;
  MatrixXd factor(c, rank);
  for (Index k = 0; k < rank; ++k) {
    // Largest eigenvalue first.
    const Index src = c - 1 - k;
    factor.col(k) = eig.eigenvectors().col(src) * std::sqrt(values[src]);
  }
  return factor;
}

VectorXd HessianHandle::apply(const VectorXd& v) const {
  if (v.size() != dim())
    fail(ErrorCode::kDimensionMismatch, "vector length does not match Hessian");
  if (factor.cols() == 0) return VectorXd::Zero(dim());
  return factor * (factor.transpose() * v);
}

LinearOperator HessianHandle::as_operator() const {
  return [f = factor](const VectorXd& v) -> VectorXd {
    if (v.size() != f.rows())
      fail(ErrorCode::kDimensionMismatch,
           "vector length does not match Hessian");
    if (f.cols() == 0) return VectorXd::Zero(f.rows());
    return f * (f.transpose() * v);
  };
}

HessianHandle hessian_eig(const MatrixXd& jacobian, const VectorXd& p) {
  if (jacobian.cols() != p.size())
    fail(ErrorCode::kDimensionMismatch,
         "jacobian has " + std::to_string(jacobian.cols()) +
             " columns but there are " + std::to_string(p.size()) +
             " probabilities");
  HessianHandle h;
  h.jacobian = jacobian;
  h.probabilities = p;
  h.curvature_factor = factor_curvature(softmax_curvature(p));
  h.factor = jacobian * h.curvature_factor;
  const Index r = h.factor.cols();
  if (r == 0) {
    h.eigenvalues.resize(0);
    h.eigenvectors.resize(jacobian.rows(), 0);
    return h;
  }

  const MatrixXd gram = h.factor.transpose() * h.factor;
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(gram);
  require(eig.info() == Eigen::Success, ErrorCode::kNumerical,
          "eigendecomposition of the Gram system failed");
  const VectorXd& values = eig.eigenvalues();
  const double top = values[r - 1];
  Index kept = 0;
  if (top > 0.0)
    while (kept < r && values[r - 1 - kept] > 1e-10 * top) ++kept;

  h.eigenvalues.resize(kept);
  h.eigenvectors.resize(jacobian.rows(), kept);
  for (Index k = 0; k < kept; ++k) {
    const Index src = r - 1 - k;
    h.eigenvalues[k] = values[src];
    h.eigenvectors.col(k) =
        h.factor * eig.eigenvectors().col(src) / std::sqrt(values[src]);
  }
  return h;
}

VectorXd hvp_closed_form(const MatrixXd& jacobian, const VectorXd& p,
                         const VectorXd& v) {
  if (v.size() != jacobian.rows() || p.size() != jacobian.cols())
    fail(ErrorCode::kDimensionMismatch,
         "Hessian-vector product dimensions do not match");
  const VectorXd projected = jacobian.transpose() * v;
  return jacobian * SoftmaxCurvature::apply(p, projected);
}

FiniteDifferenceHvp hvp_finite_diff(const Network& net, const VectorXd& x,
                                    int label, const VectorXd& v) {
  if (v.size() != x.size())
    fail(ErrorCode::kDimensionMismatch, "direction length does not match x");
  const double norm = v.norm();
  require(norm > 1e-300, ErrorCode::kInvalidArgument,
          "finite-difference direction must be nonzero");
  const VectorXd unit = v / norm;
  const double r = 1e-4 * (1.0 + x.norm());
  const VectorXd plus = x + r * unit;
  const VectorXd minus = x - r * unit;

  FiniteDifferenceHvp out;
  out.value = (input_gradient(net, plus, label) -
               input_gradient(net, minus, label)) *
              (norm / (2.0 * r));
  if (net.piecewise_linear()) {
    const auto centre = relu_pattern(net, x);
    out.kink_crossed =
        relu_pattern(net, plus) != centre || relu_pattern(net, minus) != centre;
  }
  return out;
}

double largest_eigenvalue(const LinearOperator& op, Index dim,
                          const PowerConfig& config) {
  require(dim > 0, ErrorCode::kInvalidArgument, "dimension must be positive");
  require(config.iterations >= 1, ErrorCode::kInvalidArgument,
          "power iteration needs at least one iteration");
  Rng rng(config.seed);
  VectorXd v = rng.normal_vector(dim);
  v.normalize();
  double estimate = 0.0;
  for (int it = 0; it < config.iterations; ++it) {
    const VectorXd w = op(v);
    const double next = v.dot(w);
    const double norm = w.norm();
    const bool converged =
        it > 0 && std::abs(next - estimate) <=
                      config.tolerance * std::max(std::abs(next), 1e-300);
    estimate = next;
    if (norm == 0.0 || converged) break;
    v = w / norm;
  }
  return estimate;
}

RankOneApprox rank_one_approx(const VectorXd& g, double eps, Index classes) {
  require(eps > 0.0, ErrorCode::kInvalidArgument, "eps must be positive");
  require(classes >= 2, ErrorCode::kInvalidArgument,
          "need at least two classes");
  RankOneApprox a;
  a.gradient = g;
  a.eps = eps;
  a.classes = classes;
  a.eigenvalue = g.squaredNorm() / (eps * static_cast<double>(classes - 1));
  return a;
}

double hessian_frobenius_norm(const MatrixXd& jacobian, const VectorXd& p) {
  if (p.size() != jacobian.cols())
    fail(ErrorCode::kDimensionMismatch, "jacobian and p disagree on c");
  const MatrixXd gram = jacobian.transpose() * jacobian;
  return std::sqrt(std::max(0.0, frobenius_sq_from_gram(p, gram)));
}

double rank_one_rel_error(const MatrixXd& jacobian, const VectorXd& p,
                          const RankOneApprox& approx) {
  if (p.size() != jacobian.cols() || approx.gradient.size() != jacobian.rows())
    fail(ErrorCode::kDimensionMismatch, "rank-one error dimensions mismatch");
  // With X = [W g] and M = blockdiag(A, -s), H - s g g^T = X M X^T. For tall
  // X the thin QR factor R gives the same Frobenius norm through R M R^T.
  const Index c = jacobian.cols();
  const Index d = jacobian.rows();
  MatrixXd x(d, c + 1);
  x << jacobian, approx.gradient;
  MatrixXd m = MatrixXd::Zero(c + 1, c + 1);
  m.topLeftCorner(c, c) = softmax_curvature(p).matrix;
  MatrixXd basis;
  if (d > c + 1) {
    const Eigen::HouseholderQR<MatrixXd> qr(x);
    basis = qr.matrixQR().topRows(c + 1).triangularView<Eigen::Upper>();
  } else {
    basis = x;
  }
  const MatrixXd h = basis * m * basis.transpose();
  const double h_norm = h.norm();
  require(h_norm > 0.0, ErrorCode::kNumerical,
          "Hessian is zero; relative error undefined");
  const double s = 1.0 / (approx.eps * static_cast<double>(approx.classes - 1));
  const VectorXd u = basis.col(c);
  return (h - s * u * u.transpose()).norm() / h_norm;
}

}  // namespace saliency
