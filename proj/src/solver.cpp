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

#include "saliency/solver.hpp"

#include <cmath>
#include <string>

#include "saliency/error.hpp"

namespace saliency {
namespace {

Index count_nonzero(const VectorXd& v) {
  Index n = 0;
  for (Index i = 0; i < v.size(); ++i)
    if (v[i] != 0.0) ++n;
  return n;
}

}  // namespace

double select_lambda2(double curvature_bound, double c1) {
  if (!(curvature_bound >= 0.0))
    fail(ErrorCode::kInvalidArgument,
         "largest eigenvalue must be non-negative, got " +
             std::to_string(curvature_bound));
  require(c1 > 0.0, ErrorCode::kInvalidArgument, "c1 must be positive");
  return curvature_bound / 2.0 + c1;
}

Objective::Objective(VectorXd gradient, std::optional<LinearOperator> hvp,
                     double curvature_bound, double lambda1, double lambda2)
    : gradient_(std::move(gradient)),
      hvp_(std::move(hvp)),
      curvature_bound_(curvature_bound),
      lambda1_(lambda1),
      lambda2_(lambda2) {
  require(gradient_.allFinite(), ErrorCode::kNumerical,
          "objective gradient is not finite");
  require(lambda1_ >= 0.0, ErrorCode::kInvalidArgument,
          "lambda1 must be non-negative");
  require(lambda2_ > 0.0, ErrorCode::kInvalidArgument,
          "lambda2 must be positive");
  if (hvp_ && !(lambda2_ > curvature_bound_ / 2.0))
    fail(ErrorCode::kInvalidArgument,
         "lambda2 = " + std::to_string(lambda2_) +
             " does not exceed L/2 = " + std::to_string(curvature_bound_ / 2.0) +
             "; objective would not be strongly concave");
}

Objective Objective::first_order(VectorXd gradient, double lambda1,
                                 double lambda2) {
  return Objective(std::move(gradient), std::nullopt, 0.0, lambda1, lambda2);
}

Objective Objective::second_order(VectorXd gradient, LinearOperator hvp,
                                  double curvature_bound, double lambda1,
                                  double lambda2) {
  require(static_cast<bool>(hvp), ErrorCode::kInvalidArgument,
          "second-order objective needs a Hessian-vector product");
  require(curvature_bound >= 0.0, ErrorCode::kInvalidArgument,
          "curvature bound must be non-negative");
  return Objective(std::move(gradient), std::move(hvp), curvature_bound,
                   lambda1, lambda2);
}

VectorXd Objective::curvature(const VectorXd& v) const {
  if (v.size() != dim())
    fail(ErrorCode::kDimensionMismatch, "vector length does not match objective");
  if (!hvp_) return VectorXd::Zero(dim());
  return (*hvp_)(v);
}

double Objective::smooth_value(const VectorXd& delta) const {
  return gradient_.dot(delta) + 0.5 * delta.dot(curvature(delta)) -
         lambda2_ * delta.squaredNorm();
}

VectorXd Objective::smooth_gradient(const VectorXd& delta) const {
  return gradient_ + curvature(delta) - 2.0 * lambda2_ * delta;
}

double Objective::value(const VectorXd& delta) const {
  return smooth_value(delta) - lambda1_ * delta.lpNorm<1>();
}

double soft_threshold(double x, double t) {
  if (x <= -t) return x + t;
  if (x <= t) return 0.0;
  return x - t;
}

VectorXd soft_threshold(const VectorXd& x, double t) {
  require(t >= 0.0, ErrorCode::kInvalidArgument,
          "threshold must be non-negative");
  return x.unaryExpr([t](double v) { return soft_threshold(v, t); });
}

// Minimizes f + h with f = -smooth part and h = l1 |.|_1 (Beck-Teboulle
// FISTA with backtracking). Curvature products are carried alongside the
// iterates so each backtracking trial costs a single HVP.
SolveResult fista_solve(const Objective& objective, const SolverConfig& config) {
  require(config.learning_rate > 0.0, ErrorCode::kInvalidArgument,
          "learning rate must be positive");
  require(config.backtrack_decay > 0.0 && config.backtrack_decay < 1.0,
          ErrorCode::kInvalidArgument, "backtrack decay must be in (0, 1)");
  require(config.iterations >= 0 && config.max_backtracks >= 0,
          ErrorCode::kInvalidArgument, "iteration counts must be non-negative");

  const Index d = objective.dim();
  const VectorXd& g = objective.gradient();
  const double l1 = objective.lambda1();
  const double l2 = objective.lambda2();

  // f(v) given H v.
  const auto negated_smooth = [&](const VectorXd& v, const VectorXd& hv) {
    return -(g.dot(v) + 0.5 * v.dot(hv) - l2 * v.squaredNorm());
  };

  VectorXd x = VectorXd::Zero(d);
  VectorXd hx = VectorXd::Zero(d);
  VectorXd y = x;
  VectorXd hy = hx;
  double t = 1.0;
  double step = config.learning_rate;

  SolveResult result;
  result.delta = x;
  result.objective = 0.0;  // J(0)

  for (int k = 0; k < config.iterations; ++k) {
    const VectorXd grad_f = -(g + hy - 2.0 * l2 * y);
    const double f_y = negated_smooth(y, hy);

    VectorXd candidate;
    VectorXd h_candidate;
    double f_candidate = 0.0;
    bool accepted = false;
    for (int bt = 0; bt <= config.max_backtracks; ++bt) {
      candidate = soft_threshold(y - step * grad_f, step * l1);
      h_candidate = objective.curvature(candidate);
      f_candidate = negated_smooth(candidate, h_candidate);
      const VectorXd diff = candidate - y;
      const double model =
          f_y + grad_f.dot(diff) + diff.squaredNorm() / (2.0 * step);
      const double slack = 1e-12 * (1.0 + std::abs(f_y));
      if (f_candidate <= model + slack) {
        accepted = true;
        break;
      }
      if (bt < config.max_backtracks) step *= config.backtrack_decay;
    }
    if (!accepted) {
      result.backtracks_exhausted = true;
      break;
    }

    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double momentum = (t - 1.0) / t_next;
    y = candidate + momentum * (candidate - x);
    hy = h_candidate + momentum * (h_candidate - hx);
    x = std::move(candidate);
    hx = std::move(h_candidate);
    t = t_next;

    const double value = -f_candidate - l1 * x.lpNorm<1>();
    result.objective_trace.push_back(value);
    result.step_trace.push_back(step);
    result.nnz_trace.push_back(count_nonzero(x));
    result.iterations = k + 1;
    if (value > result.objective) {
      result.objective = value;
      result.delta = x;
    }
  }
  return result;
}

VectorXd closed_form_caso(const VectorXd& g, const HessianHandle& hessian,
                          double lambda2) {
  if (g.size() != hessian.dim())
    fail(ErrorCode::kDimensionMismatch, "gradient length does not match Hessian");
  if (!(lambda2 > hessian.max_eigenvalue() / 2.0))
    fail(ErrorCode::kInvalidArgument,
         "lambda2 must exceed half the largest Hessian eigenvalue");
  const double diag = 2.0 * lambda2;
  const MatrixXd& u = hessian.eigenvectors;
  if (u.cols() == 0) return g / diag;
  const VectorXd coeffs = u.transpose() * g;
  const VectorXd scaled =
      coeffs.array() / (diag - hessian.eigenvalues.array());
  // Component outside span(U) is scaled by 1/(2 l2).
  return u * scaled + (g - u * coeffs) / diag;
}

VectorXd closed_form_cafo(const VectorXd& g, double lambda2) {
  require(lambda2 > 0.0, ErrorCode::kInvalidArgument,
          "lambda2 must be positive");
  return g / (2.0 * lambda2);
}

}  // namespace saliency
