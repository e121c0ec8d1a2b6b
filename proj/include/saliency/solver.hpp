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

// Maximizes the interpretation objective
//
//   J(delta) = g^T delta + 1/2 delta^T H delta - l1 |delta|_1 - l2 |delta|^2
//
// with FISTA (proximal gradient with Nesterov momentum and backtracking).
// H is absent for the first-order objective. For H PSD with largest
// eigenvalue L, J is strongly concave whenever l2 > L/2.

#ifndef SALIENCY_SOLVER_HPP_
#define SALIENCY_SOLVER_HPP_

#include <optional>
#include <vector>

#include "saliency/hessian.hpp"

namespace saliency {

// lambda2 = L/2 + c1. Throws kInvalidArgument for L < 0.
double select_lambda2(double curvature_bound, double c1 = 10.0);

class Objective {
 public:
  // g^T delta - l1 |delta|_1 - l2 |delta|^2.
  static Objective first_order(VectorXd gradient, double lambda1,
                               double lambda2);

  // Adds 1/2 delta^T H delta. `curvature_bound` is the largest eigenvalue
  // estimate of H; construction fails unless lambda2 > curvature_bound / 2.
  static Objective second_order(VectorXd gradient, LinearOperator hvp,
                                double curvature_bound, double lambda1,
                                double lambda2);

  Index dim() const { return gradient_.size(); }
  const VectorXd& gradient() const { return gradient_; }
  double lambda1() const { return lambda1_; }
  double lambda2() const { return lambda2_; }
  double curvature_bound() const { return curvature_bound_; }
  bool has_curvature() const { return hvp_.has_value(); }

  // H v, or zero for the first-order objective.
  VectorXd curvature(const VectorXd& v) const;

  // Smooth part s(delta) and its gradient g + H delta - 2 l2 delta.
  double smooth_value(const VectorXd& delta) const;
  VectorXd smooth_gradient(const VectorXd& delta) const;

  // Full objective J(delta).
  double value(const VectorXd& delta) const;

 private:
  Objective(VectorXd gradient, std::optional<LinearOperator> hvp,
            double curvature_bound, double lambda1, double lambda2);

  VectorXd gradient_;
  std::optional<LinearOperator> hvp_;
  double curvature_bound_ = 0.0;
  double lambda1_ = 0.0;
  double lambda2_ = 0.0;
};

struct SolverConfig {
  double learning_rate = 0.1;
  int iterations = 10;
  double backtrack_decay = 0.5;
  int max_backtracks = 20;
};

struct SolveResult {
  VectorXd delta;  // best iterate found; prox-killed entries are exactly 0.0
  double objective = 0.0;
  int iterations = 0;
  std::vector<double> objective_trace;  // J at each iterate
  std::vector<double> step_trace;       // accepted step size per iteration
  std::vector<Index> nnz_trace;
  bool backtracks_exhausted = false;
};

// Soft thresholding: x + t for x <= -t, 0 for -t < x <= t, x - t for x > t.
double soft_threshold(double x, double t);
VectorXd soft_threshold(const VectorXd& x, double t);

SolveResult fista_solve(const Objective& objective, const SolverConfig& config);

// (2 l2 I - H)^{-1} g through the spectral expansion of H; never forms a
// d x d inverse. Throws kInvalidArgument unless l2 > max eigenvalue / 2.
VectorXd closed_form_caso(const VectorXd& g, const HessianHandle& hessian,
                          double lambda2);

// g / (2 l2).
VectorXd closed_form_cafo(const VectorXd& g, double lambda2);

}  // namespace saliency

#endif  // SALIENCY_SOLVER_HPP_
