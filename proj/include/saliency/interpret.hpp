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

// Saliency methods. The regularized ones (CAFO, CASO and their smoothed
// variants) return the optimal loss-increasing perturbation; the baselines
// (vanilla gradient, SmoothGrad, integrated gradients) return attributions.

#ifndef SALIENCY_INTERPRET_HPP_
#define SALIENCY_INTERPRET_HPP_

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "saliency/solver.hpp"

namespace saliency {

enum class Method {
  kGradient,
  kSmoothGrad,
  kIntegratedGradients,
  kCafo,
  kCaso,
  kSmoothCafo,
  kSmoothCaso,
};

std::string_view method_name(Method method);
// Accepts the names returned by method_name().
Method parse_method(std::string_view name);
bool is_regularized(Method method);

// Which class the loss is taken against.
enum class Target { kPredicted, kLabel };

struct MethodParams {
  double lambda1 = 0.0;
  double c1 = 10.0;
  int smoothing_samples = 50;
  double smoothing_sigma = 0.15;  // fraction of the input's max - min
  int ig_steps = 50;
  std::optional<VectorXd> baseline;  // integrated gradients; zero if unset
  std::uint64_t seed = 0;
  PowerConfig power;
  SolverConfig solver;
  Index channels_per_pixel = 1;
  Target target = Target::kPredicted;
};

struct SaliencyResult {
  Method method = Method::kGradient;
  VectorXd attribution;
  double sparsity = 0.0;    // fraction of pixels that are exactly zero
  double loss_gain = 0.0;   // regularized objective at the solution; 0 for baselines
  double raw_loss_gain = 0.0;  // loss(x + delta) - loss(x); 0 for baselines
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double curvature_bound = 0.0;  // power-iteration estimate of L
  double confidence = 0.0;       // max class probability at x
  int predicted = 0;
  int target = 0;
  bool kink_warning = false;  // some relu unit within 1e-12 of its kink
  bool solver_flag = false;   // backtracking exhausted
  SolveResult solve;          // empty for baselines
};

// Validates MethodParams; throws kInvalidArgument.
void validate(const MethodParams& params);

SaliencyResult interpret(const Network& net, const Sample& sample,
                         Method method, const MethodParams& params);

SaliencyResult cafo(const Network& net, const Sample& sample,
                    const MethodParams& params);
SaliencyResult caso(const Network& net, const Sample& sample,
                    const MethodParams& params);
SaliencyResult smooth_cafo(const Network& net, const Sample& sample,
                           const MethodParams& params);
SaliencyResult smooth_caso(const Network& net, const Sample& sample,
                           const MethodParams& params);
SaliencyResult vanilla_gradient(const Network& net, const Sample& sample,
                                const MethodParams& params);
SaliencyResult smoothgrad(const Network& net, const Sample& sample,
                          const MethodParams& params);
SaliencyResult integrated_gradients(const Network& net, const Sample& sample,
                                    const MethodParams& params);

// Fraction of pixels whose channel components are all exactly 0.0.
// Throws kInvalidArgument unless channels divides the length.
double sparsity_ratio(const VectorXd& delta, Index channels_per_pixel);

// Noisy copies x + N(0, (sigma * (max x - min x))^2 I) drawn from `seed`.
// sigma == 0 yields the single point x.
std::vector<VectorXd> noisy_inputs(const VectorXd& x, int samples,
                                   double sigma, std::uint64_t seed);

std::vector<double> default_lambda1_grid();

struct SweepConfig {
  std::vector<double> grid = default_lambda1_grid();
  double eta_low = 0.75;   // inclusive
  double eta_high = 1.0;   // exclusive
  int max_refinements = 20;
  int max_grid_extensions = 20;  // x10 steps beyond the grid to reach all-zero
  int jobs = 1;
};

struct SweepOutcome {
  std::vector<SaliencyResult> candidates;  // ascending lambda1
  std::optional<std::size_t> selected;
  std::vector<double> refinements;  // lambda1 values tried after the grid
  bool target_reached = false;
};

// Evaluates the grid, extends it by factors of 10 until the solution is all
// zero, then refines between the largest non-qualifying lambda1 and the
// first all-zero lambda1 until some candidate has sparsity in
// [eta_low, eta_high). Among qualifying candidates, the one with the largest
// regularized objective wins; ties go to the smaller lambda1.
SweepOutcome lambda1_sweep(const Network& net, const Sample& sample,
                           Method method, const MethodParams& params,
                           const SweepConfig& config);

}  // namespace saliency

#endif  // SALIENCY_INTERPRET_HPP_
