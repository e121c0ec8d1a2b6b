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

#include "saliency/interpret.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <memory>
#include <string>

#include "saliency/error.hpp"
#include "saliency/rng.hpp"

namespace saliency {
namespace {

struct Context {
  ForwardTrace trace;  // at x, labelled with the target
  int predicted = 0;
  int target = 0;
};

Context make_context(const Network& net, const Sample& sample,
                     const MethodParams& params) {
  const ForwardTrace probe = forward(net, sample.x, 0);
  Context ctx;
  ctx.predicted = probe.predicted();
  ctx.target =
      params.target == Target::kPredicted ? ctx.predicted : sample.label;
  ctx.trace = forward(net, sample.x, ctx.target);
  return ctx;
}

SaliencyResult base_result(Method method, const Context& ctx) {
  SaliencyResult r;
  r.method = method;
  r.confidence = ctx.trace.confidence();
  r.predicted = ctx.predicted;
  r.target = ctx.target;
  return r;
}

// Mean over `points` of W_z A_z W_z^T v (relu nets) or of the central
// finite-difference HVP (everything else).
LinearOperator averaged_hvp(const Network& net, const std::vector<VectorXd>& points,
                            int target, bool* kink_warning) {
  const double count = static_cast<double>(points.size());
  if (net.piecewise_linear()) {
    struct Linear {
      MatrixXd jacobian;
      VectorXd p;
    };
    auto pieces = std::make_shared<std::vector<Linear>>();
    pieces->reserve(points.size());
    for (const VectorXd& z : points) {
      LocalLinearization lin = local_linearization(net, z);
      if (lin.near_kink) *kink_warning = true;
      pieces->push_back({std::move(lin.jacobian), std::move(lin.probabilities)});
    }
    return [pieces, count](const VectorXd& v) {
      VectorXd acc = VectorXd::Zero(v.size());
      for (const Linear& piece : *pieces)
        acc += hvp_closed_form(piece.jacobian, piece.p, v);
      return VectorXd(acc / count);
    };
  }
  return [&net, points, target, count](const VectorXd& v) {
    VectorXd acc = VectorXd::Zero(v.size());
    if (v.norm() <= 1e-300) return acc;
    for (const VectorXd& z : points)
      acc += hvp_finite_diff(net, z, target, v).value;
    return VectorXd(acc / count);
  };
}

SaliencyResult solve_regularized(const Network& net, const Sample& sample,
                                 Method method, const MethodParams& params,
                                 const std::vector<VectorXd>& points,
                                 bool second_order) {
  validate(params);
  const Context ctx = make_context(net, sample, params);
  SaliencyResult r = base_result(method, ctx);

  VectorXd g = VectorXd::Zero(net.input_dim());
  for (const VectorXd& z : points) g += input_gradient(net, z, ctx.target);
  g /= static_cast<double>(points.size());

  if (second_order) {
    LinearOperator hvp = averaged_hvp(net, points, ctx.target, &r.kink_warning);
    r.curvature_bound =
        std::max(0.0, largest_eigenvalue(hvp, net.input_dim(), params.power));
    r.lambda2 = select_lambda2(r.curvature_bound, params.c1);
    r.lambda1 = params.lambda1;
    const Objective obj = Objective::second_order(
        g, std::move(hvp), r.curvature_bound, params.lambda1, r.lambda2);
    r.solve = fista_solve(obj, params.solver);
  } else {
    r.lambda2 = select_lambda2(0.0, params.c1);
    r.lambda1 = params.lambda1;
    const Objective obj =
        Objective::first_order(g, params.lambda1, r.lambda2);
    r.solve = fista_solve(obj, params.solver);
  }
  r.attribution = r.solve.delta;
  r.loss_gain = r.solve.objective;
  r.solver_flag = r.solve.backtracks_exhausted;
  r.raw_loss_gain =
      forward(net, sample.x + r.attribution, ctx.target).loss - ctx.trace.loss;
  r.sparsity = sparsity_ratio(r.attribution, params.channels_per_pixel);
  return r;
}

}  // namespace

std::string_view method_name(Method method) {
  switch (method) {
    case Method::kGradient:
      return "grad";
    case Method::kSmoothGrad:
      return "smoothgrad";
    case Method::kIntegratedGradients:
      return "integrated-gradients";
    case Method::kCafo:
      return "cafo";
    case Method::kCaso:
      return "caso";
    case Method::kSmoothCafo:
      return "smooth-cafo";
    case Method::kSmoothCaso:
      return "smooth-caso";
  }
  return "grad";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::kGradient, Method::kSmoothGrad,
                   Method::kIntegratedGradients, Method::kCafo, Method::kCaso,
                   Method::kSmoothCafo, Method::kSmoothCaso}) {
    if (method_name(m) == name) return m;
  }
  if (name == "ig") return Method::kIntegratedGradients;
  fail(ErrorCode::kInvalidArgument, "unknown method '" + std::string(name) + "'");
}

bool is_regularized(Method method) {
  return method == Method::kCafo || method == Method::kCaso ||
         method == Method::kSmoothCafo || method == Method::kSmoothCaso;
}

void validate(const MethodParams& params) {
  require(params.lambda1 >= 0.0, ErrorCode::kInvalidArgument,
          "lambda1 must be non-negative");
  require(params.c1 > 0.0, ErrorCode::kInvalidArgument, "c1 must be positive");
  require(params.smoothing_samples >= 1, ErrorCode::kInvalidArgument,
          "smoothing needs at least one sample");
  require(params.smoothing_sigma >= 0.0, ErrorCode::kInvalidArgument,
          "smoothing sigma must be non-negative");
  require(params.ig_steps >= 1, ErrorCode::kInvalidArgument,
          "integrated gradients needs at least one step");
  require(params.channels_per_pixel >= 1, ErrorCode::kInvalidArgument,
          "channels per pixel must be positive");
}

double sparsity_ratio(const VectorXd& delta, Index channels_per_pixel) {
  require(channels_per_pixel >= 1, ErrorCode::kInvalidArgument,
          "channels per pixel must be positive");
  if (delta.size() % channels_per_pixel != 0)
    fail(ErrorCode::kInvalidArgument,
         "length " + std::to_string(delta.size()) +
             " is not divisible by " + std::to_string(channels_per_pixel) +
             " channels");
  const Index pixels = delta.size() / channels_per_pixel;
  if (pixels == 0) return 0.0;
  Index zero = 0;
  for (Index p = 0; p < pixels; ++p) {
    bool all_zero = true;
    for (Index ch = 0; ch < channels_per_pixel; ++ch)
      all_zero = all_zero && delta[p * channels_per_pixel + ch] == 0.0;
    if (all_zero) ++zero;
  }
  return static_cast<double>(zero) / static_cast<double>(pixels);
}

std::vector<VectorXd> noisy_inputs(const VectorXd& x, int samples,
                                   double sigma, std::uint64_t seed) {
  require(samples >= 1, ErrorCode::kInvalidArgument,
          "need at least one noisy sample");
  require(sigma >= 0.0, ErrorCode::kInvalidArgument,
          "sigma must be non-negative");
  if (sigma == 0.0) return {x};
  const double scale = sigma * (x.maxCoeff() - x.minCoeff());
  Rng rng(seed);
  std::vector<VectorXd> out;
  out.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i)
    out.push_back(x + scale * rng.normal_vector(x.size()));
  return out;
}

SaliencyResult cafo(const Network& net, const Sample& sample,
                    const MethodParams& params) {
  return solve_regularized(net, sample, Method::kCafo, params, {sample.x},
                           false);
}

SaliencyResult caso(const Network& net, const Sample& sample,
                    const MethodParams& params) {
  return solve_regularized(net, sample, Method::kCaso, params, {sample.x},
                           true);
}

SaliencyResult smooth_cafo(const Network& net, const Sample& sample,
                           const MethodParams& params) {
  validate(params);
  return solve_regularized(
      net, sample, Method::kSmoothCafo, params,
      noisy_inputs(sample.x, params.smoothing_samples, params.smoothing_sigma,
                   params.seed),
      false);
}

SaliencyResult smooth_caso(const Network& net, const Sample& sample,
                           const MethodParams& params) {
  validate(params);
  return solve_regularized(
      net, sample, Method::kSmoothCaso, params,
      noisy_inputs(sample.x, params.smoothing_samples, params.smoothing_sigma,
                   params.seed),
      true);
}

SaliencyResult vanilla_gradient(const Network& net, const Sample& sample,
                                const MethodParams& params) {
  validate(params);
  const Context ctx = make_context(net, sample, params);
  SaliencyResult r = base_result(Method::kGradient, ctx);
  r.attribution = backpropagate(
      net, ctx.trace, VectorXd::Unit(net.num_classes(), ctx.target));
  r.sparsity = sparsity_ratio(r.attribution, params.channels_per_pixel);
  return r;
}

SaliencyResult smoothgrad(const Network& net, const Sample& sample,
                          const MethodParams& params) {
  validate(params);
  const Context ctx = make_context(net, sample, params);
  SaliencyResult r = base_result(Method::kSmoothGrad, ctx);
  const VectorXd seed = VectorXd::Unit(net.num_classes(), ctx.target);
  const auto points = noisy_inputs(sample.x, params.smoothing_samples,
                                   params.smoothing_sigma, params.seed);
  VectorXd acc = VectorXd::Zero(net.input_dim());
  for (const VectorXd& z : points)
    acc += backpropagate(net, forward(net, z, ctx.target), seed);
  r.attribution = acc / static_cast<double>(points.size());
  r.sparsity = sparsity_ratio(r.attribution, params.channels_per_pixel);
  return r;
}

SaliencyResult integrated_gradients(const Network& net, const Sample& sample,
                                    const MethodParams& params) {
  validate(params);
  const Context ctx = make_context(net, sample, params);
  SaliencyResult r = base_result(Method::kIntegratedGradients, ctx);
  const VectorXd baseline =
      params.baseline ? *params.baseline : VectorXd::Zero(net.input_dim());
  if (baseline.size() != sample.x.size())
    fail(ErrorCode::kDimensionMismatch, "baseline length does not match x");
  const VectorXd path = sample.x - baseline;
  VectorXd acc = VectorXd::Zero(net.input_dim());
  const double steps = static_cast<double>(params.ig_steps);
  for (int k = 1; k <= params.ig_steps; ++k) {
    const double alpha = (static_cast<double>(k) - 0.5) / steps;
    acc += input_gradient(net, baseline + alpha * path, ctx.target);
  }
  r.attribution = path.cwiseProduct(acc / steps);
  r.sparsity = sparsity_ratio(r.attribution, params.channels_per_pixel);
  return r;
}

SaliencyResult interpret(const Network& net, const Sample& sample,
                         Method method, const MethodParams& params) {
  switch (method) {
    case Method::kGradient:
      return vanilla_gradient(net, sample, params);
    case Method::kSmoothGrad:
      return smoothgrad(net, sample, params);
    case Method::kIntegratedGradients:
      return integrated_gradients(net, sample, params);
    case Method::kCafo:
      return cafo(net, sample, params);
    case Method::kCaso:
      return caso(net, sample, params);
    case Method::kSmoothCafo:
      return smooth_cafo(net, sample, params);
    case Method::kSmoothCaso:
      return smooth_caso(net, sample, params);
  }
  fail(ErrorCode::kInvalidArgument, "unknown method");
}

std::vector<double> default_lambda1_grid() {
  return {0.0, 1e-5, 1e-4, 1e-3, 6.25e-3, 1.25e-2, 2.5e-2, 5e-2};
}

SweepOutcome lambda1_sweep(const Network& net, const Sample& sample,
                           Method method, const MethodParams& params,
                           const SweepConfig& config) {
  require(is_regularized(method), ErrorCode::kInvalidArgument,
          "lambda1 sweep needs a regularized method");
  require(!config.grid.empty(), ErrorCode::kInvalidArgument,
          "lambda1 grid is empty");
  require(std::is_sorted(config.grid.begin(), config.grid.end()) &&
              std::adjacent_find(config.grid.begin(), config.grid.end()) ==
                  config.grid.end(),
          ErrorCode::kInvalidArgument, "lambda1 grid must be strictly ascending");
  require(config.grid.front() >= 0.0, ErrorCode::kInvalidArgument,
          "lambda1 values must be non-negative");
  require(config.eta_low < config.eta_high, ErrorCode::kInvalidArgument,
          "empty sparsity range");
  require(config.jobs >= 1, ErrorCode::kInvalidArgument, "jobs must be >= 1");
  validate(params);

  std::map<double, SaliencyResult> evaluated;
  const auto run_batch = [&](const std::vector<double>& lambdas) {
    std::vector<std::future<SaliencyResult>> pending;
    std::size_t next = 0;
    const auto launch = [&](double l1) {
      MethodParams p = params;
      p.lambda1 = l1;
      return std::async(config.jobs > 1 ? std::launch::async
                                        : std::launch::deferred,
                        [&net, &sample, method, p]() {
                          return interpret(net, sample, method, p);
                        });
    };
    while (next < lambdas.size()) {
      const std::size_t end =
          std::min(lambdas.size(), next + static_cast<std::size_t>(config.jobs));
      pending.clear();
      for (std::size_t i = next; i < end; ++i) pending.push_back(launch(lambdas[i]));
      for (std::size_t i = next; i < end; ++i)
        evaluated.emplace(lambdas[i], pending[i - next].get());
      next = end;
    }
  };
  const auto qualifies = [&](const SaliencyResult& r) {
    return r.sparsity >= config.eta_low && r.sparsity < config.eta_high;
  };
  const auto all_zero = [](const SaliencyResult& r) {
    return r.attribution.size() > 0 && (r.attribution.array() == 0.0).all();
  };
  const auto any_qualifies = [&]() {
    return std::any_of(evaluated.begin(), evaluated.end(),
                       [&](const auto& kv) { return qualifies(kv.second); });
  };
  const auto first_all_zero = [&]() -> std::optional<double> {
    for (const auto& [l1, r] : evaluated)
      if (all_zero(r)) return l1;
    return std::nullopt;
  };

  SweepOutcome outcome;
  run_batch(config.grid);

  // Grow by factors of 10 until the solution vanishes.
  for (int ext = 0; ext < config.max_grid_extensions && !first_all_zero(); ++ext) {
    const double largest = evaluated.rbegin()->first;
    const double next = largest > 0.0 ? largest * 10.0 : 1e-5;
    outcome.refinements.push_back(next);
    run_batch({next});
  }

  for (int it = 0; it < config.max_refinements && !any_qualifies(); ++it) {
    const auto hi = first_all_zero();
    if (!hi) break;
    double lo = 0.0;
    for (const auto& [l1, r] : evaluated)
      if (l1 < *hi && r.sparsity < config.eta_low) lo = std::max(lo, l1);
    double candidate = *hi / 2.0;
    if (candidate <= lo) candidate = 0.5 * (lo + *hi);
    if (evaluated.count(candidate) != 0) break;
    outcome.refinements.push_back(candidate);
    run_batch({candidate});
  }

  outcome.candidates.reserve(evaluated.size());
  for (auto& [l1, r] : evaluated) outcome.candidates.push_back(std::move(r));

  for (std::size_t i = 0; i < outcome.candidates.size(); ++i) {
    const SaliencyResult& r = outcome.candidates[i];
    if (!qualifies(r)) continue;
    if (!outcome.selected ||
        r.loss_gain > outcome.candidates[*outcome.selected].loss_gain)
      outcome.selected = i;
  }
  outcome.target_reached = outcome.selected.has_value();
  if (!outcome.selected) {
    // Best effort: the sparsest candidate that is not all zero.
    for (std::size_t i = 0; i < outcome.candidates.size(); ++i) {
      const SaliencyResult& r = outcome.candidates[i];
      if (all_zero(r)) continue;
      if (!outcome.selected ||
          r.sparsity > outcome.candidates[*outcome.selected].sparsity)
        outcome.selected = i;
    }
  }
  return outcome;
}

}  // namespace saliency
