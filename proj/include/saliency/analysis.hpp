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

// Desk-scale studies of the input Hessian: rank-one convergence
// simulations, CASO/CAFO gap versus confidence, top-eigenvector alignment
// with the gradient, and an exhaustive L0 oracle for the quadratic
// surrogate objective.

#ifndef SALIENCY_ANALYSIS_HPP_
#define SALIENCY_ANALYSIS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "saliency/interpret.hpp"

namespace saliency {

enum class RankOneMode { kVaryClasses, kVaryEps, kGrid };

std::string_view rank_one_mode_name(RankOneMode mode);
RankOneMode parse_rank_one_mode(std::string_view name);

struct RankOneSimConfig {
  RankOneMode mode = RankOneMode::kVaryClasses;
  double p0 = 0.9999;           // vary-classes: eps = (1 - p0) / (c - 1)
  std::vector<Index> classes;   // vary-eps uses classes.front()
  std::vector<double> eps;      // vary-eps and grid
  Index dim = 512;
  std::uint64_t seed = 7;
};

struct RankOneRow {
  Index classes = 0;
  double eps = 0.0;
  double rel_error = 0.0;
};

// Linear model with random Gaussian W (d x c_max, shared across rows: the
// model for c classes uses the first c columns), p = [1 - (c-1) eps, eps,
// ..., eps], y = e_0, g = W (p - y). Reports the relative Frobenius error of
// g g^T / (eps (c-1)) against W A W^T.
std::vector<RankOneRow> simulate_rank_one(const RankOneSimConfig& config);

struct GapStudyConfig {
  MethodParams params;  // lambda1 is forced to 0
};

struct GapRow {
  std::size_t sample_id = 0;
  double confidence = 0.0;
  double gap = 0.0;  // |caso/|caso| - cafo/|cafo||, in [0, 2]
  bool skipped = false;
  std::string note;
};

// Per sample: CASO and CAFO at lambda1 = 0, both rescaled to unit norm.
// Samples whose CAFO solution is zero are reported with skipped = true.
std::vector<GapRow> confidence_gap_study(const Network& net,
                                         const Dataset& data,
                                         std::size_t samples,
                                         const GapStudyConfig& config);

struct AlignmentRow {
  Index classes = 0;
  double cosine = 0.0;        // |cos(u_1, g)|
  double mass_ratio = 0.0;    // s_max / sum s over the eigenvalues of H
  double energy_ratio = 0.0;  // s_max^2 / sum s^2 (Frobenius share)
};

std::vector<AlignmentRow> alignment_curve(Index dim,
                                          const std::vector<Index>& classes,
                                          double eps, std::uint64_t seed);

// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

// g^T delta + 1/2 delta^T H delta - l2 |delta|^2.
double surrogate_value(const VectorXd& g, const MatrixXd& hessian,
                       double lambda2, const VectorXd& delta);

struct OracleConfig {
  Index max_support = 3;
  double lambda2 = 10.0;
  std::size_t budget = 100000;  // max number of supports enumerated
};

struct OracleResult {
  std::vector<Index> support;  // ascending
  VectorXd delta;
  double value = 0.0;
};

// Enumerates every support S with |S| <= k and maximizes the surrogate on
// S by a |S| x |S| solve. Requires d <= 14 and l2 > L/2.
OracleResult brute_force_group_feature(const VectorXd& g, const MatrixXd& hessian,
                                       const OracleConfig& config);

struct PlantedConfig {
  Index dim = 12;
  Index support = 3;
  int instances = 10;
  double coupling = 0.02;  // scale of the off-diagonal Hessian part
  double c1 = 10.0;
  std::vector<double> grid = default_lambda1_grid();
  SolverConfig solver{0.1, 500, 0.5, 20};
  std::uint64_t seed = 11;
};

struct OracleCheckRow {
  int instance = 0;
  std::vector<Index> planted;
  std::vector<Index> oracle_support;
  double oracle_value = 0.0;
  std::vector<Index> l1_support;  // at best_lambda1
  double l1_value = 0.0;          // surrogate value of the L1 solution
  double best_lambda1 = 0.0;
  bool l1_match = false;
  bool dominance = false;  // oracle_value >= every L1 solution with |S| <= k
};

// Planted sparse instances: g supported on `support` random coordinates,
// H = diag(U[0.5, 2]) + coupling * R R^T / d. The L1 path runs FISTA over
// the grid; the best lambda1 is the one whose solution has 1..k nonzeros and
// the largest surrogate value.
std::vector<OracleCheckRow> oracle_check(const PlantedConfig& config);

}  // namespace saliency

#endif  // SALIENCY_ANALYSIS_HPP_
