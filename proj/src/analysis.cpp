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

#include "saliency/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "saliency/error.hpp"
#include "saliency/rng.hpp"

namespace saliency {
namespace {

struct Point {
  Index classes;
  double eps;
};

VectorXd confident_probabilities(Index c, double eps) {
  VectorXd p = VectorXd::Constant(c, eps);
  p[0] = 1.0 - static_cast<double>(c - 1) * eps;
  return p;
}

void check_point(Index c, double eps) {
  require(c >= 2, ErrorCode::kInvalidArgument, "need at least two classes");
  require(eps > 0.0, ErrorCode::kInvalidArgument, "eps must be positive");
  const double p0 = 1.0 - static_cast<double>(c - 1) * eps;
  if (!(p0 > 1.0 / static_cast<double>(c) && p0 < 1.0))
    fail(ErrorCode::kInvalidArgument,
         "inconsistent configuration: c = " + std::to_string(c) +
             ", eps = " + std::to_string(eps) + " gives p0 = " +
             std::to_string(p0) + " outside (1/c, 1)");
}

std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = r;
    i = j + 1;
  }
  return ranks;
}

std::vector<Index> support_of(const VectorXd& v) {
  std::vector<Index> s;
  for (Index i = 0; i < v.size(); ++i)
    if (v[i] != 0.0) s.push_back(i);
  return s;
}

double binomial(Index n, Index k) {
  double r = 1.0;
  for (Index i = 1; i <= k; ++i)
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

}  // namespace

std::string_view rank_one_mode_name(RankOneMode mode) {
  switch (mode) {
    case RankOneMode::kVaryClasses:
      return "vary-classes";
    case RankOneMode::kVaryEps:
      return "vary-eps";
    case RankOneMode::kGrid:
      return "grid";
  }
  return "grid";
}

RankOneMode parse_rank_one_mode(std::string_view name) {
  if (name == "vary-classes") return RankOneMode::kVaryClasses;
  if (name == "vary-eps") return RankOneMode::kVaryEps;
  if (name == "grid") return RankOneMode::kGrid;
  fail(ErrorCode::kInvalidArgument,
       "unknown rank-one mode '" + std::string(name) + "'");
}

std::vector<RankOneRow> simulate_rank_one(const RankOneSimConfig& config) {
  require(config.dim > 0, ErrorCode::kInvalidArgument, "dim must be positive");
  require(!config.classes.empty(), ErrorCode::kInvalidArgument,
          "no class counts given");

  std::vector<Point> points;
  switch (config.mode) {
    case RankOneMode::kVaryClasses:
      for (Index c : config.classes) {
        require(c >= 2, ErrorCode::kInvalidArgument,
                "need at least two classes");
        points.push_back({c, (1.0 - config.p0) / static_cast<double>(c - 1)});
      }
      break;
    case RankOneMode::kVaryEps:
      require(!config.eps.empty(), ErrorCode::kInvalidArgument,
              "no eps values given");
      for (double e : config.eps) points.push_back({config.classes.front(), e});
      break;
    case RankOneMode::kGrid:
      require(!config.eps.empty(), ErrorCode::kInvalidArgument,
              "no eps values given");
      for (Index c : config.classes)
        for (double e : config.eps) points.push_back({c, e});
      break;
  }
  for (const Point& pt : points) check_point(pt.classes, pt.eps);

  Index max_classes = 0;
  for (const Point& pt : points) max_classes = std::max(max_classes, pt.classes);
  Rng rng(config.seed);
  const MatrixXd w_full = rng.normal_matrix(config.dim, max_classes);

  std::vector<RankOneRow> rows;
  rows.reserve(points.size());
  for (const Point& pt : points) {
    const MatrixXd w = w_full.leftCols(pt.classes);
    const VectorXd p = confident_probabilities(pt.classes, pt.eps);
    VectorXd residual = p;
    residual[0] -= 1.0;
    const VectorXd g = w * residual;
    const RankOneApprox approx = rank_one_approx(g, pt.eps, pt.classes);
    rows.push_back({pt.classes, pt.eps, rank_one_rel_error(w, p, approx)});
  }
  return rows;
}

std::vector<GapRow> confidence_gap_study(const Network& net,
                                         const Dataset& data,
                                         std::size_t samples,
                                         const GapStudyConfig& config) {
  MethodParams params = config.params;
  params.lambda1 = 0.0;
  const std::size_t n = std::min(samples, data.size());
  std::vector<GapRow> rows;
  rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    GapRow row;
    row.sample_id = i;
    const SaliencyResult first = cafo(net, data[i], params);
    row.confidence = first.confidence;
    const double first_norm = first.attribution.norm();
    if (first_norm == 0.0) {
      row.skipped = true;
      row.note = "zero gradient";
      rows.push_back(std::move(row));
      continue;
    }
    const SaliencyResult second = caso(net, data[i], params);
    const double second_norm = second.attribution.norm();
    if (second_norm == 0.0) {
      row.skipped = true;
      row.note = "zero second-order solution";
      rows.push_back(std::move(row));
      continue;
    }
    row.gap = (second.attribution / second_norm -
               first.attribution / first_norm)
                  .norm();
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<AlignmentRow> alignment_curve(Index dim,
                                          const std::vector<Index>& classes,
                                          double eps, std::uint64_t seed) {
  require(dim > 0, ErrorCode::kInvalidArgument, "dim must be positive");
  require(!classes.empty(), ErrorCode::kInvalidArgument,
          "no class counts given");
  for (Index c : classes) check_point(c, eps);
  const Index max_classes = *std::max_element(classes.begin(), classes.end());
  Rng rng(seed);
  const MatrixXd w_full = rng.normal_matrix(dim, max_classes);

  std::vector<AlignmentRow> rows;
  for (Index c : classes) {
    const MatrixXd w = w_full.leftCols(c);
    const VectorXd p = confident_probabilities(c, eps);
    VectorXd residual = p;
    residual[0] -= 1.0;
    const VectorXd g = w * residual;
    const HessianHandle h = hessian_eig(w, p);
    AlignmentRow row;
    row.classes = c;
    if (h.eigenvalues.size() > 0 && g.norm() > 0.0) {
      row.cosine = std::abs(h.eigenvectors.col(0).dot(g)) / g.norm();
      row.mass_ratio = h.eigenvalues[0] / h.eigenvalues.sum();
      row.energy_ratio =
          h.eigenvalues[0] * h.eigenvalues[0] / h.eigenvalues.squaredNorm();
    }
    rows.push_back(row);
  }
  return rows;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  require(a.size() == b.size(), ErrorCode::kDimensionMismatch,
          "spearman inputs differ in length");
  require(a.size() >= 2, ErrorCode::kInvalidArgument,
          "spearman needs at least two points");
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    cov += (ra[i] - ma) * (rb[i] - mb);
    va += (ra[i] - ma) * (ra[i] - ma);
    vb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (va == 0.0 || vb == 0.0) return 0.0;
  return cov / std::sqrt(va * vb);
}

double surrogate_value(const VectorXd& g, const MatrixXd& hessian,
                       double lambda2, const VectorXd& delta) {
  return g.dot(delta) + 0.5 * delta.dot(hessian * delta) -
         lambda2 * delta.squaredNorm();
}

OracleResult brute_force_group_feature(const VectorXd& g, const MatrixXd& hessian,
                                       const OracleConfig& config) {
  const Index d = g.size();
  require(hessian.rows() == d && hessian.cols() == d,
          ErrorCode::kDimensionMismatch, "Hessian must be d x d");
  require(d <= 14, ErrorCode::kInvalidArgument,
          "exhaustive oracle is limited to d <= 14");
  require(config.max_support >= 0, ErrorCode::kInvalidArgument,
          "support bound must be non-negative");
  const Index k = std::min(config.max_support, d);
  double count = 0.0;
  for (Index s = 0; s <= k; ++s) count += binomial(d, s);
  if (count > static_cast<double>(config.budget))
    fail(ErrorCode::kBudgetExceeded,
         "enumeration of " + std::to_string(static_cast<long long>(count)) +
             " supports exceeds budget " + std::to_string(config.budget));
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(hessian, Eigen::EigenvaluesOnly);
  const double top = d > 0 ? eig.eigenvalues()[d - 1] : 0.0;
  if (!(config.lambda2 > top / 2.0))
    fail(ErrorCode::kInvalidArgument,
         "lambda2 must exceed half the largest Hessian eigenvalue");

  OracleResult best;
  best.delta = VectorXd::Zero(d);
  best.value = 0.0;
  // Supports ordered by size, then by bitmask.
  for (Index size = 1; size <= k; ++size) {
    for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
      if (std::popcount(mask) != size) continue;
      std::vector<Index> support;
      for (Index i = 0; i < d; ++i)
        if (mask & (1u << i)) support.push_back(i);
      MatrixXd m(size, size);
      VectorXd rhs(size);
      for (Index a = 0; a < size; ++a) {
        rhs[a] = g[support[a]];
        for (Index b = 0; b < size; ++b)
          m(a, b) = (a == b ? 2.0 * config.lambda2 : 0.0) -
                    hessian(support[a], support[b]);
      }
      const VectorXd sol = m.ldlt().solve(rhs);
      // Max of g^T D - 1/2 D^T M D is 1/2 g^T M^{-1} g.
      const double value = 0.5 * rhs.dot(sol);
      if (value > best.value) {
        best.value = value;
        best.support = support;
        best.delta.setZero();
        for (Index a = 0; a < size; ++a) best.delta[support[a]] = sol[a];
      }
    }
  }
  return best;
}

std::vector<OracleCheckRow> oracle_check(const PlantedConfig& config) {
  require(config.dim >= 1 && config.dim <= 14, ErrorCode::kInvalidArgument,
          "planted instances need 1 <= d <= 14");
  require(config.support >= 1 && config.support <= config.dim,
          ErrorCode::kInvalidArgument, "support size out of range");
  require(config.instances >= 1, ErrorCode::kInvalidArgument,
          "need at least one instance");
  require(!config.grid.empty(), ErrorCode::kInvalidArgument,
          "lambda1 grid is empty");
  const Index d = config.dim;
  std::vector<OracleCheckRow> rows;
  for (int inst = 0; inst < config.instances; ++inst) {
    Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(inst)));
    OracleCheckRow row;
    row.instance = inst;

    std::vector<Index> coords(static_cast<std::size_t>(d));
    std::iota(coords.begin(), coords.end(), Index{0});
    for (Index i = d; i > 1; --i)
      std::swap(coords[static_cast<std::size_t>(i - 1)],
                coords[rng.index(static_cast<std::uint64_t>(i))]);
    row.planted.assign(coords.begin(), coords.begin() + config.support);
    std::sort(row.planted.begin(), row.planted.end());

    VectorXd g = VectorXd::Zero(d);
    for (Index i : row.planted)
      g[i] = rng.uniform(0.5, 1.0) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
    MatrixXd h = MatrixXd::Zero(d, d);
    for (Index i = 0; i < d; ++i) h(i, i) = rng.uniform(0.5, 2.0);
    const MatrixXd r = rng.normal_matrix(d, d);
    h += config.coupling * r * r.transpose() / static_cast<double>(d);

    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(h, Eigen::EigenvaluesOnly);
    const double top = eig.eigenvalues()[d - 1];
    const double l2 = select_lambda2(top, config.c1);

    const OracleResult oracle = brute_force_group_feature(
        g, h, OracleConfig{config.support, l2, 100000});
    row.oracle_support = oracle.support;
    row.oracle_value = oracle.value;

    row.dominance = true;
    bool have_best = false;
    for (double l1 : config.grid) {
      const Objective obj = Objective::second_order(
          g, [h](const VectorXd& v) { return VectorXd(h * v); }, top, l1, l2);
      const SolveResult sol = fista_solve(obj, config.solver);
      const auto support = support_of(sol.delta);
      if (support.empty() ||
          static_cast<Index>(support.size()) > config.support)
        continue;
      const double value = surrogate_value(g, h, l2, sol.delta);
      if (value > oracle.value + 1e-12) row.dominance = false;
      if (!have_best || value > row.l1_value) {
        have_best = true;
        row.l1_value = value;
        row.l1_support = support;
        row.best_lambda1 = l1;
      }
    }
    row.l1_match = have_best && row.l1_support == row.oracle_support;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace saliency
