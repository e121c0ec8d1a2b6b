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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "saliency/analysis.hpp"
#include "saliency/error.hpp"
#include "saliency/rng.hpp"
#include "saliency/solver.hpp"

namespace saliency {
namespace {

// Every support of size <= k, enumerated recursively, each solved densely.
OracleResult naive_oracle(const VectorXd& g, const MatrixXd& h, Index k, double l2) {
  OracleResult best;
  best.delta = VectorXd::Zero(g.size());
  std::vector<Index> chosen;
  std::function<void(Index)> walk = [&](Index start) {
    if (!chosen.empty()) {
      const Index s = static_cast<Index>(chosen.size());
      MatrixXd m(s, s);
      VectorXd gs(s);
      for (Index i = 0; i < s; ++i) {
        gs[i] = g[chosen[i]];
        for (Index j = 0; j < s; ++j) m(i, j) = -h(chosen[i], chosen[j]);
        m(i, i) += 2.0 * l2;
      }
      const VectorXd ds = m.ldlt().solve(gs);
      VectorXd delta = VectorXd::Zero(g.size());
      for (Index i = 0; i < s; ++i) delta[chosen[i]] = ds[i];
      const double value = surrogate_value(g, h, l2, delta);
      if (value > best.value + 1e-15) {
        best.value = value;
        best.delta = delta;
        best.support = chosen;
      }
    }
    if (static_cast<Index>(chosen.size()) == k) return;
    for (Index i = start; i < g.size(); ++i) {
      chosen.push_back(i);
      walk(i + 1);
      chosen.pop_back();
    }
  };
  walk(0);
  return best;
}

TEST(Spearman, KnownValues) {
  EXPECT_DOUBLE_EQ(spearman({1, 2, 3, 4}, {10, 20, 30, 40}), 1.0);
  EXPECT_DOUBLE_EQ(spearman({1, 2, 3, 4}, {4, 3, 2, 1}), -1.0);
  // Ranks with ties: a -> [1, 2.5, 2.5, 4], b -> [1, 2, 3, 4].
  EXPECT_NEAR(spearman({1, 2, 2, 3}, {1, 2, 3, 4}), 0.9486832980505138, 1e-12);
}

TEST(Spearman, MatchesIndependentRanking) {
  oracle::Gen gen(1);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> a, b;
    for (int i = 0; i < 30; ++i) {
      a.push_back(std::round(gen.uniform(0, 10)));
      b.push_back(gen.uniform(-1, 1));
    }
    EXPECT_NEAR(spearman(a, b), oracle::spearman(a, b), 1e-12);
  }
}

TEST(RankOneSim, ModesParse) {
  EXPECT_EQ(parse_rank_one_mode("vary-eps"), RankOneMode::kVaryEps);
  EXPECT_EQ(rank_one_mode_name(RankOneMode::kGrid), "grid");
  EXPECT_THROW(parse_rank_one_mode("sideways"), Error);
}

TEST(RankOneSim, DecreasesWithClasses) {
  RankOneSimConfig cfg;
  cfg.classes = {10, 100, 1000};
  const auto rows = simulate_rank_one(cfg);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_GT(rows[0].rel_error, rows[1].rel_error);
  EXPECT_GT(rows[1].rel_error, rows[2].rel_error);
  EXPECT_NEAR(rows[2].eps, (1 - 0.9999) / 999.0, 1e-20);
}

TEST(RankOneSim, DecreasesAsEpsShrinks) {
  RankOneSimConfig cfg;
  cfg.mode = RankOneMode::kVaryEps;
  cfg.classes = {100};
  cfg.eps = {5e-3, 1e-4, 1e-6};
  const auto rows = simulate_rank_one(cfg);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_GT(rows[0].rel_error, rows[1].rel_error);
  EXPECT_GT(rows[1].rel_error, rows[2].rel_error);
}

TEST(RankOneSim, TwoClassesBeatTen) {
  RankOneSimConfig cfg;
  cfg.classes = {2, 10};
  const auto rows = simulate_rank_one(cfg);
  EXPECT_LT(rows[0].rel_error, rows[1].rel_error);
  EXPECT_LT(rows[0].rel_error, 1e-3);
}

TEST(RankOneSim, RejectsInconsistentPoint) {
  RankOneSimConfig cfg;
  cfg.mode = RankOneMode::kVaryEps;
  cfg.classes = {10};
  cfg.eps = {0.2};  // p0 = 1 - 9 * 0.2 < 0
  EXPECT_THROW(simulate_rank_one(cfg), Error);
  cfg.eps = {};
  EXPECT_THROW(simulate_rank_one(cfg), Error);
}

TEST(RankOneSim, MatchesNaiveDenseReimplementation) {
  RankOneSimConfig cfg;
  cfg.mode = RankOneMode::kGrid;
  cfg.classes = {5, 20, 60};
  cfg.eps = {1e-3, 1e-5};
  cfg.dim = 80;
  cfg.seed = 3;
  const auto rows = simulate_rank_one(cfg);
  ASSERT_EQ(rows.size(), 6u);
  Rng rng(cfg.seed);
  const MatrixXd w_full = rng.normal_matrix(80, 60);
  for (const RankOneRow& r : rows) {
    const MatrixXd w = w_full.leftCols(r.classes);
    VectorXd p = VectorXd::Constant(r.classes, r.eps);
    p[0] = 1.0 - static_cast<double>(r.classes - 1) * r.eps;
    VectorXd y = VectorXd::Zero(r.classes);
    y[0] = 1;
    const VectorXd g = w * (p - y);
    const MatrixXd h = oracle::dense_hessian(w, p);
    const MatrixXd approx = g * g.transpose() / (r.eps * static_cast<double>(r.classes - 1));
    EXPECT_NEAR(r.rel_error, (h - approx).norm() / h.norm(), 1e-10);
  }
  const auto again = simulate_rank_one(cfg);
  for (size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(rows[i].rel_error, again[i].rel_error);
}

TEST(Alignment, HighConfidenceManyClassesAligns) {
  const auto rows = alignment_curve(512, {1000}, 1e-8, 7);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_GE(rows[0].cosine, 0.99);
  EXPECT_GT(rows[0].energy_ratio, 0.99);
}

TEST(Alignment, TwoClassesIsExact) {
  const auto rows = alignment_curve(30, {2}, 1e-8, 1);
  EXPECT_NEAR(rows[0].cosine, 1.0, 1e-10);
  EXPECT_NEAR(rows[0].mass_ratio, 1.0, 1e-12);
}

TEST(Alignment, LowConfidenceIsRecorded) {
  const auto rows = alignment_curve(30, {3}, 0.3, 1);
  EXPECT_LT(rows[0].cosine, 0.999);
  EXPECT_GE(rows[0].cosine, 0.0);
  EXPECT_LE(rows[0].mass_ratio, 1.0);
}

TEST(GapStudy, SaturatedLinearModelHasZeroGap) {
  oracle::Gen gen(2);
  VectorXd bias(3);
  bias << 40.0, 0.0, 0.0;
  const Network net({Layer{gen.normal_matrix(3, 5) * 0.1, bias, Activation::kIdentity}});
  Dataset data{{gen.normal_vector(5), 1}, {gen.normal_vector(5), 2}};
  GapStudyConfig cfg;
  cfg.params.target = Target::kLabel;
  const auto rows = confidence_gap_study(net, data, 10, cfg);
  ASSERT_EQ(rows.size(), 2u);
  for (const GapRow& r : rows) {
    EXPECT_FALSE(r.skipped);
    EXPECT_LE(r.gap, 1e-9);
  }
}

TEST(GapStudy, VeryConfidentSampleHasSmallGap) {
  // c = 1000 linear model with p_max = 1 - 1e-9 at the sample.
  oracle::Gen gen(3);
  const Index d = 64, c = 1000;
  const MatrixXd wt = gen.normal_matrix(c, d) * 0.01;
  VectorXd bias = VectorXd::Zero(c);
  const VectorXd x = gen.normal_vector(d);
  const VectorXd z0 = wt * x;
  const double eps = 1e-9 / static_cast<double>(c - 1);
  for (Index i = 0; i < c; ++i) bias[i] = -z0[i] + std::log(eps);
  bias[0] = -z0[0] + std::log(1 - 1e-9);
  const Network net({Layer{wt, bias, Activation::kIdentity}});
  ASSERT_NEAR(forward(net, x, 0).confidence(), 1 - 1e-9, 1e-12);
  GapStudyConfig cfg;
  cfg.params.target = Target::kLabel;
  cfg.params.solver.iterations = 50;
  const auto rows = confidence_gap_study(net, {{x, 3}}, 1, cfg);
  ASSERT_FALSE(rows[0].skipped);
  EXPECT_LE(rows[0].gap, 0.05);
}

TEST(GapStudy, ZeroGradientIsSkipped) {
  const Network net({Layer{MatrixXd::Zero(2, 3), VectorXd::Zero(2), Activation::kIdentity}});
  // p = [0.5, 0.5] and W = 0: zero gradient.
  const auto rows = confidence_gap_study(net, {{VectorXd::Ones(3), 0}}, 1, GapStudyConfig{});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_TRUE(rows[0].skipped);
  EXPECT_FALSE(rows[0].note.empty());
}

TEST(GapStudy, GapWithinBounds) {
  oracle::Gen gen(4);
  const std::vector<LayerSpec> spec{{6, 10, Activation::kRelu}, {10, 4, Activation::kIdentity}};
  const Network net = Network::random(spec, 5);
  Dataset data;
  for (int i = 0; i < 30; ++i) data.push_back({gen.normal_vector(6) * 3.0, i % 4});
  for (const GapRow& r : confidence_gap_study(net, data, 30, GapStudyConfig{})) {
    EXPECT_GE(r.gap, 0.0);
    EXPECT_LE(r.gap, 2.0);
  }
}

TEST(Oracle, FullSupportEqualsClosedForm) {
  oracle::Gen gen(5);
  const MatrixXd w = gen.normal_matrix(8, 4);
  const VectorXd p = gen.simplex(4);
  const HessianHandle handle = hessian_eig(w, p);
  const VectorXd g = gen.normal_vector(8);
  OracleConfig cfg;
  cfg.max_support = 8;
  cfg.lambda2 = select_lambda2(handle.max_eigenvalue());
  const OracleResult r = brute_force_group_feature(g, oracle::dense_hessian(w, p), cfg);
  EXPECT_LE((r.delta - closed_form_caso(g, handle, cfg.lambda2)).norm(), 1e-10 * r.delta.norm());
  EXPECT_EQ(r.support.size(), 8u);
}

TEST(Oracle, SeparableSingleCoordinate) {
  oracle::Gen gen(6);
  const VectorXd g = gen.normal_vector(10);
  OracleConfig cfg;
  cfg.max_support = 1;
  const OracleResult r = brute_force_group_feature(g, MatrixXd::Zero(10, 10), cfg);
  Index arg = 0;
  g.cwiseAbs().maxCoeff(&arg);
  ASSERT_EQ(r.support.size(), 1u);
  EXPECT_EQ(r.support[0], arg);
  EXPECT_DOUBLE_EQ(r.delta[arg], g[arg] / (2.0 * cfg.lambda2));
}

TEST(Oracle, MatchesNaiveEnumeration) {
  oracle::Gen gen(7);
  for (int trial = 0; trial < 10; ++trial) {
    const Index d = gen.integer(4, 10);
    const MatrixXd w = gen.normal_matrix(d, 3);
    const MatrixXd h = oracle::dense_hessian(w, gen.simplex(3));
    const VectorXd g = gen.normal_vector(d);
    OracleConfig cfg;
    cfg.max_support = gen.integer(1, 3);
    const OracleResult r = brute_force_group_feature(g, h, cfg);
    const OracleResult expected = naive_oracle(g, h, cfg.max_support, cfg.lambda2);
    EXPECT_NEAR(r.value, expected.value, 1e-12);
    EXPECT_EQ(r.support, expected.support);
  }
}

TEST(Oracle, Preconditions) {
  OracleConfig cfg;
  EXPECT_THROW(brute_force_group_feature(VectorXd::Ones(15), MatrixXd::Zero(15, 15), cfg), Error);
  cfg.lambda2 = 1.0;
  EXPECT_THROW(brute_force_group_feature(VectorXd::Ones(4), 4.0 * MatrixXd::Identity(4, 4), cfg),
               Error);
  cfg = OracleConfig{};
  cfg.max_support = 7;
  cfg.budget = 100;
  try {
    brute_force_group_feature(VectorXd::Ones(14), MatrixXd::Zero(14, 14), cfg);
    FAIL() << "budget not enforced";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBudgetExceeded);
  }
}

TEST(Oracle, DominatesL1Solutions) {
  oracle::Gen gen(8);
  for (int trial = 0; trial < 5; ++trial) {
    const MatrixXd w = gen.normal_matrix(10, 3);
    const MatrixXd h = oracle::dense_hessian(w, gen.simplex(3));
    const VectorXd g = gen.normal_vector(10);
    OracleConfig cfg;
    const OracleResult best = brute_force_group_feature(g, h, cfg);
    for (double l1 : {0.05, 0.1, 0.3, 0.6, 1.0}) {
      const MatrixXd hh = h;
      const Objective obj = Objective::second_order(
          g, [hh](const VectorXd& v) { return VectorXd(hh * v); }, h.norm(), l1, cfg.lambda2);
      SolverConfig sc;
      sc.iterations = 300;
      const VectorXd delta = fista_solve(obj, sc).delta;
      Index nnz = 0;
      for (Index i = 0; i < delta.size(); ++i) nnz += delta[i] != 0.0;
      if (nnz > cfg.max_support) continue;
      EXPECT_GE(best.value, surrogate_value(g, h, cfg.lambda2, delta) - 1e-12);
    }
  }
}

TEST(PlantedOracle, L1PathRecoversSupport) {
  const auto rows = oracle_check(PlantedConfig{});
  ASSERT_EQ(rows.size(), 10u);
  for (const OracleCheckRow& r : rows) {
    EXPECT_EQ(r.oracle_support, r.planted);
    EXPECT_TRUE(r.l1_match) << "instance " << r.instance;
    EXPECT_TRUE(r.dominance);
    EXPECT_GE(r.oracle_value, r.l1_value - 1e-12);
  }
}

}  // namespace
}  // namespace saliency
