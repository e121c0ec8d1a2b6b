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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "oracles.hpp"
#include "saliency/analysis.hpp"
#include "saliency/hessian.hpp"
#include "saliency/interpret.hpp"
#include "saliency/network.hpp"
#include "saliency/rng.hpp"
#include "saliency/solver.hpp"
#include "saliency/synthetic.hpp"

#ifndef SALIENCY_CLI_PATH
#error "SALIENCY_CLI_PATH must name the CLI binary"
#endif

namespace {

using namespace saliency;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

Network relu_net(Index d, Index hidden, Index c, std::uint64_t seed) {
  const std::vector<LayerSpec> spec{{d, hidden, Activation::kRelu},
                                    {hidden, c, Activation::kIdentity}};
  return Network::random(spec, seed);
}

double max_abs(const MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

// 1. Assembled W A W^T against the finite-difference loss Hessian.
Outcome hessian_exactness() {
  oracle::Gen gen(101);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Index d = gen.integer(2, 30);
    const Index c = gen.integer(2, 10);
    const Index hidden = gen.integer(4, 24);
    const Network net = relu_net(d, hidden, c, 1000 + trial);
    const VectorXd x = oracle::kink_safe_point(net, gen, 1e-2);
    if (oracle::relu_margin(net, x) <= 1e-2) return {false, "no kink-safe point found"};
    const int label = static_cast<int>(gen.integer(0, c - 1));
    const LocalLinearization lin = local_linearization(net, x);
    const MatrixXd h = oracle::dense_hessian(lin.jacobian, lin.probabilities);
    const MatrixXd fd = oracle::fd_hessian(
        [&](const VectorXd& z) { return oracle::loss(net, z, label); }, x, 1e-4);
    const double scale = std::max(max_abs(h), 1e-12);
    worst = std::max(worst, max_abs(h - fd) / scale);
  }
  return {worst <= 1e-4, fmt("max entry error %.3g of max|H| (tol 1e-4)", worst)};
}

// 2. Rayleigh quotients of the closed-form operator.
Outcome psd() {
  oracle::Gen gen(202);
  double worst = INFINITY;
  for (int trial = 0; trial < 50; ++trial) {
    const Index d = gen.integer(2, 40);
    const Index c = gen.integer(2, 20);
    const MatrixXd w = gen.normal_matrix(d, c) * std::pow(10.0, gen.uniform(-2, 2));
    const VectorXd p = gen.simplex(c, gen.uniform(0.1, 8.0));
    const Eigen::SelfAdjointEigenSolver<MatrixXd> eig(oracle::dense_hessian(w, p),
                                                      Eigen::EigenvaluesOnly);
    const double smax = std::max(eig.eigenvalues().maxCoeff(), 1e-300);
    for (int k = 0; k < 1000; ++k) {
      const VectorXd v = gen.normal_vector(d);
      const double q = v.dot(hvp_closed_form(w, p, v)) / v.squaredNorm();
      worst = std::min(worst, q / smax);
    }
  }
  return {worst >= -1e-10, fmt("min Rayleigh quotient %.3g * s_max (tol -1e-10)", worst)};
}

// 3. Factored eigendecomposition against a dense solver.
Outcome eigen_match() {
  oracle::Gen gen(303);
  double value_err = 0.0, cos_err = 0.0, tail = 0.0;
  bool rank_ok = true;
  for (int trial = 0; trial < 10; ++trial) {
    const MatrixXd w = gen.normal_matrix(50, 10);
    const VectorXd p = gen.simplex(10, 1.0);
    const HessianHandle h = hessian_eig(w, p);
    const Eigen::SelfAdjointEigenSolver<MatrixXd> dense(oracle::dense_hessian(w, p));
    const VectorXd ev = dense.eigenvalues().reverse();
    const MatrixXd vecs = dense.eigenvectors().rowwise().reverse();
    const Index k = h.eigenvalues.size();
    if (k != 9) rank_ok = false;
    for (Index i = 0; i < k; ++i) {
      value_err = std::max(value_err, std::abs(h.eigenvalues[i] - ev[i]) / ev[i]);
      cos_err = std::max(cos_err, 1.0 - std::abs(h.eigenvectors.col(i).dot(vecs.col(i))));
    }
    tail = std::max(tail, ev.tail(50 - k).cwiseAbs().maxCoeff() / ev[0]);
  }
  return {rank_ok && value_err <= 1e-8 && cos_err <= 1e-8 && tail <= 1e-10,
          fmt("eigenvalue rel err %.3g, 1-|cos| %.3g, rank %s, dropped tail %.3g",
              value_err, cos_err, rank_ok ? "c-1" : "wrong", tail)};
}

// 4. Rank-one simulation: strict monotonicity plus pinned goldens.
Outcome rank_one() {
  RankOneSimConfig classes_cfg;
  classes_cfg.classes = {10, 50, 100, 500, 1000};
  const std::vector<RankOneRow> a = simulate_rank_one(classes_cfg);
  RankOneSimConfig eps_cfg;
  eps_cfg.mode = RankOneMode::kVaryEps;
  eps_cfg.classes = {100};
  eps_cfg.eps = {5e-3, 1e-3, 1e-4, 1e-5, 1e-6};
  const std::vector<RankOneRow> b = simulate_rank_one(eps_cfg);
  const std::vector<double> golden_a{0.27506162095767078, 0.14692774160618643,
                                     0.11010325149340848, 0.063184766780337534,
                                     0.054774446687165045};
  const std::vector<double> golden_b{0.97251089446875683, 0.16174576802535745,
                                     0.11141453917638879, 0.11018586918006862,
                                     0.11010316272404343};
  bool monotone = a.size() == 5 && b.size() == 5;
  double drift = 0.0;
  std::ostringstream vals;
  for (std::size_t i = 0; monotone && i < 5; ++i) {
    if (i > 0 && !(a[i].rel_error < a[i - 1].rel_error)) monotone = false;
    if (i > 0 && !(b[i].rel_error < b[i - 1].rel_error)) monotone = false;
    drift = std::max(drift, std::abs(a[i].rel_error - golden_a[i]) / golden_a[i]);
    drift = std::max(drift, std::abs(b[i].rel_error - golden_b[i]) / golden_b[i]);
  }
  for (const auto& r : a) vals << fmt("%.4f ", r.rel_error);
  vals << "| ";
  for (const auto& r : b) vals << fmt("%.4f ", r.rel_error);
  return {monotone && drift <= 1e-6,
          fmt("%s, golden drift %.2g; errors %s", monotone ? "strictly decreasing" : "NOT monotone",
              drift, vals.str().c_str())};
}

// 5. Many-class, high-confidence alignment, rebuilt here from a dense solver.
Outcome asymptotics() {
  const Index d = 512, c = 1000;
  const double eps = 1e-8;
  Rng rng(7);
  const MatrixXd w = rng.normal_matrix(d, c);
  VectorXd p = VectorXd::Constant(c, eps);
  p[0] = 1.0 - static_cast<double>(c - 1) * eps;
  VectorXd residual = p;
  residual[0] -= 1.0;
  const VectorXd g = w * residual;
  const Eigen::SelfAdjointEigenSolver<MatrixXd> dense(oracle::dense_hessian(w, p));
  const VectorXd ev = dense.eigenvalues().cwiseMax(0.0);
  const double smax = ev.maxCoeff();
  const double cos_u = std::abs(oracle::cosine(dense.eigenvectors().col(d - 1), g));
  const double mass = smax / ev.sum();
  const double energy = smax * smax / ev.squaredNorm();

  const HessianHandle h = hessian_eig(w, p);
  const double l2 = select_lambda2(h.max_eigenvalue());
  const VectorXd caso = closed_form_caso(g, h, l2);
  const VectorXd cafo = closed_form_cafo(g, select_lambda2(0.0));
  const double cos_sol = oracle::cosine(caso, cafo);

  const std::vector<AlignmentRow> lib = alignment_curve(d, {c}, eps, 7);
  const bool lib_agrees = std::abs(lib[0].cosine - cos_u) <= 1e-6 &&
                          std::abs(lib[0].mass_ratio - mass) <= 1e-6;
  return {cos_u >= 0.99 && mass >= 0.99 && cos_sol >= 0.99 && lib_agrees,
          fmt("|cos(u1,g)| %.6f, s_max/sum s %.4f (tol 0.99), cos(caso,cafo) %.6f, "
              "library %s; info: s_max^2/sum s^2 %.4f",
              cos_u, mass, cos_sol, lib_agrees ? "agrees" : "DISAGREES", energy)};
}

struct QuadInstance {
  VectorXd g;
  HessianHandle h;
  double l2 = 0.0;
};

QuadInstance quad_instance(oracle::Gen& gen) {
  const Index d = gen.integer(10, 60);
  const Index c = gen.integer(3, 12);
  QuadInstance q;
  const MatrixXd w = gen.normal_matrix(d, c) * std::pow(10.0, gen.uniform(0.0, 1.5));
  q.h = hessian_eig(w, gen.simplex(c, 1.0));
  q.g = gen.normal_vector(d);
  q.l2 = select_lambda2(q.h.max_eigenvalue());
  return q;
}

// Textbook FISTA with fixed step 1/L on the concave quadratic; returns the
// objective gap of the last iterate.
double reference_fista_gap(const MatrixXd& q, const VectorXd& g, int iterations) {
  const Eigen::SelfAdjointEigenSolver<MatrixXd> eig(q, Eigen::EigenvaluesOnly);
  const double step = 1.0 / eig.eigenvalues().maxCoeff();
  const VectorXd star = q.ldlt().solve(g);
  VectorXd x = VectorXd::Zero(g.size()), y = x;
  double t = 1.0;
  for (int k = 0; k < iterations; ++k) {
    const VectorXd next = y - step * (q * y - g);
    const double t_next = (1.0 + std::sqrt(1.0 + 4.0 * t * t)) / 2.0;
    y = next + ((t - 1.0) / t_next) * (next - x);
    x = next;
    t = t_next;
  }
  return 0.5 * (x - star).dot(q * (x - star));
}

// 6. FISTA against the closed form, and the accelerated rate.
Outcome solver() {
  oracle::Gen gen(606);
  double worst_gap = 0.0, worst_cos = 1.0, worst_rate = 0.0, ref_rate = INFINITY;
  int rate_checked = 0, rate_bad = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const QuadInstance q = quad_instance(gen);
    const Objective obj =
        Objective::second_order(q.g, q.h.as_operator(), q.h.max_eigenvalue(), 0.0, q.l2);
    const VectorXd exact = closed_form_caso(q.g, q.h, q.l2);
    const double best = obj.value(exact);
    SolverConfig cfg;
    cfg.iterations = 500;
    const SolveResult r = fista_solve(obj, cfg);
    worst_gap = std::max(worst_gap, best - r.objective);
    worst_cos = std::min(worst_cos, oracle::cosine(r.delta, exact));

    cfg.iterations = 8;
    const double gap8 = best - fista_solve(obj, cfg).objective;
    cfg.iterations = 32;
    const double gap32 = best - fista_solve(obj, cfg).objective;
    // Gaps at rounding level of J carry no rate information.
    if (gap8 > 1e-12 * std::max(1.0, std::abs(best))) {
      ++rate_checked;
      const double ratio = gap32 / (1.5 * gap8 / 4.0);
      worst_rate = std::max(worst_rate, ratio);
      if (ratio > 1.0) {
        ++rate_bad;
        const Index d = q.g.size();
        const MatrixXd quad = 2.0 * q.l2 * MatrixXd::Identity(d, d) -
                              oracle::dense_hessian(q.h.jacobian, q.h.probabilities);
        ref_rate = std::min(ref_rate, reference_fista_gap(quad, q.g, 32) /
                                          (1.5 * reference_fista_gap(quad, q.g, 8) / 4.0));
      }
    }
  }
  const bool pass = worst_gap <= 1e-8 && worst_cos >= 0.9999 && rate_bad == 0 &&
                    rate_checked > 0;
  std::string detail =
      fmt("max objective gap %.3g, min cosine %.8f; rate gap32 <= 1.5 gap8/4 holds on %d/%d "
          "(worst ratio to bound %.3g)",
          worst_gap, worst_cos, rate_checked - rate_bad, rate_checked, worst_rate);
  if (rate_bad > 0)
    detail += fmt("; textbook fixed-step FISTA on the violators: best ratio %.3g", ref_rate);
  return {pass, detail};
}

// 7. Exact zeros, dense solutions and prox properties.
Outcome sparsity() {
  oracle::Gen gen(707);
  int zero_ok = 0, dense_ok = 0;
  const int trials = 50;
  for (int trial = 0; trial < trials; ++trial) {
    const QuadInstance q = quad_instance(gen);
    const double l1 = q.g.cwiseAbs().maxCoeff() * gen.uniform(1.0, 4.0);
    const SolveResult zero = fista_solve(
        Objective::second_order(q.g, q.h.as_operator(), q.h.max_eigenvalue(), l1, q.l2),
        SolverConfig{});
    if (sparsity_ratio(zero.delta, 1) == 1.0 && zero.delta.cwiseAbs().maxCoeff() == 0.0)
      ++zero_ok;
    const SolveResult full = fista_solve(
        Objective::second_order(q.g, q.h.as_operator(), q.h.max_eigenvalue(), 0.0, q.l2),
        SolverConfig{});
    if (sparsity_ratio(full.delta, 1) == 0.0) ++dense_ok;
  }
  // The same two regimes through the interpretation front end.
  const Network net = relu_net(12, 16, 5, 77);
  const Sample s{gen.normal_vector(12), 0};
  MethodParams params;
  const SaliencyResult base = caso(net, s, params);
  const bool front_dense = base.sparsity == 0.0;
  params.lambda1 = input_gradient(net, s.x, base.target).cwiseAbs().maxCoeff() * 1.01;
  const bool front_zero = caso(net, s, params).sparsity == 1.0 &&
                          cafo(net, s, params).sparsity == 1.0;

  int prox_bad = 0;
  for (int k = 0; k < 10000; ++k) {
    const double x = gen.uniform(-10, 10), y = gen.uniform(-10, 10);
    const double t = gen.uniform(0, 5);
    const double px = soft_threshold(x, t), py = soft_threshold(y, t);
    const bool lipschitz = std::abs(px - py) <= std::abs(x - y) + 1e-15;
    const bool sign = px == 0.0 || (px > 0) == (x > 0);
    const bool dead = std::abs(x) > t || px == 0.0;
    if (!(lipschitz && sign && dead)) ++prox_bad;
  }
  const bool pass = zero_ok == trials && dense_ok == trials && front_dense && front_zero &&
                    prox_bad == 0;
  return {pass, fmt("eta=1 at lambda1>=|g|_inf %d/%d, eta=0 at lambda1=0 %d/%d, "
                    "front end %s, prox violations %d/10000",
                    zero_ok, trials, dense_ok, trials,
                    front_dense && front_zero ? "ok" : "FAILED", prox_bad)};
}

// 8. Confidence against the CASO-CAFO gap on a trained classifier.
Outcome confidence_trend() {
  BlobConfig blobs;
  blobs.dim = 16;
  blobs.classes = 10;
  blobs.samples = 1200;
  blobs.spread = 0.15;
  blobs.seed = 3;
  auto [train, held] = split_holdout(make_blobs(blobs), 200);
  TrainConfig cfg;
  cfg.epochs = 10;
  cfg.seed = 1;
  const TrainResult trained = train_sgd(relu_net(16, 32, 10, 2), train, cfg);
  const double acc = accuracy(trained.network, held);
  const std::vector<GapRow> rows =
      confidence_gap_study(trained.network, held, held.size(), GapStudyConfig{});
  std::vector<double> conf, gap;
  for (const GapRow& r : rows) {
    if (r.skipped) continue;
    conf.push_back(r.confidence);
    gap.push_back(r.gap);
  }
  if (conf.size() < 100) return {false, fmt("only %zu usable samples", conf.size())};
  const double rho = spearman(conf, gap);
  const double rho_oracle = oracle::spearman(conf, gap);
  return {rho <= -0.3 && std::abs(rho - rho_oracle) <= 1e-12,
          fmt("Spearman %.4f over %zu held-out samples (tol -0.3), holdout accuracy %.3f",
              rho, conf.size(), acc)};
}

// 9. Integrated gradients completeness.
Outcome ig() {
  oracle::Gen gen(909);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Index d = gen.integer(3, 20), c = gen.integer(2, 8);
    const Network net({Layer{gen.normal_matrix(c, d), gen.normal_vector(c), Activation::kIdentity}});
    const Sample s{gen.normal_vector(d), 0};
    MethodParams p;
    p.ig_steps = 50;
    const SaliencyResult r = integrated_gradients(net, s, p);
    const double delta = oracle::loss(net, s.x, r.target) -
                         oracle::loss(net, VectorXd::Zero(d), r.target);
    worst = std::max(worst, std::abs(r.attribution.sum() - delta));
  }
  const Network net = relu_net(10, 24, 4, 9);
  const Sample s{2.0 * gen.normal_vector(10), 0};
  bool monotone = true;
  double previous = INFINITY;
  std::ostringstream trail;
  for (int steps : {1, 4, 16, 64, 256}) {
    MethodParams p;
    p.ig_steps = steps;
    const SaliencyResult r = integrated_gradients(net, s, p);
    const double delta = oracle::loss(net, s.x, r.target) -
                         oracle::loss(net, VectorXd::Zero(10), r.target);
    const double residual = std::abs(r.attribution.sum() - delta);
    if (!(residual < previous)) monotone = false;
    previous = residual;
    trail << fmt("%.2g ", residual);
  }
  return {worst <= 1e-3 && monotone,
          fmt("linear-softmax max residual %.3g (tol 1e-3); relu residuals %s%s", worst,
              trail.str().c_str(), monotone ? "decreasing" : "NOT decreasing")};
}

// 10. Exhaustive L0 oracle against the best L1 solution.
Outcome oracle_support() {
  PlantedConfig cfg;
  cfg.dim = 12;
  cfg.support = 3;
  cfg.instances = 20;
  const std::vector<OracleCheckRow> rows = oracle_check(cfg);
  int match = 0, planted = 0, dominance = 0;
  for (const OracleCheckRow& r : rows) {
    match += r.l1_match;
    planted += r.oracle_support == r.planted;
    dominance += r.dominance;
  }
  const int n = static_cast<int>(rows.size());
  return {match == n && dominance == n,
          fmt("support agreement %d/%d, oracle = planted %d/%d, oracle dominance %d/%d",
              match, n, planted, n, dominance, n)};
}

std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream f(entry.path(), std::ios::binary);
    files[fs::relative(entry.path(), root).string()] =
        std::string(std::istreambuf_iterator<char>(f), {});
  }
  return files;
}

// 11. Every CLI subcommand twice with fixed seeds; artifacts must match.
Outcome determinism() {
  const std::string cli = SALIENCY_CLI_PATH;
  const std::vector<std::string> commands{
      "train --dim 8 --classes 4 --samples 300 --holdout 40 --epochs 3 --hidden 16 "
      "--export-data --seed 5",
      "--out grad interpret --model model.json --input holdout.csv --method grad --limit 3",
      "--out smoothgrad interpret --model model.json --input holdout.csv --method smoothgrad "
      "--limit 3 --smooth-samples 8 --seed 3 --jobs 3",
      "--out ig interpret --model model.json --input holdout.csv --method ig --limit 3",
      "--out cafo interpret --model model.json --input holdout.csv --method cafo --limit 3 "
      "--lambda1 0.001 --trace",
      "--out caso interpret --model model.json --input holdout.csv --method caso --limit 4 "
      "--trace --spectrum --jobs 2",
      "--out scafo interpret --model model.json --input holdout.csv --method smooth-cafo "
      "--limit 2 --smooth-samples 6 --seed 4",
      "--out scaso interpret --model model.json --input holdout.csv --method smooth-caso "
      "--limit 2 --smooth-samples 6 --seed 4 --jobs 2",
      "--out sweep sweep --model model.json --input holdout.csv --method caso --limit 3 --jobs 3",
      "--out rank1 rank1-sim --d 64 --classes 10,50,100 --seed 7",
      "--out rank1e rank1-sim --mode vary-eps --d 64 --seed 7",
      "--out gap gap-study --model model.json --data holdout.csv --samples 20",
      "--out align alignment --d 64 --classes 10,100 --seed 7",
      "--out oracle oracle-check --instances 3 --seed 11",
  };
  const fs::path base = fs::temp_directory_path() / "saliency_acceptance_determinism";
  fs::remove_all(base);
  std::map<std::string, std::string> runs[2];
  for (int run = 0; run < 2; ++run) {
    const fs::path dir = base / (run == 0 ? "a" : "b");
    fs::create_directories(dir);
    for (const std::string& args : commands) {
      const std::string line = "cd '" + dir.string() + "' && '" + cli + "' " + args +
                               " > /dev/null 2> cli_stderr.txt";
      if (std::system(line.c_str()) != 0)
        return {false, "command failed: " + args};
    }
    fs::remove(dir / "cli_stderr.txt");
    runs[run] = snapshot(dir);
  }
  std::size_t differing = 0;
  std::string first;
  for (const auto& [name, bytes] : runs[0]) {
    const auto it = runs[1].find(name);
    if (it == runs[1].end() || it->second != bytes) {
      if (differing++ == 0) first = name;
    }
  }
  if (runs[0].size() != runs[1].size()) ++differing;
  fs::remove_all(base);
  return {differing == 0 && !runs[0].empty(),
          fmt("%zu subcommand runs, %zu artifacts, %zu differing%s%s", commands.size(),
              runs[0].size(), differing, first.empty() ? "" : ", first: ",
              first.c_str())};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget_seconds;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"hessian-exactness", 10, hessian_exactness},
      {"hessian-psd", 5, psd},
      {"eigendecomposition", 5, eigen_match},
      {"rank-one-simulation", 60, rank_one},
      {"many-class-asymptotics", 30, asymptotics},
      {"solver-correctness", 20, solver},
      {"sparsity-semantics", 5, sparsity},
      {"confidence-trend", 120, confidence_trend},
      {"ig-completeness", 5, ig},
      {"oracle-support-recovery", 30, oracle_support},
      {"cli-determinism", 300, determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const Criterion& c = criteria[i];
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > c.budget_seconds) {
      out.pass = false;
      out.detail += fmt("; over time budget %.0f s", c.budget_seconds);
    }
    if (!out.pass) ++failures;
    std::printf("%s %2zu %-24s %7.2fs  %s\n", out.pass ? "PASS" : "FAIL", i + 1, c.name,
                seconds, out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
