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

// Command-line front end over the C API.
//
// Exit codes: 0 success, 1 runtime error, 2 usage error.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "saliency/saliency.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RuntimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void check(sal_status status, const std::string& what) {
  if (status == SAL_OK) return;
  std::string msg = what + ": " + sal_status_name(status) + ": " + sal_last_error();
  if (status == SAL_ERR_PARSE || status == SAL_ERR_IO) throw UsageError(msg);
  throw RuntimeError(msg);
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct ModelDeleter {
  void operator()(sal_model* m) const { sal_model_free(m); }
};
struct DatasetDeleter {
  void operator()(sal_dataset* d) const { sal_dataset_free(d); }
};
struct ResultDeleter {
  void operator()(sal_result* r) const { sal_result_free(r); }
};
struct SweepDeleter {
  void operator()(sal_sweep* s) const { sal_sweep_free(s); }
};
using ModelPtr = std::unique_ptr<sal_model, ModelDeleter>;
using DatasetPtr = std::unique_ptr<sal_dataset, DatasetDeleter>;
using ResultPtr = std::unique_ptr<sal_result, ResultDeleter>;
using SweepPtr = std::unique_ptr<sal_sweep, SweepDeleter>;

// Resolved value of every option on a subcommand, keyed by long name.
json resolved_options(const CLI::App* app) {
  json out = json::object();
  for (const CLI::Option* opt : app->get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "config") continue;
    if (opt->get_expected_max() == 0) {
      out[name] = opt->count() > 0;
    } else if (opt->count() > 0) {
      std::string joined;
      for (const auto& r : opt->results()) {
        if (!joined.empty()) joined += ",";
        joined += r;
      }
      out[name] = joined;
    } else {
      out[name] = opt->get_default_str();
    }
  }
  return out;
}

json provenance(const CLI::App* app) {
  return json{{"tool", "saliency"},
              {"version", sal_version()},
              {"command", app->get_name()},
              {"config", resolved_options(app)}};
}

// Single collector for every artifact the CLI writes.
class ArtifactWriter {
 public:
  ArtifactWriter(fs::path dir, json prov)
      : dir_(std::move(dir)), prov_(std::move(prov)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw RuntimeError("cannot create " + dir_.string() + ": " + ec.message());
  }

  const fs::path& dir() const { return dir_; }
  const json& provenance() const { return prov_; }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  // CSV whose first line is a '#' comment holding the provenance block.
  void csv(const std::string& name, const std::string& header,
           const std::vector<std::string>& rows) const {
    std::ofstream f(path(name), std::ios::binary | std::ios::trunc);
    if (!f) throw RuntimeError("cannot write " + path(name));
    f << "# " << prov_.dump() << "\n" << header << "\n";
    for (const auto& r : rows) f << r << "\n";
    if (!f) throw RuntimeError("write failed: " + path(name));
  }

  void json_file(const std::string& name, json body) const {
    body["provenance"] = prov_;
    std::ofstream f(path(name), std::ios::binary | std::ios::trunc);
    if (!f) throw RuntimeError("cannot write " + path(name));
    f << body.dump(1) << "\n";
    if (!f) throw RuntimeError("write failed: " + path(name));
  }

  void pgm(const std::string& name, const std::vector<double>& map,
           size_t width, size_t height) const {
    const std::string comment = "provenance " + prov_.dump();
    check(sal_write_pgm(map.data(), width, height, comment.c_str(),
                        path(name).c_str()),
          "writing " + name);
  }

  void raw(const std::string& name, size_t count, size_t dim,
           const std::vector<double>& data) const {
    check(sal_write_raw_f64(path(name).c_str(), count, dim, data.data()),
          "writing " + name);
  }

 private:
  fs::path dir_;
  json prov_;
};

// ---- shared option groups ------------------------------------------------

struct MethodOptions {
  std::string method = "caso";
  double lambda1 = 0.0;
  double c1 = 10.0;
  int smoothing_samples = 50;
  double smoothing_sigma = 0.15;
  int ig_steps = 50;
  int power_iters = 10;
  double power_tol = 1e-6;
  double lr = 0.1;
  int iters = 10;
  double decay = 0.5;
  int max_backtracks = 20;
  size_t channels = 1;
  std::string target = "predicted";
  uint64_t seed = 0;

  void add(CLI::App* app, bool with_lambda1) {
    app->add_option("--method", method,
                    "grad, smoothgrad, integrated-gradients, cafo, caso, "
                    "smooth-cafo, smooth-caso");
    if (with_lambda1) app->add_option("--lambda1", lambda1, "L1 weight")->check(CLI::NonNegativeNumber);
    app->add_option("--c1", c1, "offset added to L/2 for lambda2")->check(CLI::PositiveNumber);
    app->add_option("--smooth-samples", smoothing_samples, "noisy copies for smoothed methods")->check(CLI::PositiveNumber);
    app->add_option("--sigma", smoothing_sigma, "noise level as a fraction of the input range")->check(CLI::NonNegativeNumber);
    app->add_option("--ig-steps", ig_steps, "Riemann steps for integrated gradients")->check(CLI::PositiveNumber);
    app->add_option("--power-iters", power_iters, "power method iterations")->check(CLI::PositiveNumber);
    app->add_option("--power-tol", power_tol, "power method tolerance")->check(CLI::NonNegativeNumber);
    app->add_option("--lr", lr, "initial solver step size")->check(CLI::PositiveNumber);
    app->add_option("--iters", iters, "solver iterations")->check(CLI::PositiveNumber);
    app->add_option("--decay", decay, "backtracking decay")->check(CLI::Range(1e-6, 0.999999));
    app->add_option("--max-backtracks", max_backtracks, "backtracking limit")->check(CLI::NonNegativeNumber);
    app->add_option("--channels", channels, "channels per pixel")->check(CLI::PositiveNumber);
    app->add_option("--target", target, "class to explain")->check(CLI::IsMember({"predicted", "label"}));
    app->add_option("--seed", seed, "random seed");
  }

  sal_method_params resolve() const {
    sal_method_params p;
    sal_method_params_default(&p);
    if (sal_method_from_name(method.c_str(), &p.method) != SAL_OK)
      throw UsageError("unknown method '" + method + "'");
    p.lambda1 = lambda1;
    p.c1 = c1;
    p.smoothing_samples = smoothing_samples;
    p.smoothing_sigma = smoothing_sigma;
    p.ig_steps = ig_steps;
    p.seed = seed;
    p.power_iterations = power_iters;
    p.power_tolerance = power_tol;
    p.learning_rate = lr;
    p.solver_iterations = iters;
    p.backtrack_decay = decay;
    p.max_backtracks = max_backtracks;
    p.channels_per_pixel = channels;
    p.target = target == "label" ? SAL_TARGET_LABEL : SAL_TARGET_PREDICTED;
    return p;
  }
};

struct InputOptions {
  std::string model;
  std::string input;
  std::string labels;
  size_t limit = 0;

  void add(CLI::App* app, const char* input_flag) {
    app->add_option("--model", model, "model JSON")->required()->check(CLI::ExistingFile);
    app->add_option(input_flag, input, "CSV dataset, or raw f32 tensor with --labels")
        ->required()
        ->check(CLI::ExistingFile);
    app->add_option("--labels", labels, "raw i32 label sidecar")->check(CLI::ExistingFile);
    app->add_option("--limit", limit, "process at most this many samples (0 = all)");
  }
};

ModelPtr load_model(const std::string& path) {
  sal_model* m = nullptr;
  check(sal_model_load(path.c_str(), &m), "loading model " + path);
  return ModelPtr(m);
}

DatasetPtr load_data(const std::string& path, const std::string& labels) {
  sal_dataset* d = nullptr;
  if (labels.empty())
    check(sal_dataset_load_csv(path.c_str(), &d), "loading " + path);
  else
    check(sal_dataset_load_raw(path.c_str(), labels.c_str(), &d), "loading " + path);
  return DatasetPtr(d);
}

struct Sample {
  std::vector<double> x;
  int label = 0;
};

std::vector<Sample> read_samples(const sal_dataset* data, size_t limit) {
  const size_t n = limit > 0 ? std::min(limit, sal_dataset_size(data))
                             : sal_dataset_size(data);
  const size_t dim = sal_dataset_dim(data);
  std::vector<Sample> out(n);
  for (size_t i = 0; i < n; ++i) {
    out[i].x.resize(dim);
    check(sal_dataset_sample(data, i, out[i].x.data(), dim, &out[i].label),
          "reading sample " + std::to_string(i));
  }
  return out;
}

struct Geometry {
  size_t width = 0;
  size_t height = 0;
};

// Square when the pixel count is a perfect square, otherwise one row.
Geometry resolve_geometry(size_t dim, size_t channels, size_t width,
                          size_t height) {
  if (dim % channels != 0)
    throw UsageError("input dim " + std::to_string(dim) +
                     " is not a multiple of --channels");
  const size_t pixels = dim / channels;
  if (width == 0 && height == 0) {
    const auto side = static_cast<size_t>(std::llround(std::sqrt(double(pixels))));
    if (side * side == pixels) return {side, side};
    return {pixels, 1};
  }
  if (width == 0) width = height ? pixels / height : 0;
  if (height == 0) height = width ? pixels / width : 0;
  if (width * height != pixels)
    throw UsageError("--width x --height does not match the input size");
  return {width, height};
}

std::vector<double> attribution_of(const sal_result* r) {
  std::vector<double> a(sal_result_dim(r));
  check(sal_result_attribution(r, a.data(), a.size()), "reading attribution");
  return a;
}

sal_result_info info_of(const sal_result* r) {
  sal_result_info info;
  check(sal_result_info_get(r, &info), "reading result");
  return info;
}

std::vector<double> display_map(const std::vector<double>& a, Geometry g,
                                size_t channels) {
  std::vector<double> map(g.width * g.height);
  check(sal_normalize_display(a.data(), a.size(), g.width, g.height, channels,
                              map.data()),
        "normalizing map");
  return map;
}

json info_json(const sal_result_info& info) {
  return json{{"method", sal_method_name(info.method)},
              {"lambda1", info.lambda1},
              {"lambda2", info.lambda2},
              {"curvature_bound", info.curvature_bound},
              {"eta", info.sparsity},
              {"loss_gain", info.loss_gain},
              {"raw_loss_gain", info.raw_loss_gain},
              {"p_max", info.confidence},
              {"predicted", info.predicted},
              {"target", info.target},
              {"iterations", info.iterations},
              {"kink_warning", info.kink_warning != 0},
              {"solver_flag", info.solver_flag != 0}};
}

// Runs fn(i) for i in [0, n) with at most `jobs` in flight; results keep
// their index order.
template <typename T, typename Fn>
std::vector<T> run_batched(size_t n, int jobs, Fn fn) {
  std::vector<T> out;
  out.reserve(n);
  const size_t width = static_cast<size_t>(std::max(jobs, 1));
  for (size_t start = 0; start < n; start += width) {
    const size_t end = std::min(n, start + width);
    if (width == 1) {
      out.push_back(fn(start));
      continue;
    }
    std::vector<std::future<T>> batch;
    for (size_t i = start; i < end; ++i)
      batch.push_back(std::async(std::launch::async, fn, i));
    for (auto& f : batch) out.push_back(f.get());
  }
  return out;
}

// "a,b,c", or "lo:hi:log" (1-5 ladder: lo, 5lo, 10lo, ...) or
// "lo:hi:log:n" / "lo:hi:lin:n" (n points, rounded for integers).
std::vector<double> parse_range(const std::string& text) {
  std::vector<std::string> parts;
  const char sep = text.find(':') != std::string::npos ? ':' : ',';
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, sep);) parts.push_back(item);
  const auto to_double = [&](const std::string& s) {
    try {
      size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw UsageError("malformed number '" + s + "' in '" + text + "'");
    }
  };
  std::vector<double> out;
  if (sep == ',') {
    for (const auto& p : parts) out.push_back(to_double(p));
    return out;
  }
  if (parts.size() < 3 || parts.size() > 4)
    throw UsageError("range '" + text + "' must be lo:hi:log[:n] or lo:hi:lin:n");
  const double lo = to_double(parts[0]);
  const double hi = to_double(parts[1]);
  if (!(lo > 0.0) || !(hi >= lo)) throw UsageError("range '" + text + "' needs 0 < lo <= hi");
  const std::string& kind = parts[2];
  if (kind == "log" && parts.size() == 3) {
    for (double decade = lo; decade <= hi * (1 + 1e-12); decade *= 10.0) {
      out.push_back(decade);
      if (5.0 * decade <= hi * (1 + 1e-12)) out.push_back(5.0 * decade);
    }
    return out;
  }
  if (parts.size() != 4) throw UsageError("range '" + text + "' needs a point count");
  const double n = to_double(parts[3]);
  if (n < 1 || n != std::floor(n)) throw UsageError("point count must be a positive integer");
  const int count = static_cast<int>(n);
  for (int i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : double(i) / (count - 1);
    if (kind == "log")
      out.push_back(lo * std::pow(hi / lo, t));
    else if (kind == "lin")
      out.push_back(lo + (hi - lo) * t);
    else
      throw UsageError("range kind must be log or lin, got '" + kind + "'");
  }
  return out;
}

std::vector<size_t> parse_counts(const std::string& text) {
  std::vector<size_t> out;
  for (double v : parse_range(text)) {
    const auto c = static_cast<size_t>(std::llround(v));
    if (c < 2) throw UsageError("class counts must be at least 2");
    if (out.empty() || out.back() != c) out.push_back(c);
  }
  return out;
}

std::string support_string(uint32_t mask) {
  std::string s;
  for (int i = 0; i < 32; ++i)
    if (mask & (1u << i)) s += (s.empty() ? "" : ";") + std::to_string(i);
  return s;
}

// ---- train ---------------------------------------------------------------

struct TrainOptions {
  std::string data;
  std::string labels;
  size_t dim = 2;
  int classes = 10;
  size_t samples = 1200;
  double spread = 0.1;
  std::vector<size_t> hidden{32};
  std::string activation = "relu";
  double lr = 0.05;
  int epochs = 20;
  size_t holdout = 0;
  std::string model_out = "model.json";
  bool export_data = false;
  uint64_t seed = 0;
};

int run_train(const CLI::App* app, const TrainOptions& o, const fs::path& out) {
  ArtifactWriter writer(out, provenance(app));
  DatasetPtr all;
  if (!o.data.empty()) {
    all = load_data(o.data, o.labels);
  } else {
    sal_blob_config blobs{o.dim, o.classes, o.samples, o.spread, o.seed};
    sal_dataset* d = nullptr;
    check(sal_dataset_make_blobs(&blobs, &d), "generating data");
    all.reset(d);
  }
  sal_dataset* head = nullptr;
  sal_dataset* tail = nullptr;
  check(sal_dataset_split(all.get(), o.holdout, &head, &tail), "splitting data");
  DatasetPtr train(head), held(tail);

  const size_t input_dim = sal_dataset_dim(train.get());
  int max_label = 0;
  for (const auto& s : read_samples(train.get(), 0)) max_label = std::max(max_label, s.label);
  const size_t classes =
      o.data.empty() ? static_cast<size_t>(o.classes) : static_cast<size_t>(max_label) + 1;
  std::vector<size_t> dims{input_dim};
  dims.insert(dims.end(), o.hidden.begin(), o.hidden.end());
  dims.push_back(std::max<size_t>(classes, 2));
  const sal_activation hidden_act = o.activation == "sigmoid" ? SAL_SIGMOID
                                    : o.activation == "identity" ? SAL_IDENTITY
                                                                 : SAL_RELU;
  std::vector<sal_activation> acts(o.hidden.size(), hidden_act);
  acts.push_back(SAL_IDENTITY);

  sal_model* m = nullptr;
  check(sal_model_create(dims.data(), acts.data(), acts.size(), o.seed, &m), "creating model");
  ModelPtr model(m);
  sal_train_config tc{o.lr, o.epochs, o.seed};
  double train_acc = 0.0, loss = 0.0;
  check(sal_train(model.get(), train.get(), &tc, &train_acc, &loss), "training");
  double held_acc = 0.0;
  if (sal_dataset_size(held.get()) > 0)
    check(sal_accuracy(model.get(), held.get(), &held_acc), "evaluating");

  const std::string prov = writer.provenance().dump();
  check(sal_model_save_with_provenance(model.get(), writer.path(o.model_out).c_str(),
                                       prov.c_str()),
        "saving model");
  if (o.export_data) {
    check(sal_dataset_save_csv(train.get(), writer.path("train.csv").c_str()), "saving train.csv");
    if (sal_dataset_size(held.get()) > 0)
      check(sal_dataset_save_csv(held.get(), writer.path("holdout.csv").c_str()),
            "saving holdout.csv");
  }
  writer.csv("train_metrics.csv", "train_samples,holdout_samples,train_accuracy,holdout_accuracy,final_loss",
             {std::to_string(sal_dataset_size(train.get())) + "," +
              std::to_string(sal_dataset_size(held.get())) + "," + num(train_acc) + "," +
              num(held_acc) + "," + num(loss)});
  std::cout << "trained " << writer.path(o.model_out) << ": train_accuracy="
            << short_num(train_acc) << " holdout_accuracy=" << short_num(held_acc)
            << " loss=" << short_num(loss) << "\n";
  return 0;
}

// ---- interpret -----------------------------------------------------------

struct InterpretOptions {
  InputOptions in;
  MethodOptions method;
  size_t width = 0;
  size_t height = 0;
  int jobs = 1;
  bool trace = false;
  bool spectrum = false;
};

int run_interpret(const CLI::App* app, const InterpretOptions& o, const fs::path& out) {
  const sal_method_params params = o.method.resolve();
  ModelPtr model = load_model(o.in.model);
  DatasetPtr data = load_data(o.in.input, o.in.labels);
  const std::vector<Sample> samples = read_samples(data.get(), o.in.limit);
  const size_t dim = sal_model_input_dim(model.get());
  const Geometry geo = resolve_geometry(dim, o.method.channels, o.width, o.height);
  if (o.spectrum && !sal_model_is_piecewise_linear(model.get()))
    throw UsageError("--spectrum needs a relu network");
  ArtifactWriter writer(out, provenance(app));

  auto results = run_batched<ResultPtr>(samples.size(), o.jobs, [&](size_t i) {
    sal_result* r = nullptr;
    check(sal_interpret(model.get(), samples[i].x.data(), samples[i].x.size(),
                        samples[i].label, &params, &r),
          "sample " + std::to_string(i));
    return ResultPtr(r);
  });

  std::vector<std::string> rows;
  for (size_t i = 0; i < results.size(); ++i) {
    const sal_result* r = results[i].get();
    const std::string stem = "sample" + std::to_string(i);
    const std::vector<double> a = attribution_of(r);
    const sal_result_info info = info_of(r);
    writer.pgm(stem + ".pgm", display_map(a, geo, o.method.channels), geo.width, geo.height);
    writer.raw(stem + ".f64", 1, a.size(), a);
    json body = info_json(info);
    body["sample_id"] = i;
    body["label"] = samples[i].label;
    body["width"] = geo.width;
    body["height"] = geo.height;
    writer.json_file(stem + ".json", body);
    if (o.trace) {
      std::vector<std::string> trace;
      for (size_t t = 0; t < sal_result_trace_length(r); ++t) {
        double obj = 0.0, step = 0.0;
        size_t nnz = 0;
        check(sal_result_trace(r, t, &obj, &step, &nnz), "reading trace");
        trace.push_back(std::to_string(t) + "," + num(obj) + "," + num(step) + "," +
                        std::to_string(nnz));
      }
      writer.csv(stem + "_trace.csv", "iteration,objective,step_size,nnz", trace);
    }
    if (o.spectrum) {
      size_t k = 0;
      sal_hessian_spectrum(model.get(), samples[i].x.data(), dim, nullptr, nullptr, 0, &k);
      std::vector<double> values(k), vectors(k * dim);
      check(sal_hessian_spectrum(model.get(), samples[i].x.data(), dim, values.data(),
                                 vectors.data(), k, &k),
            "computing spectrum");
      std::vector<std::string> spec_rows;
      for (size_t j = 0; j < k; ++j) spec_rows.push_back(std::to_string(j) + "," + num(values[j]));
      writer.csv(stem + "_spectrum.csv", "index,eigenvalue", spec_rows);
      writer.raw(stem + "_eigenvectors.f64", k, dim, vectors);
    }
    rows.push_back(std::to_string(i) + "," + sal_method_name(info.method) + "," +
                   num(info.lambda1) + "," + num(info.lambda2) + "," + num(info.sparsity) +
                   "," + num(info.loss_gain) + "," + num(info.confidence) + "," +
                   std::to_string(info.predicted) + "," + std::to_string(info.target) + "," +
                   std::to_string(info.kink_warning) + "," + std::to_string(info.solver_flag));
    std::cout << stem << ": method=" << sal_method_name(info.method)
              << " predicted=" << info.predicted << " p_max=" << short_num(info.confidence)
              << " lambda1=" << short_num(info.lambda1) << " eta=" << short_num(info.sparsity)
              << " loss_gain=" << short_num(info.loss_gain)
              << (info.kink_warning ? " kink_warning" : "")
              << (info.solver_flag ? " solver_flag" : "") << "\n";
  }
  writer.csv("metrics.csv",
             "sample_id,method,lambda1,lambda2,eta,loss_gain,p_max,predicted,target,"
             "kink_warning,solver_flag",
             rows);
  return 0;
}

// ---- sweep ---------------------------------------------------------------

struct SweepOptions {
  InputOptions in;
  MethodOptions method;
  std::string grid = "default";
  double eta_low = 0.75;
  double eta_high = 1.0;
  int max_refinements = 20;
  size_t width = 0;
  size_t height = 0;
  int jobs = 1;
};

int run_sweep(const CLI::App* app, const SweepOptions& o, const fs::path& out) {
  const sal_method_params params = o.method.resolve();
  std::vector<double> grid;
  if (o.grid == "default") {
    grid.resize(sal_default_grid(nullptr, 0));
    sal_default_grid(grid.data(), grid.size());
  } else {
    grid = parse_range(o.grid);
  }
  for (double v : grid)
    if (!(v >= 0.0)) throw UsageError("grid values must be non-negative");
  sal_sweep_config cfg;
  sal_sweep_config_default(&cfg);
  cfg.grid = grid.data();
  cfg.grid_length = grid.size();
  cfg.eta_low = o.eta_low;
  cfg.eta_high = o.eta_high;
  cfg.max_refinements = o.max_refinements;
  cfg.jobs = o.jobs;

  ModelPtr model = load_model(o.in.model);
  DatasetPtr data = load_data(o.in.input, o.in.labels);
  const std::vector<Sample> samples = read_samples(data.get(), o.in.limit);
  const size_t dim = sal_model_input_dim(model.get());
  const Geometry geo = resolve_geometry(dim, o.method.channels, o.width, o.height);
  ArtifactWriter writer(out, provenance(app));

  json per_sample = json::array();
  std::vector<std::string> rows;
  for (size_t i = 0; i < samples.size(); ++i) {
    sal_sweep* s = nullptr;
    check(sal_sweep_run(model.get(), samples[i].x.data(), dim, samples[i].label, &params,
                        &cfg, &s),
          "sweeping sample " + std::to_string(i));
    SweepPtr sweep(s);
    size_t selected = 0;
    int found = 0, reached = 0;
    check(sal_sweep_selected(sweep.get(), &selected, &found, &reached), "reading sweep");
    json candidates = json::array();
    for (size_t j = 0; j < sal_sweep_count(sweep.get()); ++j) {
      const sal_result_info info = info_of(sal_sweep_candidate(sweep.get(), j));
      candidates.push_back({{"lambda1", info.lambda1},
                            {"lambda2", info.lambda2},
                            {"eta", info.sparsity},
                            {"loss_gain", info.loss_gain},
                            {"solver_flag", info.solver_flag != 0}});
    }
    std::vector<double> refinements(sal_sweep_refinements(sweep.get(), nullptr, 0));
    sal_sweep_refinements(sweep.get(), refinements.data(), refinements.size());
    json entry{{"sample_id", i},
               {"candidates", candidates},
               {"refinements", refinements},
               {"target_reached", reached != 0}};
    entry["selected"] = found ? json(selected) : json(nullptr);
    per_sample.push_back(entry);

    const std::string stem = "sample" + std::to_string(i);
    if (found) {
      const sal_result* best = sal_sweep_candidate(sweep.get(), selected);
      const sal_result_info info = info_of(best);
      const std::vector<double> a = attribution_of(best);
      writer.pgm(stem + ".pgm", display_map(a, geo, o.method.channels), geo.width, geo.height);
      writer.raw(stem + ".f64", 1, a.size(), a);
      rows.push_back(std::to_string(i) + "," + sal_method_name(info.method) + "," +
                     num(info.lambda1) + "," + num(info.lambda2) + "," + num(info.sparsity) +
                     "," + num(info.loss_gain) + "," + num(info.confidence) + "," +
                     std::to_string(reached));
      std::cout << stem << ": selected lambda1=" << short_num(info.lambda1)
                << " eta=" << short_num(info.sparsity)
                << " loss_gain=" << short_num(info.loss_gain)
                << (reached ? "" : " (outside target range)") << "\n";
    } else {
      std::cout << stem << ": no non-zero candidate\n";
    }
  }
  writer.json_file("sweep.json", json{{"method", o.method.method},
                                      {"grid", grid},
                                      {"eta_low", o.eta_low},
                                      {"eta_high", o.eta_high},
                                      {"samples", per_sample}});
  writer.csv("metrics.csv", "sample_id,method,lambda1,lambda2,eta,loss_gain,p_max,target_reached",
             rows);
  return 0;
}

// ---- analysis subcommands ------------------------------------------------

struct RankOneOptions {
  std::string mode = "vary-classes";
  double p0 = 0.9999;
  std::string classes;
  std::string eps;
  size_t d = 512;
  uint64_t seed = 7;
};

int run_rank_one(const CLI::App* app, const RankOneOptions& o, const fs::path& out) {
  sal_rank_one_config cfg{};
  if (o.mode == "vary-classes")
    cfg.mode = SAL_VARY_CLASSES;
  else if (o.mode == "vary-eps")
    cfg.mode = SAL_VARY_EPS;
  else
    cfg.mode = SAL_GRID;
  const std::string classes_text =
      !o.classes.empty() ? o.classes : cfg.mode == SAL_VARY_EPS ? "100" : "10,50,100,500,1000";
  const std::string eps_text = !o.eps.empty() ? o.eps : "5e-3,1e-3,1e-4,1e-5,1e-6";
  const std::vector<size_t> classes = parse_counts(classes_text);
  const std::vector<double> eps = parse_range(eps_text);
  cfg.p0 = o.p0;
  cfg.classes = classes.data();
  cfg.n_classes = classes.size();
  cfg.eps = eps.data();
  cfg.n_eps = eps.size();
  cfg.dim = o.d;
  cfg.seed = o.seed;
  ArtifactWriter writer(out, provenance(app));
  size_t n = 0;
  sal_rank_one_sim(&cfg, nullptr, 0, &n);
  std::vector<sal_rank_one_row> result(n);
  check(sal_rank_one_sim(&cfg, result.data(), result.size(), &n), "rank-one simulation");
  std::vector<std::string> rows;
  for (const auto& r : result) {
    rows.push_back(std::to_string(r.classes) + "," + num(r.eps) + "," + num(r.rel_error));
    std::cout << "c=" << r.classes << " eps=" << short_num(r.eps)
              << " rel_error=" << short_num(r.rel_error) << "\n";
  }
  writer.csv("rank1.csv", "c,eps,rel_error", rows);
  return 0;
}

struct GapOptions {
  std::string model;
  std::string data;
  std::string labels;
  size_t samples = 0;
  MethodOptions method;
};

int run_gap(const CLI::App* app, const GapOptions& o, const fs::path& out) {
  const sal_method_params params = o.method.resolve();
  ModelPtr model = load_model(o.model);
  DatasetPtr data = load_data(o.data, o.labels);
  const size_t samples = o.samples > 0 ? o.samples : sal_dataset_size(data.get());
  ArtifactWriter writer(out, provenance(app));
  size_t n = 0;
  std::vector<sal_gap_row> result(std::min(samples, sal_dataset_size(data.get())));
  check(sal_gap_study(model.get(), data.get(), samples, &params, result.data(), result.size(),
                      &n),
        "gap study");
  result.resize(n);
  std::vector<std::string> rows;
  std::vector<double> conf, gap;
  for (const auto& r : result) {
    rows.push_back(std::to_string(r.sample_id) + "," + num(r.confidence) + "," + num(r.gap) +
                   "," + std::to_string(r.skipped));
    if (!r.skipped) {
      conf.push_back(r.confidence);
      gap.push_back(r.gap);
    }
  }
  writer.csv("gap.csv", "sample_id,p_max,gap,skipped", rows);
  double rho = std::nan("");
  if (conf.size() >= 2) check(sal_spearman(conf.data(), gap.data(), conf.size(), &rho), "spearman");
  writer.json_file("gap_summary.json",
                   json{{"samples", result.size()},
                        {"used", conf.size()},
                        {"spearman", std::isnan(rho) ? json(nullptr) : json(rho)}});
  std::cout << "samples=" << result.size() << " used=" << conf.size()
            << " spearman=" << short_num(rho) << "\n";
  return 0;
}

struct AlignmentOptions {
  size_t d = 512;
  std::string classes = "10,100,1000";
  double eps = 1e-8;
  uint64_t seed = 7;
};

int run_alignment(const CLI::App* app, const AlignmentOptions& o, const fs::path& out) {
  const std::vector<size_t> classes = parse_counts(o.classes);
  ArtifactWriter writer(out, provenance(app));
  std::vector<sal_alignment_row> result(classes.size());
  size_t n = 0;
  check(sal_alignment_curve(o.d, classes.data(), classes.size(), o.eps, o.seed, result.data(),
                            result.size(), &n),
        "alignment curve");
  std::vector<std::string> rows;
  for (const auto& r : result) {
    rows.push_back(std::to_string(r.classes) + "," + num(r.cosine) + "," + num(r.mass_ratio) +
                   "," + num(r.energy_ratio));
    std::cout << "c=" << r.classes << " cosine=" << short_num(r.cosine)
              << " mass_ratio=" << short_num(r.mass_ratio)
              << " energy_ratio=" << short_num(r.energy_ratio) << "\n";
  }
  writer.csv("alignment.csv", "c,cosine,mass_ratio,energy_ratio", rows);
  return 0;
}

struct OracleOptions {
  sal_oracle_config cfg{};
  OracleOptions() { sal_oracle_config_default(&cfg); }
};

int run_oracle(const CLI::App* app, const OracleOptions& o, const fs::path& out) {
  ArtifactWriter writer(out, provenance(app));
  std::vector<sal_oracle_row> result(static_cast<size_t>(std::max(o.cfg.instances, 0)));
  size_t n = 0;
  check(sal_oracle_check(&o.cfg, result.data(), result.size(), &n), "oracle check");
  std::vector<std::string> rows;
  int matches = 0;
  for (const auto& r : result) {
    matches += r.l1_match;
    rows.push_back(std::to_string(r.instance) + "," + support_string(r.planted_mask) + "," +
                   support_string(r.oracle_mask) + "," + num(r.oracle_value) + "," +
                   support_string(r.l1_mask) + "," + num(r.l1_value) + "," +
                   num(r.best_lambda1) + "," + std::to_string(r.l1_match) + "," +
                   std::to_string(r.dominance));
  }
  writer.csv("oracle.csv",
             "instance,planted,support,value,l1_support,l1_value,best_lambda1,l1_match,dominance",
             rows);
  std::cout << "instances=" << result.size() << " l1_match=" << matches << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curvature-aware saliency maps for small feedforward classifiers"};
  app.set_version_flag("--version", std::string(sal_version()));
  app.set_config("--config", "", "TOML/INI file with option values");
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.fallthrough();

  std::string out_dir = ".";
  app.add_option("--out", out_dir, "output directory")->envname("SALIENCY_OUT_DIR");

  TrainOptions train;
  CLI::App* train_cmd = app.add_subcommand("train", "train a classifier");
  train_cmd->add_option("--data", train.data, "CSV dataset, or raw f32 tensor with --labels")
      ->check(CLI::ExistingFile);
  train_cmd->add_option("--labels", train.labels, "raw i32 label sidecar")->check(CLI::ExistingFile);
  train_cmd->add_option("--dim", train.dim, "synthetic input dim")->check(CLI::PositiveNumber);
  train_cmd->add_option("--classes", train.classes, "synthetic class count")->check(CLI::Range(2, 1 << 20));
  train_cmd->add_option("--samples", train.samples, "synthetic sample count")->check(CLI::PositiveNumber);
  train_cmd->add_option("--spread", train.spread, "synthetic cluster spread")->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--hidden", train.hidden, "hidden layer widths")->delimiter(',');
  train_cmd->add_option("--activation", train.activation, "hidden activation")
      ->check(CLI::IsMember({"relu", "sigmoid", "identity"}));
  train_cmd->add_option("--lr", train.lr, "SGD learning rate")->check(CLI::PositiveNumber);
  train_cmd->add_option("--epochs", train.epochs, "SGD epochs")->check(CLI::PositiveNumber);
  train_cmd->add_option("--holdout", train.holdout, "samples held out from the end");
  train_cmd->add_option("--model-out", train.model_out, "model file name in the output directory");
  train_cmd->add_flag("--export-data", train.export_data, "write train.csv and holdout.csv");
  train_cmd->add_option("--seed", train.seed, "random seed");

  InterpretOptions interp;
  CLI::App* interp_cmd = app.add_subcommand("interpret", "compute saliency maps");
  interp.in.add(interp_cmd, "--input");
  interp.method.add(interp_cmd, true);
  interp_cmd->get_option("--method")->required();
  interp_cmd->add_option("--width", interp.width, "map width");
  interp_cmd->add_option("--height", interp.height, "map height");
  interp_cmd->add_option("--jobs", interp.jobs, "samples processed concurrently")->check(CLI::PositiveNumber);
  interp_cmd->add_flag("--trace", interp.trace, "write per-iteration solver traces");
  interp_cmd->add_flag("--spectrum", interp.spectrum, "write the Hessian spectrum");

  SweepOptions sweep;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "search lambda1 for a target sparsity");
  sweep.in.add(sweep_cmd, "--input");
  sweep.method.add(sweep_cmd, false);
  sweep_cmd->add_option("--grid", sweep.grid, "'default', a comma list, or lo:hi:log[:n]");
  sweep_cmd->add_option("--eta-low", sweep.eta_low, "lower sparsity bound")->check(CLI::Range(0.0, 1.0));
  sweep_cmd->add_option("--eta-high", sweep.eta_high, "upper sparsity bound")->check(CLI::Range(0.0, 1.0));
  sweep_cmd->add_option("--max-refinements", sweep.max_refinements, "refinement budget")
      ->check(CLI::NonNegativeNumber);
  sweep_cmd->add_option("--width", sweep.width, "map width");
  sweep_cmd->add_option("--height", sweep.height, "map height");
  sweep_cmd->add_option("--jobs", sweep.jobs, "grid points solved concurrently")->check(CLI::PositiveNumber);

  RankOneOptions rank1;
  CLI::App* rank1_cmd = app.add_subcommand("rank1-sim", "rank-one Hessian approximation error");
  rank1_cmd->add_option("--mode", rank1.mode)->check(CLI::IsMember({"vary-classes", "vary-eps", "grid"}));
  rank1_cmd->add_option("--p0", rank1.p0, "top-class probability (vary-classes)")
      ->check(CLI::Range(0.0, 1.0));
  rank1_cmd->add_option("--classes", rank1.classes, "comma list or lo:hi:log[:n]");
  rank1_cmd->add_option("--eps", rank1.eps, "comma list or lo:hi:log:n");
  rank1_cmd->add_option("--d", rank1.d, "input dim")->check(CLI::PositiveNumber);
  rank1_cmd->add_option("--seed", rank1.seed, "random seed");

  GapOptions gap;
  CLI::App* gap_cmd = app.add_subcommand("gap-study", "CASO/CAFO gap versus confidence");
  gap_cmd->add_option("--model", gap.model, "model JSON")->required()->check(CLI::ExistingFile);
  gap_cmd->add_option("--data", gap.data, "CSV dataset, or raw f32 tensor with --labels")
      ->required()
      ->check(CLI::ExistingFile);
  gap_cmd->add_option("--labels", gap.labels, "raw i32 label sidecar")->check(CLI::ExistingFile);
  gap_cmd->add_option("--samples", gap.samples, "samples to use (0 = all)");
  gap.method.add(gap_cmd, false);

  AlignmentOptions align;
  CLI::App* align_cmd = app.add_subcommand("alignment", "top eigenvector versus gradient");
  align_cmd->add_option("--d", align.d, "input dim")->check(CLI::PositiveNumber);
  align_cmd->add_option("--classes", align.classes, "comma list or lo:hi:log[:n]");
  align_cmd->add_option("--eps", align.eps, "non-top class probability")->check(CLI::PositiveNumber);
  align_cmd->add_option("--seed", align.seed, "random seed");

  OracleOptions oracle;
  CLI::App* oracle_cmd = app.add_subcommand("oracle-check", "L0 oracle versus L1 path");
  oracle_cmd->add_option("--d", oracle.cfg.dim, "input dim")->check(CLI::Range(1, 14));
  oracle_cmd->add_option("--k", oracle.cfg.support, "planted support size")->check(CLI::PositiveNumber);
  oracle_cmd->add_option("--instances", oracle.cfg.instances, "instances")->check(CLI::PositiveNumber);
  oracle_cmd->add_option("--coupling", oracle.cfg.coupling, "off-diagonal Hessian scale")
      ->check(CLI::NonNegativeNumber);
  oracle_cmd->add_option("--c1", oracle.cfg.c1, "offset added to L/2 for lambda2")->check(CLI::PositiveNumber);
  oracle_cmd->add_option("--iters", oracle.cfg.solver_iterations, "solver iterations")
      ->check(CLI::PositiveNumber);
  oracle_cmd->add_option("--seed", oracle.cfg.seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  const fs::path out(out_dir);
  try {
    if (*train_cmd) return run_train(train_cmd, train, out);
    if (*interp_cmd) return run_interpret(interp_cmd, interp, out);
    if (*sweep_cmd) return run_sweep(sweep_cmd, sweep, out);
    if (*rank1_cmd) return run_rank_one(rank1_cmd, rank1, out);
    if (*gap_cmd) return run_gap(gap_cmd, gap, out);
    if (*align_cmd) return run_alignment(align_cmd, align, out);
    if (*oracle_cmd) return run_oracle(oracle_cmd, oracle, out);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
