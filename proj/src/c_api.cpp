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

#include "saliency/saliency.h"

#include <fstream>
#include <memory>
#include <new>
#include <string>

#include "json.hpp"
#include "saliency/analysis.hpp"
#include "saliency/error.hpp"
#include "saliency/hessian.hpp"
#include "saliency/interpret.hpp"
#include "saliency/io.hpp"
#include "saliency/synthetic.hpp"

struct sal_model {
  saliency::Network net;
};

struct sal_dataset {
  saliency::Dataset data;
};

struct sal_result {
  saliency::SaliencyResult result;
};

struct sal_sweep {
  saliency::SweepOutcome outcome;
  std::vector<sal_result> candidates;
};

namespace {

using saliency::ErrorCode;
using saliency::Index;
using saliency::VectorXd;

thread_local std::string g_last_error;

sal_status set_error(sal_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs fn, mapping exceptions onto status codes.
template <typename Fn>
sal_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return SAL_OK;
  } catch (const saliency::Error& e) {
    return set_error(static_cast<sal_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(SAL_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(SAL_ERR_INTERNAL, e.what());
  }
}

void need(const void* ptr, const char* what) {
  if (ptr == nullptr)
    saliency::fail(ErrorCode::kInvalidArgument, std::string(what) + " is NULL");
}

VectorXd copy_vector(const double* x, size_t dim, Index expected,
                     const char* what) {
  need(x, what);
  if (static_cast<Index>(dim) != expected)
    saliency::fail(ErrorCode::kDimensionMismatch,
                   std::string(what) + " has length " + std::to_string(dim) +
                       ", expected " + std::to_string(expected));
  return Eigen::Map<const VectorXd>(x, static_cast<Index>(dim));
}

void check_capacity(size_t needed, size_t capacity, size_t* count) {
  if (count) *count = needed;
  if (capacity < needed)
    saliency::fail(ErrorCode::kInvalidArgument,
                   "buffer capacity " + std::to_string(capacity) +
                       " is smaller than the required " + std::to_string(needed));
}

saliency::Activation to_activation(sal_activation a) {
  switch (a) {
    case SAL_RELU:
      return saliency::Activation::kRelu;
    case SAL_SIGMOID:
      return saliency::Activation::kSigmoid;
    case SAL_IDENTITY:
      return saliency::Activation::kIdentity;
  }
  saliency::fail(ErrorCode::kInvalidArgument, "unknown activation");
}

saliency::Method to_method(sal_method m) {
  if (m < SAL_METHOD_GRAD || m > SAL_METHOD_SMOOTH_CASO)
    saliency::fail(ErrorCode::kInvalidArgument, "unknown method");
  return static_cast<saliency::Method>(m);
}

saliency::MethodParams to_params(const sal_method_params* p, Index dim) {
  need(p, "params");
  saliency::MethodParams out;
  out.lambda1 = p->lambda1;
  out.c1 = p->c1;
  out.smoothing_samples = p->smoothing_samples;
  out.smoothing_sigma = p->smoothing_sigma;
  out.ig_steps = p->ig_steps;
  if (p->baseline) out.baseline = Eigen::Map<const VectorXd>(p->baseline, dim);
  out.seed = p->seed;
  out.power.iterations = p->power_iterations;
  out.power.tolerance = p->power_tolerance;
  out.power.seed = p->seed;
  out.solver.learning_rate = p->learning_rate;
  out.solver.iterations = p->solver_iterations;
  out.solver.backtrack_decay = p->backtrack_decay;
  out.solver.max_backtracks = p->max_backtracks;
  out.channels_per_pixel = static_cast<Index>(p->channels_per_pixel);
  out.target = p->target == SAL_TARGET_LABEL ? saliency::Target::kLabel
                                             : saliency::Target::kPredicted;
  saliency::validate(out);
  return out;
}

saliency::Sample make_sample(const sal_model* model, const double* x,
                             size_t dim, int label) {
  need(model, "model");
  saliency::Sample s;
  s.x = copy_vector(x, dim, model->net.input_dim(), "x");
  s.label = label;
  return s;
}

}  // namespace

extern "C" {

const char* sal_version(void) { return "1.0.0"; }

const char* sal_last_error(void) { return g_last_error.c_str(); }

const char* sal_status_name(sal_status status) {
  return saliency::error_code_name(static_cast<ErrorCode>(status));
}

sal_status sal_model_create(const size_t* dims,
                            const sal_activation* activations, size_t n_layers,
                            uint64_t seed, sal_model** out) {
  return guarded([&] {
    need(dims, "dims");
    need(activations, "activations");
    need(out, "out");
    std::vector<saliency::LayerSpec> spec;
    for (size_t i = 0; i < n_layers; ++i)
      spec.push_back({static_cast<Index>(dims[i]), static_cast<Index>(dims[i + 1]),
                      to_activation(activations[i])});
    *out = new sal_model{saliency::Network::random(spec, seed)};
  });
}

sal_status sal_model_load(const char* path, sal_model** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new sal_model{saliency::load_model(path)};
  });
}

sal_status sal_model_save(const sal_model* model, const char* path) {
  return sal_model_save_with_provenance(model, path, nullptr);
}

sal_status sal_model_save_with_provenance(const sal_model* model,
                                          const char* path,
                                          const char* provenance_json) {
  return guarded([&] {
    need(model, "model");
    need(path, "path");
    if (provenance_json == nullptr) {
      saliency::save_model(model->net, path);
      return;
    }
    nlohmann::json doc = nlohmann::json::parse(saliency::model_to_json(model->net));
    try {
      doc["provenance"] = nlohmann::json::parse(provenance_json);
    } catch (const nlohmann::json::parse_error& e) {
      saliency::fail(ErrorCode::kInvalidArgument,
                     std::string("provenance is not valid JSON: ") + e.what());
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) saliency::fail(ErrorCode::kIo, std::string("cannot write ") + path);
    file << doc.dump(1);
    if (!file) saliency::fail(ErrorCode::kIo, std::string("write failed: ") + path);
  });
}

void sal_model_free(sal_model* model) { delete model; }

size_t sal_model_input_dim(const sal_model* model) {
  return model ? static_cast<size_t>(model->net.input_dim()) : 0;
}

size_t sal_model_num_classes(const sal_model* model) {
  return model ? static_cast<size_t>(model->net.num_classes()) : 0;
}

int sal_model_is_piecewise_linear(const sal_model* model) {
  return model && model->net.piecewise_linear() ? 1 : 0;
}

sal_status sal_model_predict(const sal_model* model, const double* x,
                             size_t dim, double* probabilities, size_t classes,
                             int* predicted) {
  return guarded([&] {
    const saliency::Sample s = make_sample(model, x, dim, 0);
    const saliency::ForwardTrace trace = saliency::forward(model->net, s.x, 0);
    if (probabilities) {
      if (static_cast<Index>(classes) != trace.probabilities.size())
        saliency::fail(ErrorCode::kDimensionMismatch,
                       "probability buffer has the wrong length");
      for (Index i = 0; i < trace.probabilities.size(); ++i)
        probabilities[i] = trace.probabilities[i];
    }
    if (predicted) *predicted = trace.predicted();
  });
}

sal_status sal_dataset_load_csv(const char* path, sal_dataset** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new sal_dataset{saliency::load_csv_dataset(path)};
  });
}

sal_status sal_dataset_load_raw(const char* tensor_path, const char* label_path,
                                sal_dataset** out) {
  return guarded([&] {
    need(tensor_path, "tensor_path");
    need(label_path, "label_path");
    need(out, "out");
    *out = new sal_dataset{saliency::load_raw_dataset(tensor_path, label_path)};
  });
}

sal_status sal_dataset_make_blobs(const sal_blob_config* config,
                                  sal_dataset** out) {
  return guarded([&] {
    need(config, "config");
    need(out, "out");
    saliency::BlobConfig c;
    c.dim = static_cast<Index>(config->dim);
    c.classes = config->classes;
    c.samples = config->samples;
    c.spread = config->spread;
    c.seed = config->seed;
    *out = new sal_dataset{saliency::make_blobs(c)};
  });
}

sal_status sal_dataset_split(const sal_dataset* data, size_t holdout,
                             sal_dataset** head, sal_dataset** tail) {
  return guarded([&] {
    need(data, "data");
    need(head, "head");
    need(tail, "tail");
    auto [first, second] = saliency::split_holdout(data->data, holdout);
    auto h = std::make_unique<sal_dataset>(sal_dataset{std::move(first)});
    auto t = std::make_unique<sal_dataset>(sal_dataset{std::move(second)});
    *head = h.release();
    *tail = t.release();
  });
}

sal_status sal_dataset_save_csv(const sal_dataset* data, const char* path) {
  return guarded([&] {
    need(data, "data");
    need(path, "path");
    saliency::save_csv_dataset(data->data, path);
  });
}

sal_status sal_dataset_save_raw(const sal_dataset* data, const char* tensor_path,
                                const char* label_path) {
  return guarded([&] {
    need(data, "data");
    need(tensor_path, "tensor_path");
    need(label_path, "label_path");
    saliency::save_raw_dataset(data->data, tensor_path, label_path);
  });
}

void sal_dataset_free(sal_dataset* data) { delete data; }

size_t sal_dataset_size(const sal_dataset* data) {
  return data ? data->data.size() : 0;
}

size_t sal_dataset_dim(const sal_dataset* data) {
  return data && !data->data.empty()
             ? static_cast<size_t>(data->data.front().x.size())
             : 0;
}

sal_status sal_dataset_sample(const sal_dataset* data, size_t index, double* x,
                              size_t dim, int* label) {
  return guarded([&] {
    need(data, "data");
    if (index >= data->data.size())
      saliency::fail(ErrorCode::kInvalidArgument, "sample index out of range");
    const saliency::Sample& s = data->data[index];
    if (x) {
      if (static_cast<Index>(dim) != s.x.size())
        saliency::fail(ErrorCode::kDimensionMismatch, "sample buffer has the wrong length");
      for (Index i = 0; i < s.x.size(); ++i) x[i] = s.x[i];
    }
    if (label) *label = s.label;
  });
}

sal_status sal_train(sal_model* model, const sal_dataset* data,
                     const sal_train_config* config, double* train_accuracy,
                     double* final_loss) {
  return guarded([&] {
    need(model, "model");
    need(data, "data");
    need(config, "config");
    saliency::TrainConfig c;
    c.learning_rate = config->learning_rate;
    c.epochs = config->epochs;
    c.seed = config->seed;
    saliency::TrainResult r = saliency::train_sgd(model->net, data->data, c);
    model->net = std::move(r.network);
    if (train_accuracy) *train_accuracy = r.train_accuracy;
    if (final_loss) *final_loss = r.final_loss;
  });
}

sal_status sal_accuracy(const sal_model* model, const sal_dataset* data,
                        double* accuracy) {
  return guarded([&] {
    need(model, "model");
    need(data, "data");
    need(accuracy, "accuracy");
    *accuracy = saliency::accuracy(model->net, data->data);
  });
}

void sal_method_params_default(sal_method_params* params) {
  if (!params) return;
  const saliency::MethodParams d;
  params->method = SAL_METHOD_CAFO;
  params->lambda1 = d.lambda1;
  params->c1 = d.c1;
  params->smoothing_samples = d.smoothing_samples;
  params->smoothing_sigma = d.smoothing_sigma;
  params->ig_steps = d.ig_steps;
  params->baseline = nullptr;
  params->seed = d.seed;
  params->power_iterations = d.power.iterations;
  params->power_tolerance = d.power.tolerance;
  params->learning_rate = d.solver.learning_rate;
  params->solver_iterations = d.solver.iterations;
  params->backtrack_decay = d.solver.backtrack_decay;
  params->max_backtracks = d.solver.max_backtracks;
  params->channels_per_pixel = static_cast<size_t>(d.channels_per_pixel);
  params->target = SAL_TARGET_PREDICTED;
}

sal_status sal_method_from_name(const char* name, sal_method* out) {
  return guarded([&] {
    need(name, "name");
    need(out, "out");
    *out = static_cast<sal_method>(saliency::parse_method(name));
  });
}

const char* sal_method_name(sal_method method) {
  if (method < SAL_METHOD_GRAD || method > SAL_METHOD_SMOOTH_CASO) return "unknown";
  return saliency::method_name(static_cast<saliency::Method>(method)).data();
}

sal_status sal_interpret(const sal_model* model, const double* x, size_t dim,
                         int label, const sal_method_params* params,
                         sal_result** out) {
  return guarded([&] {
    need(out, "out");
    const saliency::Sample s = make_sample(model, x, dim, label);
    const saliency::MethodParams p = to_params(params, model->net.input_dim());
    *out = new sal_result{
        saliency::interpret(model->net, s, to_method(params->method), p)};
  });
}

void sal_result_free(sal_result* result) { delete result; }

size_t sal_result_dim(const sal_result* result) {
  return result ? static_cast<size_t>(result->result.attribution.size()) : 0;
}

sal_status sal_result_attribution(const sal_result* result, double* out,
                                  size_t dim) {
  return guarded([&] {
    need(result, "result");
    need(out, "out");
    const VectorXd& a = result->result.attribution;
    if (static_cast<Index>(dim) != a.size())
      saliency::fail(ErrorCode::kDimensionMismatch,
                     "attribution buffer has the wrong length");
    for (Index i = 0; i < a.size(); ++i) out[i] = a[i];
  });
}

sal_status sal_result_info_get(const sal_result* result, sal_result_info* info) {
  return guarded([&] {
    need(result, "result");
    need(info, "info");
    const saliency::SaliencyResult& r = result->result;
    info->method = static_cast<sal_method>(r.method);
    info->sparsity = r.sparsity;
    info->loss_gain = r.loss_gain;
    info->raw_loss_gain = r.raw_loss_gain;
    info->lambda1 = r.lambda1;
    info->lambda2 = r.lambda2;
    info->curvature_bound = r.curvature_bound;
    info->confidence = r.confidence;
    info->predicted = r.predicted;
    info->target = r.target;
    info->iterations = r.solve.iterations;
    info->kink_warning = r.kink_warning ? 1 : 0;
    info->solver_flag = r.solver_flag ? 1 : 0;
  });
}

size_t sal_result_trace_length(const sal_result* result) {
  return result ? result->result.solve.objective_trace.size() : 0;
}

sal_status sal_result_trace(const sal_result* result, size_t iteration,
                            double* objective, double* step_size, size_t* nnz) {
  return guarded([&] {
    need(result, "result");
    const saliency::SolveResult& s = result->result.solve;
    if (iteration >= s.objective_trace.size())
      saliency::fail(ErrorCode::kInvalidArgument, "iteration out of range");
    if (objective) *objective = s.objective_trace[iteration];
    if (step_size) *step_size = s.step_trace[iteration];
    if (nnz) *nnz = static_cast<size_t>(s.nnz_trace[iteration]);
  });
}

void sal_sweep_config_default(sal_sweep_config* config) {
  if (!config) return;
  const saliency::SweepConfig d;
  config->grid = nullptr;
  config->grid_length = 0;
  config->eta_low = d.eta_low;
  config->eta_high = d.eta_high;
  config->max_refinements = d.max_refinements;
  config->jobs = d.jobs;
}

size_t sal_default_grid(double* out, size_t capacity) {
  const auto grid = saliency::default_lambda1_grid();
  if (out)
    for (size_t i = 0; i < grid.size() && i < capacity; ++i) out[i] = grid[i];
  return grid.size();
}

sal_status sal_sweep_run(const sal_model* model, const double* x, size_t dim,
                         int label, const sal_method_params* params,
                         const sal_sweep_config* config, sal_sweep** out) {
  return guarded([&] {
    need(out, "out");
    need(config, "config");
    const saliency::Sample s = make_sample(model, x, dim, label);
    const saliency::MethodParams p = to_params(params, model->net.input_dim());
    saliency::SweepConfig c;
    if (config->grid) c.grid.assign(config->grid, config->grid + config->grid_length);
    c.eta_low = config->eta_low;
    c.eta_high = config->eta_high;
    c.max_refinements = config->max_refinements;
    c.jobs = config->jobs;
    auto sweep = std::make_unique<sal_sweep>();
    sweep->outcome =
        saliency::lambda1_sweep(model->net, s, to_method(params->method), p, c);
    for (const auto& r : sweep->outcome.candidates)
      sweep->candidates.push_back(sal_result{r});
    *out = sweep.release();
  });
}

void sal_sweep_free(sal_sweep* sweep) { delete sweep; }

size_t sal_sweep_count(const sal_sweep* sweep) {
  return sweep ? sweep->candidates.size() : 0;
}

const sal_result* sal_sweep_candidate(const sal_sweep* sweep, size_t index) {
  if (!sweep || index >= sweep->candidates.size()) return nullptr;
  return &sweep->candidates[index];
}

sal_status sal_sweep_selected(const sal_sweep* sweep, size_t* index, int* found,
                              int* target_reached) {
  return guarded([&] {
    need(sweep, "sweep");
    const auto& sel = sweep->outcome.selected;
    if (found) *found = sel.has_value() ? 1 : 0;
    if (index) *index = sel.value_or(0);
    if (target_reached) *target_reached = sweep->outcome.target_reached ? 1 : 0;
  });
}

size_t sal_sweep_refinements(const sal_sweep* sweep, double* out,
                             size_t capacity) {
  if (!sweep) return 0;
  const auto& r = sweep->outcome.refinements;
  if (out)
    for (size_t i = 0; i < r.size() && i < capacity; ++i) out[i] = r[i];
  return r.size();
}

double sal_sparsity_ratio(const double* delta, size_t dim,
                          size_t channels_per_pixel) {
  double eta = -1.0;
  const sal_status st = guarded([&] {
    need(delta, "delta");
    eta = saliency::sparsity_ratio(
        Eigen::Map<const VectorXd>(delta, static_cast<Index>(dim)),
        static_cast<Index>(channels_per_pixel));
  });
  return st == SAL_OK ? eta : -1.0;
}

sal_status sal_hessian_spectrum(const sal_model* model, const double* x,
                                size_t dim, double* eigenvalues,
                                double* eigenvectors, size_t capacity,
                                size_t* count) {
  return guarded([&] {
    const saliency::Sample s = make_sample(model, x, dim, 0);
    if (!model->net.piecewise_linear())
      saliency::fail(ErrorCode::kInvalidArgument,
                     "closed-form spectrum needs a relu/identity network");
    const auto lin = saliency::local_linearization(model->net, s.x);
    const auto h = saliency::hessian_eig(lin.jacobian, lin.probabilities);
    const size_t k = static_cast<size_t>(h.eigenvalues.size());
    check_capacity(k, capacity, count);
    for (size_t i = 0; i < k; ++i) {
      if (eigenvalues) eigenvalues[i] = h.eigenvalues[static_cast<Index>(i)];
      if (eigenvectors)
        for (size_t j = 0; j < dim; ++j)
          eigenvectors[i * dim + j] =
              h.eigenvectors(static_cast<Index>(j), static_cast<Index>(i));
    }
  });
}

sal_status sal_normalize_display(const double* delta, size_t dim, size_t width,
                                 size_t height, size_t channels, double* out) {
  return guarded([&] {
    need(delta, "delta");
    need(out, "out");
    const auto map = saliency::normalize_for_display(
        Eigen::Map<const VectorXd>(delta, static_cast<Index>(dim)),
        static_cast<Index>(width), static_cast<Index>(height),
        static_cast<Index>(channels));
    std::copy(map.values.begin(), map.values.end(), out);
  });
}

sal_status sal_write_pgm(const double* map, size_t width, size_t height,
                         const char* comment, const char* path) {
  return guarded([&] {
    need(map, "map");
    need(path, "path");
    saliency::DisplayMap m;
    m.width = static_cast<Index>(width);
    m.height = static_cast<Index>(height);
    m.values.assign(map, map + width * height);
    std::vector<std::string> comments;
    if (comment) comments.emplace_back(comment);
    saliency::write_pgm(m, path, comments);
  });
}

sal_status sal_write_raw_f64(const char* path, size_t count, size_t dim,
                             const double* data) {
  return guarded([&] {
    need(path, "path");
    if (count * dim > 0) need(data, "data");
    saliency::write_raw_f64(path, static_cast<Index>(count),
                            static_cast<Index>(dim), data);
  });
}

sal_status sal_rank_one_sim(const sal_rank_one_config* config,
                            sal_rank_one_row* rows, size_t capacity,
                            size_t* n_rows) {
  return guarded([&] {
    need(config, "config");
    if (config->n_classes > 0) need(config->classes, "classes");
    if (config->n_eps > 0) need(config->eps, "eps");
    if (config->mode < SAL_VARY_CLASSES || config->mode > SAL_GRID)
      saliency::fail(ErrorCode::kInvalidArgument, "unknown rank-one mode");
    saliency::RankOneSimConfig c;
    c.mode = static_cast<saliency::RankOneMode>(config->mode);
    c.p0 = config->p0;
    for (size_t i = 0; i < config->n_classes; ++i)
      c.classes.push_back(static_cast<Index>(config->classes[i]));
    c.eps.assign(config->eps, config->eps + config->n_eps);
    c.dim = static_cast<Index>(config->dim);
    c.seed = config->seed;
    const auto result = saliency::simulate_rank_one(c);
    check_capacity(result.size(), capacity, n_rows);
    need(rows, "rows");
    for (size_t i = 0; i < result.size(); ++i)
      rows[i] = {static_cast<size_t>(result[i].classes), result[i].eps,
                 result[i].rel_error};
  });
}

sal_status sal_gap_study(const sal_model* model, const sal_dataset* data,
                         size_t samples, const sal_method_params* params,
                         sal_gap_row* rows, size_t capacity, size_t* n_rows) {
  return guarded([&] {
    need(model, "model");
    need(data, "data");
    saliency::GapStudyConfig c;
    c.params = to_params(params, model->net.input_dim());
    const auto result =
        saliency::confidence_gap_study(model->net, data->data, samples, c);
    check_capacity(result.size(), capacity, n_rows);
    need(rows, "rows");
    for (size_t i = 0; i < result.size(); ++i)
      rows[i] = {result[i].sample_id, result[i].confidence, result[i].gap,
                 result[i].skipped ? 1 : 0};
  });
}

sal_status sal_alignment_curve(size_t dim, const size_t* classes,
                               size_t n_classes, double eps, uint64_t seed,
                               sal_alignment_row* rows, size_t capacity,
                               size_t* n_rows) {
  return guarded([&] {
    need(classes, "classes");
    std::vector<Index> cs;
    for (size_t i = 0; i < n_classes; ++i) cs.push_back(static_cast<Index>(classes[i]));
    const auto result =
        saliency::alignment_curve(static_cast<Index>(dim), cs, eps, seed);
    check_capacity(result.size(), capacity, n_rows);
    need(rows, "rows");
    for (size_t i = 0; i < result.size(); ++i)
      rows[i] = {static_cast<size_t>(result[i].classes), result[i].cosine,
                 result[i].mass_ratio, result[i].energy_ratio};
  });
}

void sal_oracle_config_default(sal_oracle_config* config) {
  if (!config) return;
  const saliency::PlantedConfig d;
  config->dim = static_cast<size_t>(d.dim);
  config->support = static_cast<size_t>(d.support);
  config->instances = d.instances;
  config->coupling = d.coupling;
  config->c1 = d.c1;
  config->solver_iterations = d.solver.iterations;
  config->seed = d.seed;
}

sal_status sal_oracle_check(const sal_oracle_config* config,
                            sal_oracle_row* rows, size_t capacity,
                            size_t* n_rows) {
  return guarded([&] {
    need(config, "config");
    saliency::PlantedConfig c;
    c.dim = static_cast<Index>(config->dim);
    c.support = static_cast<Index>(config->support);
    c.instances = config->instances;
    c.coupling = config->coupling;
    c.c1 = config->c1;
    c.solver.iterations = config->solver_iterations;
    c.seed = config->seed;
    const auto result = saliency::oracle_check(c);
    check_capacity(result.size(), capacity, n_rows);
    need(rows, "rows");
    const auto mask = [](const std::vector<Index>& s) {
      uint32_t m = 0;
      for (Index i : s) m |= 1u << i;
      return m;
    };
    for (size_t i = 0; i < result.size(); ++i) {
      const auto& r = result[i];
      rows[i] = {r.instance,       mask(r.planted),  mask(r.oracle_support),
                 mask(r.l1_support), r.oracle_value, r.l1_value,
                 r.best_lambda1,   r.l1_match ? 1 : 0, r.dominance ? 1 : 0};
    }
  });
}

sal_status sal_spearman(const double* a, const double* b, size_t n, double* rho) {
  return guarded([&] {
    need(a, "a");
    need(b, "b");
    need(rho, "rho");
    *rho = saliency::spearman(std::vector<double>(a, a + n),
                              std::vector<double>(b, b + n));
  });
}

}  // extern "C"
