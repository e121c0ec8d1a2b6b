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

#include "saliency/synthetic.hpp"

#include <algorithm>

#include "saliency/error.hpp"
#include "saliency/rng.hpp"

namespace saliency {

Dataset make_blobs(const BlobConfig& config) {
  require(config.dim > 0, ErrorCode::kInvalidArgument, "dim must be positive");
  require(config.classes >= 2, ErrorCode::kInvalidArgument,
          "need at least two classes");
  require(config.spread >= 0.0, ErrorCode::kInvalidArgument,
          "spread must be non-negative");
  Rng rng(config.seed);
  std::vector<VectorXd> centres;
  centres.reserve(static_cast<std::size_t>(config.classes));
  for (int k = 0; k < config.classes; ++k) {
    VectorXd c(config.dim);
    for (Index i = 0; i < config.dim; ++i) c[i] = rng.uniform(0.2, 0.8);
    centres.push_back(std::move(c));
  }
  Dataset data;
  data.reserve(config.samples);
  for (std::size_t n = 0; n < config.samples; ++n) {
    const int label = static_cast<int>(n % static_cast<std::size_t>(config.classes));
    Sample s;
    s.label = label;
    s.x = centres[static_cast<std::size_t>(label)] +
          config.spread * rng.normal_vector(config.dim);
    data.push_back(std::move(s));
  }
  return data;
}

std::pair<Dataset, Dataset> split_holdout(const Dataset& data,
                                          std::size_t holdout) {
  const std::size_t cut = data.size() - std::min(holdout, data.size());
  return {Dataset(data.begin(), data.begin() + static_cast<std::ptrdiff_t>(cut)),
          Dataset(data.begin() + static_cast<std::ptrdiff_t>(cut), data.end())};
}

}  // namespace saliency
