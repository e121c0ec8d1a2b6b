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

#ifndef SALIENCY_SYNTHETIC_HPP_
#define SALIENCY_SYNTHETIC_HPP_

#include <cstdint>

#include "saliency/network.hpp"

namespace saliency {

// Gaussian class blobs in [0, 1]^dim-ish coordinates. Each class centre is
// uniform in [0.2, 0.8]^dim; samples add isotropic noise of `spread`.
struct BlobConfig {
  Index dim = 2;
  int classes = 2;
  std::size_t samples = 200;
  double spread = 0.1;
  std::uint64_t seed = 0;
};

// Samples are assigned to classes round-robin, so class counts differ by at
// most one.
Dataset make_blobs(const BlobConfig& config);

// Splits off the last `holdout` samples.
std::pair<Dataset, Dataset> split_holdout(const Dataset& data,
                                          std::size_t holdout);

}  // namespace saliency

#endif  // SALIENCY_SYNTHETIC_HPP_
