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

// Display normalization, PGM output, model JSON and dataset formats.
//
// Raw tensor layout (all little-endian):
//   u32 count, u32 dim, then count * dim values (f32 or f64 by file).
// Label sidecars use the same header with dim = 1 and i32 payload.

#ifndef SALIENCY_IO_HPP_
#define SALIENCY_IO_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "saliency/network.hpp"

namespace saliency {

struct DisplayMap {
  Index width = 0;
  Index height = 0;
  std::vector<double> values;  // row-major, each in [0, 1]
};

// Linear interpolation between order statistics (type 7). q in [0, 100].
double percentile(std::vector<double> values, double q);

// |delta| summed over channels per pixel, capped at the 99th percentile,
// divided by the cap and clipped to [0, 1]. A zero cap maps to all zeros.
// delta is laid out pixel-major: pixel i owns [i*channels, (i+1)*channels).
DisplayMap normalize_for_display(const VectorXd& delta, Index width,
                                 Index height, Index channels);

// Binary P5, maxval 255, round-half-up quantization. Optional comment lines
// are written into the header.
void write_pgm(const DisplayMap& map, const std::filesystem::path& path,
               const std::vector<std::string>& comments = {});
DisplayMap read_pgm(const std::filesystem::path& path);

std::string model_to_json(const Network& net);
Network model_from_json(const std::string& text);
void save_model(const Network& net, const std::filesystem::path& path);
Network load_model(const std::filesystem::path& path);

// One sample per row, label in the last column. A first row containing any
// non-numeric field is treated as a header. Lines starting with '#' are
// skipped.
Dataset load_csv_dataset(const std::filesystem::path& path);
void save_csv_dataset(const Dataset& data, const std::filesystem::path& path);

Dataset load_raw_dataset(const std::filesystem::path& tensor_path,
                         const std::filesystem::path& label_path);
void save_raw_dataset(const Dataset& data,
                      const std::filesystem::path& tensor_path,
                      const std::filesystem::path& label_path);

// count x dim tensors of f64 values, used for attributions and eigenvectors.
void write_raw_f64(const std::filesystem::path& path, Index count, Index dim,
                   const double* data);
std::vector<double> read_raw_f64(const std::filesystem::path& path,
                                  Index* count, Index* dim);

}  // namespace saliency

#endif  // SALIENCY_IO_HPP_
