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

// Small fully connected classifiers: exact forward and reverse passes,
// softmax cross-entropy, local linearization and a plain SGD trainer.

#ifndef SALIENCY_NETWORK_HPP_
#define SALIENCY_NETWORK_HPP_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace saliency {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

enum class Activation { kRelu, kSigmoid, kIdentity };

std::string_view activation_name(Activation activation);
// Throws Error(kInvalidArgument) on unknown names.
Activation parse_activation(std::string_view name);

struct LayerSpec {
  Index in = 0;
  Index out = 0;
  Activation activation = Activation::kIdentity;
};

struct Layer {
  MatrixXd weight;  // out x in
  VectorXd bias;    // out
  Activation activation = Activation::kIdentity;

  Index in() const { return weight.cols(); }
  Index out() const { return weight.rows(); }
};

// Immutable once constructed; safe to share across threads.
class Network {
 public:
  // Validates chaining, finiteness, identity output layer and c >= 2.
  explicit Network(std::vector<Layer> layers);

  // He-normal weights for relu layers, Xavier-normal otherwise; zero biases.
  static Network random(std::span<const LayerSpec> spec, std::uint64_t seed);

  Index input_dim() const { return layers_.front().in(); }
  Index num_classes() const { return layers_.back().out(); }
  const std::vector<Layer>& layers() const { return layers_; }
  std::vector<LayerSpec> spec() const;

  // True when every activation is relu or identity, i.e. the logits are a
  // piecewise-linear function of the input.
  bool piecewise_linear() const;

 private:
  std::vector<Layer> layers_;
};

struct Sample {
  VectorXd x;
  int label = 0;
};

using Dataset = std::vector<Sample>;

VectorXd softmax(const VectorXd& logits);

// -log softmax(logits)[label], computed through log-sum-exp.
double cross_entropy(const VectorXd& logits, int label);

struct ForwardTrace {
  std::vector<VectorXd> pre_activations;  // one per layer
  std::vector<VectorXd> activations;      // activations[0] is the input
  VectorXd logits;
  VectorXd probabilities;
  double loss = 0.0;
  int label = 0;

  int predicted() const;
  double confidence() const { return probabilities.maxCoeff(); }
};

ForwardTrace forward(const Network& net, const VectorXd& x, int label);

// Gradient of seed^T logits with respect to the input, given a trace.
VectorXd backpropagate(const Network& net, const ForwardTrace& trace,
                       const VectorXd& logit_seed);

// Exact gradient of the cross-entropy loss with respect to x.
VectorXd input_gradient(const Network& net, const VectorXd& x, int label);

// Smallest |pre-activation| over relu units; +inf when there are none.
double min_relu_margin(const ForwardTrace& trace, const Network& net);

// Per-unit relu on/off pattern, concatenated over layers.
std::vector<bool> relu_pattern(const Network& net, const VectorXd& x);

struct LocalLinearization {
  MatrixXd jacobian;  // d x c, column i = d logit_i / dx
  VectorXd offset;    // c
  VectorXd logits;
  VectorXd probabilities;
  // max_i |(jacobian^T x + offset)_i - logits_i|; ~0 for relu nets.
  double reconstruction_error = 0.0;
  double min_relu_margin = 0.0;
  bool near_kink = false;  // some relu pre-activation within 1e-12 of 0
};

// Jacobian from c reverse passes. The offset is propagated through the
// network with every activation replaced by its local slope, so it is the
// exact affine offset of the current linear region for relu nets and only
// an approximation otherwise.
LocalLinearization local_linearization(const Network& net, const VectorXd& x);

int predict(const Network& net, const VectorXd& x);
double accuracy(const Network& net, const Dataset& data);

struct TrainConfig {
  double learning_rate = 0.05;
  int epochs = 20;
  std::uint64_t seed = 0;
};

struct TrainResult {
  Network network;
  double train_accuracy = 0.0;
  double final_loss = 0.0;  // mean loss over the last epoch
};

// Per-sample SGD over a seeded shuffle. Bitwise deterministic given seed.
TrainResult train_sgd(const Network& initial, const Dataset& data,
                      const TrainConfig& config);

}  // namespace saliency

#endif  // SALIENCY_NETWORK_HPP_
