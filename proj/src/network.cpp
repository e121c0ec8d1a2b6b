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

#include "saliency/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "saliency/error.hpp"
#include "saliency/rng.hpp"

namespace saliency {
namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

VectorXd activate(const VectorXd& z, Activation activation) {
  switch (activation) {
    case Activation::kRelu:
      return z.cwiseMax(0.0);
    case Activation::kSigmoid:
      return z.unaryExpr([](double v) { return sigmoid(v); });
    case Activation::kIdentity:
      return z;
  }
  return z;
}

// Derivative of the activation evaluated at the pre-activation z. The relu
// derivative at exactly 0 is taken as 0.
VectorXd activation_slope(const VectorXd& z, Activation activation) {
  switch (activation) {
    case Activation::kRelu:
      return z.unaryExpr([](double v) { return v > 0.0 ? 1.0 : 0.0; });
    case Activation::kSigmoid:
      return z.unaryExpr([](double v) {
        const double s = sigmoid(v);
        return s * (1.0 - s);
      });
    case Activation::kIdentity:
      return VectorXd::Ones(z.size());
  }
  return VectorXd::Ones(z.size());
}

void check_label(int label, Index classes) {
  if (label < 0 || label >= classes)
    fail(ErrorCode::kInvalidArgument,
         "label " + std::to_string(label) + " outside [0, " +
             std::to_string(classes) + ")");
}

}  // namespace

std::string_view activation_name(Activation activation) {
  switch (activation) {
    case Activation::kRelu:
      return "relu";
    case Activation::kSigmoid:
      return "sigmoid";
    case Activation::kIdentity:
      return "identity";
  }
  return "identity";
}

Activation parse_activation(std::string_view name) {
  if (name == "relu") return Activation::kRelu;
  if (name == "sigmoid") return Activation::kSigmoid;
  if (name == "identity" || name == "linear") return Activation::kIdentity;
  fail(ErrorCode::kInvalidArgument,
       "unknown activation '" + std::string(name) + "'");
}

Network::Network(std::vector<Layer> layers) : layers_(std::move(layers)) {
  require(!layers_.empty(), ErrorCode::kInvalidArgument,
          "network needs at least one layer");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const Layer& layer = layers_[i];
    require(layer.in() > 0 && layer.out() > 0, ErrorCode::kInvalidArgument,
            "layer dimensions must be positive");
    if (layer.bias.size() != layer.out())
      fail(ErrorCode::kDimensionMismatch,
           "layer " + std::to_string(i) + ": bias length " +
               std::to_string(layer.bias.size()) + " != out " +
               std::to_string(layer.out()));
    if (i > 0 && layers_[i - 1].out() != layer.in())
      fail(ErrorCode::kDimensionMismatch,
           "layer " + std::to_string(i) + ": input dim " +
               std::to_string(layer.in()) + " does not chain with previous " +
               "output dim " + std::to_string(layers_[i - 1].out()));
    if (!layer.weight.allFinite() || !layer.bias.allFinite())
      fail(ErrorCode::kNumerical,
           "layer " + std::to_string(i) + " has non-finite parameters");
  }
  require(layers_.back().activation == Activation::kIdentity,
          ErrorCode::kInvalidArgument,
          "final layer must use the identity activation (logits)");
  require(layers_.back().out() >= 2, ErrorCode::kInvalidArgument,
          "classifier needs at least two classes");
}

Network Network::random(std::span<const LayerSpec> spec, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Layer> layers;
  layers.reserve(spec.size());
  for (const LayerSpec& s : spec) {
    require(s.in > 0 && s.out > 0, ErrorCode::kInvalidArgument,
            "layer dimensions must be positive");
    const double fan = s.activation == Activation::kRelu
                           ? 2.0 / static_cast<double>(s.in)
                           : 2.0 / static_cast<double>(s.in + s.out);
    Layer layer;
    layer.weight = rng.normal_matrix(s.out, s.in) * std::sqrt(fan);
    layer.bias = VectorXd::Zero(s.out);
    layer.activation = s.activation;
    layers.push_back(std::move(layer));
  }
  return Network(std::move(layers));
}

std::vector<LayerSpec> Network::spec() const {
  std::vector<LayerSpec> out;
  out.reserve(layers_.size());
  for (const Layer& l : layers_) out.push_back({l.in(), l.out(), l.activation});
  return out;
}

bool Network::piecewise_linear() const {
  return std::all_of(layers_.begin(), layers_.end(), [](const Layer& l) {
    return l.activation != Activation::kSigmoid;
  });
}

VectorXd softmax(const VectorXd& logits) {
  const double shift = logits.maxCoeff();
  VectorXd e = (logits.array() - shift).exp().matrix();
  return e / e.sum();
}

double cross_entropy(const VectorXd& logits, int label) {
  check_label(label, logits.size());
  const double shift = logits.maxCoeff();
  const double lse =
      shift + std::log((logits.array() - shift).exp().sum());
  return std::max(0.0, lse - logits[label]);
}

int ForwardTrace::predicted() const {
  Index arg = 0;
  probabilities.maxCoeff(&arg);
  return static_cast<int>(arg);
}

ForwardTrace forward(const Network& net, const VectorXd& x, int label) {
  if (x.size() != net.input_dim())
    fail(ErrorCode::kDimensionMismatch,
         "input has " + std::to_string(x.size()) + " entries, network expects " +
             std::to_string(net.input_dim()));
  check_label(label, net.num_classes());
  if (!x.allFinite()) fail(ErrorCode::kNumerical, "input is not finite");

  ForwardTrace trace;
  trace.label = label;
  trace.activations.reserve(net.layers().size() + 1);
  trace.pre_activations.reserve(net.layers().size());
  trace.activations.push_back(x);
  for (std::size_t i = 0; i < net.layers().size(); ++i) {
    const Layer& layer = net.layers()[i];
    VectorXd z = layer.weight * trace.activations.back() + layer.bias;
    VectorXd a = activate(z, layer.activation);
    if (!a.allFinite())
      fail(ErrorCode::kNumerical,
           "non-finite activation in layer " + std::to_string(i));
    trace.pre_activations.push_back(std::move(z));
    trace.activations.push_back(std::move(a));
  }
  trace.logits = trace.activations.back();
  trace.probabilities = softmax(trace.logits);
  trace.loss = cross_entropy(trace.logits, label);
  return trace;
}

VectorXd backpropagate(const Network& net, const ForwardTrace& trace,
                       const VectorXd& logit_seed) {
  if (logit_seed.size() != net.num_classes())
    fail(ErrorCode::kDimensionMismatch, "logit seed has wrong length");
  VectorXd delta = logit_seed;
  for (std::size_t i = net.layers().size(); i-- > 0;) {
    const Layer& layer = net.layers()[i];
    delta = delta.cwiseProduct(
        activation_slope(trace.pre_activations[i], layer.activation));
    delta = layer.weight.transpose() * delta;
  }
  return delta;
}

VectorXd input_gradient(const Network& net, const VectorXd& x, int label) {
  const ForwardTrace trace = forward(net, x, label);
  VectorXd seed = trace.probabilities;
  seed[label] -= 1.0;
  return backpropagate(net, trace, seed);
}

double min_relu_margin(const ForwardTrace& trace, const Network& net) {
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < net.layers().size(); ++i) {
    if (net.layers()[i].activation != Activation::kRelu) continue;
    margin = std::min(margin, trace.pre_activations[i].cwiseAbs().minCoeff());
  }
  return margin;
}

std::vector<bool> relu_pattern(const Network& net, const VectorXd& x) {
  const ForwardTrace trace = forward(net, x, 0);
  std::vector<bool> pattern;
  for (std::size_t i = 0; i < net.layers().size(); ++i) {
    if (net.layers()[i].activation != Activation::kRelu) continue;
    for (Index j = 0; j < trace.pre_activations[i].size(); ++j)
      pattern.push_back(trace.pre_activations[i][j] > 0.0);
  }
  return pattern;
}

LocalLinearization local_linearization(const Network& net, const VectorXd& x) {
  const ForwardTrace trace = forward(net, x, 0);
  const Index c = net.num_classes();

  LocalLinearization lin;
  lin.jacobian.resize(net.input_dim(), c);
  for (Index i = 0; i < c; ++i)
    lin.jacobian.col(i) = backpropagate(net, trace, VectorXd::Unit(c, i));

  // Offset of the frozen-slope affine map: each activation acts as
  // multiplication by its slope at x.
  VectorXd offset = VectorXd::Zero(net.input_dim());
  for (std::size_t i = 0; i < net.layers().size(); ++i) {
    const Layer& layer = net.layers()[i];
    const VectorXd z = layer.weight * offset + layer.bias;
    offset = z.cwiseProduct(
        activation_slope(trace.pre_activations[i], layer.activation));
  }
  lin.offset = offset;
  lin.logits = trace.logits;
  lin.probabilities = trace.probabilities;
  lin.reconstruction_error =
      (lin.jacobian.transpose() * x + lin.offset - trace.logits)
          .cwiseAbs()
          .maxCoeff();
  lin.min_relu_margin = min_relu_margin(trace, net);
  lin.near_kink = lin.min_relu_margin <= 1e-12;
  return lin;
}

int predict(const Network& net, const VectorXd& x) {
  return forward(net, x, 0).predicted();
}

double accuracy(const Network& net, const Dataset& data) {
  if (data.empty()) return 0.0;
  std::size_t correct = 0;
  for (const Sample& s : data)
    if (predict(net, s.x) == s.label) ++correct;
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

TrainResult train_sgd(const Network& initial, const Dataset& data,
                      const TrainConfig& config) {
  require(!data.empty(), ErrorCode::kInvalidArgument,
          "training set is empty");
  require(config.learning_rate > 0.0, ErrorCode::kInvalidArgument,
          "learning rate must be positive");
  require(config.epochs >= 0, ErrorCode::kInvalidArgument,
          "epochs must be non-negative");
  for (const Sample& s : data) {
    if (s.x.size() != initial.input_dim())
      fail(ErrorCode::kDimensionMismatch,
           "training sample dimension does not match the network");
  }

  std::vector<Layer> layers = initial.layers();
  Rng rng(config.seed);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  double epoch_loss = 0.0;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[rng.index(i)]);
    epoch_loss = 0.0;
    for (std::size_t idx : order) {
      const Sample& s = data[idx];
      const Network current(layers);
      const ForwardTrace trace = forward(current, s.x, s.label);
      epoch_loss += trace.loss;
      VectorXd delta = trace.probabilities;
      delta[s.label] -= 1.0;
      for (std::size_t l = layers.size(); l-- > 0;) {
        delta = delta.cwiseProduct(
            activation_slope(trace.pre_activations[l], layers[l].activation));
        const VectorXd upstream = layers[l].weight.transpose() * delta;
        layers[l].weight.noalias() -=
            config.learning_rate * delta * trace.activations[l].transpose();
        layers[l].bias -= config.learning_rate * delta;
        delta = upstream;
      }
    }
    epoch_loss /= static_cast<double>(data.size());
  }

  TrainResult result{Network(std::move(layers)), 0.0, epoch_loss};
  result.train_accuracy = accuracy(result.network, data);
  return result;
}

}  // namespace saliency
