#ifndef GAILPT_NN_HPP
#define GAILPT_NN_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gailpt/kernels.hpp"

namespace gailpt::nn {

enum class Activation { ReLU, Linear, Softmax, Sigmoid };

struct Layer {
  int in_w = 0;
  int out_w = 0;
  Activation act = Activation::Linear;
  std::vector<double> w;  // out_w x in_w, row-major
  std::vector<double> b;  // out_w
};

/// Plain fully-connected network. Softmax/Sigmoid are only valid as the
/// final activation; consecutive layer widths must chain.
struct DenseNet {
  std::vector<Layer> layers;
  uint64_t init_seed = 0;

  int input_width() const { return layers.empty() ? 0 : layers.front().in_w; }
  int output_width() const { return layers.empty() ? 0 : layers.back().out_w; }
  size_t param_count() const;
};

struct LayerSpec {
  int width;
  Activation act;
};

/// Glorot-uniform initialization, deterministic in `seed`.
DenseNet make_net(int input_width, const std::vector<LayerSpec>& specs, uint64_t seed);

/// Parameter-shaped gradient accumulator.
struct Gradients {
  std::vector<std::vector<double>> w, b;

  void zero();
  void add_scaled(const Gradients& g, double c);
  void scale(double c);
  double max_abs() const;
};

Gradients make_gradients(const DenseNet& net);

/// Buffers recorded during a forward pass and consumed by the backward pass.
struct Workspace {
  int batch = 0;
  std::vector<double> input;
  std::vector<std::vector<double>> pre;   // per layer, batch x out_w
  std::vector<std::vector<double>> post;  // per layer, batch x out_w
};

void forward_batch(const DenseNet& net, const double* x, int batch, Workspace& ws,
                   Backend be = default_backend());

/// Single-sample forward returning the output activation.
std::vector<double> forward(const DenseNet& net, std::span<const double> x);

/// Single-sample forward using caller-owned scratch (no allocation after warmup).
struct ForwardScratch {
  std::vector<double> a, c;
};
std::span<const double> forward_into(const DenseNet& net, std::span<const double> x,
                                     ForwardScratch& scratch);

/// Preactivation of the final layer for a single sample (head activation not applied).
std::vector<double> forward_logits(const DenseNet& net, std::span<const double> x);

/// Interpretation of the head gradient handed to backward_batch.
enum class HeadGrad {
  Activation,     // dy = dL/d(output activation); chained through the head
  Preactivation,  // dy = dL/d(final preactivation); head derivative already folded in
};

/// Exact reverse-mode gradients of the composed function, accumulated into
/// `out`. When dx != nullptr it receives dL/dx (batch x input_width).
void backward_batch(const DenseNet& net, const Workspace& ws, const double* dy,
                    HeadGrad kind, Gradients& out, double* dx = nullptr,
                    Backend be = default_backend());

std::vector<double> log_softmax(std::span<const double> z);
std::vector<double> softmax(std::span<const double> z);
double log_sum_exp(std::span<const double> z);

struct OptimizerState {
  enum class Rule { SGD, Adam };
  Rule rule = Rule::Adam;
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  int64_t step = 0;
  Gradients m, v;  // Adam moments, lazily shaped
};

OptimizerState make_sgd(double lr);
OptimizerState make_adam(double lr);

/// Descent update: theta <- theta - lr * g (SGD) or bias-corrected Adam.
void apply(DenseNet& net, const Gradients& g, OptimizerState& opt);

/// Flat binary parameter file: header with layer dims and activations,
/// then little-endian float32 weights and biases in layer order.
void save_params(const DenseNet& net, const std::string& path);
DenseNet load_params(const std::string& path);

}  // namespace gailpt::nn

#endif
