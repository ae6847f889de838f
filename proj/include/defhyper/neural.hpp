#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "defhyper/rng.hpp"
#include "defhyper/tensor.hpp"

namespace defhyper {

// Named, mutable view of every trainable tensor of a parameter block.
using ParamList = std::vector<std::pair<std::string, Matrix*>>;

// Uniform in +-sqrt(6 / (fan_in + fan_out)).
void glorot_init(Matrix& m, std::size_t fan_in, std::size_t fan_out, Rng& rng);

struct DenseParams {
  Matrix weight;  // out x in
  Matrix bias;    // out x 1

  DenseParams() = default;
  DenseParams(std::size_t in, std::size_t out) : weight(out, in), bias(out, 1) {}

  std::size_t in() const { return weight.cols; }
  std::size_t out() const { return weight.rows; }
  void init(Rng& rng) { glorot_init(weight, in(), out(), rng); }
  void append_to(ParamList& list, const std::string& prefix);
};

// y = W x + b
void dense_forward(const DenseParams& p, std::span<const double> x, std::span<double> y);
// Accumulates dW, db into grad and (optionally) dx.
void dense_backward(const DenseParams& p, std::span<const double> x, std::span<const double> dy,
                    DenseParams& grad, std::span<double> dx);

// Standard GRU cell:
//   z = s(Wz x + Uz h + bz), r = s(Wr x + Ur h + br),
//   c = tanh(Wh x + Uh (r*h) + bh), h' = (1 - z) * h + z * c
struct GruParams {
  Matrix wz, wr, wh;  // H x D
  Matrix uz, ur, uh;  // H x H
  Matrix bz, br, bh;  // H x 1

  GruParams() = default;
  GruParams(std::size_t input, std::size_t hidden);

  std::size_t hidden() const { return uz.rows; }
  std::size_t input() const { return wz.cols; }
  void init(Rng& rng);
  void append_to(ParamList& list, const std::string& prefix);
};

// Intermediates of one GRU step kept for the backward pass.
struct GruStepCache {
  std::vector<double> h_prev, z, r, c, rh;
};

// One step given the input projections a* = W* x (bias not included).
void gru_step(const GruParams& p, const double* az, const double* ar, const double* ah,
              std::span<const double> h_prev, GruStepCache& cache, std::span<double> h_next);

// Backward through one step. On entry dh holds dL/dh'; on exit dL/dh_prev.
// Gradients for U* and b* accumulate into grad; dL/d(a*) are written to
// daz/dar/dah (H entries each).
void gru_step_backward(const GruParams& p, const GruStepCache& cache, std::span<double> dh,
                       GruParams& grad, double* daz, double* dar, double* dah);

// Runs the recurrence over dense inputs and returns the last hidden state.
std::vector<double> gru_forward(std::span<const std::vector<double>> inputs, const GruParams& p,
                                std::span<const double> h0);

// Numerically stable softmax.
std::vector<double> softmax(std::span<const double> logits);
double sigmoid(double x);

inline constexpr double kProbabilityClamp = 1e-12;
// -[y ln p + (1 - y) ln(1 - p)] with p clamped to [eps, 1 - eps].
double cross_entropy(double p, int y);

// Inverted dropout; identity when not training or rate == 0.
std::vector<double> dropout(std::span<const double> x, double rate, bool training, Rng& rng);
// The scaled keep-mask dropout() would multiply by.
std::vector<double> dropout_mask(std::size_t n, double rate, Rng& rng);

struct RmsPropConfig {
  double learning_rate = 1e-3;
  double decay = 0.9;
  double epsilon = 1e-8;
};

struct OptimizerState {
  RmsPropConfig config;
  std::vector<Matrix> cache;  // mean squared gradient per parameter tensor
};

OptimizerState make_optimizer(const ParamList& params, const RmsPropConfig& config);

// cache = decay * cache + (1 - decay) g^2; p -= lr g / (sqrt(cache) + eps)
void rmsprop_step(const ParamList& params, std::span<const Matrix* const> grads,
                  OptimizerState& state);

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::string worst_param;
  std::size_t worst_index = 0;
  std::size_t checked = 0;
};

// Compares analytic gradients against central differences
// (f(t + eps) - f(t - eps)) / (2 eps) for every entry of every parameter.
// `loss` must evaluate the objective at the current parameter values.
GradCheckResult grad_check(const std::function<double()>& loss, const ParamList& params,
                           std::span<const Matrix* const> analytic, double eps = 1e-5);

double relative_error(double analytic, double numeric);

}  // namespace defhyper
