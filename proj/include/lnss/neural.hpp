#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "lnss/rng.hpp"

namespace lnss {

// Dense row-major matrix; the only tensor shape the fixed MLP needs.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
  std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }
  void zero() { std::fill(data.begin(), data.end(), 0.0); }
  bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }
};

// Weights and biases of a three-layer MLP (two hidden layers). Gradients
// and Adam moments reuse the same shape.
struct TensorSet {
  std::array<Matrix, 3> w;  // w[i] maps layer input -> output, out x in
  std::array<std::vector<double>, 3> b;

  void zero();
  static TensorSet zeros_like(const TensorSet& other);
  bool same_shape(const TensorSet& other) const;
};

enum class OutputKind { Linear, TanhScaled };

struct MlpParams : TensorSet {
  OutputKind output = OutputKind::Linear;
  double bound = 1.0;  // output scale for TanhScaled

  std::size_t in_dim() const { return w[0].cols; }
  std::size_t hidden_dim() const { return w[0].rows; }
  std::size_t out_dim() const { return w[2].rows; }
};

// Fan-in initialization: uniform(-1/sqrt(fan_in), +1/sqrt(fan_in)) per
// layer, final layer uniform(-3e-3, 3e-3). Bit-identical given the rng.
MlpParams make_mlp(std::size_t in, std::size_t hidden, std::size_t out, OutputKind output,
                   double bound, Rng& rng);

// Activations cached by a forward pass, consumed by the backward pass.
struct MlpCache {
  Matrix x, z1, h1, z2, h2, z3;
  bool valid = false;
};

// x: batch x in. Returns batch x out. Rectified-linear hidden units;
// output tanh*bound or linear.
Matrix mlp_forward(const MlpParams& p, const Matrix& x, MlpCache* cache = nullptr);

// dy: dL/dy, batch x out. Accumulates raw (sum over batch) gradients into
// `grads`; any mean reduction belongs in dy. Optionally also produces
// dL/dx, which is how the actor objective reaches the actor through the
// critic's action inputs.
void mlp_backward(const MlpParams& p, const MlpCache& cache, const Matrix& dy, TensorSet& grads,
                  Matrix* dx = nullptr);

// Single-sample conveniences.
std::vector<double> actor_forward(const MlpParams& actor, std::span<const double> state);
double critic_forward(const MlpParams& critic, std::span<const double> state,
                      std::span<const double> action);

struct AdamState {
  TensorSet m, v;
  long step = 0;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

AdamState make_adam(const MlpParams& params, double lr);

// Bias-corrected Adam update. Throws "divergence detected" on non-finite
// gradients.
void adam_step(MlpParams& params, const TensorSet& grads, AdamState& state);

// target <- tau * online + (1 - tau) * target, elementwise.
void soft_update(MlpParams& target, const MlpParams& online, double tau);

}  // namespace lnss
