#include "lnss/neural.hpp"

#include <cmath>
#include <stdexcept>

namespace lnss {

void TensorSet::zero() {
  for (auto& m : w) m.zero();
  for (auto& v : b) std::fill(v.begin(), v.end(), 0.0);
}

TensorSet TensorSet::zeros_like(const TensorSet& other) {
  TensorSet t;
  for (int i = 0; i < 3; ++i) {
    t.w[i] = Matrix(other.w[i].rows, other.w[i].cols);
    t.b[i].assign(other.b[i].size(), 0.0);
  }
  return t;
}

bool TensorSet::same_shape(const TensorSet& other) const {
  for (int i = 0; i < 3; ++i) {
    if (!w[i].same_shape(other.w[i]) || b[i].size() != other.b[i].size()) return false;
  }
  return true;
}

MlpParams make_mlp(std::size_t in, std::size_t hidden, std::size_t out, OutputKind output,
                   double bound, Rng& rng) {
  if (in == 0 || hidden == 0 || out == 0)
    throw std::invalid_argument("network dimensions must be positive");
  MlpParams p;
  p.output = output;
  p.bound = bound;
  const std::size_t dims[4] = {in, hidden, hidden, out};
  for (int layer = 0; layer < 3; ++layer) {
    const std::size_t fan_in = dims[layer];
    const std::size_t fan_out = dims[layer + 1];
    const double limit = layer == 2 ? 3e-3 : 1.0 / std::sqrt(static_cast<double>(fan_in));
    std::uniform_real_distribution<double> u(-limit, limit);
    p.w[layer] = Matrix(fan_out, fan_in);
    for (double& x : p.w[layer].data) x = u(rng);
    p.b[layer].resize(fan_out);
    for (double& x : p.b[layer]) x = u(rng);
  }
  return p;
}

namespace {

// y = x * w^T + b, w: out x in (both operands row-major and contiguous
// along the reduction axis).
Matrix linear(const Matrix& x, const Matrix& w, const std::vector<double>& b) {
  Matrix y(x.rows, w.rows);
  for (std::size_t i = 0; i < x.rows; ++i) {
    const double* xi = x.data.data() + i * x.cols;
    double* yi = y.data.data() + i * y.cols;
    for (std::size_t j = 0; j < w.rows; ++j) {
      const double* wj = w.data.data() + j * w.cols;
      double acc = b[j];
      for (std::size_t k = 0; k < x.cols; ++k) acc += wj[k] * xi[k];
      yi[j] = acc;
    }
  }
  return y;
}

Matrix relu(const Matrix& z) {
  Matrix h = z;
  for (double& x : h.data) x = x > 0.0 ? x : 0.0;
  return h;
}

// grads.w += dz^T * x (sum over batch), grads.b += column sums of dz.
void accumulate_layer_grads(const Matrix& dz, const Matrix& x, Matrix& gw,
                            std::vector<double>& gb) {
  for (std::size_t i = 0; i < dz.rows; ++i) {
    const double* dzi = dz.data.data() + i * dz.cols;
    const double* xi = x.data.data() + i * x.cols;
    for (std::size_t j = 0; j < dz.cols; ++j) {
      const double d = dzi[j];
      if (d == 0.0) continue;
      double* gwj = gw.data.data() + j * gw.cols;
      for (std::size_t k = 0; k < x.cols; ++k) gwj[k] += d * xi[k];
      gb[j] += d;
    }
  }
}

// dx = dz * w, w: out x in.
Matrix input_grad(const Matrix& dz, const Matrix& w) {
  Matrix dx(dz.rows, w.cols);
  for (std::size_t i = 0; i < dz.rows; ++i) {
    const double* dzi = dz.data.data() + i * dz.cols;
    double* dxi = dx.data.data() + i * dx.cols;
    for (std::size_t j = 0; j < dz.cols; ++j) {
      const double d = dzi[j];
      if (d == 0.0) continue;
      const double* wj = w.data.data() + j * w.cols;
      for (std::size_t k = 0; k < w.cols; ++k) dxi[k] += d * wj[k];
    }
  }
  return dx;
}

}  // namespace

Matrix mlp_forward(const MlpParams& p, const Matrix& x, MlpCache* cache) {
  if (x.cols != p.in_dim()) throw std::invalid_argument("input dimension mismatch");
  Matrix z1 = linear(x, p.w[0], p.b[0]);
  Matrix h1 = relu(z1);
  Matrix z2 = linear(h1, p.w[1], p.b[1]);
  Matrix h2 = relu(z2);
  Matrix z3 = linear(h2, p.w[2], p.b[2]);

  Matrix y = z3;
  if (p.output == OutputKind::TanhScaled) {
    for (double& v : y.data) v = p.bound * std::tanh(v);
  }

  if (cache) {
    cache->x = x;
    cache->z1 = std::move(z1);
    cache->h1 = std::move(h1);
    cache->z2 = std::move(z2);
    cache->h2 = std::move(h2);
    cache->z3 = std::move(z3);
    cache->valid = true;
  }
  return y;
}

void mlp_backward(const MlpParams& p, const MlpCache& cache, const Matrix& dy, TensorSet& grads,
                  Matrix* dx) {
  if (!cache.valid) throw std::invalid_argument("no cached forward");
  if (dy.rows != cache.x.rows || dy.cols != p.out_dim())
    throw std::invalid_argument("upstream gradient shape mismatch");

  Matrix dz3 = dy;
  if (p.output == OutputKind::TanhScaled) {
    for (std::size_t i = 0; i < dz3.data.size(); ++i) {
      const double t = std::tanh(cache.z3.data[i]);
      dz3.data[i] *= p.bound * (1.0 - t * t);
    }
  }
  accumulate_layer_grads(dz3, cache.h2, grads.w[2], grads.b[2]);

  Matrix dh2 = input_grad(dz3, p.w[2]);
  for (std::size_t i = 0; i < dh2.data.size(); ++i) {
    if (cache.z2.data[i] <= 0.0) dh2.data[i] = 0.0;
  }
  accumulate_layer_grads(dh2, cache.h1, grads.w[1], grads.b[1]);

  Matrix dh1 = input_grad(dh2, p.w[1]);
  for (std::size_t i = 0; i < dh1.data.size(); ++i) {
    if (cache.z1.data[i] <= 0.0) dh1.data[i] = 0.0;
  }
  accumulate_layer_grads(dh1, cache.x, grads.w[0], grads.b[0]);

  if (dx) *dx = input_grad(dh1, p.w[0]);
}

std::vector<double> actor_forward(const MlpParams& actor, std::span<const double> state) {
  Matrix x(1, state.size());
  std::copy(state.begin(), state.end(), x.data.begin());
  Matrix y = mlp_forward(actor, x);
  return y.data;
}

double critic_forward(const MlpParams& critic, std::span<const double> state,
                      std::span<const double> action) {
  if (state.size() + action.size() != critic.in_dim())
    throw std::invalid_argument("input dimension mismatch");
  Matrix x(1, state.size() + action.size());
  std::copy(state.begin(), state.end(), x.data.begin());
  std::copy(action.begin(), action.end(), x.data.begin() + state.size());
  Matrix y = mlp_forward(critic, x);
  return y.data[0];
}

AdamState make_adam(const MlpParams& params, double lr) {
  AdamState s;
  s.m = TensorSet::zeros_like(params);
  s.v = TensorSet::zeros_like(params);
  s.lr = lr;
  return s;
}

namespace {

void adam_update_span(std::span<double> param, std::span<const double> grad,
                      std::span<double> m, std::span<double> v, const AdamState& s,
                      double correction1, double correction2) {
  for (std::size_t i = 0; i < param.size(); ++i) {
    const double g = grad[i];
    if (!std::isfinite(g)) throw std::runtime_error("divergence detected");
    m[i] = s.beta1 * m[i] + (1.0 - s.beta1) * g;
    v[i] = s.beta2 * v[i] + (1.0 - s.beta2) * g * g;
    const double m_hat = m[i] / correction1;
    const double v_hat = v[i] / correction2;
    param[i] -= s.lr * m_hat / (std::sqrt(v_hat) + s.eps);
  }
}

}  // namespace

void adam_step(MlpParams& params, const TensorSet& grads, AdamState& state) {
  if (!params.same_shape(grads) || !params.same_shape(state.m))
    throw std::invalid_argument("gradient shape mismatch");
  ++state.step;
  const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  for (int i = 0; i < 3; ++i) {
    adam_update_span(params.w[i].data, grads.w[i].data, state.m.w[i].data, state.v.w[i].data,
                     state, c1, c2);
    adam_update_span(params.b[i], grads.b[i], state.m.b[i], state.v.b[i], state, c1, c2);
  }
}

void soft_update(MlpParams& target, const MlpParams& online, double tau) {
  if (!target.same_shape(online)) throw std::invalid_argument("network shape mismatch");
  if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("tau outside [0,1]");
  for (int i = 0; i < 3; ++i) {
    for (std::size_t k = 0; k < target.w[i].data.size(); ++k) {
      target.w[i].data[k] = tau * online.w[i].data[k] + (1.0 - tau) * target.w[i].data[k];
    }
    for (std::size_t k = 0; k < target.b[i].size(); ++k) {
      target.b[i][k] = tau * online.b[i][k] + (1.0 - tau) * target.b[i][k];
    }
  }
}

}  // namespace lnss
