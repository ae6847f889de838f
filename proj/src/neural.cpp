#include "defhyper/neural.hpp"

#include <algorithm>
#include <cmath>

#include "defhyper/error.hpp"

namespace defhyper {

void glorot_init(Matrix& m, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (auto& v : m.data) v = rng.uniform(-bound, bound);
}

void DenseParams::append_to(ParamList& list, const std::string& prefix) {
  list.emplace_back(prefix + ".weight", &weight);
  list.emplace_back(prefix + ".bias", &bias);
}

void dense_forward(const DenseParams& p, std::span<const double> x, std::span<double> y) {
  if (x.size() != p.in() || y.size() != p.out()) throw ShapeError("dense layer dimension mismatch");
  for (std::size_t r = 0; r < p.out(); ++r) y[r] = p.bias.data[r];
  gemv_add(p.weight, x.data(), y.data());
}

void dense_backward(const DenseParams& p, std::span<const double> x, std::span<const double> dy,
                    DenseParams& grad, std::span<double> dx) {
  outer_add(grad.weight, dy.data(), x.data());
  for (std::size_t r = 0; r < p.out(); ++r) grad.bias.data[r] += dy[r];
  if (!dx.empty()) gemv_t_add(p.weight, dy.data(), dx.data());
}

GruParams::GruParams(std::size_t input, std::size_t hidden)
    : wz(hidden, input),
      wr(hidden, input),
      wh(hidden, input),
      uz(hidden, hidden),
      ur(hidden, hidden),
      uh(hidden, hidden),
      bz(hidden, 1),
      br(hidden, 1),
      bh(hidden, 1) {}

void GruParams::init(Rng& rng) {
  const std::size_t h = hidden();
  const std::size_t d = input();
  for (Matrix* w : {&wz, &wr, &wh}) glorot_init(*w, d, h, rng);
  for (Matrix* u : {&uz, &ur, &uh}) glorot_init(*u, h, h, rng);
}

void GruParams::append_to(ParamList& list, const std::string& prefix) {
  list.emplace_back(prefix + ".wz", &wz);
  list.emplace_back(prefix + ".wr", &wr);
  list.emplace_back(prefix + ".wh", &wh);
  list.emplace_back(prefix + ".uz", &uz);
  list.emplace_back(prefix + ".ur", &ur);
  list.emplace_back(prefix + ".uh", &uh);
  list.emplace_back(prefix + ".bz", &bz);
  list.emplace_back(prefix + ".br", &br);
  list.emplace_back(prefix + ".bh", &bh);
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

DEFHYPER_HOT void gru_step(const GruParams& p, const double* az, const double* ar, const double* ah,
              std::span<const double> h_prev, GruStepCache& cache, std::span<double> h_next) {
  const std::size_t hn = p.hidden();
  cache.h_prev.assign(h_prev.begin(), h_prev.end());
  cache.z.resize(hn);
  cache.r.resize(hn);
  cache.c.resize(hn);
  cache.rh.resize(hn);
  const double* h = cache.h_prev.data();
  for (std::size_t k = 0; k < hn; ++k) {
    const double* uzk = p.uz.row(k);
    const double* urk = p.ur.row(k);
    double sz = az[k] + p.bz.data[k];
    double sr = ar[k] + p.br.data[k];
    for (std::size_t j = 0; j < hn; ++j) {
      sz += uzk[j] * h[j];
      sr += urk[j] * h[j];
    }
    cache.z[k] = sigmoid(sz);
    cache.r[k] = sigmoid(sr);
  }
  for (std::size_t k = 0; k < hn; ++k) cache.rh[k] = cache.r[k] * h[k];
  for (std::size_t k = 0; k < hn; ++k) {
    const double* uhk = p.uh.row(k);
    double sc = ah[k] + p.bh.data[k];
    for (std::size_t j = 0; j < hn; ++j) sc += uhk[j] * cache.rh[j];
    cache.c[k] = std::tanh(sc);
  }
  for (std::size_t k = 0; k < hn; ++k) {
    h_next[k] = (1.0 - cache.z[k]) * h[k] + cache.z[k] * cache.c[k];
  }
}

DEFHYPER_HOT void gru_step_backward(const GruParams& p, const GruStepCache& cache, std::span<double> dh,
                       GruParams& grad, double* daz, double* dar, double* dah) {
  const std::size_t hn = p.hidden();
  thread_local std::vector<double> dh_out, drh;
  dh_out.assign(hn, 0.0);
  drh.assign(hn, 0.0);
  const double* h = cache.h_prev.data();

  for (std::size_t k = 0; k < hn; ++k) {
    const double z = cache.z[k];
    const double c = cache.c[k];
    const double g = dh[k];
    dh_out[k] = g * (1.0 - z);
    daz[k] = g * (c - h[k]) * z * (1.0 - z);
    dah[k] = g * z * (1.0 - c * c);
  }
  // candidate path
  for (std::size_t k = 0; k < hn; ++k) grad.bh.data[k] += dah[k];
  outer_add(grad.uh, dah, cache.rh.data());
  gemv_t_add(p.uh, dah, drh.data());
  for (std::size_t k = 0; k < hn; ++k) {
    const double r = cache.r[k];
    dar[k] = drh[k] * h[k] * r * (1.0 - r);
    dh_out[k] += drh[k] * r;
  }
  // update gate
  for (std::size_t k = 0; k < hn; ++k) grad.bz.data[k] += daz[k];
  outer_add(grad.uz, daz, h);
  gemv_t_add(p.uz, daz, dh_out.data());
  // reset gate
  for (std::size_t k = 0; k < hn; ++k) grad.br.data[k] += dar[k];
  outer_add(grad.ur, dar, h);
  gemv_t_add(p.ur, dar, dh_out.data());

  std::copy(dh_out.begin(), dh_out.end(), dh.begin());
}

std::vector<double> gru_forward(std::span<const std::vector<double>> inputs, const GruParams& p,
                                std::span<const double> h0) {
  const std::size_t hn = p.hidden();
  if (h0.size() != hn) throw ShapeError("initial state has wrong size");
  std::vector<double> h(h0.begin(), h0.end());
  std::vector<double> next(hn), az(hn), ar(hn), ah(hn);
  GruStepCache cache;
  for (const auto& x : inputs) {
    if (x.size() != p.input()) throw ShapeError("GRU input has wrong dimension");
    std::fill(az.begin(), az.end(), 0.0);
    std::fill(ar.begin(), ar.end(), 0.0);
    std::fill(ah.begin(), ah.end(), 0.0);
    gemv_add(p.wz, x.data(), az.data());
    gemv_add(p.wr, x.data(), ar.data());
    gemv_add(p.wh, x.data(), ah.data());
    gru_step(p, az.data(), ar.data(), ah.data(), h, cache, next);
    h.swap(next);
  }
  return h;
}

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> out(logits.size());
  if (logits.empty()) return out;
  const double m = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (std::size_t k = 0; k < logits.size(); ++k) {
    out[k] = std::exp(logits[k] - m);
    sum += out[k];
  }
  for (auto& v : out) v /= sum;
  return out;
}

double cross_entropy(double p, int y) {
  const double q = std::clamp(p, kProbabilityClamp, 1.0 - kProbabilityClamp);
  return y == 1 ? -std::log(q) : -std::log1p(-q);
}

std::vector<double> dropout_mask(std::size_t n, double rate, Rng& rng) {
  std::vector<double> mask(n, 1.0);
  if (rate <= 0.0) return mask;
  const double keep = 1.0 / (1.0 - rate);
  for (auto& m : mask) m = rng.uniform() < rate ? 0.0 : keep;
  return mask;
}

std::vector<double> dropout(std::span<const double> x, double rate, bool training, Rng& rng) {
  if (rate < 0.0 || rate >= 1.0) throw ConfigError("dropout rate must lie in [0, 1)");
  std::vector<double> out(x.begin(), x.end());
  if (!training || rate == 0.0) return out;
  const auto mask = dropout_mask(x.size(), rate, rng);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] *= mask[k];
  return out;
}

OptimizerState make_optimizer(const ParamList& params, const RmsPropConfig& config) {
  OptimizerState state;
  state.config = config;
  state.cache.reserve(params.size());
  for (const auto& [name, m] : params) state.cache.emplace_back(m->rows, m->cols);
  return state;
}

void rmsprop_step(const ParamList& params, std::span<const Matrix* const> grads,
                  OptimizerState& state) {
  if (params.size() != grads.size() || params.size() != state.cache.size()) {
    throw ShapeError("optimizer: parameter/gradient count mismatch");
  }
  const double lr = state.config.learning_rate;
  const double decay = state.config.decay;
  const double eps = state.config.epsilon;
  for (std::size_t t = 0; t < params.size(); ++t) {
    Matrix& p = *params[t].second;
    const Matrix& g = *grads[t];
    Matrix& cache = state.cache[t];
    if (!p.same_shape(g) || !p.same_shape(cache)) {
      throw ShapeError("optimizer: shape mismatch for " + params[t].first);
    }
    for (std::size_t k = 0; k < p.size(); ++k) {
      const double gk = g.data[k];
      cache.data[k] = decay * cache.data[k] + (1.0 - decay) * gk * gk;
      p.data[k] -= lr * gk / (std::sqrt(cache.data[k]) + eps);
    }
  }
}

double relative_error(double analytic, double numeric) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), 1e-8});
}

GradCheckResult grad_check(const std::function<double()>& loss, const ParamList& params,
                           std::span<const Matrix* const> analytic, double eps) {
  if (params.size() != analytic.size()) throw ShapeError("grad_check: gradient count mismatch");
  GradCheckResult result;
  for (std::size_t t = 0; t < params.size(); ++t) {
    Matrix& p = *params[t].second;
    const Matrix& g = *analytic[t];
    if (!p.same_shape(g)) throw ShapeError("grad_check: shape mismatch for " + params[t].first);
    for (std::size_t k = 0; k < p.size(); ++k) {
      const double saved = p.data[k];
      p.data[k] = saved + eps;
      const double up = loss();
      p.data[k] = saved - eps;
      const double down = loss();
      p.data[k] = saved;
      const double numeric = (up - down) / (2.0 * eps);
      const double err = relative_error(g.data[k], numeric);
      ++result.checked;
      if (err > result.max_relative_error) {
        result.max_relative_error = err;
        result.worst_param = params[t].first;
        result.worst_index = k;
      }
    }
  }
  return result;
}

}  // namespace defhyper
