#include "defhyper/kernels.hpp"

#include <algorithm>

#include "defhyper/error.hpp"

#ifdef DEFHYPER_HAVE_OPENMP
#include <omp.h>
#endif

namespace defhyper {
namespace {

DEFHYPER_HOT void add_into(Stage1Params& out, const Stage1Gradient& g) {
  auto dst = out.params(false);
  const auto src = g.dense.tensors(false);
  for (std::size_t t = 0; t < dst.size(); ++t) {
    double* d = dst[t].second->data.data();
    const double* s = src[t]->data.data();
    const std::size_t n = dst[t].second->size();
    for (std::size_t k = 0; k < n; ++k) d[k] += s[k];
  }
  if (out.embedded()) {
    for (const auto& [id, dx] : g.embedding_rows) {
      const auto col = static_cast<std::size_t>(id);
      for (std::size_t r = 0; r < dx.size(); ++r) out.embedding(r, col) += dx[r];
    }
  }
}

void zero_all(Stage1Params& out) {
  for (auto& [name, m] : out.params(true)) m->zero();
}

double one_instance(const Stage1Params& p, std::span<const Stage1Instance> instances,
                    const BatchItem& item, const BatchSpec& spec, Stage1Workspace& ws,
                    std::vector<double>& mask, Stage1Gradient& grad) {
  if (item.instance >= instances.size()) throw ShapeError("batch item outside instance range");
  const auto& inst = instances[item.instance];
  const double* mask_ptr = nullptr;
  if (spec.dropout > 0.0) {
    Rng rng(item.mask_seed);
    mask = dropout_mask(2 * p.positive.hidden(), spec.dropout, rng);
    mask_ptr = mask.data();
  }
  const double weight = inst.label == 1 ? spec.positive_weight : 1.0;
  grad.zero();
  return stage1_instance_gradient(p, inst, weight, mask_ptr, ws, grad);
}

}  // namespace

bool parallel_kernels_available() {
#ifdef DEFHYPER_HAVE_OPENMP
  return true;
#else
  return false;
#endif
}

int parallel_thread_count() {
#ifdef DEFHYPER_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

double batch_gradient_serial(const Stage1Params& p, std::span<const Stage1Instance> instances,
                             std::span<const BatchItem> batch, const BatchSpec& spec,
                             Stage1Params& out) {
  zero_all(out);
  Stage1Workspace ws;
  Stage1Gradient grad(p);
  std::vector<double> mask;
  double loss = 0.0;
  for (const auto& item : batch) {
    loss += one_instance(p, instances, item, spec, ws, mask, grad);
    add_into(out, grad);
  }
  return loss;
}

double batch_gradient_parallel(const Stage1Params& p, std::span<const Stage1Instance> instances,
                               std::span<const BatchItem> batch, const BatchSpec& spec,
                               Stage1Params& out) {
#ifndef DEFHYPER_HAVE_OPENMP
  return batch_gradient_serial(p, instances, batch, spec, out);
#else
  const auto n = static_cast<std::ptrdiff_t>(batch.size());
  thread_local std::vector<Stage1Gradient> grads;
  if (grads.size() < batch.size() ||
      (!grads.empty() && !grads.front().dense.positive.uz.same_shape(p.positive.uz)) ||
      (!grads.empty() && !grads.front().dense.positive.wz.same_shape(p.positive.wz))) {
    grads.clear();
    grads.reserve(batch.size());
    for (std::size_t b = 0; b < batch.size(); ++b) grads.emplace_back(p);
  }
  std::vector<double> losses(batch.size(), 0.0);
  bool failed = false;
  std::string failure;

#pragma omp parallel
  {
    Stage1Workspace ws;
    std::vector<double> mask;
#pragma omp for schedule(static)
    for (std::ptrdiff_t b = 0; b < n; ++b) {
      try {
        const auto k = static_cast<std::size_t>(b);
        losses[k] = one_instance(p, instances, batch[k], spec, ws, mask, grads[k]);
      } catch (const std::exception& e) {
#pragma omp critical
        {
          failed = true;
          failure = e.what();
        }
      }
    }
  }
  if (failed) throw ShapeError(failure);

  zero_all(out);
  double loss = 0.0;
  for (std::size_t b = 0; b < batch.size(); ++b) {
    loss += losses[b];
    add_into(out, grads[b]);
  }
  return loss;
#endif
}

std::vector<double> stage1_probabilities_serial(const Stage1Params& p,
                                                std::span<const Stage1Instance> instances) {
  std::vector<double> out(instances.size());
  Stage1Workspace ws;
  for (std::size_t k = 0; k < instances.size(); ++k) {
    out[k] = stage1_forward(p, instances[k].window, nullptr, ws);
  }
  return out;
}

std::vector<double> stage1_probabilities_parallel(const Stage1Params& p,
                                                  std::span<const Stage1Instance> instances) {
#ifndef DEFHYPER_HAVE_OPENMP
  return stage1_probabilities_serial(p, instances);
#else
  std::vector<double> out(instances.size());
  const auto n = static_cast<std::ptrdiff_t>(instances.size());
#pragma omp parallel
  {
    Stage1Workspace ws;
#pragma omp for schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
      const auto i = static_cast<std::size_t>(k);
      out[i] = stage1_forward(p, instances[i].window, nullptr, ws);
    }
  }
  return out;
#endif
}

}  // namespace defhyper
