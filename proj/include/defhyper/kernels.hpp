#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "defhyper/model.hpp"

namespace defhyper {

// One minibatch entry: which instance, and the seed of its dropout mask
// (ignored when the dropout rate is 0).
struct BatchItem {
  std::size_t instance = 0;
  std::uint64_t mask_seed = 0;
};

struct BatchSpec {
  double dropout = 0.0;
  double positive_weight = 1.0;
};

// Sum of per-instance gradients over the batch, reduced in batch order, into
// `out` (shaped like p, embedding dense). Returns the summed loss.
// Reference implementation: one instance at a time.
double batch_gradient_serial(const Stage1Params& p, std::span<const Stage1Instance> instances,
                             std::span<const BatchItem> batch, const BatchSpec& spec,
                             Stage1Params& out);

// Same contract; per-instance gradients are computed concurrently with
// OpenMP and then reduced in the same order as the serial kernel, so the
// result is bit-identical to batch_gradient_serial.
double batch_gradient_parallel(const Stage1Params& p, std::span<const Stage1Instance> instances,
                               std::span<const BatchItem> batch, const BatchSpec& spec,
                               Stage1Params& out);

// P_init for every instance (no dropout).
std::vector<double> stage1_probabilities_serial(const Stage1Params& p,
                                                std::span<const Stage1Instance> instances);
std::vector<double> stage1_probabilities_parallel(const Stage1Params& p,
                                                  std::span<const Stage1Instance> instances);

bool parallel_kernels_available();
int parallel_thread_count();

}  // namespace defhyper
