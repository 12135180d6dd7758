#pragma once

#include <cstdint>
#include <span>

#include "tritail/dist.hpp"

namespace tritail {

// Finite-n connection kernel: nodes i and j connect with probability
// min(W_i W_j / (mu n), 1). Everything here is a deterministic functional of
// a concrete weight vector; nothing draws randomness.
struct KernelContext {
  std::int64_t n;
  double mu;
  // conditional_mean_triangles and hub_excess use the literal nested-loop sum
  // up to this size and an equivalent sorted prefix-sum regrouping above it
  std::int64_t n_exact = 1500;

  KernelContext(std::int64_t n_, double mu_, std::int64_t n_exact_ = 1500);
};

// min(h * h2 / (mu n), 1)
double edge_prob(const KernelContext& ctx, double h, double h2);

// product of the three pairwise connection probabilities
double triangle_kernel(const KernelContext& ctx, double u, double v, double w);

// expected triangle count given the weights: sum over index triples i<j<k of
// triangle_kernel(W_i, W_j, W_k)
double conditional_mean_triangles(const KernelContext& ctx, const WeightVector& wv);

// Expected number of extra triangles created by l planted hubs of weight
// n*z_1 .. n*z_l on top of n regular nodes, split into the two sums that
// compose it: triangles with one hub and a regular pair, and triangles with
// a hub pair and one regular node. Triangles among three hubs are not part
// of this functional.
struct HubExcessParts {
  double regular_pairs = 0.0;  // sum_i sum_{j<k} f_n(W_j, W_k, n z_i)
  double hub_pairs = 0.0;      // sum_{i<j} sum_k f_n(W_k, n z_i, n z_j)

  double total() const { return regular_pairs + hub_pairs; }
};

HubExcessParts hub_excess_parts(const KernelContext& ctx, const WeightVector& wv,
                                std::span<const double> z);

double hub_excess(const KernelContext& ctx, const WeightVector& wv, std::span<const double> z);

// same functional with hub sizes given as absolute weights h_i = n * z_i
double hub_excess_absolute(const KernelContext& ctx, const WeightVector& wv,
                           std::span<const double> hub_weights);

}  // namespace tritail
