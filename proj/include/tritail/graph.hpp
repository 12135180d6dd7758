#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tritail/dist.hpp"

namespace tritail {

// One sampled realization of the random graph on nodes 0..n-1. Simple and
// undirected; every neighbor list is sorted ascending and mirrored on the
// other endpoint.
struct Graph {
  std::int64_t n = 0;
  std::vector<std::vector<std::int32_t>> adjacency;
  std::int64_t edge_count = 0;

  std::int64_t degree(std::int64_t v) const {
    return static_cast<std::int64_t>(adjacency[static_cast<std::size_t>(v)].size());
  }

  bool has_edge(std::int64_t u, std::int64_t v) const;
};

// absolute weights to overwrite onto the last entries of a weight vector
struct PlantSpec {
  std::vector<double> hub_weights;
};

// Each unordered pair {i, j} becomes an edge independently with probability
// min(W_i W_j / (mu n), 1). The pair coin is a counter hash of
// (seed, min(i, j), max(i, j)) compared against that probability as a uniform
// threshold, so a run is reproducible on any thread count, and raising a
// weight under the same seed can only add edges.
Graph sample_graph(const WeightVector& wv, double mu, std::uint64_t seed);

// Exact triangle count. Nodes are ranked by (degree, index) and every
// triangle is found once, from its lowest-ranked corner, by intersecting
// forward neighbor lists.
std::int64_t count_triangles(const Graph& g);

// copy of wv with the last spec.hub_weights.size() entries replaced
WeightVector plant_hubs(const WeightVector& wv, const PlantSpec& spec);

// indicator truncation: entries >= cap become 0, everything else passes through
WeightVector truncate_weights(const WeightVector& wv, double cap);

// one "u v" line per edge, 0-indexed, u < v, sorted; for external cross-checks
std::string edge_list(const Graph& g);

}  // namespace tritail
