#include "tritail/graph.hpp"

#include <algorithm>
#include <stdexcept>

#include "tritail/parallel.hpp"
#include "tritail/rng.hpp"

namespace tritail {

bool Graph::has_edge(std::int64_t u, std::int64_t v) const {
  if (u == v) return false;
  const auto& a = adjacency[static_cast<std::size_t>(u)];
  return std::binary_search(a.begin(), a.end(), static_cast<std::int32_t>(v));
}

Graph sample_graph(const WeightVector& wv, double mu, std::uint64_t seed) {
  const std::int64_t n = static_cast<std::int64_t>(wv.n());
  if (n < 2) throw std::invalid_argument("sample_graph: need at least two nodes");
  if (!(mu > 0.0)) throw std::invalid_argument("sample_graph: mu must be positive");
  for (double w : wv.weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("sample_graph: weights must be nonnegative");
  }

  const double mn = mu * static_cast<double>(n);

  // forward pass: per-node list of higher-indexed neighbors, one coin per pair
  std::vector<std::vector<std::int32_t>> forward(static_cast<std::size_t>(n));
  parallel_for_blocks(n, 64, [&](std::int64_t, std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) {
      const double wi = wv.weights[static_cast<std::size_t>(i)];
      if (wi <= 0.0) continue;  // the skipped coins decide nothing
      auto& out = forward[static_cast<std::size_t>(i)];
      for (std::int64_t j = i + 1; j < n; ++j) {
        const double p = wi * wv.weights[static_cast<std::size_t>(j)] / mn;
        const double u = uniform_draw(seed, Stream::edges, static_cast<std::uint64_t>(i),
                                      static_cast<std::uint64_t>(j));
        if (u < p) out.push_back(static_cast<std::int32_t>(j));
      }
    }
  });

  Graph g;
  g.n = n;
  g.adjacency.resize(static_cast<std::size_t>(n));
  std::vector<std::int32_t> deg(static_cast<std::size_t>(n), 0);
  std::int64_t edges = 0;
  for (std::size_t i = 0; i < forward.size(); ++i) {
    deg[i] += static_cast<std::int32_t>(forward[i].size());
    for (std::int32_t j : forward[i]) deg[static_cast<std::size_t>(j)] += 1;
    edges += static_cast<std::int64_t>(forward[i].size());
  }
  for (std::size_t i = 0; i < g.adjacency.size(); ++i) {
    g.adjacency[i].reserve(static_cast<std::size_t>(deg[i]));
  }
  // Walk sources in ascending order, mirroring each forward edge before
  // appending the source's own forward block. A list then receives its
  // smaller neighbors in ascending order first and its larger neighbors in
  // ascending order after, so it comes out sorted without a per-list sort.
  for (std::int64_t i = 0; i < n; ++i) {
    const auto& fw = forward[static_cast<std::size_t>(i)];
    for (std::int32_t j : fw) {
      g.adjacency[static_cast<std::size_t>(j)].push_back(static_cast<std::int32_t>(i));
    }
    auto& own = g.adjacency[static_cast<std::size_t>(i)];
    own.insert(own.end(), fw.begin(), fw.end());
  }
  g.edge_count = edges;
  return g;
}

std::int64_t count_triangles(const Graph& g) {
  const std::int64_t n = g.n;
  if (n < 3) return 0;

  std::vector<std::int32_t> order(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = static_cast<std::int32_t>(i);
  std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
    const auto da = g.adjacency[static_cast<std::size_t>(a)].size();
    const auto db = g.adjacency[static_cast<std::size_t>(b)].size();
    if (da != db) return da < db;
    return a < b;
  });
  std::vector<std::int32_t> rank(static_cast<std::size_t>(n));
  for (std::int64_t r = 0; r < n; ++r) {
    rank[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])] = static_cast<std::int32_t>(r);
  }

  // forward lists hold the higher-ranked neighbors, still sorted by index
  std::vector<std::vector<std::int32_t>> fw(static_cast<std::size_t>(n));
  for (std::int64_t v = 0; v < n; ++v) {
    const auto rv = rank[static_cast<std::size_t>(v)];
    for (std::int32_t u : g.adjacency[static_cast<std::size_t>(v)]) {
      if (rank[static_cast<std::size_t>(u)] > rv) fw[static_cast<std::size_t>(v)].push_back(u);
    }
  }

  return parallel_reduce_blocks<std::int64_t>(
      n, 64,
      [&](std::int64_t, std::int64_t lo, std::int64_t hi) {
        std::int64_t local = 0;
        for (std::int64_t v = lo; v < hi; ++v) {
          const auto& fv = fw[static_cast<std::size_t>(v)];
          for (std::int32_t u : fv) {
            const auto& fu = fw[static_cast<std::size_t>(u)];
            std::size_t a = 0, b = 0;
            while (a < fv.size() && b < fu.size()) {
              if (fv[a] < fu[b]) {
                ++a;
              } else if (fu[b] < fv[a]) {
                ++b;
              } else {
                ++local;
                ++a;
                ++b;
              }
            }
          }
        }
        return local;
      },
      [](std::int64_t& acc, const std::int64_t& part) { acc += part; }, std::int64_t{0});
}

WeightVector plant_hubs(const WeightVector& wv, const PlantSpec& spec) {
  const std::size_t l = spec.hub_weights.size();
  if (l > wv.n()) throw std::invalid_argument("plant_hubs: more hubs than nodes");
  for (double h : spec.hub_weights) {
    if (!(h > 0.0)) throw std::invalid_argument("plant_hubs: hub weights must be positive");
  }
  WeightVector out = wv;
  const std::size_t base = wv.n() - l;
  for (std::size_t i = 0; i < l; ++i) out.weights[base + i] = spec.hub_weights[i];
  return out;
}

WeightVector truncate_weights(const WeightVector& wv, double cap) {
  if (!(cap > 0.0)) throw std::invalid_argument("truncate_weights: cap must be positive");
  WeightVector out = wv;
  for (double& w : out.weights) {
    if (w >= cap) w = 0.0;
  }
  return out;
}

std::string edge_list(const Graph& g) {
  std::string out;
  for (std::int64_t u = 0; u < g.n; ++u) {
    for (std::int32_t v : g.adjacency[static_cast<std::size_t>(u)]) {
      if (v > u) {
        out += std::to_string(u);
        out += ' ';
        out += std::to_string(v);
        out += '\n';
      }
    }
  }
  return out;
}

}  // namespace tritail
