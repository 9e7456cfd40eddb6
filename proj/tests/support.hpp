#pragma once
// Small builders and independent oracles shared by the unit tests.

#include <cstdint>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "roydennet/geometry.hpp"

namespace testing_support {

using namespace roydennet;

inline ProxySpace parse(const std::string& text) {
  std::istringstream in(text);
  return load_space(in);
}

/// Path with labels first..first+n-1.
inline ProxySpace path_space(std::size_t n, Label first = 0) {
  SpaceData d;
  for (std::size_t i = 0; i < n; ++i) {
    d.labels.push_back(first + static_cast<Label>(i));
    d.coords.push_back({});
    d.weights.push_back(1.0);
  }
  for (std::size_t i = 0; i + 1 < n; ++i) d.edges.push_back({Vertex(i), Vertex(i + 1), 1.0});
  return ProxySpace(std::move(d));
}

inline ProxySpace from_edges(std::size_t n, const std::vector<Edge>& edges, std::vector<double> weights = {}) {
  SpaceData d;
  for (std::size_t i = 0; i < n; ++i) {
    d.labels.push_back(static_cast<Label>(i));
    d.coords.push_back({});
  }
  d.weights = weights.empty() ? std::vector<double>(n, 1.0) : std::move(weights);
  d.edges = edges;
  return ProxySpace(std::move(d));
}

/// Connected random graph: a random spanning tree plus extra edges; random
/// lengths in [0.5, 2] and weights in [0.5, 1.5] unless `unit`.
inline ProxySpace random_space(std::size_t n, std::size_t extra, std::uint64_t seed, bool unit = false) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> len(0.5, 2.0), wt(0.5, 1.5);
  std::vector<Edge> edges;
  std::vector<std::pair<Vertex, Vertex>> used;
  auto has = [&](Vertex a, Vertex b) {
    for (auto [x, y] : used)
      if ((x == a && y == b) || (x == b && y == a)) return true;
    return false;
  };
  for (Vertex v = 1; v < n; ++v) {
    const Vertex u = static_cast<Vertex>(rng() % v);
    edges.push_back({u, v, unit ? 1.0 : len(rng)});
    used.emplace_back(u, v);
  }
  for (std::size_t k = 0; k < extra; ++k) {
    const Vertex a = static_cast<Vertex>(rng() % n), b = static_cast<Vertex>(rng() % n);
    if (a == b || has(a, b)) continue;
    edges.push_back({a, b, unit ? 1.0 : len(rng)});
    used.emplace_back(a, b);
  }
  std::vector<double> weights(n, 1.0);
  if (!unit)
    for (double& w : weights) w = wt(rng);
  return from_edges(n, edges, weights);
}

/// All-pairs shortest paths by Floyd-Warshall.
inline std::vector<std::vector<double>> floyd_warshall(const ProxySpace& s) {
  const double inf = std::numeric_limits<double>::infinity();
  const std::size_t n = s.size();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
  for (const Edge& e : s.edges()) d[e.a][e.b] = d[e.b][e.a] = std::min(d[e.a][e.b], e.length);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  return d;
}

}  // namespace testing_support
