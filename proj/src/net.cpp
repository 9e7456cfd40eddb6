#include "roydennet/net.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>
#include <sstream>

#include "roydennet/error.hpp"

namespace roydennet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();

std::string fmt(double value) {
  std::ostringstream os;
  os.precision(6);
  os << value;
  return os.str();
}

bool net_connected(const std::vector<std::vector<std::size_t>>& adjacency) {
  if (adjacency.empty()) return true;
  std::vector<char> seen(adjacency.size(), 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const std::size_t g = stack.back();
    stack.pop_back();
    for (std::size_t h : adjacency[g])
      if (!seen[h]) {
        seen[h] = 1;
        ++reached;
        stack.push_back(h);
      }
  }
  return reached == adjacency.size();
}

}  // namespace

std::optional<std::size_t> KappaNet::index_of(Vertex x) const {
  for (std::size_t i = 0; i < points.size(); ++i)
    if (points[i] == x) return i;
  return std::nullopt;
}

KappaDiagnostics check_kappa(const ProxySpace& space, double kappa) {
  KappaDiagnostics diag;
  if (kappa < 2.0 * space.max_edge_length()) {
    diag.below_mesh_scale = true;
    diag.messages.push_back("kappa " + fmt(kappa) + " is below twice the max edge length " +
                            fmt(space.max_edge_length()));
  }
  const double diameter = diameter_estimate(space);
  if (kappa > diameter) {
    diag.exceeds_diameter = true;
    diag.messages.push_back("kappa " + fmt(kappa) + " exceeds the diameter " + fmt(diameter) +
                            "; the net is a single point");
  } else if (kappa > diameter / 10.0) {
    diag.above_diameter_fraction = true;
    diag.messages.push_back("kappa " + fmt(kappa) + " exceeds a tenth of the diameter " +
                            fmt(diameter));
  }
  return diag;
}

std::vector<std::vector<std::size_t>> net_adjacency(const ProxySpace& space,
                                                    std::span<const Vertex> points, double kappa,
                                                    double adjacency_factor) {
  std::vector<std::size_t> net_index(space.size(), kUnreached);
  for (std::size_t i = 0; i < points.size(); ++i) net_index[points[i]] = i;
  const double reach = adjacency_factor * kappa;
  std::vector<std::vector<std::size_t>> adjacency(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (const BallEntry& e : space.ball_with_distances(points[i], reach)) {
      const std::size_t j = net_index[e.vertex];
      if (j != kUnreached && e.distance > 0.0) adjacency[i].push_back(j);
    }
    std::sort(adjacency[i].begin(), adjacency[i].end());
  }
  return adjacency;
}

KappaNet make_net(const ProxySpace& space, std::vector<Vertex> points, double kappa,
                  const NetOptions& options) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw InputError("kappa must be positive");
  if (!(options.adjacency_factor > 0.0)) throw InputError("adjacency factor must be positive");
  if (points.empty()) throw InputError("net has no points");
  KappaNet net;
  net.kappa = kappa;
  net.adjacency_factor = options.adjacency_factor;
  net.points = std::move(points);
  for (Vertex p : net.points) space.check_vertex(p);
  net.adjacency = net_adjacency(space, net.points, kappa, options.adjacency_factor);
  for (const auto& list : net.adjacency) net.degree_bound = std::max(net.degree_bound, list.size());
  if (!net_connected(net.adjacency))
    throw InputError("net graph is disconnected at kappa " + fmt(kappa) +
                     "; kappa is too large relative to the sampling density");
  return net;
}

KappaNet extract_net(const ProxySpace& space, double kappa, std::span<const Vertex> order,
                     const NetOptions& options) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw InputError("kappa must be positive");
  std::vector<Vertex> sequence;
  if (order.empty()) {
    sequence.resize(space.size());
    for (Vertex x = 0; x < space.size(); ++x) sequence[x] = x;
  } else {
    if (order.size() != space.size()) throw InputError("order must list every vertex exactly once");
    std::vector<char> seen(space.size(), 0);
    for (Vertex x : order) {
      space.check_vertex(x);
      if (seen[x]) throw InputError("order lists vertex " + std::to_string(space.label(x)) + " twice");
      seen[x] = 1;
    }
    sequence.assign(order.begin(), order.end());
  }

  // cover[x] = distance from x to the nearest admitted point, exact below kappa.
  std::vector<double> cover(space.size(), kInf);
  std::vector<Vertex> points;
  for (Vertex x : sequence) {
    if (cover[x] < kappa) continue;
    points.push_back(x);
    for (const BallEntry& e : space.ball_with_distances(x, kappa))
      cover[e.vertex] = std::min(cover[e.vertex], e.distance);
  }
  KappaNet net = make_net(space, std::move(points), kappa, options);
  net.warnings = check_kappa(space, kappa).messages;
  return net;
}

std::size_t bounded_geometry(const ProxySpace& space, const KappaNet& net, double r) {
  if (!(r > 0.0)) throw InputError("radius must be positive");
  std::vector<std::size_t> count(space.size(), 0);
  for (Vertex g : net.points)
    for (const BallEntry& e : space.ball_with_distances(g, r)) ++count[e.vertex];
  return *std::max_element(count.begin(), count.end());
}

NetAudit audit_net(const ProxySpace& space, const KappaNet& net) {
  NetAudit audit;
  const double kappa = net.kappa;
  std::vector<std::size_t> net_index(space.size(), kUnreached);
  for (std::size_t i = 0; i < net.points.size(); ++i) net_index[net.points[i]] = i;

  audit.min_separation = kInf;
  const double reach = net.adjacency_factor * kappa;
  for (std::size_t i = 0; i < net.points.size(); ++i) {
    std::vector<std::size_t> expected;
    for (const BallEntry& e : space.ball_with_distances(net.points[i], std::max(reach, kappa))) {
      const std::size_t j = net_index[e.vertex];
      if (j == kUnreached || j == i) continue;
      audit.min_separation = std::min(audit.min_separation, e.distance);
      if (e.distance < kappa) {
        audit.separated = false;
        audit.violations.push_back("points " + std::to_string(space.label(net.points[i])) + " and " +
                                   std::to_string(space.label(e.vertex)) + " are " + fmt(e.distance) +
                                   " apart");
      }
      if (e.distance > 0.0 && e.distance <= reach) expected.push_back(j);
    }
    std::sort(expected.begin(), expected.end());
    if (i >= net.adjacency.size() || expected != net.adjacency[i]) {
      audit.adjacency_rule = false;
      audit.violations.push_back("neighbor list of " + std::to_string(space.label(net.points[i])) +
                                 " does not follow the adjacency rule");
    }
  }
  for (std::size_t i = 0; i < net.adjacency.size(); ++i)
    for (std::size_t j : net.adjacency[i])
      if (j >= net.adjacency.size() ||
          !std::binary_search(net.adjacency[j].begin(), net.adjacency[j].end(), i)) {
        audit.symmetric = false;
        audit.violations.push_back("neighbor relation is not symmetric at " +
                                   std::to_string(space.label(net.points[i])));
      }

  const auto cover = multi_source_distances(space, net.points);
  audit.covering_radius = *std::max_element(cover.begin(), cover.end());
  for (Vertex x = 0; x < space.size(); ++x)
    if (cover[x] >= kappa) {  // x could still be admitted
      audit.maximal = false;
      audit.violations.push_back("vertex " + std::to_string(space.label(x)) + " is " +
                                 fmt(cover[x]) + " from the net");
      break;
    }
  audit.connected = audit.symmetric && net_connected(net.adjacency);
  if (!audit.connected) audit.violations.push_back("net graph is disconnected");
  return audit;
}

std::vector<std::size_t> net_hop_distances(const KappaNet& net, std::size_t source) {
  std::vector<std::size_t> hops(net.size(), kUnreached);
  std::queue<std::size_t> queue;
  hops[source] = 0;
  queue.push(source);
  while (!queue.empty()) {
    const std::size_t g = queue.front();
    queue.pop();
    for (std::size_t h : net.adjacency[g])
      if (hops[h] == kUnreached) {
        hops[h] = hops[g] + 1;
        queue.push(h);
      }
  }
  return hops;
}

ProxySpace net_graph_space(const ProxySpace& space, const KappaNet& net) {
  SpaceData data;
  for (Vertex g : net.points) {
    data.labels.push_back(space.label(g));
    data.coords.emplace_back(space.coords(g).begin(), space.coords(g).end());
    data.weights.push_back(1.0);
  }
  for (std::size_t i = 0; i < net.adjacency.size(); ++i)
    for (std::size_t j : net.adjacency[i])
      if (i < j) data.edges.push_back({static_cast<Vertex>(i), static_cast<Vertex>(j), 1.0});
  return ProxySpace(std::move(data));
}

bool qi_holds(const QiPair& pair, double a, double b) {
  return pair.hops / a - b <= pair.ambient && pair.ambient <= a * pair.hops + b;
}

std::vector<QiPair> qi_pairs(const ProxySpace& space, const KappaNet& net, const QiOptions& options) {
  const std::size_t m = net.size();
  std::vector<std::pair<std::size_t, std::size_t>> index_pairs;
  if (m <= options.full_scan_limit) {
    for (std::size_t g = 0; g < m; ++g)
      for (std::size_t h = g + 1; h < m; ++h) index_pairs.emplace_back(g, h);
  } else {
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<std::size_t> pick(0, m - 1);
    while (index_pairs.size() < options.sampled_pairs) {
      std::size_t g = pick(rng), h = pick(rng);
      if (g == h) continue;
      if (g > h) std::swap(g, h);
      index_pairs.emplace_back(g, h);
    }
    std::sort(index_pairs.begin(), index_pairs.end());
    index_pairs.erase(std::unique(index_pairs.begin(), index_pairs.end()), index_pairs.end());
  }
  std::vector<QiPair> pairs;
  pairs.reserve(index_pairs.size());
  std::size_t current = kUnreached;
  std::shared_ptr<const std::vector<double>> row;
  std::vector<std::size_t> hops;
  for (auto [g, h] : index_pairs) {
    if (g != current) {
      current = g;
      row = space.distances_from(net.points[g]);
      hops = net_hop_distances(net, g);
    }
    if (hops[h] == kUnreached) throw InputError("net graph is disconnected");
    pairs.push_back({g, h, (*row)[net.points[h]], static_cast<double>(hops[h])});
  }
  return pairs;
}

namespace {

std::size_t grid_count(double max, double step) {
  return static_cast<std::size_t>(std::floor(max / step + 1e-9)) + 1;
}

}  // namespace

std::optional<double> min_scale_for_offset(std::span<const QiPair> pairs, double b,
                                           const QiGrid& grid) {
  const std::size_t count = grid_count(grid.a_max - 1.0, grid.a_step);
  for (std::size_t i = 0; i < count; ++i) {
    const double a = 1.0 + static_cast<double>(i) * grid.a_step;
    if (std::all_of(pairs.begin(), pairs.end(), [&](const QiPair& p) { return qi_holds(p, a, b); }))
      return a;
  }
  return std::nullopt;
}

QiEstimate fit_qi(std::span<const QiPair> pairs, double kappa, const QiGrid& grid) {
  if (pairs.empty()) throw InputError("quasi-isometry fit needs at least one pair");
  const double b_step = grid.b_step_factor * kappa;
  const double b_max = grid.b_max_factor * kappa;
  const std::size_t count = grid_count(grid.a_max - 1.0, grid.a_step);
  QiPair worst = pairs.front();
  for (std::size_t i = 0; i < count; ++i) {
    const double a = 1.0 + static_cast<double>(i) * grid.a_step;
    double required = 0.0;
    worst = pairs.front();
    for (const QiPair& p : pairs) {
      const double need = std::max(p.hops / a - p.ambient, p.ambient - a * p.hops);
      if (need > required) {
        required = need;
        worst = p;
      }
    }
    auto steps = static_cast<std::size_t>(std::ceil(required / b_step));
    double b = static_cast<double>(steps) * b_step;
    while (!std::all_of(pairs.begin(), pairs.end(), [&](const QiPair& p) { return qi_holds(p, a, b); }))
      b = static_cast<double>(++steps) * b_step;
    if (b <= b_max * (1.0 + 1e-12)) {
      QiEstimate est;
      est.a = a;
      est.b = b;
      est.sampled_pairs = pairs.size();
      est.binding = worst;
      est.grid = grid;
      est.kappa = kappa;
      return est;
    }
  }
  throw Error("no quasi-isometry constants on the search grid; violating pair (" +
              std::to_string(worst.g) + ", " + std::to_string(worst.h) + ") with d_M " +
              fmt(worst.ambient) + " and hop distance " + fmt(worst.hops));
}

QiEstimate estimate_qi(const ProxySpace& space, const KappaNet& net, const QiOptions& options) {
  if (net.size() < 2) throw InputError("quasi-isometry estimate needs at least two net points");
  const auto pairs = qi_pairs(space, net, options);
  QiEstimate est = fit_qi(pairs, net.kappa, options.grid);
  est.full_scan = net.size() <= options.full_scan_limit;
  const auto cover = multi_source_distances(space, net.points);
  est.c = *std::max_element(cover.begin(), cover.end());
  return est;
}

}  // namespace roydennet
