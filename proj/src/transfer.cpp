#include "roydennet/transfer.hpp"

#include <algorithm>
#include <cmath>

#include "roydennet/error.hpp"
#include "roydennet/parallel.hpp"

namespace roydennet {

std::string to_string(FieldDomain domain) { return domain == FieldDomain::proxy ? "proxy" : "net"; }

ScalarField proxy_field(std::vector<double> values) { return {FieldDomain::proxy, std::move(values)}; }
ScalarField net_field(std::vector<double> values) { return {FieldDomain::net, std::move(values)}; }

PartitionOfUnity::PartitionOfUnity(double kappa, double lipschitz, std::size_t net_size,
                                   std::size_t net_degree_bound, std::vector<std::size_t> offsets,
                                   std::vector<PouEntry> entries, TransferRadii radii)
    : kappa_(kappa),
      lipschitz_(lipschitz),
      net_size_(net_size),
      net_degree_bound_(net_degree_bound),
      offsets_(std::move(offsets)),
      entries_(std::move(entries)),
      radii_(radii) {}

double PartitionOfUnity::value(std::size_t net_index, Vertex x) const {
  const auto row = at(x);
  auto it = std::lower_bound(row.begin(), row.end(), net_index,
                             [](const PouEntry& e, std::size_t g) { return e.net_index < g; });
  return it != row.end() && it->net_index == net_index ? it->value : 0.0;
}

double bump(double d, double kappa, const TransferRadii& radii) {
  const double outer = radii.support_factor * kappa;
  const double width = (radii.support_factor - radii.core_factor) * kappa;
  return std::clamp((outer - d) / width, 0.0, 1.0);
}

PartitionOfUnity build_partition(const ProxySpace& space, const KappaNet& net,
                                 const TransferRadii& radii) {
  const double kappa = net.kappa;
  if (!(radii.core_factor > 0.0) || !(radii.support_factor > radii.core_factor))
    throw InputError("bump support must exceed its core");
  if (space.kind() == SpaceKind::manifold_proxy && kappa < 2.0 * space.max_edge_length())
    throw InputError("kappa must be at least twice the max edge length (" +
                     std::to_string(2.0 * space.max_edge_length()) + ")");
  for (Vertex g : net.points) space.check_vertex(g);

  const double support = radii.support_factor * kappa;
  std::vector<std::vector<BallEntry>> reach(net.size());
  parallel_for(net.size(), [&](std::size_t i) { reach[i] = space.ball_with_distances(net.points[i], support); });

  const std::size_t n = space.size();
  std::vector<std::size_t> offsets(n + 1, 0);
  for (const auto& entries : reach)
    for (const BallEntry& e : entries)
      if (e.distance < support) ++offsets[e.vertex + 1];
  for (std::size_t x = 0; x < n; ++x) offsets[x + 1] += offsets[x];
  std::vector<PouEntry> entries(offsets[n]);
  std::vector<std::size_t> fill(offsets.begin(), offsets.end() - 1);
  for (std::size_t i = 0; i < net.size(); ++i)
    for (const BallEntry& e : reach[i])
      if (e.distance < support) entries[fill[e.vertex]++] = {i, bump(e.distance, kappa, radii)};

  for (Vertex x = 0; x < n; ++x) {
    double total = 0.0;
    for (std::size_t k = offsets[x]; k < offsets[x + 1]; ++k) total += entries[k].value;
    if (!(total > 0.0))
      throw InputError("no bump covers vertex " + std::to_string(space.label(x)) +
                       "; the net is not maximal");
    for (std::size_t k = offsets[x]; k < offsets[x + 1]; ++k) entries[k].value /= total;
  }
  const double lipschitz = 1.0 / ((radii.support_factor - radii.core_factor) * kappa);
  return PartitionOfUnity(kappa, lipschitz, net.size(), net.degree_bound, std::move(offsets),
                          std::move(entries), radii);
}

ScalarField smooth(const ScalarField& fbar, const PartitionOfUnity& pou) {
  if (fbar.domain != FieldDomain::net || fbar.size() != pou.net_size())
    throw InputError("smooth expects a field on the net");
  std::vector<double> out(pou.vertex_count(), 0.0);
  for (Vertex x = 0; x < out.size(); ++x) {
    double acc = 0.0;
    for (const PouEntry& e : pou.at(x)) acc += fbar.values[e.net_index] * e.value;
    out[x] = acc;
  }
  return proxy_field(std::move(out));
}

ScalarField discretize(const ScalarField& f, const ProxySpace& space, const KappaNet& net,
                       const TransferRadii& radii) {
  if (f.domain != FieldDomain::proxy || f.size() != space.size())
    throw InputError("discretize expects a field on the proxy space");
  const double radius = radii.averaging_factor * net.kappa;
  std::vector<double> out(net.size(), 0.0);
  parallel_for(net.size(), [&](std::size_t i) {
    double mass = 0.0, acc = 0.0;
    for (const BallEntry& e : space.ball_with_distances(net.points[i], radius)) {
      mass += space.weight(e.vertex);
      acc += space.weight(e.vertex) * f.values[e.vertex];
    }
    out[i] = acc / mass;
  });
  return net_field(std::move(out));
}

GradientBound discrete_gradient_bound(const ProxySpace& space, const PartitionOfUnity& pou) {
  GradientBound bound;
  bound.ceiling = (static_cast<double>(pou.net_degree_bound()) + 2.0) * pou.lipschitz();
  for (const Edge& e : space.edges()) {
    const auto lhs = pou.at(e.a);
    const auto rhs = pou.at(e.b);
    std::size_t i = 0, j = 0;
    while (i < lhs.size() || j < rhs.size()) {
      double diff;
      if (j == rhs.size() || (i < lhs.size() && lhs[i].net_index < rhs[j].net_index)) {
        diff = lhs[i++].value;
      } else if (i == lhs.size() || rhs[j].net_index < lhs[i].net_index) {
        diff = rhs[j++].value;
      } else {
        diff = lhs[i++].value - rhs[j++].value;
      }
      bound.measured = std::max(bound.measured, std::abs(diff) / e.length);
    }
  }
  return bound;
}

}  // namespace roydennet
