#pragma once
/*
 * Maximal kappa-separated subsets of a ProxySpace and the graph structure
 * they carry: two net points are neighbors when 0 < d(g, h) <= 3 kappa.
 *
 * Net points are addressed by their position in KappaNet::points (the
 * admission order of the greedy pass).
 */

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "roydennet/geometry.hpp"

namespace roydennet {

struct NetOptions {
  /// Neighbor threshold as a multiple of kappa.
  double adjacency_factor = 3.0;
};

struct KappaNet {
  double kappa = 0.0;
  double adjacency_factor = 3.0;
  std::vector<Vertex> points;
  std::vector<std::vector<std::size_t>> adjacency;  // ascending net indices
  std::size_t degree_bound = 0;
  std::vector<std::string> warnings;

  std::size_t size() const noexcept { return points.size(); }
  /// Net index of a proxy vertex, if it is a net point.
  std::optional<std::size_t> index_of(Vertex x) const;
};

/// Greedy pass over `order` (ascending index when empty): admit a vertex iff
/// it is at distance >= kappa from every vertex admitted so far. Throws
/// InputError when the resulting net graph is disconnected.
KappaNet extract_net(const ProxySpace& space, double kappa, std::span<const Vertex> order = {},
                     const NetOptions& options = {});

/// Neighbor lists under the adjacency rule, for an arbitrary point set.
std::vector<std::vector<std::size_t>> net_adjacency(const ProxySpace& space,
                                                    std::span<const Vertex> points, double kappa,
                                                    double adjacency_factor = 3.0);

/// Completes a net from its points (adjacency, degree bound, connectivity).
KappaNet make_net(const ProxySpace& space, std::vector<Vertex> points, double kappa,
                  const NetOptions& options = {});

/// Scale rule for kappa: kappa >= 2 * max edge length, and not coarser than
/// a tenth of the diameter. Returns human-readable diagnostics; `fatal` is
/// set when the lower bound is violated.
struct KappaDiagnostics {
  bool below_mesh_scale = false;
  bool above_diameter_fraction = false;
  bool exceeds_diameter = false;
  std::vector<std::string> messages;
};
KappaDiagnostics check_kappa(const ProxySpace& space, double kappa);

/// max over proxy vertices x of #(net intersect ball(x, r)).
std::size_t bounded_geometry(const ProxySpace& space, const KappaNet& net, double r);

/// Exhaustive audit of separation, maximality, adjacency rule, symmetry and
/// connectivity.
struct NetAudit {
  bool separated = true;
  bool maximal = true;
  bool adjacency_rule = true;
  bool symmetric = true;
  bool connected = true;
  double min_separation = 0.0;     // min distance between distinct net points
  double covering_radius = 0.0;    // max distance from a vertex to the net
  std::vector<std::string> violations;

  bool ok() const { return separated && maximal && adjacency_rule && symmetric && connected; }
};
NetAudit audit_net(const ProxySpace& space, const KappaNet& net);

/// Hop distances in the net graph from net index `source`.
std::vector<std::size_t> net_hop_distances(const KappaNet& net, std::size_t source);

/// The net as a combinatorial graph (unit lengths, unit weights); vertex i of
/// the result is net point i, labelled with the proxy label of that point.
ProxySpace net_graph_space(const ProxySpace& space, const KappaNet& net);

struct QiGrid {
  double a_step = 0.25;
  double a_max = 64.0;
  double b_step_factor = 0.25;  // b grid step, in units of kappa
  double b_max_factor = 100.0;  // b grid ceiling, in units of kappa
};

struct QiOptions {
  QiGrid grid;
  std::size_t full_scan_limit = 400;  // sample pairs above this many net points
  std::size_t sampled_pairs = 20000;
  std::uint64_t seed = 1;
};

/// One net-point pair with both of its distances.
struct QiPair {
  std::size_t g = 0;
  std::size_t h = 0;
  double ambient = 0.0;  // d_M(g, h)
  double hops = 0.0;     // d_Gamma(g, h)
};

struct QiEstimate {
  double a = 1.0;
  double b = 0.0;
  double c = 0.0;
  std::size_t sampled_pairs = 0;
  bool full_scan = true;
  QiPair binding;  // pair attaining the required offset at the chosen a
  QiGrid grid;
  double kappa = 0.0;
};

/// Net-point pairs used by estimate_qi (all pairs or a seeded sample).
std::vector<QiPair> qi_pairs(const ProxySpace& space, const KappaNet& net, const QiOptions& options);

/// Smallest grid (a, b), a first, satisfying
///   d_Gamma / a - b <= d_M <= a d_Gamma + b
/// for every pair. Throws Error naming a violating pair when none exists.
QiEstimate fit_qi(std::span<const QiPair> pairs, double kappa, const QiGrid& grid);

/// Smallest grid value a that satisfies both inequalities with offset b.
std::optional<double> min_scale_for_offset(std::span<const QiPair> pairs, double b,
                                           const QiGrid& grid);

/// Requires a connected net with at least two points.
QiEstimate estimate_qi(const ProxySpace& space, const KappaNet& net, const QiOptions& options = {});

/// True when both inequalities hold for the pair under (a, b).
bool qi_holds(const QiPair& pair, double a, double b);

}  // namespace roydennet
