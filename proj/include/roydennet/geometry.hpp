#pragma once
/*
 * Finite metric-measure spaces.
 *
 * A ProxySpace is a connected weighted graph: edge lengths give the shortest
 * path metric, vertex weights give the measure. A combinatorial graph is the
 * special case with unit lengths and unit weights; a manifold proxy is a fine
 * sampling of a Riemannian manifold where balls, volumes and gradients are
 * read off the graph.
 *
 * Vertices are addressed by a dense index (Vertex) in declaration order. The
 * integer labels used in files are kept alongside for I/O.
 */

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace roydennet {

using Vertex = std::uint32_t;
using Label = std::int64_t;

enum class SpaceKind { combinatorial_graph, manifold_proxy };

std::string to_string(SpaceKind kind);

struct Neighbor {
  Vertex vertex;
  double length;
};

struct Edge {
  Vertex a;
  Vertex b;
  double length;
};

/// One entry of a truncated shortest-path search.
struct BallEntry {
  Vertex vertex;
  double distance;
};

class DistanceCache;

/// Raw description of a space, as read from a file or produced by a
/// generator. ProxySpace validates it.
struct SpaceData {
  std::vector<Label> labels;
  std::vector<std::vector<double>> coords;  // empty inner vector = no coords
  std::vector<double> weights;
  std::vector<Edge> edges;                  // indices into labels
  std::vector<Vertex> boundary;             // designated boundary, may be empty
};

class ProxySpace {
 public:
  /// Validates connectivity, positivity and the absence of self-loops and
  /// duplicate edges. Throws InputError.
  explicit ProxySpace(SpaceData data);

  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  std::span<const Neighbor> neighbors(Vertex x) const {
    return {adjacency_.data() + offsets_[x], offsets_[x + 1] - offsets_[x]};
  }
  std::size_t degree(Vertex x) const { return offsets_[x + 1] - offsets_[x]; }
  double weight(Vertex x) const { return weights_[x]; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::span<const double> coords(Vertex x) const { return coords_[x]; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  Label label(Vertex x) const { return labels_[x]; }
  std::span<const Label> labels() const noexcept { return labels_; }
  std::optional<Vertex> find(Label label) const;
  /// Throws InputError naming the label when it is unknown.
  Vertex vertex(Label label) const;
  /// Throws InputError when x is out of range.
  void check_vertex(Vertex x) const;

  /// Max neighbor count over all vertices.
  std::size_t degree_bound() const noexcept { return degree_bound_; }
  SpaceKind kind() const noexcept { return kind_; }
  double max_edge_length() const noexcept { return max_edge_length_; }

  /// Vertices marking the outer edge of a finite patch. Read from `b` lines
  /// or, when absent, every vertex whose degree is below degree_bound().
  std::span<const Vertex> designated_boundary() const noexcept { return boundary_; }

  /// Full single-source distances, cached per source. Thread-safe.
  std::shared_ptr<const std::vector<double>> distances_from(Vertex source) const;
  /// Vertices with distance(source, y) <= radius, ascending by vertex.
  std::vector<BallEntry> ball_with_distances(Vertex source, double radius) const;

  void set_cache_capacity(std::size_t sources) const;

  /// Copy of the underlying description (for writing back to disk).
  SpaceData data() const;

 private:
  std::vector<Label> labels_;
  std::vector<std::vector<double>> coords_;
  std::vector<double> weights_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> adjacency_;
  std::vector<Vertex> boundary_;
  std::vector<std::pair<Label, Vertex>> label_index_;  // sorted by label
  std::size_t degree_bound_ = 0;
  SpaceKind kind_ = SpaceKind::combinatorial_graph;
  double max_edge_length_ = 0.0;
  std::shared_ptr<DistanceCache> cache_;
};

/// Per-radius min/max ball volume over a set of centers.
struct BallVolumeProfile {
  std::vector<double> radii;
  std::vector<double> vmin;
  std::vector<double> vmax;
};

/// Reads the line format:
///   # comment
///   v <id> [x y z ...] [w=<weight>]
///   e <id> <id> [len=<length>]
///   b <id> [<id> ...]
ProxySpace load_space(std::istream& in);
ProxySpace load_space_file(const std::string& path);
void write_space(std::ostream& out, const ProxySpace& space);

double distance(const ProxySpace& space, Vertex a, Vertex b);
std::vector<Vertex> ball(const ProxySpace& space, Vertex center, double r);
double volume(const ProxySpace& space, std::span<const Vertex> set);
BallVolumeProfile volume_profile(const ProxySpace& space, std::span<const double> radii,
                                 std::span<const Vertex> centers);

/// Distance from every vertex to the nearest source.
std::vector<double> multi_source_distances(const ProxySpace& space,
                                           std::span<const Vertex> sources);
/// Vertices of one shortest path from a to b, both included.
std::vector<Vertex> shortest_path(const ProxySpace& space, Vertex a, Vertex b);
/// Max distance from source to any vertex.
double eccentricity(const ProxySpace& space, Vertex source);
/// Lower bound on the diameter from two eccentricity sweeps.
double diameter_estimate(const ProxySpace& space);

}  // namespace roydennet
