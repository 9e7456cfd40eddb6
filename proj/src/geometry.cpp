#include "roydennet/geometry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <fstream>
#include <functional>
#include <iomanip>
#include <istream>
#include <limits>
#include <mutex>
#include <ostream>
#include <queue>
#include <sstream>
#include <unordered_map>

#include "roydennet/error.hpp"

namespace roydennet {

std::string to_string(SpaceKind kind) {
  return kind == SpaceKind::combinatorial_graph ? "combinatorial-graph" : "manifold-proxy";
}

class DistanceCache {
 public:
  explicit DistanceCache(std::size_t capacity) : capacity_(capacity) {}

  std::shared_ptr<const std::vector<double>> get(
      Vertex source, const std::function<std::vector<double>()>& compute) {
    {
      std::lock_guard lock(mutex_);
      if (auto it = rows_.find(source); it != rows_.end()) return it->second;
    }
    auto row = std::make_shared<const std::vector<double>>(compute());
    std::lock_guard lock(mutex_);
    if (capacity_ == 0) return row;
    if (auto it = rows_.find(source); it != rows_.end()) return it->second;
    while (rows_.size() >= capacity_ && !order_.empty()) {
      rows_.erase(order_.front());
      order_.pop_front();
    }
    rows_.emplace(source, row);
    order_.push_back(source);
    return row;
  }

  void set_capacity(std::size_t capacity) {
    std::lock_guard lock(mutex_);
    capacity_ = capacity;
    while (rows_.size() > capacity_ && !order_.empty()) {
      rows_.erase(order_.front());
      order_.pop_front();
    }
  }

 private:
  std::mutex mutex_;
  std::size_t capacity_;
  std::unordered_map<Vertex, std::shared_ptr<const std::vector<double>>> rows_;
  std::deque<Vertex> order_;
};

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kDefaultCacheRows = 1024;

using QueueItem = std::pair<double, Vertex>;
using MinQueue = std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<>>;

}  // namespace

ProxySpace::ProxySpace(SpaceData data)
    : labels_(std::move(data.labels)),
      coords_(std::move(data.coords)),
      weights_(std::move(data.weights)),
      edges_(std::move(data.edges)),
      boundary_(std::move(data.boundary)),
      cache_(std::make_shared<DistanceCache>(kDefaultCacheRows)) {
  const std::size_t n = labels_.size();
  if (n == 0) throw InputError("space has no vertices");
  if (n > std::numeric_limits<Vertex>::max()) throw InputError("too many vertices");
  if (weights_.size() != n) throw InputError("weight count does not match vertex count");
  coords_.resize(n);

  label_index_.reserve(n);
  for (Vertex x = 0; x < n; ++x) label_index_.emplace_back(labels_[x], x);
  std::sort(label_index_.begin(), label_index_.end());
  for (std::size_t i = 1; i < n; ++i)
    if (label_index_[i].first == label_index_[i - 1].first)
      throw InputError("duplicate vertex id " + std::to_string(label_index_[i].first));

  bool unit = true;
  for (Vertex x = 0; x < n; ++x) {
    const double w = weights_[x];
    if (!(w > 0.0) || !std::isfinite(w))
      throw InputError("vertex " + std::to_string(labels_[x]) + ": weight must be positive and finite");
    if (w != 1.0) unit = false;
  }

  std::vector<std::size_t> degree(n, 0);
  for (const Edge& e : edges_) {
    if (e.a >= n || e.b >= n) throw InputError("edge references unknown vertex");
    if (e.a == e.b) throw InputError("self-loop at vertex " + std::to_string(labels_[e.a]));
    if (!(e.length > 0.0) || !std::isfinite(e.length))
      throw InputError("edge " + std::to_string(labels_[e.a]) + "-" + std::to_string(labels_[e.b]) +
                       ": length must be positive and finite");
    if (e.length != 1.0) unit = false;
    max_edge_length_ = std::max(max_edge_length_, e.length);
    ++degree[e.a];
    ++degree[e.b];
  }
  kind_ = unit ? SpaceKind::combinatorial_graph : SpaceKind::manifold_proxy;

  offsets_.assign(n + 1, 0);
  for (Vertex x = 0; x < n; ++x) offsets_[x + 1] = offsets_[x] + degree[x];
  adjacency_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const Edge& e : edges_) {
    adjacency_[fill[e.a]++] = {e.b, e.length};
    adjacency_[fill[e.b]++] = {e.a, e.length};
  }
  for (Vertex x = 0; x < n; ++x) {
    auto first = adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[x]);
    auto last = adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[x + 1]);
    std::sort(first, last, [](const Neighbor& l, const Neighbor& r) { return l.vertex < r.vertex; });
    for (auto it = first; it != last && it + 1 != last; ++it)
      if (it->vertex == (it + 1)->vertex)
        throw InputError("duplicate edge " + std::to_string(labels_[x]) + "-" +
                         std::to_string(labels_[it->vertex]));
    degree_bound_ = std::max(degree_bound_, degree[x]);
  }

  // Connectivity by BFS from vertex 0.
  std::vector<char> seen(n, 0);
  std::vector<Vertex> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const Vertex x = stack.back();
    stack.pop_back();
    for (const Neighbor& nb : neighbors(x))
      if (!seen[nb.vertex]) {
        seen[nb.vertex] = 1;
        ++reached;
        stack.push_back(nb.vertex);
      }
  }
  if (reached != n)
    throw InputError("space is disconnected: " + std::to_string(n - reached) +
                     " vertices unreachable from vertex " + std::to_string(labels_[0]));

  for (Vertex b : boundary_)
    if (b >= n) throw InputError("boundary references unknown vertex");
  std::sort(boundary_.begin(), boundary_.end());
  boundary_.erase(std::unique(boundary_.begin(), boundary_.end()), boundary_.end());
  if (boundary_.empty())
    for (Vertex x = 0; x < n; ++x)
      if (degree[x] < degree_bound_) boundary_.push_back(x);
}

std::optional<Vertex> ProxySpace::find(Label label) const {
  auto it = std::lower_bound(label_index_.begin(), label_index_.end(),
                             std::pair<Label, Vertex>{label, 0});
  if (it == label_index_.end() || it->first != label) return std::nullopt;
  return it->second;
}

Vertex ProxySpace::vertex(Label label) const {
  if (auto v = find(label)) return *v;
  throw InputError("unknown vertex id " + std::to_string(label));
}

void ProxySpace::check_vertex(Vertex x) const {
  if (x >= size()) throw InputError("unknown vertex index " + std::to_string(x));
}

std::shared_ptr<const std::vector<double>> ProxySpace::distances_from(Vertex source) const {
  check_vertex(source);
  return cache_->get(source, [&] {
    std::vector<double> dist(size(), kInf);
    MinQueue queue;
    dist[source] = 0.0;
    queue.emplace(0.0, source);
    while (!queue.empty()) {
      auto [d, x] = queue.top();
      queue.pop();
      if (d > dist[x]) continue;
      for (const Neighbor& nb : neighbors(x)) {
        const double nd = d + nb.length;
        if (nd < dist[nb.vertex]) {
          dist[nb.vertex] = nd;
          queue.emplace(nd, nb.vertex);
        }
      }
    }
    return dist;
  });
}

std::vector<BallEntry> ProxySpace::ball_with_distances(Vertex source, double radius) const {
  check_vertex(source);
  std::unordered_map<Vertex, double> dist;
  MinQueue queue;
  dist[source] = 0.0;
  queue.emplace(0.0, source);
  std::vector<BallEntry> out;
  while (!queue.empty()) {
    auto [d, x] = queue.top();
    queue.pop();
    if (d > dist[x]) continue;
    out.push_back({x, d});
    for (const Neighbor& nb : neighbors(x)) {
      const double nd = d + nb.length;
      if (nd > radius) continue;
      auto it = dist.find(nb.vertex);
      if (it == dist.end() || nd < it->second) {
        dist[nb.vertex] = nd;
        queue.emplace(nd, nb.vertex);
      }
    }
  }
  // A vertex may be popped twice only with equal keys; keep the first.
  std::sort(out.begin(), out.end(), [](const BallEntry& l, const BallEntry& r) {
    return l.vertex < r.vertex || (l.vertex == r.vertex && l.distance < r.distance);
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const BallEntry& l, const BallEntry& r) { return l.vertex == r.vertex; }),
            out.end());
  return out;
}

void ProxySpace::set_cache_capacity(std::size_t sources) const { cache_->set_capacity(sources); }

SpaceData ProxySpace::data() const {
  return SpaceData{labels_, coords_, weights_, edges_, boundary_};
}

namespace {

double parse_number(std::string_view token, std::size_t line, const char* what) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last)
    throw ParseError(line, std::string("invalid ") + what + " '" + std::string(token) + "'");
  return value;
}

Label parse_label(std::string_view token, std::size_t line) {
  Label value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    throw ParseError(line, "invalid vertex id '" + std::string(token) + "'");
  return value;
}

}  // namespace

ProxySpace load_space(std::istream& in) {
  SpaceData data;
  std::unordered_map<Label, Vertex> index;
  std::vector<std::pair<std::pair<Label, Label>, std::pair<double, std::size_t>>> raw_edges;
  std::vector<std::pair<Label, std::size_t>> raw_boundary;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    std::istringstream tokens(text);
    std::string kind;
    if (!(tokens >> kind) || kind[0] == '#') continue;
    std::vector<std::string> rest;
    for (std::string t; tokens >> t;) rest.push_back(t);
    if (kind == "v") {
      if (rest.empty()) throw ParseError(line, "vertex line needs an id");
      const Label id = parse_label(rest[0], line);
      if (index.count(id)) throw ParseError(line, "duplicate vertex id " + std::to_string(id));
      double weight = 1.0;
      std::vector<double> coords;
      bool weight_seen = false;
      for (std::size_t i = 1; i < rest.size(); ++i) {
        std::string_view tok = rest[i];
        if (tok.rfind("w=", 0) == 0) {
          if (weight_seen) throw ParseError(line, "weight given twice");
          weight = parse_number(tok.substr(2), line, "weight");
          weight_seen = true;
        } else {
          if (weight_seen) throw ParseError(line, "coordinates must precede w=");
          coords.push_back(parse_number(tok, line, "coordinate"));
        }
      }
      if (!(weight > 0.0) || !std::isfinite(weight))
        throw ParseError(line, "weight must be positive and finite");
      index.emplace(id, static_cast<Vertex>(data.labels.size()));
      data.labels.push_back(id);
      data.coords.push_back(std::move(coords));
      data.weights.push_back(weight);
    } else if (kind == "e") {
      if (rest.size() < 2 || rest.size() > 3) throw ParseError(line, "edge line needs two ids");
      const Label a = parse_label(rest[0], line);
      const Label b = parse_label(rest[1], line);
      double length = 1.0;
      if (rest.size() == 3) {
        // "len=" is optional: "e 1 2 0.5" also reads as a length.
        std::string_view tok = rest[2];
        if (tok.rfind("len=", 0) == 0) tok.remove_prefix(4);
        length = parse_number(tok, line, "length");
      }
      if (a == b) throw ParseError(line, "self-loop at vertex " + std::to_string(a));
      if (!(length > 0.0) || !std::isfinite(length))
        throw ParseError(line, "length must be positive and finite");
      raw_edges.push_back({{a, b}, {length, line}});
    } else if (kind == "b") {
      if (rest.empty()) throw ParseError(line, "boundary line needs at least one id");
      for (const std::string& tok : rest) raw_boundary.emplace_back(parse_label(tok, line), line);
    } else {
      throw ParseError(line, "unknown record type '" + kind + "'");
    }
  }
  auto lookup = [&](Label id, std::size_t at) {
    auto it = index.find(id);
    if (it == index.end()) throw ParseError(at, "unknown vertex id " + std::to_string(id));
    return it->second;
  };
  for (const auto& [ids, info] : raw_edges)
    data.edges.push_back({lookup(ids.first, info.second), lookup(ids.second, info.second), info.first});
  for (const auto& [id, at] : raw_boundary) data.boundary.push_back(lookup(id, at));
  return ProxySpace(std::move(data));
}

ProxySpace load_space_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open space file '" + path + "'");
  try {
    return load_space(in);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

void write_space(std::ostream& out, const ProxySpace& space) {
  const auto old_precision = out.precision(17);
  out << "# roydennet space: " << to_string(space.kind()) << ", " << space.size() << " vertices, "
      << space.edge_count() << " edges\n";
  for (Vertex x = 0; x < space.size(); ++x) {
    out << "v " << space.label(x);
    for (double c : space.coords(x)) out << ' ' << c;
    if (space.weight(x) != 1.0) out << " w=" << space.weight(x);
    out << '\n';
  }
  for (const Edge& e : space.edges()) {
    out << "e " << space.label(e.a) << ' ' << space.label(e.b);
    if (e.length != 1.0) out << " len=" << e.length;
    out << '\n';
  }
  const auto boundary = space.designated_boundary();
  for (std::size_t i = 0; i < boundary.size(); i += 16) {
    out << 'b';
    for (std::size_t j = i; j < std::min(boundary.size(), i + 16); ++j)
      out << ' ' << space.label(boundary[j]);
    out << '\n';
  }
  out.precision(old_precision);
}

double distance(const ProxySpace& space, Vertex a, Vertex b) {
  space.check_vertex(b);
  return (*space.distances_from(a))[b];
}

std::vector<Vertex> ball(const ProxySpace& space, Vertex center, double r) {
  if (!(r >= 0.0)) throw InputError("ball radius must be nonnegative");
  std::vector<Vertex> out;
  for (const BallEntry& e : space.ball_with_distances(center, r)) out.push_back(e.vertex);
  return out;
}

double volume(const ProxySpace& space, std::span<const Vertex> set) {
  double total = 0.0;
  for (Vertex x : set) {
    space.check_vertex(x);
    total += space.weight(x);
  }
  return total;
}

BallVolumeProfile volume_profile(const ProxySpace& space, std::span<const double> radii,
                                 std::span<const Vertex> centers) {
  if (radii.empty()) throw InputError("volume profile needs at least one radius");
  if (centers.empty()) throw InputError("volume profile needs at least one center");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] >= 0.0)) throw InputError("radii must be nonnegative");
    if (i > 0 && !(radii[i] > radii[i - 1])) throw InputError("radii must be increasing");
  }
  BallVolumeProfile profile;
  profile.radii.assign(radii.begin(), radii.end());
  profile.vmin.assign(radii.size(), kInf);
  profile.vmax.assign(radii.size(), 0.0);
  for (Vertex c : centers) {
    auto entries = space.ball_with_distances(c, radii.back());
    std::sort(entries.begin(), entries.end(), [](const BallEntry& l, const BallEntry& r) {
      return l.distance < r.distance || (l.distance == r.distance && l.vertex < r.vertex);
    });
    double acc = 0.0;
    std::size_t k = 0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
      while (k < entries.size() && entries[k].distance <= radii[i]) acc += space.weight(entries[k++].vertex);
      profile.vmin[i] = std::min(profile.vmin[i], acc);
      profile.vmax[i] = std::max(profile.vmax[i], acc);
    }
  }
  return profile;
}

std::vector<double> multi_source_distances(const ProxySpace& space, std::span<const Vertex> sources) {
  std::vector<double> dist(space.size(), kInf);
  MinQueue queue;
  for (Vertex s : sources) {
    space.check_vertex(s);
    dist[s] = 0.0;
    queue.emplace(0.0, s);
  }
  while (!queue.empty()) {
    auto [d, x] = queue.top();
    queue.pop();
    if (d > dist[x]) continue;
    for (const Neighbor& nb : space.neighbors(x)) {
      const double nd = d + nb.length;
      if (nd < dist[nb.vertex]) {
        dist[nb.vertex] = nd;
        queue.emplace(nd, nb.vertex);
      }
    }
  }
  return dist;
}

std::vector<Vertex> shortest_path(const ProxySpace& space, Vertex a, Vertex b) {
  space.check_vertex(b);
  const auto dist_a = space.distances_from(a);
  // Walk back from b choosing the lowest-index predecessor on a shortest path.
  std::vector<Vertex> path{b};
  Vertex x = b;
  while (x != a) {
    Vertex next = x;
    for (const Neighbor& nb : space.neighbors(x)) {
      const double via = (*dist_a)[nb.vertex] + nb.length;
      if (via <= (*dist_a)[x] && (*dist_a)[nb.vertex] < (*dist_a)[x]) {
        next = nb.vertex;
        break;
      }
    }
    if (next == x) throw Error("shortest path reconstruction failed");
    x = next;
    path.push_back(x);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

double eccentricity(const ProxySpace& space, Vertex source) {
  const auto dist = space.distances_from(source);
  return *std::max_element(dist->begin(), dist->end());
}

double diameter_estimate(const ProxySpace& space) {
  const auto d0 = space.distances_from(0);
  const Vertex far = static_cast<Vertex>(std::max_element(d0->begin(), d0->end()) - d0->begin());
  return std::max(eccentricity(space, far), (*d0)[far]);
}

}  // namespace roydennet
