#include "roydennet/generate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <unordered_map>

#include "roydennet/error.hpp"

namespace roydennet {

SpaceData generate_path(std::size_t n) {
  if (n < 2) throw InputError("path needs n >= 2");
  SpaceData data;
  for (std::size_t i = 0; i < n; ++i) {
    data.labels.push_back(static_cast<Label>(i));
    data.coords.push_back({static_cast<double>(i)});
    data.weights.push_back(1.0);
  }
  for (std::size_t i = 0; i + 1 < n; ++i)
    data.edges.push_back({static_cast<Vertex>(i), static_cast<Vertex>(i + 1), 1.0});
  return data;
}

SpaceData generate_lattice2d(std::size_t rows, std::size_t cols) {
  if (rows < 1 || cols < 1 || rows * cols < 2) throw InputError("lattice2d needs at least two vertices");
  SpaceData data;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      data.labels.push_back(static_cast<Label>(r * cols + c));
      data.coords.push_back({static_cast<double>(c), static_cast<double>(r)});
      data.weights.push_back(1.0);
    }
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      const auto v = static_cast<Vertex>(r * cols + c);
      if (c + 1 < cols) data.edges.push_back({v, v + 1, 1.0});
      if (r + 1 < rows) data.edges.push_back({v, static_cast<Vertex>(v + cols), 1.0});
    }
  return data;
}

SpaceData generate_regular_tree(std::size_t degree, std::size_t depth) {
  if (degree < 2) throw InputError("regular-tree needs degree >= 2");
  if (depth < 1) throw InputError("regular-tree needs depth >= 1");
  SpaceData data;
  data.labels.push_back(0);
  data.coords.push_back({});
  data.weights.push_back(1.0);
  std::vector<Vertex> frontier{0};
  for (std::size_t level = 1; level <= depth; ++level) {
    std::vector<Vertex> next;
    for (Vertex parent : frontier) {
      const std::size_t children = parent == 0 ? degree : degree - 1;
      for (std::size_t k = 0; k < children; ++k) {
        const auto child = static_cast<Vertex>(data.labels.size());
        data.labels.push_back(child);
        data.coords.push_back({});
        data.weights.push_back(1.0);
        data.edges.push_back({parent, child, 1.0});
        next.push_back(child);
      }
    }
    frontier = std::move(next);
  }
  return data;
}

namespace {

// Points on the hyperboloid t^2 - x^2 - y^2 = 1, t > 0.
using H = std::array<double, 3>;

double minkowski(const H& u, const H& v) { return -u[0] * v[0] + u[1] * v[1] + u[2] * v[2]; }

H lift(double x, double y) { return {std::sqrt(1.0 + x * x + y * y), x, y}; }

double hyperbolic_distance(const H& u, const H& v) { return std::acosh(std::max(1.0, -minkowski(u, v))); }

// Reflection of c in the geodesic through a and b.
H reflect(const H& a, const H& b, const H& c) {
  const std::array<double, 3> cross = {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
                                       a[0] * b[1] - a[1] * b[0]};
  const H n = {-cross[0], cross[1], cross[2]};
  const double s = 2.0 * minkowski(c, n) / minkowski(n, n);
  return lift(c[1] - s * n[1], c[2] - s * n[2]);
}

H midpoint(const H& a, const H& b) {
  const H s = {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
  const double norm = std::sqrt(-minkowski(s, s));
  return lift(s[1] / norm, s[2] / norm);
}

// Interior angle at a of the geodesic triangle abc.
double angle(const H& a, const H& b, const H& c) {
  const double ab = minkowski(a, b), ac = minkowski(a, c);
  const H u = {b[0] + ab * a[0], b[1] + ab * a[1], b[2] + ab * a[2]};
  const H w = {c[0] + ac * a[0], c[1] + ac * a[1], c[2] + ac * a[2]};
  const double cosine = minkowski(u, w) / std::sqrt(minkowski(u, u) * minkowski(w, w));
  return std::acos(std::clamp(cosine, -1.0, 1.0));
}

class PointSet {
 public:
  explicit PointSet(double cell) : cell_(cell) {}

  // Index of an existing point within 1e-8 (disk coordinates), or npos.
  std::size_t find(const H& p) const {
    const auto [x, y] = disk(p);
    const auto cx = static_cast<std::int64_t>(std::floor(x / cell_));
    const auto cy = static_cast<std::int64_t>(std::floor(y / cell_));
    for (std::int64_t dx = -1; dx <= 1; ++dx)
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        auto it = cells_.find(key(cx + dx, cy + dy));
        if (it == cells_.end()) continue;
        for (std::size_t i : it->second) {
          const auto [qx, qy] = disk(points_[i]);
          if (std::hypot(qx - x, qy - y) < 1e-8) return i;
        }
      }
    return npos;
  }

  std::size_t insert(const H& p) {
    if (const std::size_t i = find(p); i != npos) return i;
    const auto [x, y] = disk(p);
    cells_[key(static_cast<std::int64_t>(std::floor(x / cell_)), static_cast<std::int64_t>(std::floor(y / cell_)))]
        .push_back(points_.size());
    points_.push_back(p);
    return points_.size() - 1;
  }

  const std::vector<H>& points() const { return points_; }
  std::vector<H>& points() { return points_; }

  static std::pair<double, double> disk(const H& p) { return {p[1] / (1.0 + p[0]), p[2] / (1.0 + p[0])}; }
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  static std::int64_t key(std::int64_t cx, std::int64_t cy) { return cx * 1000003 + cy; }
  double cell_;
  std::unordered_map<std::int64_t, std::vector<std::size_t>> cells_;
  std::vector<H> points_;
};

using Face = std::array<std::size_t, 3>;

Face sorted(Face f) {
  std::sort(f.begin(), f.end());
  return f;
}

}  // namespace

SpaceData generate_hyperbolic_disk_mesh(const HyperbolicMeshOptions& options) {
  if (options.face_sides != 3) throw InputError("hyperbolic-disk-mesh supports triangular tilings only");
  const int q = options.vertex_degree;
  if (q < 7) throw InputError("hyperbolic-disk-mesh needs vertex_degree >= 7 for a hyperbolic {3,q} tiling");
  if (!(options.radius > 0.0) || options.radius > 12.0) throw InputError("hyperbolic-disk-mesh radius must lie in (0, 12]");
  if (options.subdivisions > 4) throw InputError("hyperbolic-disk-mesh supports at most 4 subdivisions");

  // Equilateral triangle with angles 2 pi / q: cosh(side) = cos(alpha) / (1 - cos(alpha)).
  const double alpha = 2.0 * std::numbers::pi / q;
  const double side = std::acosh(std::cos(alpha) / (1.0 - std::cos(alpha)));
  const H origin = lift(0.0, 0.0);
  auto inside = [&](const H& p) { return hyperbolic_distance(origin, p) <= options.radius + 1e-9; };

  PointSet set(1e-3);
  const std::size_t center = set.insert(origin);
  std::vector<std::size_t> ring;
  for (int k = 0; k < q; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / q;
    ring.push_back(set.insert(lift(std::sinh(side) * std::cos(theta), std::sinh(side) * std::sin(theta))));
  }
  if (!inside(set.points()[ring[0]])) throw InputError("hyperbolic-disk-mesh radius is smaller than one tile");

  std::vector<Face> faces;
  std::set<Face> seen;
  for (int k = 0; k < q; ++k) {
    const Face f = {center, ring[k], ring[(k + 1) % q]};
    faces.push_back(f);
    seen.insert(sorted(f));
  }
  for (std::size_t head = 0; head < faces.size(); ++head) {
    const Face f = faces[head];
    for (int e = 0; e < 3; ++e) {
      const std::size_t a = f[e], b = f[(e + 1) % 3], c = f[(e + 2) % 3];
      const H image = reflect(set.points()[a], set.points()[b], set.points()[c]);
      if (!inside(image)) continue;
      const std::size_t d = set.insert(image);
      const Face g = {b, a, d};
      if (seen.insert(sorted(g)).second) faces.push_back(g);
    }
  }

  for (std::size_t round = 0; round < options.subdivisions; ++round) {
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> mids;
    auto mid = [&](std::size_t a, std::size_t b) {
      const auto key = std::minmax(a, b);
      auto it = mids.find(key);
      if (it != mids.end()) return it->second;
      const std::size_t m = set.insert(midpoint(set.points()[a], set.points()[b]));
      mids.emplace(key, m);
      return m;
    };
    std::vector<Face> next;
    next.reserve(4 * faces.size());
    for (const Face& f : faces) {
      const std::size_t ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({ab, f[1], bc});
      next.push_back({ca, bc, f[2]});
      next.push_back({ab, bc, ca});
    }
    faces = std::move(next);
  }

  const auto& pts = set.points();
  SpaceData data;
  data.weights.assign(pts.size(), 0.0);
  std::map<std::pair<std::size_t, std::size_t>, int> edge_faces;
  for (const Face& f : faces) {
    const H &a = pts[f[0]], &b = pts[f[1]], &c = pts[f[2]];
    const double area = std::numbers::pi - angle(a, b, c) - angle(b, c, a) - angle(c, a, b);
    for (std::size_t v : f) data.weights[v] += area / 3.0;
    for (int e = 0; e < 3; ++e) ++edge_faces[std::minmax(f[e], f[(e + 1) % 3])];
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    data.labels.push_back(static_cast<Label>(i));
    const auto [x, y] = PointSet::disk(pts[i]);
    data.coords.push_back({x, y});
  }
  std::vector<char> rim(pts.size(), 0);
  for (const auto& [e, count] : edge_faces) {
    data.edges.push_back({static_cast<Vertex>(e.first), static_cast<Vertex>(e.second),
                          hyperbolic_distance(pts[e.first], pts[e.second])});
    if (count == 1) rim[e.first] = rim[e.second] = 1;
  }
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (rim[i]) data.boundary.push_back(static_cast<Vertex>(i));
  return data;
}

}  // namespace roydennet
