#include "roydennet/dirichlet.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "roydennet/error.hpp"
#include "roydennet/parallel.hpp"

namespace roydennet {

namespace {

constexpr int kLocalIterations = 200;

/// |d|^(p-2) d with the zero-increment convention.
double signed_power(double d, double p) {
  if (d == 0.0) return 0.0;
  return std::copysign(std::pow(std::abs(d), p - 1.0), d);
}

/// phi'(t) / (-p) = sum c_i |v_i - t|^(p-2) (v_i - t); decreasing in t.
double local_slope(std::span<const double> values, std::span<const double> coeffs, double p, double t) {
  double acc = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) acc += coeffs[i] * signed_power(values[i] - t, p);
  return acc;
}

double local_curvature(std::span<const double> values, std::span<const double> coeffs, double p, double t) {
  double acc = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = std::abs(values[i] - t);
    if (p == 2.0) {
      acc += coeffs[i];
    } else if (d == 0.0) {
      if (p < 2.0) return std::numeric_limits<double>::infinity();
    } else {
      acc += coeffs[i] * (p - 1.0) * std::pow(d, p - 2.0);
    }
  }
  return acc;
}

}  // namespace

EnergySpec EnergySpec::make(double p, EnergyMode mode) {
  if (!(p > 1.0) || !std::isfinite(p)) throw InputError("p must exceed 1");
  return EnergySpec{p, mode};
}

EnergyMode natural_mode(const ProxySpace& space) {
  return space.kind() == SpaceKind::combinatorial_graph ? EnergyMode::combinatorial
                                                        : EnergyMode::length_weighted;
}

double edge_coefficient(const ProxySpace& space, const Edge& edge, const EnergySpec& spec) {
  if (spec.mode == EnergyMode::combinatorial) return 1.0;
  const double w = edge.length * 0.5 * (space.weight(edge.a) + space.weight(edge.b));
  return w / std::pow(edge.length, spec.p);
}

namespace {

/// Per-vertex coefficient lists aligned with ProxySpace::neighbors.
std::vector<double> neighbor_coefficients(const ProxySpace& space, const EnergySpec& spec) {
  std::vector<double> coeffs;
  for (Vertex x = 0; x < space.size(); ++x)
    for (const Neighbor& nb : space.neighbors(x))
      coeffs.push_back(edge_coefficient(space, Edge{x, nb.vertex, nb.length}, spec));
  return coeffs;
}

void check_field(std::span<const double> f, const ProxySpace& space) {
  if (f.size() != space.size()) throw InputError("field size does not match the space");
}

}  // namespace

std::vector<double> gradient_p(std::span<const double> f, const ProxySpace& space, const EnergySpec& spec) {
  check_field(f, space);
  std::vector<double> out(space.size(), 0.0);
  for (Vertex x = 0; x < space.size(); ++x) {
    double acc = 0.0;
    for (const Neighbor& nb : space.neighbors(x))
      acc += edge_coefficient(space, Edge{x, nb.vertex, nb.length}, spec) *
             std::pow(std::abs(f[nb.vertex] - f[x]), spec.p);
    out[x] = acc;
  }
  return out;
}

double energy_p(std::span<const double> f, const ProxySpace& space, const EnergySpec& spec) {
  const auto grad = gradient_p(f, space, spec);
  return std::accumulate(grad.begin(), grad.end(), 0.0);
}

std::vector<double> residual(std::span<const double> f, const ProxySpace& space, const EnergySpec& spec) {
  check_field(f, space);
  std::vector<double> out(space.size(), 0.0);
  for (Vertex x = 0; x < space.size(); ++x) {
    double acc = 0.0;
    for (const Neighbor& nb : space.neighbors(x))
      acc += edge_coefficient(space, Edge{x, nb.vertex, nb.length}, spec) *
             signed_power(f[nb.vertex] - f[x], spec.p);
    out[x] = acc;
  }
  return out;
}

double continuum_energy(std::span<const double> f, const ProxySpace& space, double p) {
  check_field(f, space);
  const EnergySpec spec{p, EnergyMode::length_weighted};
  double acc = 0.0;
  for (const Edge& e : space.edges())
    acc += edge_coefficient(space, e, spec) * std::pow(std::abs(f[e.b] - f[e.a]), p);
  return acc;
}

double continuum_energy(std::span<const double> f, const ProxySpace& space, double p,
                        std::span<const char> inside) {
  check_field(f, space);
  const EnergySpec spec{p, EnergyMode::length_weighted};
  double acc = 0.0;
  for (const Edge& e : space.edges())
    if (inside[e.a] && inside[e.b])
      acc += edge_coefficient(space, e, spec) * std::pow(std::abs(f[e.b] - f[e.a]), p);
  return acc;
}

DirichletProblem::DirichletProblem(const ProxySpace& space, EnergySpec spec,
                                   std::vector<Vertex> boundary, std::vector<double> values)
    : space_(&space), spec_(EnergySpec::make(spec.p, spec.mode)), fixed_(space.size(), 0) {
  if (boundary.empty()) throw InputError("Dirichlet problem needs a nonempty boundary");
  if (boundary.size() != values.size()) throw InputError("boundary values do not match boundary vertices");
  std::vector<std::pair<Vertex, double>> data;
  for (std::size_t i = 0; i < boundary.size(); ++i) {
    space.check_vertex(boundary[i]);
    if (!std::isfinite(values[i])) throw InputError("boundary values must be finite");
    data.emplace_back(boundary[i], values[i]);
  }
  std::sort(data.begin(), data.end(), [](auto& l, auto& r) { return l.first < r.first; });
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (i > 0 && data[i].first == data[i - 1].first)
      throw InputError("boundary lists vertex " + std::to_string(space.label(data[i].first)) + " twice");
    boundary_.push_back(data[i].first);
    values_.push_back(data[i].second);
    fixed_[data[i].first] = 1;
  }
  for (Vertex x = 0; x < space.size(); ++x)
    if (!fixed_[x]) free_.push_back(x);

  // Every free vertex must reach the boundary through free vertices.
  std::vector<char> reached(fixed_);
  std::vector<Vertex> stack(boundary_.begin(), boundary_.end());
  while (!stack.empty()) {
    const Vertex x = stack.back();
    stack.pop_back();
    for (const Neighbor& nb : space.neighbors(x))
      if (!reached[nb.vertex]) {
        reached[nb.vertex] = 1;
        stack.push_back(nb.vertex);
      }
  }
  for (Vertex x : free_)
    if (!reached[x])
      throw InputError("ill-posed Dirichlet problem: vertex " + std::to_string(space.label(x)) +
                       " cannot reach the boundary");
}

double minimize_local(std::span<const double> values, std::span<const double> coeffs, double p) {
  double lo = *std::min_element(values.begin(), values.end());
  double hi = *std::max_element(values.begin(), values.end());
  if (lo == hi) return lo;
  // Safeguarded Newton on the decreasing slope; bisection whenever Newton
  // leaves the bracket or the curvature is unusable. Runs to machine
  // precision: for p < 2 the residual scales like |error|^(p-1).
  double t = 0.5 * (lo + hi);
  for (int it = 0; it < kLocalIterations; ++it) {
    const double s = local_slope(values, coeffs, p, t);
    if (s == 0.0) return t;
    if (s > 0.0) lo = t; else hi = t;
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;  // adjacent doubles
    const double curv = local_curvature(values, coeffs, p, t);
    double next = std::isfinite(curv) && curv > 0.0 ? t + s / curv : mid;
    if (!(next > lo && next < hi)) next = mid;
    if (next == t) break;
    t = next;
  }
  // Best of the final bracket by slope magnitude.
  const double slo = std::abs(local_slope(values, coeffs, p, lo));
  const double shi = std::abs(local_slope(values, coeffs, p, hi));
  const double st = std::abs(local_slope(values, coeffs, p, t));
  if (slo < st && slo <= shi) return lo;
  if (shi < st) return hi;
  return t;
}

namespace {

constexpr Vertex kNoAnchor = static_cast<Vertex>(-1);

/// Free regions that hang off a single cut vertex and hold no boundary vertex
/// are constant at the minimizer (their edges can all reach zero energy).
/// Returns, per vertex, the outermost such cut vertex, or kNoAnchor.
std::vector<Vertex> dangling_anchors(const DirichletProblem& problem) {
  const ProxySpace& space = problem.space();
  const std::size_t n = space.size();
  std::vector<Vertex> anchor(n, kNoAnchor);
  std::vector<std::size_t> disc(n, 0), low(n, 0), size(n, 1), next_edge(n, 0);
  std::vector<char> has_boundary(n, 0), seen(n, 0);
  std::vector<Vertex> order, parent(n, kNoAnchor), stack;
  const Vertex root = problem.boundary().front();
  stack.push_back(root);
  seen[root] = 1;
  order.push_back(root);
  has_boundary[root] = 1;
  while (!stack.empty()) {
    const Vertex u = stack.back();
    const auto nbs = space.neighbors(u);
    if (next_edge[u] < nbs.size()) {
      const Vertex w = nbs[next_edge[u]++].vertex;
      if (!seen[w]) {
        seen[w] = 1;
        parent[w] = u;
        disc[w] = low[w] = order.size();
        order.push_back(w);
        has_boundary[w] = problem.is_boundary(w);
        stack.push_back(w);
      } else if (w != parent[u]) {
        low[u] = std::min(low[u], disc[w]);
      }
      continue;
    }
    stack.pop_back();
    if (u == root) break;
    const Vertex up = parent[u];
    low[up] = std::min(low[up], low[u]);
    size[up] += size[u];
    has_boundary[up] |= has_boundary[u];
    if (low[u] >= disc[up] && !has_boundary[u])
      for (std::size_t i = disc[u]; i < disc[u] + size[u]; ++i) anchor[order[i]] = up;
  }
  // Outer regions finish later, so each vertex ends with its outermost anchor.
  return anchor;
}

constexpr std::size_t kNewtonEvery = 20;
constexpr int kNewtonIterations = 40;

/// Damped Newton on the free values. The Hessian is the weighted Laplacian
/// with conductances (p-1) c |d|^(p-2), increments floored at `floor` so ties
/// stay finite. Step length comes from bisection on the sign of the slope of
/// the (convex) energy along the direction; values are then truncated to the
/// boundary range, which never raises the energy.
class NewtonPolish {
 public:
  NewtonPolish(const DirichletProblem& problem, std::span<const Vertex> active, std::span<const char> pinned,
               std::span<const std::size_t> offsets, std::span<const double> coeffs)
      : problem_(problem), active_(active), pinned_(pinned), offsets_(offsets), coeffs_(coeffs),
        slot_(problem.space().size(), -1) {
    const auto free = active;
    for (std::size_t i = 0; i < free.size(); ++i) slot_[free[i]] = static_cast<int>(i);
    const auto b = problem.boundary_values();
    lo_ = *std::min_element(b.begin(), b.end());
    hi_ = *std::max_element(b.begin(), b.end());
    floor_ = 1e-12 * std::max(1.0, hi_ - lo_);
  }

  /// Returns the residual after polishing.
  double run(std::vector<double>& f, double res, double tol) {
    const auto free = active_;
    if (free.empty()) return res;
    const ProxySpace& space = problem_.space();
    const double p = problem_.spec().p;
    const auto m = static_cast<Eigen::Index>(free.size());
    Eigen::VectorXd r(m), d(m);
    std::vector<Eigen::Triplet<double>> triplets;
    Eigen::SparseMatrix<double> h(m, m);
    std::vector<double> trial(f.size());
    int stalled = 0;
    for (int it = 0; it < kNewtonIterations && res > tol; ++it) {
      triplets.clear();
      for (std::size_t i = 0; i < free.size(); ++i) {
        const Vertex x = free[i];
        const auto nbs = space.neighbors(x);
        double diag = 0.0, acc = 0.0;
        for (std::size_t k = 0; k < nbs.size(); ++k) {
          if (pinned_[nbs[k].vertex]) continue;
          const double c = coeffs_[offsets_[x] + k];
          const double delta = f[nbs[k].vertex] - f[x];
          acc += c * signed_power(delta, p);
          const double g = c * (p - 1.0) * std::pow(std::max(std::abs(delta), floor_), p - 2.0);
          diag += g;
          const int j = slot_[nbs[k].vertex];
          if (j >= 0) triplets.emplace_back(static_cast<Eigen::Index>(i), j, -g);
        }
        triplets.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i), diag);
        r(static_cast<Eigen::Index>(i)) = acc;
      }
      h.setFromTriplets(triplets.begin(), triplets.end());
      if (!analyzed_) {
        solver_.analyzePattern(h);
        analyzed_ = true;
      }
      solver_.factorize(h);
      if (solver_.info() != Eigen::Success) return res;
      d = solver_.solve(r);
      if (solver_.info() != Eigen::Success || !d.allFinite()) return res;

      // slope(a) = -sum res(f + a d) . d, increasing in a
      auto slope = [&](double a) {
        step(f, d, a, trial);
        return -directional(trial, d);
      };
      double a = 1.0;
      if (slope(1.0) > 0.0) {
        double l = 0.0, u = 1.0;
        for (int k = 0; k < 60; ++k) {
          const double mid = 0.5 * (l + u);
          (slope(mid) > 0.0 ? u : l) = mid;
        }
        a = l;
      }
      if (a == 0.0) break;
      step(f, d, a, trial);
      for (Vertex x : free) trial[x] = std::clamp(trial[x], lo_, hi_);
      f.swap(trial);
      const double next = free_residual(f);
      stalled = next < res ? 0 : stalled + 1;
      res = next;
      if (stalled >= 3) break;
    }
    return res;
  }

  double free_residual(std::span<const double> f) const {
    const ProxySpace& space = problem_.space();
    const double p = problem_.spec().p;
    double sup = 0.0;
    for (Vertex x : active_) {
      double acc = 0.0;
      const auto nbs = space.neighbors(x);
      for (std::size_t k = 0; k < nbs.size(); ++k)
        if (!pinned_[nbs[k].vertex]) acc += coeffs_[offsets_[x] + k] * signed_power(f[nbs[k].vertex] - f[x], p);
      sup = std::max(sup, std::abs(acc));
    }
    return sup;
  }

 private:
  void step(const std::vector<double>& f, const Eigen::VectorXd& d, double a, std::vector<double>& out) const {
    out = f;
    const auto free = active_;
    for (std::size_t i = 0; i < free.size(); ++i) out[free[i]] += a * d(static_cast<Eigen::Index>(i));
  }

  double directional(std::span<const double> f, const Eigen::VectorXd& d) const {
    const ProxySpace& space = problem_.space();
    const double p = problem_.spec().p;
    const auto free = active_;
    double total = 0.0;
    for (std::size_t i = 0; i < free.size(); ++i) {
      const Vertex x = free[i];
      double acc = 0.0;
      const auto nbs = space.neighbors(x);
      for (std::size_t k = 0; k < nbs.size(); ++k)
        if (!pinned_[nbs[k].vertex]) acc += coeffs_[offsets_[x] + k] * signed_power(f[nbs[k].vertex] - f[x], p);
      total += acc * d(static_cast<Eigen::Index>(i));
    }
    return total;
  }

  const DirichletProblem& problem_;
  std::span<const Vertex> active_;
  std::span<const char> pinned_;
  std::span<const std::size_t> offsets_;
  std::span<const double> coeffs_;
  std::vector<int> slot_;
  double lo_ = 0.0, hi_ = 0.0, floor_ = 0.0;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver_;
  bool analyzed_ = false;
};

double free_residual(const DirichletProblem& problem, std::span<const double> f,
                     std::span<const std::size_t> offsets, std::span<const double> coeffs) {
  const ProxySpace& space = problem.space();
  const double p = problem.spec().p;
  double sup = 0.0;
  for (Vertex x : problem.free_vertices()) {
    double acc = 0.0;
    const auto nbs = space.neighbors(x);
    for (std::size_t k = 0; k < nbs.size(); ++k)
      acc += coeffs[offsets[x] + k] * signed_power(f[nbs[k].vertex] - f[x], p);
    sup = std::max(sup, std::abs(acc));
  }
  return sup;
}

}  // namespace

SolveResult solve(const DirichletProblem& problem, const SolveOptions& options) {
  if (!(options.tol > 0.0)) throw InputError("tol must be positive");
  const ProxySpace& space = problem.space();
  const EnergySpec& spec = problem.spec();
  const std::size_t n = space.size();

  std::vector<double> f(n, 0.0);
  const auto bvals = problem.boundary_values();
  const double mean = std::accumulate(bvals.begin(), bvals.end(), 0.0) / static_cast<double>(bvals.size());
  if (options.initial) {
    if (options.initial->size() != n) throw InputError("initial field size does not match the space");
    f = *options.initial;
  } else {
    std::fill(f.begin(), f.end(), mean);
  }
  for (std::size_t i = 0; i < problem.boundary().size(); ++i) f[problem.boundary()[i]] = bvals[i];

  const auto coeffs = neighbor_coefficients(space, spec);
  std::vector<std::size_t> offsets(n + 1, 0);
  for (Vertex x = 0; x < n; ++x) offsets[x + 1] = offsets[x] + space.degree(x);

  const auto anchor = dangling_anchors(problem);
  std::vector<char> pinned(n, 0);
  std::vector<Vertex> free;
  for (Vertex x : problem.free_vertices()) {
    if (anchor[x] == kNoAnchor)
      free.push_back(x);
    else
      pinned[x] = 1;
  }
  auto sync = [&](std::vector<double>& g) {
    for (Vertex x : problem.free_vertices())
      if (pinned[x]) g[x] = g[anchor[x]];
  };
  sync(f);

  std::size_t max_degree = space.degree_bound();
  auto update = [&](Vertex x, std::span<const double> source, std::vector<double>& values,
                    std::vector<double>& weights) {
    const auto nbs = space.neighbors(x);
    values.clear();
    weights.clear();
    for (std::size_t k = 0; k < nbs.size(); ++k) {
      if (pinned[nbs[k].vertex]) continue;
      values.push_back(source[nbs[k].vertex]);
      weights.push_back(coeffs[offsets[x] + k]);
    }
    if (values.empty()) return source[x];
    return minimize_local(values, weights, spec.p);
  };

  SolveResult result;
  double res = free_residual(problem, f, offsets, coeffs);
  std::size_t sweep = 0;
  std::vector<double> values, weights;
  values.reserve(max_degree);
  weights.reserve(max_degree);
  std::vector<double> next;
  std::optional<NewtonPolish> polish;
  while (res > options.tol && sweep < options.max_sweeps) {
    if (options.mode == SolveMode::gauss_seidel) {
      for (Vertex x : free) f[x] = update(x, f, values, weights);
    } else {
      next = f;
      parallel_for(free.size(), [&](std::size_t i) {
        std::vector<double> v, w;
        next[free[i]] = update(free[i], f, v, w);
      });
      f.swap(next);
    }
    ++sweep;
    sync(f);
    res = free_residual(problem, f, offsets, coeffs);
    if (options.newton && res > options.tol && sweep % kNewtonEvery == 0) {
      if (!polish) polish.emplace(problem, free, pinned, offsets, coeffs);
      polish->run(f, res, options.tol);
      sync(f);
      res = free_residual(problem, f, offsets, coeffs);
    }
  }
  if (res > options.tol) {
    std::ostringstream os;
    os << "solver did not converge in " << sweep << " sweeps; final residual " << res;
    throw ConvergenceError(os.str(), res);
  }
  result.sweeps = sweep;
  result.final_residual = res;
  result.energy = energy_p(f, space, spec);
  result.min = *std::min_element(f.begin(), f.end());
  result.max = *std::max_element(f.begin(), f.end());
  result.values = std::move(f);
  return result;
}

RoydenSplit royden_split(const ProxySpace& space, std::span<const double> f, const EnergySpec& spec,
                         Vertex base, std::span<const double> radii, const SolveOptions& options) {
  if (f.size() != space.size()) throw InputError("field size does not match the space");
  if (radii.empty()) throw InputError("royden split needs at least one radius");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] >= 1.0)) throw InputError("radii must be at least 1");
    if (i > 0 && !(radii[i] > radii[i - 1])) throw InputError("radii must be increasing");
  }
  const auto dist = space.distances_from(base);
  RoydenSplit split;
  split.base = base;
  for (double radius : radii) {
    RoydenLevel level;
    level.radius = radius;
    level.inside.assign(space.size(), 0);
    for (Vertex x = 0; x < space.size(); ++x) level.inside[x] = (*dist)[x] <= radius ? 1 : 0;

    std::vector<Vertex> fixed;
    std::vector<double> fixed_values;
    for (Vertex x = 0; x < space.size(); ++x) {
      bool on_sphere = false;
      if (level.inside[x])
        for (const Neighbor& nb : space.neighbors(x))
          if (!level.inside[nb.vertex]) on_sphere = true;
      if (on_sphere) level.sphere.push_back(x);
      if (on_sphere || !level.inside[x]) {
        fixed.push_back(x);
        fixed_values.push_back(f[x]);
      }
    }
    if (level.sphere.empty())
      throw InputError("radius " + std::to_string(radius) + " reaches past the whole space");

    const DirichletProblem problem(space, spec, fixed, fixed_values);
    const SolveResult solved = solve(problem, options);
    level.harmonic = solved.values;
    level.remainder.assign(space.size(), 0.0);
    for (Vertex x = 0; x < space.size(); ++x)
      if (level.inside[x]) level.remainder[x] = f[x] - level.harmonic[x];
    level.sweeps = solved.sweeps;
    level.final_residual = solved.final_residual;

    double energy = 0.0;
    for (Vertex x = 0; x < space.size(); ++x) {
      if (!level.inside[x]) continue;
      for (const Neighbor& nb : space.neighbors(x))
        if (level.inside[nb.vertex])
          energy += edge_coefficient(space, Edge{x, nb.vertex, nb.length}, spec) *
                    std::pow(std::abs(level.harmonic[nb.vertex] - level.harmonic[x]), spec.p);
    }
    level.energy = energy;

    if (!split.levels.empty()) {
      const auto& prev = split.levels.back();
      const auto& first = split.levels.front();
      double sup = 0.0;
      for (Vertex x = 0; x < space.size(); ++x)
        if (first.inside[x]) sup = std::max(sup, std::abs(level.harmonic[x] - prev.harmonic[x]));
      level.stabilization = sup;
    }
    split.levels.push_back(std::move(level));
  }
  return split;
}

bool escape_check(std::span<const double> distances, std::span<const double> thresholds) {
  if (distances.empty()) throw InputError("escape check needs a nonempty sequence");
  for (double t : thresholds) {
    auto first = std::find_if(distances.begin(), distances.end(), [t](double d) { return d > t; });
    if (first == distances.end()) return false;
    if (!std::all_of(first, distances.end(), [t](double d) { return d > t; })) return false;
  }
  return true;
}

bool escape_check(const ProxySpace& space, std::span<const Vertex> sequence, Vertex base,
                  std::span<const double> thresholds) {
  const auto dist = space.distances_from(base);
  std::vector<double> d;
  for (Vertex x : sequence) {
    space.check_vertex(x);
    d.push_back((*dist)[x]);
  }
  return escape_check(d, thresholds);
}

}  // namespace roydennet
