#include "roydennet/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "roydennet/error.hpp"
#include "roydennet/parallel.hpp"

namespace roydennet {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::vector<Vertex> all_vertices(const ProxySpace& space) {
  std::vector<Vertex> out(space.size());
  std::iota(out.begin(), out.end(), Vertex{0});
  return out;
}

double max_ball_volume(const ProxySpace& space, double r) {
  const auto centers = all_vertices(space);
  const double radii[] = {r};
  return volume_profile(space, radii, centers).vmax.front();
}

double min_ball_volume(const ProxySpace& space, double r) {
  const auto centers = all_vertices(space);
  const double radii[] = {r};
  return volume_profile(space, radii, centers).vmin.front();
}

std::vector<char> membership(std::size_t n, std::span<const BallEntry> entries) {
  std::vector<char> inside(n, 0);
  for (const BallEntry& e : entries) inside[e.vertex] = 1;
  return inside;
}

}  // namespace

void VerificationReport::add_constant(std::string name, double value, std::string provenance) {
  constants.push_back({std::move(name), value, std::move(provenance)});
}

std::optional<double> VerificationReport::constant(const std::string& name) const {
  for (const auto& c : constants)
    if (c.name == name) return c.value;
  return std::nullopt;
}

std::vector<double> random_field(std::size_t size, std::uint64_t seed, std::size_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  std::mt19937_64 rng(seq);
  std::vector<double> out(size);
  for (double& v : out) v = 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0;
  return out;
}

std::vector<double> neighborhood_average(std::span<const double> f, const ProxySpace& space) {
  if (f.size() != space.size()) throw InputError("field size does not match the space");
  std::vector<double> out(space.size());
  for (Vertex x = 0; x < space.size(); ++x) {
    double mass = space.weight(x);
    double acc = space.weight(x) * f[x];
    for (const Neighbor& nb : space.neighbors(x)) {
      mass += space.weight(nb.vertex);
      acc += space.weight(nb.vertex) * f[nb.vertex];
    }
    out[x] = acc / mass;
  }
  return out;
}

VerificationReport check_smoothing_energy(const ProxySpace& space, const KappaNet& net,
                                          const PartitionOfUnity& pou, const EnergyCheckOptions& options) {
  const auto start = Clock::now();
  const EnergySpec spec = EnergySpec::make(options.p);
  if (options.trials == 0) throw InputError("trials must be at least 1");
  const ProxySpace net_graph = net_graph_space(space, net);

  VerificationReport report;
  report.check = "smoothing-energy";
  report.seed = options.seed;
  report.trials = options.trials;
  const double c = pou.lipschitz();
  const double k = static_cast<double>(net.degree_bound);
  const double v1 = max_ball_volume(space, net.kappa);
  const double q = spec.q();
  report.add_constant("p", spec.p, "input");
  report.add_constant("q", q, "conjugate exponent of p");
  report.add_constant("kappa", net.kappa, "net");
  report.add_constant("c", c, "bump Lipschitz constant 2/kappa");
  report.add_constant("k_net", k, "net degree bound");
  report.add_constant("V1(kappa)", v1, "max ball volume at radius kappa over all vertices");
  report.ceiling = std::pow(c * std::pow(k, 1.0 / q), spec.p) * v1;

  std::vector<double> ratios(options.trials, -1.0);
  parallel_for(options.trials, [&](std::size_t t) {
    const auto fbar = random_field(net.size(), options.seed, t);
    const double net_energy = energy_p(fbar, net_graph, spec);
    if (!(net_energy > 0.0)) return;
    const ScalarField f = smooth(net_field(fbar), pou);
    ratios[t] = continuum_energy(f.values, space, spec.p) / net_energy;
  });
  report.curve_columns = {"trial", "ratio"};
  report.measured = 0.0;
  for (std::size_t t = 0; t < ratios.size(); ++t) {
    if (ratios[t] < 0.0) {
      ++report.skipped;
      continue;
    }
    report.curve.push_back({static_cast<double>(t), ratios[t]});
    report.measured = std::max(report.measured, ratios[t]);
  }
  report.pass = report.measured <= *report.ceiling;
  report.notes.push_back(report.pass ? "no violation found" : "ratio exceeds the ceiling");
  if (report.skipped) report.notes.push_back("trials with zero net energy skipped");
  report.runtime_ms = elapsed_ms(start);
  return report;
}

std::optional<double> poincare_ratio(const ProxySpace& space, std::span<const Vertex> ball_vertices,
                                     std::span<const double> f) {
  std::vector<char> inside(space.size(), 0);
  double mass = 0.0, acc = 0.0;
  for (Vertex x : ball_vertices) {
    inside[x] = 1;
    mass += space.weight(x);
    acc += space.weight(x) * f[x];
  }
  const double mean = acc / mass;
  double lhs = 0.0;
  for (Vertex x : ball_vertices) lhs += space.weight(x) * std::abs(f[x] - mean);
  double rhs = 0.0;
  for (Vertex x : ball_vertices)
    for (const Neighbor& nb : space.neighbors(x))
      if (inside[nb.vertex] && x < nb.vertex) {
        const double w = nb.length * 0.5 * (space.weight(x) + space.weight(nb.vertex));
        rhs += w * std::abs(f[nb.vertex] - f[x]) / nb.length;
      }
  if (!(rhs > 0.0)) return std::nullopt;
  return lhs / rhs;
}

VerificationReport check_poincare(const ProxySpace& space, const KappaNet& net,
                                  const PoincareOptions& options) {
  const auto start = Clock::now();
  const double radius = options.radius_factor * net.kappa;
  VerificationReport report;
  report.check = "poincare";
  report.seed = options.seed;
  report.trials = options.random_fields;
  report.add_constant("radius", radius, "radius_factor * kappa");
  report.add_constant("balls", static_cast<double>(net.size()), "balls centered at every net point");

  std::vector<std::vector<double>> global_fields;
  for (std::size_t r = 0; r < options.random_fields; ++r) {
    auto f = random_field(space.size(), options.seed, r);
    auto smoothed = neighborhood_average(f, space);
    global_fields.push_back(std::move(f));
    global_fields.push_back(std::move(smoothed));
  }

  std::vector<double> per_ball(net.size(), 0.0);
  parallel_for(net.size(), [&](std::size_t i) {
    const auto entries = space.ball_with_distances(net.points[i], radius);
    std::vector<Vertex> verts;
    for (const BallEntry& e : entries) verts.push_back(e.vertex);
    double best = 0.0;
    auto consider = [&](std::span<const double> f) {
      if (auto ratio = poincare_ratio(space, verts, f)) best = std::max(best, *ratio);
    };
    for (const auto& f : global_fields) consider(f);

    // Structured fields: distance ramp from the farthest ball vertex, the
    // step at the median of that ramp, and the inner half-ball indicator.
    const BallEntry far = *std::max_element(entries.begin(), entries.end(), [](auto& l, auto& r) {
      return l.distance < r.distance || (l.distance == r.distance && l.vertex > r.vertex);
    });
    const auto from_far = space.distances_from(far.vertex);
    std::vector<double> ramp(space.size(), 0.0), step(space.size(), 0.0), inner(space.size(), 0.0);
    std::vector<double> levels;
    for (Vertex x : verts) {
      ramp[x] = (*from_far)[x];
      levels.push_back(ramp[x]);
    }
    std::nth_element(levels.begin(), levels.begin() + static_cast<std::ptrdiff_t>(levels.size() / 2), levels.end());
    const double median = levels[levels.size() / 2];
    for (const BallEntry& e : entries) {
      step[e.vertex] = ramp[e.vertex] < median ? 1.0 : 0.0;
      inner[e.vertex] = e.distance <= 0.5 * radius ? 1.0 : 0.0;
    }
    consider(ramp);
    consider(step);
    consider(inner);
    per_ball[i] = best;
  });
  report.curve_columns = {"center", "max_ratio"};
  for (std::size_t i = 0; i < net.size(); ++i) {
    report.curve.push_back({static_cast<double>(space.label(net.points[i])), per_ball[i]});
    report.measured = std::max(report.measured, per_ball[i]);
  }
  report.pass = true;
  report.notes.push_back("measured constant; no target value exists");
  report.runtime_ms = elapsed_ms(start);
  return report;
}

VerificationReport check_discretization_energy(const ProxySpace& space, const KappaNet& net,
                                               const EnergyCheckOptions& options) {
  const auto start = Clock::now();
  const EnergySpec spec = EnergySpec::make(options.p);
  if (options.trials == 0) throw InputError("trials must be at least 1");
  const ProxySpace net_graph = net_graph_space(space, net);

  VerificationReport report;
  report.check = "discretization-energy";
  report.seed = options.seed;
  report.trials = options.trials;
  const double kappa = net.kappa;
  const double p = spec.p;
  const auto centers = all_vertices(space);
  const double radii[] = {kappa, 4.0 * kappa};
  const auto profile = volume_profile(space, radii, centers);
  const double v0 = profile.vmin[0];
  const double v1 = profile.vmax[1];
  const double overlap = static_cast<double>(bounded_geometry(space, net, 7.0 * kappa));
  const double k = static_cast<double>(net.degree_bound);
  const VerificationReport poincare = check_poincare(space, net, {4.0, 8, options.seed});
  const double cp = poincare.measured;
  report.add_constant("p", p, "input");
  report.add_constant("kappa", kappa, "net");
  report.add_constant("k_net", k, "net degree bound");
  report.add_constant("V1(4kappa)", v1, "max ball volume at radius 4 kappa over all vertices");
  report.add_constant("V0(kappa)", v0, "min ball volume at radius kappa over all vertices");
  report.add_constant("C(7kappa)", overlap, "bounded_geometry(net, 7 kappa)");
  report.add_constant("C_P(4kappa)", cp, "measured Poincare constant on 4 kappa balls");
  report.add_constant("2^p", std::pow(2.0, p), "Jensen factor");
  report.ceiling = overlap * k * std::pow(2.0, p) * std::pow(cp, p) * std::pow(v1, p - 1.0) / std::pow(v0, p);

  std::vector<double> ratios(options.trials, -1.0);
  parallel_for(options.trials, [&](std::size_t t) {
    const auto f = neighborhood_average(random_field(space.size(), options.seed, t), space);
    const double proxy_energy = continuum_energy(f, space, p);
    if (!(proxy_energy > 0.0)) return;
    const ScalarField fstar = discretize(proxy_field(f), space, net);
    ratios[t] = energy_p(fstar.values, net_graph, spec) / proxy_energy;
  });
  report.curve_columns = {"trial", "ratio"};
  for (std::size_t t = 0; t < ratios.size(); ++t) {
    if (ratios[t] < 0.0) {
      ++report.skipped;
      continue;
    }
    report.curve.push_back({static_cast<double>(t), ratios[t]});
    report.measured = std::max(report.measured, ratios[t]);
  }
  report.pass = report.measured <= *report.ceiling;
  report.notes.push_back(report.pass ? "no violation found" : "ratio exceeds the ceiling");
  report.runtime_ms = elapsed_ms(start);
  return report;
}

std::size_t nearest_net_point(const ProxySpace& space, const KappaNet& net, Vertex y) {
  std::vector<std::size_t> net_index(space.size(), std::numeric_limits<std::size_t>::max());
  for (std::size_t i = 0; i < net.size(); ++i) net_index[net.points[i]] = i;
  std::size_t best = std::numeric_limits<std::size_t>::max();
  double best_d = std::numeric_limits<double>::infinity();
  for (const BallEntry& e : space.ball_with_distances(y, net.kappa)) {
    const std::size_t i = net_index[e.vertex];
    if (i == std::numeric_limits<std::size_t>::max()) continue;
    if (e.distance < best_d || (e.distance == best_d && i < best)) {
      best = i;
      best_d = e.distance;
    }
  }
  if (best == std::numeric_limits<std::size_t>::max())
    throw InputError("vertex " + std::to_string(space.label(y)) + " has no net point within kappa");
  return best;
}

std::vector<Vertex> default_ray(const ProxySpace& space, Vertex base) {
  const auto dist = space.distances_from(base);
  Vertex far = base;
  for (Vertex x = 0; x < space.size(); ++x)
    if ((*dist)[x] > (*dist)[far]) far = x;
  return shortest_path(space, base, far);
}

std::vector<std::size_t> default_net_ray(const KappaNet& net, std::size_t start) {
  const auto hops = net_hop_distances(net, start);
  std::size_t far = start;
  for (std::size_t g = 0; g < hops.size(); ++g)
    if (hops[g] > hops[far]) far = g;
  std::vector<std::size_t> path{far};
  while (path.back() != start) {
    const std::size_t g = path.back();
    for (std::size_t h : net.adjacency[g])
      if (hops[h] + 1 == hops[g]) {
        path.push_back(h);
        break;
      }
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<double> radial_ramp(const ProxySpace& space, Vertex base, double reach) {
  const auto dist = space.distances_from(base);
  std::vector<double> out(space.size());
  for (Vertex x = 0; x < space.size(); ++x) out[x] = std::min((*dist)[x] / reach, 1.0);
  return out;
}

VerificationReport check_convergence_l41(const ProxySpace& space, const KappaNet& net,
                                         std::span<const double> f, std::span<const Vertex> ray,
                                         const ConvergenceOptions& options) {
  const auto start = Clock::now();
  const EnergySpec spec = EnergySpec::make(options.p);
  if (f.size() != space.size()) throw InputError("field size does not match the space");
  if (ray.size() < 3) throw InputError("ray too short: needs at least 3 points");
  const double kappa = net.kappa;

  const auto base_dist = space.distances_from(ray.front());
  std::vector<double> ray_dist;
  for (Vertex y : ray) ray_dist.push_back((*base_dist)[y]);
  std::vector<double> thresholds;
  for (double t = 0.0; t < ray_dist.back(); t += kappa) thresholds.push_back(t);
  if (!escape_check(ray_dist, thresholds)) throw InputError("ray does not escape from its first vertex");

  VerificationReport report;
  report.check = "convergence-l41";
  const double v0 = min_ball_volume(space, 5.0 * kappa);
  const double scale = 5.0 * kappa * std::pow(v0, -1.0 / spec.p);
  report.add_constant("p", spec.p, "input");
  report.add_constant("kappa", kappa, "net");
  report.add_constant("V0(5kappa)", v0, "min ball volume at radius 5 kappa over all vertices");
  report.add_constant("tolerance", options.tolerance, "fp slack in the domination test");

  const ScalarField fstar = discretize(proxy_field({f.begin(), f.end()}), space, net);
  report.curve_columns = {"n", "vertex", "distance", "nearest_net_point", "discrepancy", "bound"};
  std::vector<std::vector<double>> rows(ray.size());
  parallel_for(ray.size(), [&](std::size_t n) {
    const Vertex y = ray[n];
    const std::size_t x = nearest_net_point(space, net, y);
    const auto inside = membership(space.size(), space.ball_with_distances(y, 5.0 * kappa));
    const double local = continuum_energy(f, space, spec.p, inside);
    const double bound = scale * std::pow(local, 1.0 / spec.p);
    const double disc = std::abs(fstar.values[x] - f[y]);
    rows[n] = {static_cast<double>(n), static_cast<double>(space.label(y)), ray_dist[n],
               static_cast<double>(space.label(net.points[x])), disc, bound};
  });
  report.pass = true;
  report.measured = -std::numeric_limits<double>::infinity();
  for (auto& row : rows) {
    report.measured = std::max(report.measured, row[4] - row[5]);
    if (!(row[4] <= row[5] + options.tolerance)) report.pass = false;
    report.curve.push_back(std::move(row));
  }
  report.ceiling = options.tolerance;
  report.notes.push_back("measured = max over the ray of discrepancy minus bound");
  report.runtime_ms = elapsed_ms(start);
  return report;
}

VerificationReport check_convergence_l42(const ProxySpace& space, const KappaNet& net,
                                         const PartitionOfUnity& pou, std::span<const double> fbar,
                                         std::span<const std::size_t> ray,
                                         const ConvergenceOptions& options) {
  const auto start = Clock::now();
  const EnergySpec spec = EnergySpec::make(options.p);
  if (fbar.size() != net.size()) throw InputError("field size does not match the net");
  if (ray.size() < 3) throw InputError("ray too short: needs at least 3 points");
  for (std::size_t g : ray)
    if (g >= net.size()) throw InputError("ray references an unknown net point");

  const auto hops = net_hop_distances(net, ray.front());
  std::vector<double> ray_hops;
  for (std::size_t g : ray) ray_hops.push_back(static_cast<double>(hops[g]));
  std::vector<double> thresholds;
  for (double t = 0.5; t < ray_hops.back(); t += 1.0) thresholds.push_back(t);
  if (!escape_check(ray_hops, thresholds)) throw InputError("net ray does not escape from its first point");

  VerificationReport report;
  report.check = "convergence-l42";
  report.add_constant("p", spec.p, "input");
  report.add_constant("kappa", net.kappa, "net");
  report.add_constant("tolerance", options.tolerance, "fp slack in the domination test");

  std::vector<std::size_t> net_index(space.size(), std::numeric_limits<std::size_t>::max());
  for (std::size_t i = 0; i < net.size(); ++i) net_index[net.points[i]] = i;
  const ScalarField f = smooth(net_field({fbar.begin(), fbar.end()}), pou);
  const double support = pou.radii().support_factor * net.kappa;
  report.curve_columns = {"n", "net_point", "hops", "discrepancy", "bound"};
  report.pass = true;
  report.measured = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < ray.size(); ++n) {
    const std::size_t g = ray[n];
    const Vertex x = net.points[g];
    double acc = 0.0;
    for (const BallEntry& e : space.ball_with_distances(x, support)) {
      const std::size_t h = net_index[e.vertex];
      if (h != std::numeric_limits<std::size_t>::max()) acc += std::pow(std::abs(fbar[h] - fbar[g]), spec.p);
    }
    const double bound = std::pow(acc, 1.0 / spec.p);
    const double disc = std::abs(f.values[x] - fbar[g]);
    report.measured = std::max(report.measured, disc - bound);
    if (!(disc <= bound + options.tolerance)) report.pass = false;
    report.curve.push_back({static_cast<double>(n), static_cast<double>(space.label(x)), ray_hops[n], disc, bound});
  }
  report.ceiling = options.tolerance;
  report.notes.push_back("measured = max over the ray of discrepancy minus bound");
  report.runtime_ms = elapsed_ms(start);
  return report;
}

std::pair<Vertex, Vertex> far_pair(const ProxySpace& space, Vertex base) {
  auto farthest = [&](Vertex from) {
    const auto dist = space.distances_from(from);
    Vertex far = from;
    for (Vertex x = 0; x < space.size(); ++x)
      if ((*dist)[x] > (*dist)[far]) far = x;
    return far;
  };
  const Vertex a = farthest(base);
  return {a, farthest(a)};
}

std::vector<double> two_valued_data(const ProxySpace& space, Vertex a, Vertex b) {
  const auto da = space.distances_from(a);
  const auto db = space.distances_from(b);
  std::vector<double> out(space.size());
  for (Vertex x = 0; x < space.size(); ++x) out[x] = (*da)[x] < (*db)[x] ? 1.0 : 0.0;
  return out;
}

RoundtripStages transfer_stages(const ProxySpace& space, const KappaNet& net, std::span<const double> data,
                                const RoundtripOptions& options) {
  if (data.size() != space.size()) throw InputError("boundary data size does not match the space");
  const auto boundary = space.designated_boundary();
  if (boundary.empty()) throw InputError("space has no designated boundary");
  RoundtripStages stages;
  const auto to_boundary = multi_source_distances(space, boundary);
  const double width = options.annulus_factor * net.kappa;
  for (Vertex x = 0; x < space.size(); ++x)
    if (to_boundary[x] <= width) stages.proxy_annulus.push_back(x);
  for (std::size_t g = 0; g < net.size(); ++g)
    (to_boundary[net.points[g]] <= width ? stages.net_annulus : stages.net_interior).push_back(g);
  if (stages.net_interior.empty()) throw InputError("net has no points outside the boundary annulus");
  if (stages.net_annulus.empty()) throw InputError("net has no points in the boundary annulus");

  // (i) net solution with the annulus data
  const ProxySpace net_graph = net_graph_space(space, net);
  std::vector<Vertex> net_boundary;
  std::vector<double> net_values;
  for (std::size_t g : stages.net_annulus) {
    net_boundary.push_back(static_cast<Vertex>(g));
    net_values.push_back(data[net.points[g]]);
  }
  const DirichletProblem net_problem(net_graph, EnergySpec::make(options.spec.p, EnergyMode::combinatorial),
                                     net_boundary, net_values);
  stages.net_solution = solve(net_problem, options.solve).values;

  // (ii) smoothing
  const PartitionOfUnity pou = build_partition(space, net);
  stages.smoothed = smooth(net_field(stages.net_solution), pou).values;

  // (iii) proxy solution with the smoothed values on the proxy annulus
  std::vector<double> proxy_values;
  for (Vertex x : stages.proxy_annulus) proxy_values.push_back(stages.smoothed[x]);
  const DirichletProblem proxy_problem(space, options.spec, stages.proxy_annulus, proxy_values);
  stages.proxy_solution = solve(proxy_problem, options.solve).values;

  // (iv) back to the net
  stages.back = discretize(proxy_field(stages.proxy_solution), space, net).values;
  for (std::size_t g : stages.net_interior)
    stages.discrepancy = std::max(stages.discrepancy, std::abs(stages.back[g] - stages.net_solution[g]));
  return stages;
}

VerificationReport transfer_roundtrip(const ProxySpace& space, const KappaNet& net,
                                      std::span<const double> data, const RoundtripOptions& options) {
  const auto start = Clock::now();
  VerificationReport report;
  report.check = "transfer-roundtrip";
  const RoundtripStages stages = transfer_stages(space, net, data, options);
  report.add_constant("p", options.spec.p, "input");
  report.add_constant("kappa", net.kappa, "net");
  report.add_constant("annulus_width", options.annulus_factor * net.kappa, "annulus_factor * kappa");
  report.add_constant("net_annulus_points", static_cast<double>(stages.net_annulus.size()), "net");
  report.add_constant("net_interior_points", static_cast<double>(stages.net_interior.size()), "net");
  report.measured = stages.discrepancy;
  report.pass = true;
  report.notes.push_back("discrepancy = sup over interior net points of |discretize(pi) - hbar|");
  report.curve_columns = {"net_point", "hbar", "back"};
  for (std::size_t g : stages.net_interior)
    report.curve.push_back({static_cast<double>(space.label(net.points[g])), stages.net_solution[g], stages.back[g]});

  if (options.probe) {
    // Perturb the data on the annulus half nearest the first half of the
    // designated boundary.
    const auto boundary = space.designated_boundary();
    const std::size_t half = std::max<std::size_t>(1, boundary.size() / 2);
    const auto near_first = multi_source_distances(space, boundary.subspan(0, half));
    const auto near_rest = boundary.size() > half ? multi_source_distances(space, boundary.subspan(half))
                                                  : std::vector<double>(space.size(), std::numeric_limits<double>::infinity());
    std::vector<double> shifted(data.begin(), data.end());
    for (Vertex x = 0; x < space.size(); ++x)
      if (near_first[x] <= near_rest[x]) shifted[x] += options.probe_delta;
    const RoundtripStages other = transfer_stages(space, net, shifted, options);
    double separation = 0.0;
    for (Vertex x = 0; x < space.size(); ++x)
      separation = std::max(separation, std::abs(other.proxy_solution[x] - stages.proxy_solution[x]));
    report.add_constant("probe_delta", options.probe_delta, "input");
    report.add_constant("probe_separation", separation, "sup |pi_1 - pi_2| over the proxy");
    report.notes.push_back(std::string("injectivity probe (heuristic threshold delta/4): ") +
                           (separation >= options.probe_delta / 4.0 ? "separated" : "not separated"));
  }
  report.runtime_ms = elapsed_ms(start);
  return report;
}

VerificationReport roundtrip_refinement(const ProxySpace& space, std::span<const double> kappas,
                                        std::span<const double> data, const RoundtripOptions& options) {
  const auto start = Clock::now();
  if (kappas.size() < 2) throw InputError("refinement needs at least two kappa values");
  for (std::size_t i = 1; i < kappas.size(); ++i)
    if (!(kappas[i] < kappas[i - 1])) throw InputError("kappa schedule must decrease");
  VerificationReport report;
  report.check = "transfer-refinement";
  report.add_constant("p", options.spec.p, "input");
  report.curve_columns = {"kappa", "discrepancy", "net_points", "interior_points"};
  report.pass = true;
  double previous = std::numeric_limits<double>::infinity();
  for (double kappa : kappas) {
    const KappaNet net = extract_net(space, kappa);
    const RoundtripStages stages = transfer_stages(space, net, data, options);
    report.curve.push_back({kappa, stages.discrepancy, static_cast<double>(net.size()),
                            static_cast<double>(stages.net_interior.size())});
    if (!(stages.discrepancy < previous)) report.pass = false;
    previous = stages.discrepancy;
  }
  report.measured = report.curve.back()[1];
  const double first = report.curve.front()[1];
  if (first > 0.0 && report.measured > 0.0)
    report.add_constant("rate", std::log(first / report.measured) / std::log(kappas.front() / kappas.back()),
                        "log discrepancy ratio over log kappa ratio");
  report.notes.push_back("pass iff the discrepancy strictly decreases along the schedule");
  report.runtime_ms = elapsed_ms(start);
  return report;
}

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = {
      "gradient-bound",  "smoothing-energy", "discretization-energy", "poincare",
      "convergence-l41", "convergence-l42",  "transfer-roundtrip"};
  return names;
}

VerificationReport run_check(const std::string& name, const ProxySpace& space, const KappaNet& net,
                             const VerifyConfig& config) {
  space.check_vertex(config.base);
  const EnergyCheckOptions energy{config.p, config.trials, config.seed};
  if (name == "gradient-bound") {
    const auto start = Clock::now();
    const PartitionOfUnity pou = build_partition(space, net);
    const GradientBound bound = discrete_gradient_bound(space, pou);
    VerificationReport report;
    report.check = name;
    report.add_constant("c", pou.lipschitz(), "bump Lipschitz constant 2/kappa");
    report.add_constant("k_net", static_cast<double>(net.degree_bound), "net degree bound");
    report.measured = bound.measured;
    report.ceiling = bound.ceiling;
    report.pass = bound.measured <= bound.ceiling;
    report.runtime_ms = elapsed_ms(start);
    return report;
  }
  if (name == "smoothing-energy")
    return check_smoothing_energy(space, net, build_partition(space, net), energy);
  if (name == "discretization-energy") return check_discretization_energy(space, net, energy);
  if (name == "poincare") return check_poincare(space, net, {4.0, 8, config.seed});
  if (name == "convergence-l41") {
    const double reach = 0.5 * eccentricity(space, config.base);
    return check_convergence_l41(space, net, radial_ramp(space, config.base, reach),
                                 default_ray(space, config.base), {config.p});
  }
  if (name == "convergence-l42") {
    const std::size_t start = nearest_net_point(space, net, config.base);
    const auto hops = net_hop_distances(net, start);
    const double reach = 0.5 * static_cast<double>(*std::max_element(hops.begin(), hops.end()));
    std::vector<double> fbar(net.size());
    for (std::size_t g = 0; g < net.size(); ++g)
      fbar[g] = reach > 0.0 ? std::min(static_cast<double>(hops[g]) / reach, 1.0) : 0.0;
    return check_convergence_l42(space, net, build_partition(space, net), fbar,
                                 default_net_ray(net, start), {config.p});
  }
  if (name == "transfer-roundtrip") {
    const auto [a, b] = far_pair(space, config.base);
    RoundtripOptions options;
    options.spec = EnergySpec::make(config.p, natural_mode(space));
    return transfer_roundtrip(space, net, two_valued_data(space, a, b), options);
  }
  throw InputError("unknown check '" + name + "'");
}

std::vector<VerificationReport> verify_all(const ProxySpace& space, const KappaNet& net,
                                           const VerifyConfig& config) {
  std::vector<VerificationReport> reports;
  for (const auto& name : check_names()) {
    auto report = run_check(name, space, net, config);
    report.seed = config.seed;
    reports.push_back(std::move(report));
  }
  return reports;
}

}  // namespace roydennet
