// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.
// Usage: acceptance [fixture-dir]   (default $ROYDENNET_FIXTURES or data/fixtures)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "roydennet/cli.hpp"
#include "roydennet/error.hpp"
#include "roydennet/generate.hpp"
#include "roydennet/io.hpp"
#include "roydennet/verify.hpp"
#include "linear_oracle.hpp"
#include "support.hpp"

using namespace roydennet;
using namespace testing_support;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Fixture {
  std::string name;
  std::string file;
  double kappa;
  ProxySpace space;
};

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void fail(const std::string& why) {
    if (pass) detail << "| ";
    pass = false;
    detail << "FAILED: " << why << "; ";
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << v;
  return os.str();
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

std::vector<double> seeded_values(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

// 1. Partition of unity on every fixture.
Outcome partition_of_unity(const std::vector<Fixture>& fixtures) {
  Outcome out;
  for (const Fixture& fx : fixtures) {
    const auto t0 = Clock::now();
    const ProxySpace& s = fx.space;
    const KappaNet net = extract_net(s, fx.kappa);
    const PartitionOfUnity pou = build_partition(s, net);
    double worst_sum = 0.0;
    bool support_ok = true, star_ok = true;
    std::vector<std::vector<std::size_t>> star(net.size());
    for (std::size_t g = 0; g < net.size(); ++g) {
      star[g] = net.adjacency[g];
      star[g].push_back(g);
      std::sort(star[g].begin(), star[g].end());
    }
    // Distances from every net point within 3 kappa / 2, straight from the balls.
    std::vector<std::vector<std::pair<std::size_t, double>>> near(s.size());
    for (std::size_t g = 0; g < net.size(); ++g)
      for (const BallEntry& e : s.ball_with_distances(net.points[g], 1.5 * net.kappa))
        near[e.vertex].push_back({g, e.distance});
    for (Vertex x = 0; x < s.size(); ++x) {
      double sum = 0.0;
      for (const PouEntry& e : pou.at(x)) {
        sum += e.value;
        const auto it = std::find_if(near[x].begin(), near[x].end(), [&](auto& p) { return p.first == e.net_index; });
        if (e.value != 0.0 && (it == near[x].end() || !(it->second < 1.5 * net.kappa))) support_ok = false;
      }
      worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
      // Star identity: x in B_kappa(g) => every nonzero xi_h(x) has h in {g} + N_g.
      for (const auto& [g, d] : near[x]) {
        if (d > net.kappa) continue;
        for (const PouEntry& e : pou.at(x))
          if (!std::binary_search(star[g].begin(), star[g].end(), e.net_index)) star_ok = false;
      }
    }
    const double secs = seconds_since(t0);
    out.detail << fx.name << ": |sum-1| <= " << fmt(worst_sum) << ", " << fmt(secs) << " s; ";
    if (!(worst_sum <= 1e-12)) out.fail(fx.name + " partition sum off by " + fmt(worst_sum));
    if (!support_ok) out.fail(fx.name + " support outside 3kappa/2");
    if (!star_ok) out.fail(fx.name + " star identity");
    if (!(secs < 5.0)) out.fail(fx.name + " took " + fmt(secs) + " s");
  }
  return out;
}

// 2. p = 2 against the dense linear solve; path ramp for every p.
Outcome solver_vs_oracle(const std::vector<Fixture>& fixtures) {
  Outcome out;
  SolveOptions tight;
  tight.tol = 1e-12;
  for (const Fixture& fx : fixtures) {
    const ProxySpace& s = fx.space;
    if (s.size() > 1000) continue;
    const auto boundary = s.designated_boundary();
    const std::vector<Vertex> b(boundary.begin(), boundary.end());
    const auto values = seeded_values(b.size(), 2024);
    const EnergySpec spec = EnergySpec::make(2.0, natural_mode(s));
    const auto got = solve(DirichletProblem(s, spec, b, values), tight);
    const double err = sup_diff(got.values, linear_oracle(s, spec, b, values));
    out.detail << fx.name << " p=2 vs oracle " << fmt(err) << "; ";
    if (!(err <= 1e-8)) out.fail(fx.name + " p=2 differs from the linear solve by " + fmt(err));
  }
  const ProxySpace& path = fixtures.front().space;
  const std::size_t n = path.size();
  double worst = 0.0;
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    const auto got =
        solve(DirichletProblem(path, EnergySpec::make(p), {0, static_cast<Vertex>(n - 1)}, {0.0, 1.0}), tight);
    for (Vertex x = 0; x < n; ++x)
      worst = std::max(worst, std::abs(got.values[x] - static_cast<double>(x) / static_cast<double>(n - 1)));
  }
  out.detail << "path ramp p in {1.5,2,3,4}: " << fmt(worst);
  if (!(worst <= 1e-8)) out.fail("path ramp off by " + fmt(worst));
  return out;
}

// 3. Maximum principle, comparison, residual and uniqueness on 200 instances.
Outcome solver_invariants() {
  Outcome out;
  const double ps[] = {1.5, 2.5, 4.0};
  std::size_t runs = 0, max_violations = 0, cmp_violations = 0, res_violations = 0, uniq_violations = 0,
              nonconverged = 0;
  double worst_res = 0.0, worst_uniq = 0.0;
  SolveOptions tight;
  tight.tol = 1e-12;
  for (std::uint64_t i = 0; i < 200; ++i) {
    const std::size_t n = 20 + (i * 37) % 181;  // 20..200 vertices
    const ProxySpace s = random_space(n, n / 2 + i % 7, 1000 + i, i % 2 == 0);
    const double p = ps[i % 3];
    const EnergySpec spec = EnergySpec::make(p, natural_mode(s));
    std::mt19937_64 rng(5000 + i);
    std::uniform_real_distribution<double> u(-1.0, 1.0), pick(0.0, 1.0), up(0.0, 0.5);
    std::vector<Vertex> b;
    std::vector<double> g1, g2;
    for (Vertex x = 0; x < n; ++x)
      if (x == 0 || pick(rng) < 0.15) {
        b.push_back(x);
        g1.push_back(u(rng));
        g2.push_back(g1.back() + up(rng));
      }
    const DirichletProblem one(s, spec, b, g1), two(s, spec, b, g2);
    // Below p = 2 the residual floor from rounding is about eps^(p-1) per edge,
    // and the error is already below the residual, so 1e-10 is enough there.
    tight.tol = p < 2.0 ? 1e-10 : 1e-12;
    try {
      const auto h1 = solve(one, tight), h2 = solve(two, tight);
      SolveOptions from_a = tight, from_b = tight;
      from_a.initial = seeded_values(n, 7000 + i);
      from_b.initial = seeded_values(n, 9000 + i);
      for (auto& v : *from_a.initial) v *= 3.0;
      const auto ha = solve(one, from_a), hb = solve(one, from_b);
      runs += 4;
      const double lo = *std::min_element(g1.begin(), g1.end()), hi = *std::max_element(g1.begin(), g1.end());
      for (Vertex x = 0; x < n; ++x) {
        if (h1.values[x] < lo - 1e-12 || h1.values[x] > hi + 1e-12) ++max_violations;
        if (h1.values[x] > h2.values[x] + 1e-9) ++cmp_violations;
      }
      for (const auto* h : {&h1, &h2, &ha, &hb}) {
        const auto r = residual(h->values, s, spec);
        for (Vertex x : one.free_vertices()) {
          worst_res = std::max(worst_res, std::abs(r[x]));
          if (h != &h2 && std::abs(r[x]) > 1e-8) ++res_violations;
        }
        if (h == &h2) {
          const auto r2 = residual(h2.values, s, spec);
          for (Vertex x : two.free_vertices())
            if (std::abs(r2[x]) > 1e-8) ++res_violations;
        }
      }
      const double d = sup_diff(ha.values, hb.values);
      worst_uniq = std::max(worst_uniq, d);
      if (d > 1e-6) ++uniq_violations;
    } catch (const ConvergenceError& e) {
      ++nonconverged;
      out.detail << "instance " << i << " did not converge (" << e.what() << "); ";
    }
  }
  out.detail << runs << " converged runs, max residual " << fmt(worst_res) << ", max init spread "
             << fmt(worst_uniq) << ", non-converged " << nonconverged;
  if (max_violations) out.fail(std::to_string(max_violations) + " maximum-principle violations");
  if (cmp_violations) out.fail(std::to_string(cmp_violations) + " comparison violations");
  if (res_violations) out.fail(std::to_string(res_violations) + " residuals above 1e-8");
  if (uniq_violations) out.fail(std::to_string(uniq_violations) + " initialization disagreements above 1e-6");
  if (nonconverged) out.fail(std::to_string(nonconverged) + " instances did not converge");
  return out;
}

// 4 and 5. Energy ceilings over 32 seeded trials per fixture.
Outcome energy_ceiling(const std::vector<Fixture>& fixtures, bool smoothing) {
  Outcome out;
  for (const Fixture& fx : fixtures) {
    const auto t0 = Clock::now();
    const KappaNet net = extract_net(fx.space, fx.kappa);
    const EnergyCheckOptions options{2.0, 32, 17};
    const VerificationReport r = smoothing
                                     ? check_smoothing_energy(fx.space, net, build_partition(fx.space, net), options)
                                     : check_discretization_energy(fx.space, net, options);
    const double secs = seconds_since(t0);
    out.detail << fx.name << ": " << fmt(r.measured) << " <= " << fmt(*r.ceiling) << " (" << r.trials - r.skipped
               << " trials, " << fmt(secs) << " s); ";
    if (!r.pass) out.fail(fx.name + " ratio " + fmt(r.measured) + " above ceiling " + fmt(*r.ceiling));
    if (r.constants.empty()) out.fail(fx.name + " constants not logged");
    if (smoothing && !(secs < 60.0)) out.fail(fx.name + " took " + fmt(secs) + " s");
  }
  return out;
}

Vertex center_vertex(const ProxySpace& s) {
  Vertex best = 0;
  double best_r = 1e300;
  for (Vertex x = 0; x < s.size(); ++x) {
    const auto& c = s.coords(x);
    double r = 0.0;
    for (double v : c) r += v * v;
    if (!c.empty() && r < best_r) {
      best_r = r;
      best = x;
    }
  }
  return best;
}

// 6. Convergence lemmas along escaping rays on the tree and the hyperbolic mesh.
Outcome convergence_domination(const std::vector<Fixture>& fixtures) {
  Outcome out;
  for (const Fixture& fx : fixtures) {
    if (fx.name != "tree" && fx.name != "hyperbolic") continue;
    const ProxySpace& s = fx.space;
    const KappaNet net = extract_net(s, fx.kappa);
    const PartitionOfUnity pou = build_partition(s, net);
    const Vertex base = center_vertex(s);
    const auto ray = default_ray(s, base);
    const double reach = 0.5 * eccentricity(s, base);
    for (double p : {2.0, 3.0}) {
      // Compactly supported gradient, then a field with gradient everywhere.
      const auto compact = check_convergence_l41(s, net, radial_ramp(s, base, reach), ray, {p});
      std::vector<double> full(s.size());
      const auto dist = s.distances_from(base);
      for (Vertex x = 0; x < s.size(); ++x) full[x] = std::sin((*dist)[x]);
      const auto spread = check_convergence_l41(s, net, full, ray, {p});
      double past = 0.0;
      for (const auto& row : compact.curve)
        if (row[2] > reach + 5.0 * net.kappa) past = std::max({past, row[4], row[5]});
      out.detail << fx.name << " L4.1 p=" << p << " max(disc-bound) " << fmt(compact.measured) << "/"
                 << fmt(spread.measured) << ", past support " << fmt(past) << "; ";
      if (!compact.pass || !spread.pass) out.fail(fx.name + " L4.1 bound exceeded");
      if (!(past <= 1e-12)) out.fail(fx.name + " L4.1 not zero past the support");

      const std::size_t start = nearest_net_point(s, net, base);
      const auto hops = net_hop_distances(net, start);
      const double hop_reach = 0.5 * static_cast<double>(*std::max_element(hops.begin(), hops.end()));
      std::vector<double> fbar(net.size()), wavy(net.size());
      for (std::size_t g = 0; g < net.size(); ++g) {
        fbar[g] = std::min(static_cast<double>(hops[g]) / hop_reach, 1.0);
        wavy[g] = std::cos(static_cast<double>(g)) / (1.0 + static_cast<double>(hops[g]));
      }
      const auto net_ray = default_net_ray(net, start);
      const auto l42 = check_convergence_l42(s, net, pou, fbar, net_ray, {p});
      const auto l42w = check_convergence_l42(s, net, pou, wavy, net_ray, {p});
      double past42 = 0.0;
      for (const auto& row : l42.curve)
        if (row[2] >= hop_reach + 1.0) past42 = std::max({past42, row[3], row[4]});
      out.detail << fx.name << " L4.2 p=" << p << " " << fmt(l42.measured) << "/" << fmt(l42w.measured)
                 << ", past support " << fmt(past42) << "; ";
      if (!l42.pass || !l42w.pass) out.fail(fx.name + " L4.2 bound exceeded");
      if (!(past42 <= 1e-12)) out.fail(fx.name + " L4.2 not zero past the support");
    }
  }
  return out;
}

// 7. Transfer round trip.
Outcome roundtrip(const std::vector<Fixture>& fixtures) {
  Outcome out;
  for (const Fixture& fx : fixtures) {
    const KappaNet net = extract_net(fx.space, fx.kappa);
    RoundtripOptions options;
    options.spec = EnergySpec::make(2.0, natural_mode(fx.space));
    options.probe = false;
    const auto r = transfer_roundtrip(fx.space, net, std::vector<double>(fx.space.size(), 0.625), options);
    out.detail << fx.name << " constant " << fmt(r.measured) << "; ";
    if (!(r.measured <= 1e-12)) out.fail(fx.name + " constant data moved by " + fmt(r.measured));
  }

  // p = 2 path: every stage against the dense solve.
  {
    const ProxySpace& s = fixtures.front().space;
    const KappaNet net = extract_net(s, fixtures.front().kappa);
    const auto [a, b] = far_pair(s, 0);
    const auto data = two_valued_data(s, a, b);
    RoundtripOptions options;
    options.spec = EnergySpec::make(2.0);
    options.solve.tol = 1e-12;
    options.probe = false;
    const auto st = transfer_stages(s, net, data, options);
    std::vector<Vertex> nb;
    std::vector<double> nv;
    for (std::size_t g : st.net_annulus) {
      nb.push_back(static_cast<Vertex>(g));
      nv.push_back(data[net.points[g]]);
    }
    const auto hbar = linear_oracle(net_graph_space(s, net), EnergySpec::make(2.0), nb, nv);
    const auto h = smooth(net_field(hbar), build_partition(s, net)).values;
    std::vector<double> pv;
    for (Vertex x : st.proxy_annulus) pv.push_back(h[x]);
    const auto pi = linear_oracle(s, EnergySpec::make(2.0), st.proxy_annulus, pv);
    const auto back = discretize(proxy_field(pi), s, net).values;
    const double err = std::max({sup_diff(st.net_solution, hbar), sup_diff(st.smoothed, h),
                                 sup_diff(st.proxy_solution, pi), sup_diff(st.back, back)});
    out.detail << "path p=2 stages vs oracle " << fmt(err) << "; ";
    if (!(err <= 1e-8)) out.fail("path p=2 stages off the linear oracle by " + fmt(err));
  }

  // Tree refinement kappa -> kappa / 2 with two-valued data.
  for (const Fixture& fx : fixtures) {
    if (fx.name != "tree") continue;
    const auto [a, b] = far_pair(fx.space, 0);
    const auto data = two_valued_data(fx.space, a, b);
    const std::vector<double> kappas{fx.kappa, fx.kappa / 2.0};
    for (double p : {2.0, 3.0}) {
      RoundtripOptions options;
      options.spec = EnergySpec::make(p);
      options.probe = false;
      const auto r = roundtrip_refinement(fx.space, kappas, data, options);
      out.detail << "tree p=" << p << " discrepancy " << fmt(r.curve[0][1]) << " -> " << fmt(r.curve[1][1]) << " ("
                 << static_cast<int>(r.curve[0][3]) << " -> " << static_cast<int>(r.curve[1][3])
                 << " interior net points)";
      if (auto rate = r.constant("rate")) out.detail << " rate " << fmt(*rate);
      out.detail << "; ";
      if (!r.pass) out.fail("tree p=" + fmt(p) + " discrepancy did not decrease under refinement");
    }
  }
  return out;
}

std::vector<std::vector<double>> all_pairs(const ProxySpace& s) { return floyd_warshall(s); }

// 8. Net audits and quasi-isometry certificates.
Outcome net_audits(const std::vector<Fixture>& fixtures) {
  Outcome out;
  std::vector<std::pair<std::string, std::pair<const ProxySpace*, double>>> cases;
  for (const Fixture& fx : fixtures) {
    cases.push_back({fx.name, {&fx.space, fx.kappa}});
    if (fx.name == "tree") cases.push_back({"tree/2", {&fx.space, fx.kappa / 2.0}});
  }
  const ProxySpace lattice16(generate_lattice2d(16, 16));
  const ProxySpace tree6(generate_regular_tree(3, 6));
  cases.push_back({"lattice16", {&lattice16, 2.0}});
  cases.push_back({"tree6", {&tree6, 2.0}});

  std::size_t audited = 0, certified = 0;
  for (const auto& [name, c] : cases) {
    const ProxySpace& s = *c.first;
    const double kappa = c.second;
    const KappaNet net = extract_net(s, kappa);
    const NetAudit audit = audit_net(s, net);
    ++audited;
    if (!audit.ok()) out.fail(name + " audit: " + (audit.violations.empty() ? "?" : audit.violations.front()));
    if (!(audit.covering_radius <= kappa)) out.fail(name + " covering radius above kappa");
    if (s.size() > 500) continue;

    // Independent scan: all-pairs distances and hop counts rebuilt from them.
    const auto fw = all_pairs(s);
    const std::size_t m = net.size();
    const std::size_t inf = static_cast<std::size_t>(-1);
    const QiEstimate qi = estimate_qi(s, net);
    double cover = 0.0;
    for (Vertex x = 0; x < s.size(); ++x) {
      double nearest = 1e300;
      for (Vertex g : net.points) nearest = std::min(nearest, fw[x][g]);
      cover = std::max(cover, nearest);
    }
    std::size_t bad = 0;
    for (std::size_t src = 0; src < m; ++src) {
      std::vector<std::size_t> hops(m, inf);
      std::deque<std::size_t> queue{src};
      hops[src] = 0;
      while (!queue.empty()) {
        const std::size_t g = queue.front();
        queue.pop_front();
        for (std::size_t h = 0; h < m; ++h)
          if (h != g && hops[h] == inf && fw[net.points[g]][net.points[h]] <= 3.0 * kappa) {
            hops[h] = hops[g] + 1;
            queue.push_back(h);
          }
      }
      for (std::size_t h = src + 1; h < m; ++h) {
        const double dm = fw[net.points[src]][net.points[h]], dg = static_cast<double>(hops[h]);
        if (!(dg / qi.a - qi.b <= dm + 1e-9 && dm <= qi.a * dg + qi.b + 1e-9)) ++bad;
      }
    }
    ++certified;
    out.detail << name << " (a=" << fmt(qi.a) << ", b=" << fmt(qi.b) << ", c=" << fmt(qi.c) << "); ";
    if (bad) out.fail(name + ": " + std::to_string(bad) + " pairs break the certificate");
    if (!(qi.c <= kappa) || std::abs(qi.c - cover) > 1e-12) out.fail(name + " covering constant mismatch");
  }
  out.detail << audited << " nets audited, " << certified << " certificates re-verified";
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// 9. Byte-identical CLI reports.
Outcome determinism(const std::vector<Fixture>& fixtures) {
  Outcome out;
  const fs::path dir = fs::temp_directory_path() / "roydennet_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ostringstream sink;
  std::size_t compared = 0;
  for (const Fixture& fx : fixtures) {
    if (fx.space.size() > 1100) continue;
    const std::string k = fmt(fx.kappa);
    const std::vector<std::vector<std::string>> runs = {
        {"verify", "all", fx.file, "--kappa", k, "--p", "3", "--seed", "99", "--trials", "8"},
        {"net", "extract", fx.file, "--kappa", k},
        {"net", "audit", fx.file, (dir / (fx.name + "_net.json")).string(), "--qi", "--seed", "3"},
    };
    // the audit reads the net written by the extract run
    for (std::size_t r = 0; r < runs.size(); ++r) {
      std::string first;
      for (const char* threads : {"1", "1", "3"}) {
        const fs::path target = dir / (fx.name + "_" + std::to_string(r) + "_" + threads + ".json");
        std::vector<std::string> args{"--threads", threads};
        args.insert(args.end(), runs[r].begin(), runs[r].end());
        args.insert(args.end(), {"-o", target.string()});
        const int code = run_cli(args, sink);
        if (code != kExitOk) out.fail(fx.name + " run " + std::to_string(r) + " exited " + std::to_string(code));
        if (r == 1) fs::copy_file(target, dir / (fx.name + "_net.json"), fs::copy_options::overwrite_existing);
        const std::string bytes = slurp(target);
        if (first.empty())
          first = bytes;
        else if (bytes != first)
          out.fail(fx.name + " run " + std::to_string(r) + " differs between repeats");
        ++compared;
      }
    }
  }
  fs::remove_all(dir);
  out.detail << compared << " outputs compared (verify all, net extract, net audit; 1 and 3 threads)";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const char* env = std::getenv("ROYDENNET_FIXTURES");
  const fs::path dir = argc > 1 ? fs::path(argv[1]) : fs::path(env ? env : "data/fixtures");
  std::vector<Fixture> fixtures;
  try {
    const std::vector<std::tuple<std::string, std::string, double>> list = {
        {"path", "path64.space", 2.0},
        {"lattice", "lattice32x32.space", 2.0},
        {"tree", "tree3_depth8.space", 2.0},
        {"hyperbolic", "hyperbolic_disk.space", 0.6},
    };
    for (const auto& [name, file, kappa] : list) {
      const std::string path = fs::absolute(dir / file).string();
      fixtures.push_back({name, path, kappa, load_space_file(path)});
    }
  } catch (const std::exception& e) {
    std::cerr << "cannot load fixtures: " << e.what() << '\n';
    return 2;
  }

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"partition of unity", [&] { return partition_of_unity(fixtures); }},
      {"solver vs linear oracle", [&] { return solver_vs_oracle(fixtures); }},
      {"solver invariants", [&] { return solver_invariants(); }},
      {"smoothing energy ceiling", [&] { return energy_ceiling(fixtures, true); }},
      {"discretization energy ceiling", [&] { return energy_ceiling(fixtures, false); }},
      {"convergence domination", [&] { return convergence_domination(fixtures); }},
      {"transfer round trip", [&] { return roundtrip(fixtures); }},
      {"net audits", [&] { return net_audits(fixtures); }},
      {"determinism", [&] { return determinism(fixtures); }},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    all = all && o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first << " [" << fmt(seconds_since(t0))
              << " s]: " << o.detail.str() << std::endl;
  }
  return all ? 0 : 1;
}
