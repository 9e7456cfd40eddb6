#pragma once
/*
 * Executable checks of the energy comparisons between a net and its host
 * space, of the two convergence estimates along escaping sequences, and of
 * the boundary-transfer round trip.
 *
 * Ceiling checks report the largest ratio found over seeded random trials
 * and the ceiling assembled from measured constants. Random sampling can
 * only under-approximate a worst case, so a passing report means "no
 * violation found".
 */

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "roydennet/dirichlet.hpp"
#include "roydennet/geometry.hpp"
#include "roydennet/net.hpp"
#include "roydennet/transfer.hpp"

namespace roydennet {

struct ReportConstant {
  std::string name;
  double value = 0.0;
  std::string provenance;
};

struct VerificationReport {
  std::string check;
  std::vector<ReportConstant> constants;
  double measured = 0.0;
  std::optional<double> ceiling;
  bool pass = false;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::size_t skipped = 0;
  double runtime_ms = 0.0;
  std::vector<std::string> curve_columns;
  std::vector<std::vector<double>> curve;
  std::vector<std::string> notes;

  void add_constant(std::string name, double value, std::string provenance);
  std::optional<double> constant(const std::string& name) const;
};

/// Deterministic uniform [-1, 1) values for trial `trial` of a seeded run.
std::vector<double> random_field(std::size_t size, std::uint64_t seed, std::size_t trial);

/// One pass of volume-weighted averaging over closed neighborhoods.
std::vector<double> neighborhood_average(std::span<const double> f, const ProxySpace& space);

struct EnergyCheckOptions {
  double p = 2.0;
  std::size_t trials = 32;
  std::uint64_t seed = 1;
};

/// Ratio continuum_energy(smooth(fbar)) / I_p(fbar, net) against
/// (c k^(1/q))^p V_1(kappa).
VerificationReport check_smoothing_energy(const ProxySpace& space, const KappaNet& net,
                                          const PartitionOfUnity& pou, const EnergyCheckOptions& options);

/// Ratio I_p(f*, net) / continuum_energy(f) against
/// C_2 = C_{7 kappa} k 2^p C_P^p V_1(4 kappa)^(p-1) / V_0(kappa)^p.
VerificationReport check_discretization_energy(const ProxySpace& space, const KappaNet& net,
                                               const EnergyCheckOptions& options);

/// sum_B w |f - mean_B f| / sum_{edges in B} w_e |df| / len. Returns nullopt
/// when the denominator vanishes.
std::optional<double> poincare_ratio(const ProxySpace& space, std::span<const Vertex> ball_vertices,
                                     std::span<const double> f);

struct PoincareOptions {
  double radius_factor = 4.0;
  std::size_t random_fields = 8;
  std::uint64_t seed = 1;
};

/// Largest Poincare ratio over balls centered at the net points and a field
/// family per ball (random, smoothed random, distance ramp, half-ball step).
VerificationReport check_poincare(const ProxySpace& space, const KappaNet& net,
                                  const PoincareOptions& options);

/// Nearest net point (lowest index on ties) of a proxy vertex.
std::size_t nearest_net_point(const ProxySpace& space, const KappaNet& net, Vertex y);

/// Geodesic from `base` to the farthest vertex from it.
std::vector<Vertex> default_ray(const ProxySpace& space, Vertex base);
/// Shortest hop path in the net graph from `start` to the hop-farthest point.
std::vector<std::size_t> default_net_ray(const KappaNet& net, std::size_t start);

/// min(d(base, x) / reach, 1): gradient supported in ball(base, reach).
std::vector<double> radial_ramp(const ProxySpace& space, Vertex base, double reach);

struct ConvergenceOptions {
  double p = 2.0;
  double tolerance = 1e-12;  // slack allowed in the pointwise domination test
};

/// |f*(x_n) - f(y_n)| against 5 kappa V_0(5 kappa)^(-1/p) E(f; ball(y_n, 5 kappa))^(1/p)
/// along the ray y_n, x_n the nearest net point of y_n.
VerificationReport check_convergence_l41(const ProxySpace& space, const KappaNet& net,
                                         std::span<const double> f, std::span<const Vertex> ray,
                                         const ConvergenceOptions& options);

/// |smooth(fbar)(x_n) - fbar(x_n)| against the p-norm of the oscillation of
/// fbar over the net points in ball(x_n, 3 kappa / 2), along a net ray.
VerificationReport check_convergence_l42(const ProxySpace& space, const KappaNet& net,
                                         const PartitionOfUnity& pou, std::span<const double> fbar,
                                         std::span<const std::size_t> ray,
                                         const ConvergenceOptions& options);

struct RoundtripOptions {
  EnergySpec spec;                // proxy-side energy; the net side is combinatorial
  double annulus_factor = 3.0;    // A_Gamma: net points within annulus_factor * kappa of the boundary
  SolveOptions solve;
  double probe_delta = 0.1;
  bool probe = true;
};

struct RoundtripStages {
  std::vector<std::size_t> net_annulus;   // net indices in A_Gamma
  std::vector<std::size_t> net_interior;  // remaining net indices
  std::vector<Vertex> proxy_annulus;      // A_M
  std::vector<double> net_solution;       // hbar
  std::vector<double> smoothed;           // h = smooth(hbar)
  std::vector<double> proxy_solution;     // pi-proxy
  std::vector<double> back;               // discretize(pi-proxy)
  double discrepancy = 0.0;               // sup over interior net points |back - hbar|
};

/// Runs the four-stage transfer with boundary data taken from `data` (a field
/// on the proxy) on the annuli.
RoundtripStages transfer_stages(const ProxySpace& space, const KappaNet& net, std::span<const double> data,
                                const RoundtripOptions& options);

VerificationReport transfer_roundtrip(const ProxySpace& space, const KappaNet& net,
                                      std::span<const double> data, const RoundtripOptions& options);

/// Round trip at each kappa of a decreasing schedule; passes iff the
/// discrepancy strictly decreases along it.
VerificationReport roundtrip_refinement(const ProxySpace& space, std::span<const double> kappas,
                                        std::span<const double> data, const RoundtripOptions& options);

/// 1 on vertices nearer to `a` than to `b`, 0 elsewhere.
std::vector<double> two_valued_data(const ProxySpace& space, Vertex a, Vertex b);
/// Two far-apart vertices found by a double sweep from `base`.
std::pair<Vertex, Vertex> far_pair(const ProxySpace& space, Vertex base);

struct VerifyConfig {
  double p = 2.0;
  std::uint64_t seed = 1;
  std::size_t trials = 32;
  Vertex base = 0;
};

/// Runs every check with default fields, rays and boundary data.
std::vector<VerificationReport> verify_all(const ProxySpace& space, const KappaNet& net,
                                           const VerifyConfig& config);

/// Names accepted by run_check.
const std::vector<std::string>& check_names();
VerificationReport run_check(const std::string& name, const ProxySpace& space, const KappaNet& net,
                             const VerifyConfig& config);

}  // namespace roydennet
