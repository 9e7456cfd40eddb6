#pragma once
/*
 * p-Dirichlet energy on a ProxySpace and the Dirichlet problem for the graph
 * p-Laplacian.
 *
 *   |Df(x)|^p = sum_{y ~ x} c_xy |f(y) - f(x)|^p
 *   I_p(f)    = sum_x |Df(x)|^p          (every edge counted from both ends)
 *   res(x)    = sum_{y ~ x} c_xy |f(y) - f(x)|^(p-2) (f(y) - f(x))
 *
 * with c_xy = 1 (combinatorial) or c_xy = w_xy / len_xy^p, w_xy = len_xy (w_x + w_y) / 2
 * (length-weighted). For 1 < p < 2 a zero increment contributes 0 to res.
 */

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "roydennet/geometry.hpp"

namespace roydennet {

enum class EnergyMode { combinatorial, length_weighted };

struct EnergySpec {
  double p = 2.0;
  EnergyMode mode = EnergyMode::combinatorial;

  /// Throws InputError("p must exceed 1") unless p > 1.
  static EnergySpec make(double p, EnergyMode mode = EnergyMode::combinatorial);
  /// Conjugate exponent, 1/p + 1/q = 1.
  double q() const { return p / (p - 1.0); }
};

/// Mode matching the space: combinatorial graphs use the graph energy,
/// manifold proxies the length-weighted one.
EnergyMode natural_mode(const ProxySpace& space);

/// Coefficient c_xy of one edge under the spec.
double edge_coefficient(const ProxySpace& space, const Edge& edge, const EnergySpec& spec);

std::vector<double> gradient_p(std::span<const double> f, const ProxySpace& space, const EnergySpec& spec);
double energy_p(std::span<const double> f, const ProxySpace& space, const EnergySpec& spec);
std::vector<double> residual(std::span<const double> f, const ProxySpace& space, const EnergySpec& spec);

/// Proxy for the continuum energy int |grad f|^p dx: every edge counted once,
/// sum_e w_e |f(b) - f(a)|^p / len_e^p. Optionally restricted to edges with
/// both endpoints in `inside`.
double continuum_energy(std::span<const double> f, const ProxySpace& space, double p);
double continuum_energy(std::span<const double> f, const ProxySpace& space, double p,
                        std::span<const char> inside);

class DirichletProblem {
 public:
  /// Throws InputError when the boundary is empty, values do not match, or a
  /// free vertex cannot reach the boundary through free vertices.
  DirichletProblem(const ProxySpace& space, EnergySpec spec, std::vector<Vertex> boundary,
                   std::vector<double> values);

  const ProxySpace& space() const noexcept { return *space_; }
  const EnergySpec& spec() const noexcept { return spec_; }
  std::span<const Vertex> boundary() const noexcept { return boundary_; }
  std::span<const double> boundary_values() const noexcept { return values_; }
  std::span<const Vertex> free_vertices() const noexcept { return free_; }
  bool is_boundary(Vertex x) const { return fixed_[x] != 0; }

 private:
  const ProxySpace* space_;
  EnergySpec spec_;
  std::vector<Vertex> boundary_;
  std::vector<double> values_;
  std::vector<Vertex> free_;
  std::vector<char> fixed_;
};

enum class SolveMode { gauss_seidel, jacobi };

struct SolveOptions {
  double tol = 1e-8;
  std::size_t max_sweeps = 100000;
  SolveMode mode = SolveMode::gauss_seidel;
  /// Every 20 sweeps, try damped Newton steps on the free values; coordinate
  /// sweeps alone crawl for p < 2.
  bool newton = true;
  /// Starting values on free vertices; defaults to the mean boundary value.
  std::optional<std::vector<double>> initial;
};

struct SolveResult {
  std::vector<double> values;
  std::size_t sweeps = 0;
  double final_residual = 0.0;  // sup-norm over free vertices
  double energy = 0.0;
  double min = 0.0;
  double max = 0.0;
};

/// Cyclic coordinate minimization in ascending vertex order (or Jacobi
/// updates from the previous iterate). Each update minimizes the strictly
/// convex one-variable energy exactly. Throws ConvergenceError when the
/// residual is still above tol after max_sweeps.
SolveResult solve(const DirichletProblem& problem, const SolveOptions& options = {});

/// Minimizer of phi(t) = sum_i c_i |v_i - t|^p; root of phi' bracketed by
/// [min v, max v], to machine precision.
double minimize_local(std::span<const double> values, std::span<const double> coeffs, double p);

struct RoydenLevel {
  double radius = 0.0;
  std::vector<Vertex> sphere;  // vertices of ball(o, R) with a neighbor outside it
  std::vector<char> inside;    // membership in ball(o, R)
  std::vector<double> harmonic;   // h_R: solution inside, f outside
  std::vector<double> remainder;  // u_R = f - h_R inside, 0 outside
  double energy = 0.0;            // I_p(h_R) over edges inside the ball
  std::size_t sweeps = 0;
  double final_residual = 0.0;
  /// sup over ball(o, R_1) of |h_R - h_{R_prev}|; absent for the first radius.
  std::optional<double> stabilization;
};

struct RoydenSplit {
  Vertex base = 0;
  std::vector<RoydenLevel> levels;
};

RoydenSplit royden_split(const ProxySpace& space, std::span<const double> f, const EnergySpec& spec,
                         Vertex base, std::span<const double> radii, const SolveOptions& options = {});

/// True iff for every threshold T the sequence exceeds T at some point and
/// stays strictly above it from then on. `distances` are the distances of the sequence to the base point.
bool escape_check(std::span<const double> distances, std::span<const double> thresholds);
bool escape_check(const ProxySpace& space, std::span<const Vertex> sequence, Vertex base,
                  std::span<const double> thresholds);

}  // namespace roydennet
