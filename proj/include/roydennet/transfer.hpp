#pragma once
/*
 * Moving functions between a net and its host space.
 *
 *   smooth:     net -> proxy, f(x) = sum_g fbar(g) xi_g(x)
 *   discretize: proxy -> net, f*(g) = volume-weighted mean of f on ball(g, 4 kappa)
 *
 * The partition of unity xi_g is built from the piecewise-linear bumps
 *   eta_g(x) = clamp((3 kappa / 2 - d(g, x)) / (kappa / 2), 0, 1),
 * which equal 1 on ball(g, kappa), vanish from distance 3 kappa / 2 on and are
 * (2 / kappa)-Lipschitz.
 */

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "roydennet/geometry.hpp"
#include "roydennet/net.hpp"

namespace roydennet {

enum class FieldDomain { proxy, net };

std::string to_string(FieldDomain domain);

struct ScalarField {
  FieldDomain domain = FieldDomain::proxy;
  std::vector<double> values;  // by vertex index or by net index

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
};

ScalarField proxy_field(std::vector<double> values);
ScalarField net_field(std::vector<double> values);

struct TransferRadii {
  double core_factor = 1.0;       // eta_g == 1 on ball(g, core_factor * kappa)
  double support_factor = 1.5;    // eta_g == 0 beyond support_factor * kappa
  double averaging_factor = 4.0;  // discretize averages over averaging_factor * kappa
};

struct PouEntry {
  std::size_t net_index;
  double value;
};

class PartitionOfUnity {
 public:
  PartitionOfUnity(double kappa, double lipschitz, std::size_t net_size, std::size_t net_degree_bound,
                   std::vector<std::size_t> offsets, std::vector<PouEntry> entries,
                   TransferRadii radii);

  /// Nonzero xi_g(x), ascending net index.
  std::span<const PouEntry> at(Vertex x) const {
    return {entries_.data() + offsets_[x], offsets_[x + 1] - offsets_[x]};
  }
  double value(std::size_t net_index, Vertex x) const;

  double kappa() const noexcept { return kappa_; }
  /// Lipschitz constant c of the bump profile.
  double lipschitz() const noexcept { return lipschitz_; }
  std::size_t vertex_count() const noexcept { return offsets_.size() - 1; }
  std::size_t net_size() const noexcept { return net_size_; }
  std::size_t net_degree_bound() const noexcept { return net_degree_bound_; }
  const TransferRadii& radii() const noexcept { return radii_; }

 private:
  double kappa_;
  double lipschitz_;
  std::size_t net_size_;
  std::size_t net_degree_bound_;
  std::vector<std::size_t> offsets_;
  std::vector<PouEntry> entries_;
  TransferRadii radii_;
};

/// Bump value at distance d.
double bump(double d, double kappa, const TransferRadii& radii = {});

/// Throws InputError when kappa is below twice the max edge length of a
/// manifold proxy, or when some vertex is covered by no bump.
PartitionOfUnity build_partition(const ProxySpace& space, const KappaNet& net,
                                 const TransferRadii& radii = {});

ScalarField smooth(const ScalarField& fbar, const PartitionOfUnity& pou);

ScalarField discretize(const ScalarField& f, const ProxySpace& space, const KappaNet& net,
                       const TransferRadii& radii = {});

struct GradientBound {
  double measured = 0.0;  // max over edges and net points of |xi_g(x) - xi_g(y)| / len
  double ceiling = 0.0;   // (k_Gamma + 2) c
};
GradientBound discrete_gradient_bound(const ProxySpace& space, const PartitionOfUnity& pou);

}  // namespace roydennet
