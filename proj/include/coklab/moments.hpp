#pragma once

// Mixed moments of distributions on tuples of finite abelian groups, and their
// exact inversion on a truncated lattice.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coklab/exact.hpp"
#include "coklab/partition.hpp"

namespace coklab {

/// Groups of exponent dividing p^max_exponent and p-rank at most max_rank.
struct LatticeFactor {
  std::uint64_t p = 2;
  int max_exponent = 1;
  int max_rank = 1;
};

/// A finite abelian group with one p-part per lattice prime, in lattice order.
using GroupPoint = std::vector<Partition>;
/// An r-tuple of groups.
using LatticePoint = std::vector<GroupPoint>;
using LatticeFunction = std::map<LatticePoint, Rational>;

class TruncatedLattice {
 public:
  TruncatedLattice(std::vector<LatticeFactor> primes, int arity);
  static TruncatedLattice single(std::uint64_t p, int max_exponent, int max_rank, int arity);

  const std::vector<LatticeFactor>& primes() const noexcept { return primes_; }
  int arity() const noexcept { return arity_; }
  /// Sorted by total log-order, then lexicographically. If x <= y componentwise
  /// then x precedes y.
  const std::vector<LatticePoint>& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool contains(const LatticePoint& x) const;
  std::optional<std::size_t> index_of(const LatticePoint& x) const;

  std::string label(const LatticePoint& x) const;
  /// Inverse of label(). Throws InvalidArgument on malformed text or a wrong shape.
  LatticePoint parse_label(const std::string& text) const;

 private:
  std::vector<LatticeFactor> primes_;
  int arity_;
  std::vector<LatticePoint> points_;
  std::map<LatticePoint, std::size_t> index_;
};

/// prod_i #Sur(G_i, H_i), factored over primes.
BigInt sur_product(const TruncatedLattice& lattice, const LatticePoint& g, const LatticePoint& h);
/// prod_i |Aut(H_i)|.
BigInt aut_product(const TruncatedLattice& lattice, const LatticePoint& h);

/// C_H = sum_G dist(G) prod_i #Sur(G_i, H_i) for every H on the lattice.
LatticeFunction moments_from_distribution(const LatticeFunction& dist, const TruncatedLattice& lattice);

/// Solves C = S x by back-substitution; S is triangular for the lattice order.
/// Throws InvalidArgument naming the first missing or foreign cell.
LatticeFunction invert_moments(const LatticeFunction& moments, const TruncatedLattice& lattice);

struct GrowthReport {
  bool holds = true;
  /// max over cells of C_H / bound_F(H).
  double worst_ratio = 0.0;
  LatticePoint worst_cell;
  /// Smallest F for which every cell satisfies the bound.
  double minimal_f = 0.0;
};

/// Checks C_H <= prod_i prod_j F^{k_j} m(H_i at p_j) on every cell, with k_j the
/// lattice exponent bound at p_j.
GrowthReport check_moment_growth(const LatticeFunction& moments, const TruncatedLattice& lattice, double f);

struct FixedPointResult {
  double beta = 0.0;
  double limit = 0.0;  // c_inf(p)^r
  /// (lower, upper) bounds on alpha after each refinement.
  std::vector<std::pair<double, double>> trace;
  std::map<LatticePoint, double> alpha;
};

/// Two-sided refinement of alpha(H) for the all-ones moment problem. Starting
/// from [0, 1], each step maps (lo, hi) to (1 - beta*hi, 1 - beta*lo) with
/// beta = c_inf(p)^-r - 1, which contracts iff 2^{1/r} c_inf(p) > 1.
FixedPointResult unit_moment_fixed_point(std::uint64_t p, int r, const TruncatedLattice& lattice,
                                         double tolerance = 1e-9);

/// Cohen-Lenstra weights c_inf(p)^r / prod |Aut(H_i)| on a single-prime lattice.
std::map<LatticePoint, double> cohen_lenstra_weights(const TruncatedLattice& lattice);

/// CSV "tuple,value" with exact "num/den" values.
void write_lattice_csv(std::ostream& out, const LatticeFunction& values, const TruncatedLattice& lattice);
LatticeFunction read_lattice_csv(std::istream& in, const TruncatedLattice& lattice);

}  // namespace coklab
