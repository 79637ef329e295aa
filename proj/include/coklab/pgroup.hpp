#pragma once

// Finite abelian p-groups up to isomorphism and the closed-form densities
// built from them.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "coklab/exact.hpp"
#include "coklab/partition.hpp"

namespace coklab {

/// G_lambda = prod_i Z/p^{lambda_i}.
struct PGroupType {
  std::uint64_t p = 2;
  Partition type;

  PGroupType() = default;
  /// Throws InvalidArgument if p is not a prime.
  PGroupType(std::uint64_t prime, Partition lambda);

  int rank() const noexcept { return type.length(); }
  /// log_p of the group order.
  int log_order() const noexcept { return type.size(); }
  /// e with p^e the exponent of the group.
  int exponent() const noexcept { return type.largest(); }
  BigInt order() const;

  std::string to_string() const;

  friend bool operator==(const PGroupType&, const PGroupType&) = default;
  friend auto operator<=>(const PGroupType&, const PGroupType&) = default;
};

bool is_prime(std::uint64_t n) noexcept;

/// Throws InvalidArgument for non-primes.
void require_prime(std::uint64_t p);

// --- c_r(p) = prod_{k=1}^r (1 - p^-k) ---

double c_partial(std::uint64_t p, int r);
Rational c_partial_exact(std::uint64_t p, int r);

struct TruncatedProduct {
  double value = 1.0;
  /// Relative error bound: the omitted factors lie in [1 - tail_bound, 1].
  double tail_bound = 0.0;
  int terms = 0;
};

/// c_infinity(p), truncated once the omitted tail sum p^{-K-1}/(1 - 1/p) < eps.
TruncatedProduct c_infinity(std::uint64_t p, double eps = 1e-15);

// --- counting ---

BigInt aut_order(const PGroupType& g);
BigInt hom_count(const PGroupType& from, const PGroupType& to);
BigInt sur_count(const PGroupType& from, const PGroupType& to);

/// Number of subgroups of h of each isomorphism type, by explicit enumeration.
/// Guarded to |h| <= p^8.
std::map<Partition, BigInt> subgroup_type_counts(const PGroupType& h);

/// Sum of Moebius values mu(K, h) over subgroups K grouped by type. Only K
/// containing p*h contribute.
const std::map<Partition, BigInt>& moebius_type_profile(const PGroupType& h);

/// p^{twice_exponent / 2}.
struct HalfIntegerPower {
  std::uint64_t p = 2;
  std::int64_t twice_exponent = 0;
  double value() const;
  /// Exact square of the value.
  BigInt squared() const;
};

HalfIntegerPower m_weight(const PGroupType& g);

// --- densities ---

/// coefficient * c_infinity(p)^c_inf_power. Keeps the rational part exact.
struct Density {
  std::uint64_t p = 2;
  Rational coefficient = 0;
  int c_inf_power = 0;

  double value() const;
  std::string symbolic() const;
};

/// Limit of P(cok(A) = H) for n x (n+u) balanced A.
Density density_cokernel(const PGroupType& h, int u);

/// Limit of P(cok(A + t_j I) = H_j for all j) with pairwise distinct shifts mod p.
Density density_joint_shifts(std::span<const PGroupType> hs);

/// Limit of P(cok(A) = H1 and cok(A + pI) = H2).
Density density_joint_pshift(const PGroupType& h1, const PGroupType& h2);

/// Subspaces W of F_p^{r1} x F_p^{r2} projecting onto both factors, counted by
/// enumeration. Requires r1 + r2 <= 8.
BigInt subspace_full_projection_count(std::uint64_t p, int r1, int r2);

}  // namespace coklab
