#pragma once

// Brute-force oracles used only by the test suites. They enumerate group
// elements and maps directly and share no code path with the library's
// closed forms or Moebius sums.

#include <cstdint>
#include <vector>

#include "coklab/exact.hpp"
#include "coklab/partition.hpp"
#include "coklab/padic.hpp"

namespace coklab::oracle {

/// Explicit addition table of prod Z/p^{lambda_i} for small groups.
class SmallAbelianGroup {
 public:
  SmallAbelianGroup(std::uint64_t p, const Partition& lambda);

  int order() const { return n_; }
  int add(int a, int b) const { return table_[static_cast<std::size_t>(a * n_ + b)]; }
  /// Generators e_i (one per cyclic factor), as element indices.
  const std::vector<int>& basis() const { return basis_; }
  /// x added to itself m times.
  int multiple(int x, std::uint64_t m) const;
  const Partition& type() const { return lambda_; }
  std::uint64_t prime() const { return p_; }

 private:
  std::uint64_t p_;
  Partition lambda_;
  int n_ = 1;
  std::vector<int> moduli_;
  std::vector<int> table_;
  std::vector<int> basis_;
};

struct HomSurCounts {
  BigInt homs;
  BigInt surjections;
};

/// Enumerates every assignment of images to the generators of G_from, keeps the
/// well-defined ones (p^{lambda_i} g_i = 0 checked by repeated addition) and
/// tracks the generated subgroup of each. Assignments sharing a generated
/// subgroup are aggregated so the enumeration stays small.
HomSurCounts brute_hom_sur(std::uint64_t p, const Partition& from, const Partition& to);

/// Enumerates all endomorphisms of G and counts those with trivial kernel.
BigInt brute_aut(std::uint64_t p, const Partition& lambda);

/// SNF exponents of A mod p^k from the determinantal divisors of the integer
/// lift: s_i = D_i / D_{i-1} with D_i the gcd of all i x i minors, exponent
/// min(v_p(s_i), k), and k once D_i vanishes. Ascending, length min(m, n).
std::vector<int> determinantal_snf_exponents(const MatModPk& a);

}  // namespace coklab::oracle
