#pragma once

// Small finite groups by multiplication table, their subgroup lattices, and
// exact moments of random quotients of free groups.

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "coklab/exact.hpp"

namespace coklab {

/// Subsets of a group of order <= 64, as bit masks over element indices.
using ElementMask = std::uint64_t;

class FiniteGroup;

struct SubgroupLattice {
  std::vector<ElementMask> subgroups;  // ascending order, then mask
  std::vector<BigInt> moebius;         // mu(K, G) aligned with subgroups
  std::vector<bool> normal;

  std::size_t index_of(ElementMask mask) const;
};

class FiniteGroup {
 public:
  static constexpr int kMaxOrder = 64;

  /// Verifies closure, associativity, identity and inverses.
  FiniteGroup(std::vector<std::vector<int>> table, std::vector<std::string> labels = {});

  int order() const noexcept { return n_; }
  int identity() const noexcept { return identity_; }
  int mul(int a, int b) const { return table_[static_cast<std::size_t>(a * n_ + b)]; }
  int inverse(int a) const { return inverse_[static_cast<std::size_t>(a)]; }
  const std::string& label(int a) const { return labels_.at(static_cast<std::size_t>(a)); }
  int element_order(int a) const;
  bool is_abelian() const;
  ElementMask all() const noexcept { return n_ == 64 ? ~ElementMask{0} : (ElementMask{1} << n_) - 1; }

  ElementMask closure(const std::vector<int>& generators) const;
  ElementMask center() const;
  bool is_normal(ElementMask subgroup) const;
  /// Smallest number of generators.
  int rank() const;
  /// Exponent: lcm of element orders.
  int exponent() const;

  /// Built once, then shared.
  const SubgroupLattice& lattice() const;

  std::string name;

 private:
  int n_ = 0;
  int identity_ = 0;
  std::vector<int> table_;
  std::vector<int> inverse_;
  std::vector<std::string> labels_;
  mutable std::shared_ptr<const SubgroupLattice> lattice_;
};

FiniteGroup cyclic_group(int m);
FiniteGroup dihedral_group(int m);  // order 2m
FiniteGroup symmetric3();
FiniteGroup quaternion8();
FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b);
/// "C<m>", "D<m>" (order 2m), "S3", "Q8", "1", joined by 'x' for direct products.
FiniteGroup build_group(const std::string& spec);

/// Freely reduced word; letter +i is x_i and -i its inverse (generators 1-based).
class FreeGroupWord {
 public:
  FreeGroupWord() = default;
  explicit FreeGroupWord(std::vector<int> letters);
  /// "x1 x2^-1 x3^2", "x1*x2", "1" or "e" for the identity.
  static FreeGroupWord parse(const std::string& text);
  static FreeGroupWord generator(int i);

  const std::vector<int>& letters() const noexcept { return letters_; }
  FreeGroupWord inverse() const;
  FreeGroupWord operator*(const FreeGroupWord& other) const;
  int max_generator() const;
  std::string to_string() const;
  /// Image under x_i -> images[i-1].
  int evaluate(const FiniteGroup& g, const std::vector<int>& images) const;

  friend bool operator==(const FreeGroupWord&, const FreeGroupWord&) = default;

 private:
  std::vector<int> letters_;
};

/// b_i = x_i^{-1} for i <= n, identity afterwards: n + u words.
std::vector<FreeGroupWord> basis_inverse_words(int n, int u);

/// #Sur(F_n, H) = sum_K mu(K, H) |K|^n.
BigInt sur_free_count(int n, const FiniteGroup& h);

/// E #Sur(F_n / <r_1..r_{n+u}>, H) = #Sur(F_n, H) / |H|^{n+u} for Haar relators.
Rational expected_sur_random_quotient(int n, int u, const FiniteGroup& h);

/// Pair enumeration guard: |H1|^n |H2|^n.
inline constexpr double kPairEnumerationLimit = 1e7;

/// E[#Sur(X, H1) #Sur(Y, H2)] for X = F_n/<r_i>, Y = F_n/<r_i b_i>.
Rational pair_moment_random_quotients(int n, int u, const FiniteGroup& h1, const FiniteGroup& h2,
                                      const std::vector<FreeGroupWord>& b);

/// |S_{G1,G2}| for every (G1, G2) reached: pairs of surjections F_n -> H1, H2
/// with phi1(ker phi2) = G1 and phi2(ker phi1) = G2.
std::map<std::pair<ElementMask, ElementMask>, BigInt> pair_set_table(int n, const FiniteGroup& h1,
                                                                     const FiniteGroup& h2);
/// One entry of pair_set_table. G1, G2 must be normal subgroups.
BigInt pair_set_count(int n, const FiniteGroup& h1, const FiniteGroup& h2, ElementMask g1, ElementMask g2);
/// |H1|^n |G2|^n |H2|^{rank(H2)}.
BigInt pair_set_bound(int n, const FiniteGroup& h1, const FiniteGroup& h2, ElementMask g2);

struct PairMomentSample {
  std::uint64_t trials = 0;
  double estimate = 0.0;
  double standard_error = 0.0;
};

/// Monte Carlo version of pair_moment_random_quotients for abelian H1, H2:
/// relators are drawn uniformly from (Z/e)^n with e the lcm of the exponents.
PairMomentSample sample_pair_moment(int n, int u, const FiniteGroup& h1, const FiniteGroup& h2,
                                    const std::vector<FreeGroupWord>& b, std::uint64_t trials, std::uint64_t seed);

}  // namespace coklab
