#include <doctest.h>

#include <bit>
#include <cmath>
#include <set>

#include "coklab/errors.hpp"
#include "coklab/nonabelian.hpp"

using namespace coklab;

namespace {

// Subgroup generated by a set, grown by all pairwise products until stable.
ElementMask naive_closure(const FiniteGroup& g, std::vector<int> gens) {
  std::set<int> s(gens.begin(), gens.end());
  s.insert(g.identity());
  for (bool grew = true; grew;) {
    grew = false;
    const std::vector<int> cur(s.begin(), s.end());
    for (int a : cur)
      for (int b : cur) grew |= s.insert(g.mul(a, b)).second;
  }
  ElementMask m = 0;
  for (int x : s) m |= ElementMask{1} << x;
  return m;
}

BigInt brute_generating_tuples(int n, const FiniteGroup& g) {
  BigInt count = 0;
  std::vector<int> t(static_cast<std::size_t>(n), 0);
  for (;;) {
    if (naive_closure(g, t) == g.all()) count += 1;
    int i = 0;
    while (i < n && ++t[i] == g.order()) t[i++] = 0;
    if (i == n) return count;
  }
}

// E[#Sur(X, Z/2) #Sur(Y, Z/2)] by averaging over every relator image in (Z/2)^n.
Rational brute_z2_pair_moment(int n, int u, bool twisted) {
  const int m = n + u;
  const unsigned total_bits = static_cast<unsigned>(n * m);
  Rational sum = 0;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << total_bits); ++bits) {
    long long c1 = 0, c2 = 0;
    for (int phi = 1; phi < (1 << n); ++phi) {  // nonzero homs (Z/2)^n -> Z/2
      bool ok1 = true, ok2 = true;
      for (int i = 0; i < m; ++i) {
        const int r = static_cast<int>((bits >> (i * n)) & ((1u << n) - 1));
        const int v = std::popcount(static_cast<unsigned>(r & phi)) & 1;
        // b_i = x_i^{-1} for i < n adds e_i to r_i
        const int b = twisted && i < n ? (phi >> i) & 1 : 0;
        ok1 = ok1 && v == 0;
        ok2 = ok2 && (v ^ b) == 0;
      }
      c1 += ok1;
      c2 += ok2;
    }
    sum += c1 * c2;
  }
  return sum / Rational(BigInt(1) << total_bits);
}

}  // namespace

TEST_CASE("group construction") {
  const auto c2 = build_group("C2");
  CHECK(c2.order() == 2);
  CHECK(c2.mul(1, 1) == c2.identity());
  const auto s3 = build_group("S3");
  CHECK(s3.order() == 6);
  int involutions = 0;
  for (int a = 0; a < 6; ++a) involutions += s3.element_order(a) == 2;
  CHECK(involutions == 3);
  CHECK_FALSE(s3.is_abelian());
  const auto d4 = build_group("D4");
  CHECK(d4.order() == 8);
  CHECK(std::popcount(d4.center()) == 2);
  const auto q8 = build_group("Q8");
  CHECK(std::popcount(q8.center()) == 2);
  int order4 = 0;
  for (int a = 0; a < 8; ++a) order4 += q8.element_order(a) == 4;
  CHECK(order4 == 6);
  CHECK(build_group("C2xC2xC2").rank() == 3);
  CHECK(build_group("C4xC2").exponent() == 4);
  CHECK(build_group("1").order() == 1);
  CHECK(build_group("1").rank() == 0);
  CHECK(s3.rank() == 2);
  CHECK_THROWS_AS(build_group("C65"), InvalidArgument);
  CHECK_THROWS_AS(build_group("C8xC9"), InvalidArgument);
  CHECK_THROWS_AS(build_group("A5"), InvalidArgument);
  CHECK_THROWS_AS(FiniteGroup({{0, 1}, {1, 1}}), InvalidArgument);
  CHECK_THROWS_AS(FiniteGroup({{0, 1, 2}, {1, 0, 2}, {2, 1, 0}}), InvalidArgument);
}

TEST_CASE("subgroup lattices") {
  for (const char* spec : {"C2xC2", "S3", "D4", "Q8", "C2xC2xC2", "C3xC3", "C4xC2", "D6"}) {
    const auto g = build_group(spec);
    const auto& lat = g.lattice();
    CHECK(lat.subgroups.back() == g.all());
    CHECK(lat.moebius.back() == 1);
    for (std::size_t i = 0; i < lat.subgroups.size(); ++i) {
      CHECK(naive_closure(g, [&] {
              std::vector<int> v;
              for (int a = 0; a < g.order(); ++a)
                if ((lat.subgroups[i] >> a) & 1) v.push_back(a);
              return v;
            }()) == lat.subgroups[i]);
      if (i + 1 == lat.subgroups.size()) continue;
      BigInt total = 0;
      for (std::size_t j = 0; j < lat.subgroups.size(); ++j)
        if ((lat.subgroups[i] & lat.subgroups[j]) == lat.subgroups[i]) total += lat.moebius[j];
      CHECK(total == 0);
    }
  }
  CHECK(build_group("S3").lattice().subgroups.size() == 6);
  CHECK(build_group("D4").lattice().subgroups.size() == 10);
  CHECK(build_group("Q8").lattice().subgroups.size() == 6);
  CHECK(build_group("C2xC2xC2").lattice().subgroups.size() == 16);
  // mu(1, (Z/p)^d) = (-1)^d p^{d(d-1)/2}
  CHECK(build_group("C2xC2xC2").lattice().moebius.front() == -8);
  CHECK(build_group("C3xC3").lattice().moebius.front() == 3);
  const auto s3 = build_group("S3");
  int normal = 0;
  for (bool b : s3.lattice().normal) normal += b;
  CHECK(normal == 3);
}

TEST_CASE("words") {
  const auto w = FreeGroupWord::parse("x1 x2 x2^-1 x3^2");
  CHECK(w.letters() == std::vector<int>{1, 3, 3});
  CHECK((w * w.inverse()).letters().empty());
  CHECK(FreeGroupWord::parse("x1*x2^-1").to_string() == "x1 x2^-1");
  CHECK(FreeGroupWord::parse("1").letters().empty());
  CHECK_THROWS_AS(FreeGroupWord::parse("y1"), InvalidArgument);
  CHECK_THROWS_AS(FreeGroupWord::parse("x0"), InvalidArgument);
  const auto s3 = build_group("S3");
  const auto comm = FreeGroupWord::parse("x1 x2 x1^-1 x2^-1");
  CHECK(comm.evaluate(s3, {1, 3}) != s3.identity());
  CHECK(comm.evaluate(build_group("C6"), {1, 3}) == 0);
}

TEST_CASE("surjections from free groups") {
  CHECK(sur_free_count(2, build_group("C2")) == 3);
  CHECK(sur_free_count(1, build_group("C2xC2")) == 0);
  CHECK(sur_free_count(2, build_group("S3")) == 18);
  CHECK(sur_free_count(0, build_group("1")) == 1);
  CHECK(sur_free_count(0, build_group("C2")) == 0);
  for (const char* spec : {"C2", "C3", "C4", "C2xC2", "S3", "D4", "Q8", "C6", "C2xC2xC2"})
    for (int n = 1; n <= 4; ++n) {
      const auto g = build_group(spec);
      if (std::pow(g.order(), n) > 1e5) continue;
      CHECK_MESSAGE(sur_free_count(n, g) == brute_generating_tuples(n, g), spec << " n=" << n);
    }
  CHECK(expected_sur_random_quotient(2, 0, build_group("C2")) == Rational(3, 4));
  CHECK(expected_sur_random_quotient(2, 0, build_group("S3")) == Rational(1, 2));
  for (int n = 0; n < 4; ++n) CHECK(expected_sur_random_quotient(n, 2, build_group("1")) == 1);
  // tends to |H|^{-u}
  const auto h = build_group("C3");
  CHECK(abs(expected_sur_random_quotient(12, 1, h) - Rational(1, 3)) < Rational(1, 100000));
}

TEST_CASE("pair sets partition the surjection pairs") {
  for (auto [a, b, n] : {std::tuple{"C2", "C2", 2}, {"C2", "C3", 2}, {"S3", "S3", 2}, {"C2xC2", "C2", 3},
                         {"S3", "C2", 3}, {"Q8", "C2xC2", 2}}) {
    const auto h1 = build_group(a), h2 = build_group(b);
    const auto table = pair_set_table(n, h1, h2);
    BigInt total = 0;
    for (const auto& [key, count] : table) {
      total += count;
      CHECK(h1.is_normal(key.first));
      CHECK(h2.is_normal(key.second));
      CHECK(std::popcount(key.first) * h2.order() == std::popcount(key.second) * h1.order());
      CHECK(count <= pair_set_bound(n, h1, h2, key.second));
    }
    CHECK(total == sur_free_count(n, h1) * sur_free_count(n, h2));
  }
  const auto c2 = build_group("C2");
  // three equal pairs with trivial cross images, six distinct pairs with full ones
  CHECK(pair_set_count(2, c2, c2, 0b11, 0b11) == 6);
  CHECK(pair_set_count(2, c2, c2, 0b01, 0b01) == 3);
  const auto c3 = build_group("C3");
  CHECK(pair_set_count(2, c2, c3, 0b01, 0b001) == 0);
  // the only common quotient of Z/2 and Z/3 is trivial
  CHECK(pair_set_count(2, c2, c3, 0b11, 0b111) == 24);
  const auto s3 = build_group("S3");
  const auto& lat = s3.lattice();
  for (std::size_t i = 0; i < lat.subgroups.size(); ++i) {
    if (lat.normal[i]) continue;
    CHECK_THROWS_AS(pair_set_count(2, s3, s3, lat.subgroups[i], s3.all()), InvalidArgument);
  }
}

TEST_CASE("pair moments") {
  const auto one = build_group("1");
  CHECK(pair_moment_random_quotients(3, 1, one, one, basis_inverse_words(3, 1)) == 1);
  const auto c2 = build_group("C2");
  for (int n = 1; n <= 3; ++n)
    for (int u = 0; u <= 1; ++u) {
      CHECK(pair_moment_random_quotients(n, u, c2, c2, basis_inverse_words(n, u)) == brute_z2_pair_moment(n, u, true));
      CHECK(pair_moment_random_quotients(n, u, c2, c2, std::vector<FreeGroupWord>(n + u)) ==
            brute_z2_pair_moment(n, u, false));
    }
  // b = 1: both quotients coincide and the second moment stays above 1
  for (int n = 2; n <= 8; ++n) CHECK(pair_moment_random_quotients(n, 0, c2, c2, std::vector<FreeGroupWord>(n)) > 1);
  CHECK_THROWS_AS(pair_moment_random_quotients(2, 0, c2, c2, basis_inverse_words(2, 1)), InvalidArgument);
  CHECK_THROWS_AS(pair_moment_random_quotients(1, 0, c2, c2, {FreeGroupWord::parse("x2")}), InvalidArgument);
  const auto s3 = build_group("S3");
  CHECK_THROWS_AS(pair_moment_random_quotients(5, 0, s3, s3, basis_inverse_words(5, 0)), InvalidArgument);
}

TEST_CASE("basis twists converge toward independence") {
  const auto c2 = build_group("C2");
  Rational previous = 100;
  for (int n = 2; n <= 10; ++n) {
    const Rational d = abs(pair_moment_random_quotients(n, 0, c2, c2, basis_inverse_words(n, 0)) - 1);
    CHECK(d < previous);
    previous = d;
  }
  CHECK(previous < Rational(1, 100));
}

TEST_CASE("sampled pair moment matches the exact value") {
  const auto c2 = build_group("C2"), c4 = build_group("C4");
  for (auto [h2, n, u] : {std::tuple{&c2, 3, 0}, {&c2, 2, 1}, {&c4, 2, 0}}) {
    const auto b = basis_inverse_words(n, u);
    const double exact = to_double(pair_moment_random_quotients(n, u, c2, *h2, b));
    const auto s = sample_pair_moment(n, u, c2, *h2, b, 20000, 77);
    CHECK_MESSAGE(std::abs(s.estimate - exact) < 3 * s.standard_error, h2->name << " n=" << n);
  }
  const auto s3 = build_group("S3");
  CHECK_THROWS_AS(sample_pair_moment(2, 0, s3, c2, basis_inverse_words(2, 0), 10, 1), InvalidArgument);
}
