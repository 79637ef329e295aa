#include <doctest.h>

#include <cmath>
#include <sstream>

#include "coklab/errors.hpp"
#include "coklab/padic.hpp"
#include "oracles.hpp"

using namespace coklab;

namespace {

MatModPk mat(std::uint64_t p, int k, int m, int n, std::vector<std::int64_t> e) { return MatModPk(p, k, m, n, e); }

// Random invertible matrix over Z/p^k: a product of random elementary operations
// and unit scalings applied to the identity.
MatModPk random_unimodular(std::uint64_t p, int k, int n, PhiloxStream& rng) {
  MatModPk u = MatModPk::identity(p, k, n);
  const auto q = static_cast<std::int64_t>(u.modulus());
  for (int step = 0; step < 4 * n; ++step) {
    const int i = static_cast<int>(rng.next() % n), j = static_cast<int>(rng.next() % n);
    const auto c = static_cast<std::int64_t>(rng.next() % static_cast<std::uint64_t>(q));
    if (i == j) {
      std::int64_t unit = 1 + static_cast<std::int64_t>(rng.next() % (p - 1));
      for (int col = 0; col < n; ++col) u.set(i, col, static_cast<std::int64_t>((static_cast<unsigned __int128>(u.at(i, col)) * unit) % q));
    } else {
      for (int col = 0; col < n; ++col)
        u.set(i, col, static_cast<std::int64_t>((u.at(i, col) + static_cast<unsigned __int128>(c) * u.at(j, col)) % q));
    }
  }
  return u;
}

}  // namespace

TEST_CASE("Philox4x32-10 known-answer vectors") {
  CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == PhiloxCounter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
        PhiloxCounter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
        PhiloxCounter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("Philox streams are reproducible and independent") {
  PhiloxStream a(7, 3), b(7, 3), c(7, 4), d(8, 3);
  int same_c = 0, same_d = 0;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    CHECK(x == b.next());
    same_c += x == c.next();
    same_d += x == d.next();
  }
  CHECK(same_c < 3);
  CHECK(same_d < 3);
}

TEST_CASE("haar-uniform bits have mean one half") {
  const int draws = 100000;
  int ones = 0;
  for (int t = 0; t < draws; ++t) ones += static_cast<int>(sample_matrix(EntrySampler::haar_uniform(), 1, 1, 2, 1, 11, t).at(0, 0));
  const double f = static_cast<double>(ones) / draws;
  CHECK(std::abs(f - 0.5) < 3 * std::sqrt(0.25 / draws));
}

TEST_CASE("uniform residues mod 27 are flat") {
  const auto a = sample_matrix(EntrySampler::haar_uniform(), 270, 100, 3, 3, 5, 0);
  std::vector<int> counts(27, 0);
  for (auto x : a.entries()) ++counts[x];
  double chi2 = 0;
  for (int c : counts) chi2 += (c - 1000.0) * (c - 1000.0) / 1000.0;
  CHECK(chi2 < 60.0);  // 26 degrees of freedom; the 0.9999 quantile is about 61
}

TEST_CASE("categorical and sparse samplers shape the residue mod p") {
  const int n = 300;
  const auto cat = sample_matrix(EntrySampler::categorical({0.6, 0.4}), n, n, 2, 3, 1, 0);
  int zeros = 0;
  for (auto x : cat.entries()) zeros += x % 2 == 0;
  const double trials = static_cast<double>(n) * n;
  CHECK(std::abs(zeros / trials - 0.6) < 3 * std::sqrt(0.24 / trials));
  // higher digits stay uniform
  int high = 0;
  for (auto x : cat.entries()) high += (x >> 1) & 1;
  CHECK(std::abs(high / trials - 0.5) < 3 * std::sqrt(0.25 / trials));

  const double alpha = EntrySampler::log_alpha(50);
  CHECK(alpha == doctest::Approx(std::log(50.0) / 50.0));
  const auto sp = sample_matrix(EntrySampler::sparse(alpha), n, n, 2, 1, 1, 0);
  zeros = 0;
  for (auto x : sp.entries()) zeros += x == 0;
  CHECK(std::abs(zeros / trials - (1 - alpha)) < 3 * std::sqrt(alpha * (1 - alpha) / trials));

  const auto never_zero = sample_matrix(EntrySampler::sparse(1.0), 50, 50, 2, 2, 3, 0);
  for (auto x : never_zero.entries()) CHECK(x % 2 == 1);
}

TEST_CASE("sampling is a pure function of seed and stream") {
  const auto s = EntrySampler::categorical({0.5, 0.25, 0.25});
  CHECK(sample_matrix(s, 7, 9, 3, 4, 42, 17) == sample_matrix(s, 7, 9, 3, 4, 42, 17));
  CHECK_FALSE(sample_matrix(s, 7, 9, 3, 4, 42, 17) == sample_matrix(s, 7, 9, 3, 4, 42, 18));
}

TEST_CASE("sampler validation") {
  CHECK_THROWS_AS(EntrySampler::categorical({0.5, 0.6}), InvalidArgument);
  CHECK_THROWS_AS(EntrySampler::categorical({1.0, 0.0}, 0.1), InvalidArgument);
  CHECK_THROWS_AS(EntrySampler::categorical({-0.1, 1.1}), InvalidArgument);
  CHECK_THROWS_AS(EntrySampler::sparse(0.0), InvalidArgument);
  CHECK_THROWS_AS(sample_matrix(EntrySampler::categorical({0.5, 0.5}), 2, 2, 3, 1, 0, 0), InvalidArgument);
  CHECK_THROWS_AS(MatModPk(4, 1, 1, 1), InvalidArgument);
  CHECK_THROWS_AS(MatModPk(2, 0, 1, 1), InvalidArgument);
  CHECK_THROWS_AS(MatModPk(2, 63, 1, 1), InvalidArgument);
}

TEST_CASE("Smith normal form examples") {
  CHECK(smith_normal_form(MatModPk::identity(5, 2, 4)).exponents == std::vector<int>{0, 0, 0, 0});
  CHECK(smith_normal_form(mat(2, 4, 2, 2, {2, 0, 0, 8})).exponents == std::vector<int>{1, 3});
  CHECK(smith_normal_form(mat(2, 4, 2, 2, {8, 0, 0, 2})).exponents == std::vector<int>{1, 3});
  CHECK(smith_normal_form(mat(2, 3, 2, 2, {2, 1, 1, 2})).exponents == std::vector<int>{0, 0});
  CHECK(smith_normal_form(mat(2, 3, 2, 2, {2, 2, 2, 2})).exponents == std::vector<int>{1, 3});
  CHECK(smith_normal_form(mat(3, 2, 2, 2, {3, 0, 0, 3})).exponents == std::vector<int>{1, 1});
  CHECK(smith_normal_form(MatModPk(2, 3, 0, 0)).exponents.empty());
  const auto r = smith_normal_form(MatModPk(3, 2, 2, 3));
  CHECK(r.exponents == std::vector<int>{2, 2});
  CHECK(r.saturated_count() == 2);
}

TEST_CASE("cokernel types") {
  const auto zero = cokernel_type(MatModPk(2, 3, 1, 1));
  CHECK(zero.type == Partition({3}));
  CHECK(zero.saturated());
  const auto d = cokernel_type(mat(2, 4, 2, 2, {2, 0, 0, 8}));
  CHECK(d.type == Partition({3, 1}));
  CHECK_FALSE(d.saturated());
  // more rows than columns: one free direction
  const auto tall = cokernel_type(mat(3, 2, 2, 1, {1, 0}));
  CHECK(tall.type == Partition({2}));
  CHECK(tall.saturated_parts == 1);
  // more columns than rows: no free direction
  CHECK(cokernel_type(mat(3, 2, 1, 2, {3, 1})).type.empty());
}

TEST_CASE("match_group and the precision policy") {
  CHECK(match_group(MatModPk::identity(2, 1, 3), PGroupType(2, Partition())));
  CHECK(match_group(mat(2, 2, 3, 3, {2, 0, 0, 0, 1, 0, 0, 0, 1}), PGroupType(2, Partition({1}))));
  const auto a = mat(2, 2, 2, 2, {4, 0, 0, 1});
  CHECK_FALSE(match_group(a, PGroupType(2, Partition({1}))));
  CHECK_THROWS_AS(match_group(a, PGroupType(2, Partition({2}))), PrecisionError);
  CHECK(match_group(mat(2, 3, 2, 2, {4, 0, 0, 1}), PGroupType(2, Partition({2}))));
  CHECK_THROWS_AS(match_group(a, PGroupType(3, Partition({1}))), InvalidArgument);
}

TEST_CASE("shifts, sums and residual rank") {
  CHECK(shift(MatModPk(2, 2, 2, 2), 1) == MatModPk::identity(2, 2, 2));
  const auto a = mat(3, 2, 2, 2, {1, 5, 7, 2});
  CHECK(add(a, MatModPk(3, 2, 2, 2)) == a);
  const auto s = shift(MatModPk::identity(3, 2, 2), 2);
  CHECK(s == mat(3, 2, 2, 2, {3, 0, 0, 3}));
  CHECK(cokernel_type(s).type == Partition({1, 1}));
  CHECK(scalar_p_shift(MatModPk(2, 3, 2, 2)) == mat(2, 3, 2, 2, {2, 0, 0, 2}));
  CHECK(shift(a, -1) == mat(3, 2, 2, 2, {0, 5, 7, 1}));
  CHECK_THROWS_AS(shift(MatModPk(2, 2, 2, 3), 1), InvalidArgument);
  CHECK_THROWS_AS(add(a, MatModPk(3, 2, 2, 3)), InvalidArgument);
  CHECK_THROWS_AS(add(a, MatModPk(3, 3, 2, 2)), InvalidArgument);

  CHECK(residual_rank(MatModPk::identity(2, 3, 6)) == 6);
  CHECK(residual_rank(scalar_p_shift(MatModPk(2, 3, 6, 6))) == 0);
  CHECK(residual_rank(mat(2, 1, 2, 2, {1, 1, 1, 1})) == 1);
}

TEST_CASE("B sequences") {
  CHECK(residual_rank(make_b_sequence({BKind::Identity, 0}, 5, 0, 2, 3)) == 5);
  CHECK(residual_rank(make_b_sequence({BKind::BlockRank, 2}, 5, 0, 2, 3)) == 2);
  CHECK(residual_rank(make_b_sequence({BKind::PScalar, 0}, 5, 0, 2, 3)) == 0);
  CHECK(residual_rank(make_b_sequence({BKind::Zero, 0}, 5, 1, 2, 3)) == 0);
  const auto b = make_b_sequence({BKind::Identity, 0}, 3, 2, 5, 1);
  CHECK(b.rows() == 3);
  CHECK(b.cols() == 5);
  CHECK_THROWS_AS(make_b_sequence({BKind::BlockRank, 6}, 5, 0, 2, 3), InvalidArgument);
  CHECK(to_string(parse_b_spec("block-rank:4")) == "block-rank:4");
  CHECK(parse_b_spec("p-scalar").kind == BKind::PScalar);
  CHECK_THROWS_AS(parse_b_spec("diag"), InvalidArgument);
}

TEST_CASE("matrix literal round trip") {
  const auto a = sample_matrix(EntrySampler::haar_uniform(), 3, 4, 5, 2, 9, 1);
  std::istringstream in(to_text(a));
  CHECK(read_matrix(in) == a);
  std::istringstream literal("2 3 2 2\n2 1\n1 2\n");
  CHECK(read_matrix(literal) == mat(2, 3, 2, 2, {2, 1, 1, 2}));
  std::istringstream short_literal("2 3 2 2\n2 1 1\n");
  CHECK_THROWS_AS(read_matrix(short_literal), InvalidArgument);
  std::istringstream negative("3 1 1 1\n-1\n");
  CHECK(read_matrix(negative).at(0, 0) == 2);
}

TEST_CASE("SNF agrees with the determinantal-divisor oracle on 1000 random 4x4 matrices") {
  int checked = 0;
  for (std::uint64_t p : {2u, 3u, 5u})
    for (int k = 1; k <= 4; ++k)
      for (int t = 0; t < 84; ++t) {
        // Mix uniform and strongly p-divisible ensembles so high exponents occur.
        const auto sampler = t % 2 ? EntrySampler::haar_uniform() : EntrySampler::sparse(0.3);
        const auto a = sample_matrix(sampler, 4, 4, p, k, 1234, static_cast<std::uint64_t>(t));
        const auto snf = smith_normal_form(a).exponents;
        CHECK(snf == oracle::determinantal_snf_exponents(a));
        ++checked;
      }
  CHECK(checked >= 1000);
}

TEST_CASE("SNF agrees with the oracle on rectangular shapes and large moduli") {
  struct Case {
    std::uint64_t p;
    int k, m, n;
  };
  for (const Case c : {Case{2, 3, 3, 5}, Case{3, 2, 5, 3}, Case{2, 40, 4, 4}, Case{3, 15, 4, 4}, Case{3, 30, 4, 4},
                       Case{7, 20, 3, 4}, Case{2, 32, 4, 3}, Case{65521, 2, 3, 3}})
    for (int t = 0; t < 40; ++t) {
      const auto sampler = t % 2 ? EntrySampler::haar_uniform() : EntrySampler::sparse(0.5);
      const auto s = c.p > (1u << 16) ? EntrySampler::haar_uniform() : sampler;
      auto a = sample_matrix(s, c.m, c.n, c.p, c.k, 99, static_cast<std::uint64_t>(t));
      if (t % 5 == 0 && c.m == c.n) a = scalar_p_shift(a);
      CHECK(smith_normal_form(a).exponents == oracle::determinantal_snf_exponents(a));
    }
}

TEST_CASE("lazy reduction survives long eliminations") {
  // 3^10 leaves a single step of headroom in 32-bit words, forcing frequent reductions.
  for (int t = 0; t < 5; ++t) {
    const auto a = sample_matrix(EntrySampler::sparse(0.6), 12, 12, 3, 10, 3, static_cast<std::uint64_t>(t));
    const auto lifted = MatModPk(3, 30, 12, 12, std::vector<std::int64_t>(a.entries().begin(), a.entries().end()));
    auto low = smith_normal_form(a).exponents;
    auto high = smith_normal_form(lifted).exponents;
    for (int& e : high) e = std::min(e, 10);
    CHECK(low == high);
  }
}

TEST_CASE("SNF is invariant under unimodular conjugation and transposition") {
  PhiloxStream rng(77, 0);
  for (std::uint64_t p : {2u, 3u, 5u}) {
    for (int c = 0; c < 3; ++c) {
      const int k = 2 + c;
      const auto a = sample_matrix(EntrySampler::sparse(0.4), 6, 6, p, k, 5, p * 10 + c);
      const auto base = smith_normal_form(a).exponents;
      CHECK(cokernel_type(a.transpose()).type == cokernel_type(a).type);
      for (int r = 0; r < 100; ++r) {
        const auto u = random_unimodular(p, k, 6, rng);
        const auto v = random_unimodular(p, k, 6, rng);
        REQUIRE(residual_rank(u) == 6);
        CHECK(smith_normal_form(u * a * v).exponents == base);
      }
    }
  }
}

TEST_CASE("structural invariants on random matrices") {
  for (std::uint64_t p : {2u, 3u})
    for (int t = 0; t < 200; ++t) {
      const int n = 2 + t % 7;
      const auto a = sample_matrix(t % 3 ? EntrySampler::sparse(0.5) : EntrySampler::haar_uniform(), n, n, p, 3, 21,
                                   static_cast<std::uint64_t>(t));
      const auto snf = smith_normal_form(a).exponents;
      CHECK(std::is_sorted(snf.begin(), snf.end()));
      CHECK(residual_rank(a) == std::count(snf.begin(), snf.end(), 0));
      CHECK(cokernel_type(a).type.length() == cokernel_type(scalar_p_shift(a)).type.length());
      CHECK(cokernel_type(a.transpose()).type == cokernel_type(a).type);
    }
  for (int u = 1; u <= 3; ++u)
    for (int k = 1; k <= 4; ++k) {
      const auto a = sample_matrix(EntrySampler::haar_uniform(), 5 + u, 5, 3, k, 8, static_cast<std::uint64_t>(u));
      CHECK(cokernel_type(a).saturated_parts >= u);
    }
}
