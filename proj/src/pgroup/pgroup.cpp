#include "coklab/pgroup.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <set>
#include <shared_mutex>

#include "coklab/errors.hpp"
#include "coklab/fp_linear.hpp"

namespace coklab {

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

void require_prime(std::uint64_t p) {
  if (!is_prime(p)) throw InvalidArgument("p = " + std::to_string(p) + " is not a prime");
}

PGroupType::PGroupType(std::uint64_t prime, Partition lambda) : p(prime), type(std::move(lambda)) {
  require_prime(p);
}

BigInt PGroupType::order() const { return ipow(p, static_cast<unsigned>(log_order())); }

std::string PGroupType::to_string() const {
  if (type.empty()) return "0";
  std::string s;
  for (int part : type.parts()) {
    if (!s.empty()) s += "x";
    s += "Z/" + std::to_string(p) + (part > 1 ? "^" + std::to_string(part) : "");
  }
  return s;
}

double c_partial(std::uint64_t p, int r) {
  require_prime(p);
  double value = 1.0;
  double pk = 1.0;
  for (int k = 1; k <= r; ++k) {
    pk *= static_cast<double>(p);
    value *= 1.0 - 1.0 / pk;
  }
  return value;
}

Rational c_partial_exact(std::uint64_t p, int r) {
  require_prime(p);
  Rational value = 1;
  BigInt pk = 1;
  for (int k = 1; k <= r; ++k) {
    pk *= p;
    value *= Rational(pk - 1, pk);
  }
  return value;
}

TruncatedProduct c_infinity(std::uint64_t p, double eps) {
  require_prime(p);
  if (!(eps > 0.0)) throw InvalidArgument("c_infinity needs eps > 0");
  const double inv_p = 1.0 / static_cast<double>(p);
  TruncatedProduct out;
  double pk = 1.0;  // p^{-K}
  for (int k = 1;; ++k) {
    pk *= inv_p;
    out.value *= 1.0 - pk;
    out.terms = k;
    const double tail = pk * inv_p / (1.0 - inv_p);
    if (tail < eps) {
      out.tail_bound = tail;
      return out;
    }
  }
}

namespace {

void require_same_prime(const PGroupType& a, const PGroupType& b) {
  if (a.p != b.p)
    throw InvalidArgument("mismatched primes " + std::to_string(a.p) + " and " + std::to_string(b.p));
}

BigInt hom_count_types(std::uint64_t p, const Partition& from, const Partition& to) {
  unsigned exponent = 0;
  for (int a : from.parts())
    for (int b : to.parts()) exponent += static_cast<unsigned>(std::min(a, b));
  return ipow(p, exponent);
}

// Elements of prod Z/p^{lambda_i}, encoded in mixed radix.
class ElementSpace {
 public:
  ElementSpace(std::uint64_t p, const Partition& lambda) : p_(p), lambda_(lambda) {
    std::uint64_t size = 1;
    for (int part : lambda.parts()) {
      std::uint64_t m = 1;
      for (int i = 0; i < part; ++i) m *= p;
      moduli_.push_back(m);
      size *= m;
      if (size > (std::uint64_t{1} << 26))
        throw InvalidArgument("group " + lambda.to_string() + " too large to enumerate");
    }
    size_ = size;
  }

  std::uint64_t size() const { return size_; }
  std::size_t rank() const { return moduli_.size(); }

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t out = 0, scale = 1;
    for (std::uint64_t m : moduli_) {
      out += ((a % m + b % m) % m) * scale;
      a /= m;
      b /= m;
      scale *= m;
    }
    return out;
  }

  std::uint64_t encode(const std::vector<std::uint64_t>& digits) const {
    std::uint64_t out = 0, scale = 1;
    for (std::size_t i = 0; i < moduli_.size(); ++i) {
      out += (digits[i] % moduli_[i]) * scale;
      scale *= moduli_[i];
    }
    return out;
  }

  // min j with p^j x = 0
  int order_exponent(std::uint64_t x) const {
    int e = 0;
    for (std::size_t i = 0; i < moduli_.size(); ++i) {
      std::uint64_t d = x % moduli_[i];
      x /= moduli_[i];
      if (d == 0) continue;
      int v = 0;
      while (d % p_ == 0) {
        d /= p_;
        ++v;
      }
      e = std::max(e, lambda_[i] - v);
    }
    return e;
  }

  std::vector<char> closure(const std::vector<std::uint64_t>& generators) const {
    std::vector<char> in(size_, 0);
    std::vector<std::uint64_t> frontier{0};
    in[0] = 1;
    while (!frontier.empty()) {
      const std::uint64_t x = frontier.back();
      frontier.pop_back();
      for (std::uint64_t g : generators) {
        const std::uint64_t y = add(x, g);
        if (!in[y]) {
          in[y] = 1;
          frontier.push_back(y);
        }
      }
    }
    return in;
  }

  // Type of a subgroup from the sizes of its p^j-torsion layers.
  Partition subgroup_type(const std::vector<char>& members) const {
    const int e = lambda_.largest();
    std::vector<std::uint64_t> torsion(static_cast<std::size_t>(e) + 1, 0);
    for (std::uint64_t x = 0; x < size_; ++x)
      if (members[x]) ++torsion[static_cast<std::size_t>(order_exponent(x))];
    for (int j = 1; j <= e; ++j) torsion[static_cast<std::size_t>(j)] += torsion[static_cast<std::size_t>(j - 1)];
    std::vector<int> conj;
    for (int j = 1; j <= e; ++j) {
      std::uint64_t ratio = torsion[static_cast<std::size_t>(j)] / torsion[static_cast<std::size_t>(j - 1)];
      int d = 0;
      while (ratio > 1) {
        ratio /= p_;
        ++d;
      }
      if (d > 0) conj.push_back(d);
    }
    return conjugate(Partition(conj));
  }

 private:
  std::uint64_t p_;
  Partition lambda_;
  std::vector<std::uint64_t> moduli_;
  std::uint64_t size_ = 1;
};

std::map<Partition, BigInt> compute_moebius_profile(const PGroupType& h) {
  const ElementSpace space(h.p, h.type);
  const int r = h.rank();
  std::vector<std::uint64_t> frattini_gens;
  for (int i = 0; i < r; ++i) {
    std::vector<std::uint64_t> digits(static_cast<std::size_t>(r), 0);
    digits[static_cast<std::size_t>(i)] = h.p;
    frattini_gens.push_back(space.encode(digits));
  }
  std::map<Partition, BigInt> profile;
  for_each_subspace(static_cast<std::uint32_t>(h.p), r, [&](const FpRows& basis) {
    std::vector<std::uint64_t> gens = frattini_gens;
    for (const auto& row : basis) gens.push_back(space.encode(std::vector<std::uint64_t>(row.begin(), row.end())));
    const int d = r - static_cast<int>(basis.size());
    BigInt mu = ipow(h.p, static_cast<unsigned>(d * (d - 1) / 2));
    if (d % 2 == 1) mu = -mu;
    profile[space.subgroup_type(space.closure(gens))] += mu;
  });
  std::erase_if(profile, [](const auto& kv) { return kv.second == 0; });
  return profile;
}

}  // namespace

BigInt aut_order(const PGroupType& g) {
  const Partition conj = conjugate(g.type);
  unsigned square_sum = 0;
  unsigned removed = 0;
  BigInt numerator = 1;
  for (int i = 0; i < conj.length(); ++i) {
    const int li = conj[static_cast<std::size_t>(i)];
    square_sum += static_cast<unsigned>(li * li);
    const int d = li - conj[static_cast<std::size_t>(i) + 1];
    for (int k = 1; k <= d; ++k) numerator *= ipow(g.p, static_cast<unsigned>(k)) - 1;
    removed += static_cast<unsigned>(d * (d + 1) / 2);
  }
  return ipow(g.p, square_sum - removed) * numerator;
}

BigInt hom_count(const PGroupType& from, const PGroupType& to) {
  require_same_prime(from, to);
  return hom_count_types(from.p, from.type, to.type);
}

const std::map<Partition, BigInt>& moebius_type_profile(const PGroupType& h) {
  static std::shared_mutex mutex;
  static std::map<PGroupType, std::map<Partition, BigInt>> cache;
  {
    std::shared_lock lock(mutex);
    if (auto it = cache.find(h); it != cache.end()) return it->second;
  }
  auto profile = compute_moebius_profile(h);
  std::unique_lock lock(mutex);
  return cache.try_emplace(h, std::move(profile)).first->second;
}

BigInt sur_count(const PGroupType& from, const PGroupType& to) {
  require_same_prime(from, to);
  BigInt total = 0;
  for (const auto& [type, weight] : moebius_type_profile(to))
    total += weight * hom_count_types(from.p, from.type, type);
  return total;
}

std::map<Partition, BigInt> subgroup_type_counts(const PGroupType& h) {
  if (h.log_order() > 8) throw InvalidArgument("subgroup enumeration guarded to |H| <= p^8");
  const ElementSpace space(h.p, h.type);
  const std::uint64_t n = space.size();

  std::set<std::vector<char>> seen;
  std::vector<std::vector<char>> queue;
  std::vector<char> trivial(n, 0);
  trivial[0] = 1;
  seen.insert(trivial);
  queue.push_back(trivial);

  std::map<Partition, BigInt> counts;
  while (!queue.empty()) {
    std::vector<char> sub = std::move(queue.back());
    queue.pop_back();
    ++counts[space.subgroup_type(sub)];
    for (std::uint64_t g = 1; g < n; ++g) {
      if (sub[g]) continue;
      // sub + <g> as a union of translates of sub.
      std::vector<char> next = sub;
      std::uint64_t step = g;
      while (!next[step]) {
        for (std::uint64_t x = 0; x < n; ++x)
          if (sub[x]) next[space.add(x, step)] = 1;
        step = space.add(step, g);
      }
      if (seen.insert(next).second) queue.push_back(std::move(next));
    }
  }
  return counts;
}

double HalfIntegerPower::value() const {
  return std::pow(static_cast<double>(p), static_cast<double>(twice_exponent) / 2.0);
}

BigInt HalfIntegerPower::squared() const { return ipow(p, static_cast<unsigned>(twice_exponent)); }

HalfIntegerPower m_weight(const PGroupType& g) {
  HalfIntegerPower out;
  out.p = g.p;
  const Partition dual = conjugate(g.type);
  for (int c : dual.parts()) out.twice_exponent += c * c;
  return out;
}

double Density::value() const {
  if (coefficient == 0) return 0.0;
  const double cinf = c_infinity(p, 1e-17).value;
  return to_double(coefficient) * std::pow(cinf, c_inf_power);
}

std::string Density::symbolic() const {
  std::string s = to_string(coefficient);
  if (c_inf_power != 0 && coefficient != 0) {
    s += " * c_inf(" + std::to_string(p) + ")";
    if (c_inf_power != 1) s += "^" + std::to_string(c_inf_power);
  }
  return s;
}

Density density_cokernel(const PGroupType& h, int u) {
  if (u < 0) throw InvalidArgument("u must be non-negative");
  Density d;
  d.p = h.p;
  d.c_inf_power = 1;
  // prod_{k>=1} (1 - p^{-k-u}) = c_inf(p) / c_u(p)
  d.coefficient = Rational(1) / (c_partial_exact(h.p, u) * Rational(ipow(h.p, static_cast<unsigned>(u * h.log_order()))) *
                                 Rational(aut_order(h)));
  return d;
}

Density density_joint_shifts(std::span<const PGroupType> hs) {
  Density d;
  d.coefficient = 1;
  if (hs.empty()) return d;
  d.p = hs.front().p;
  for (const auto& h : hs) {
    require_same_prime(hs.front(), h);
    d.coefficient /= Rational(aut_order(h));
    ++d.c_inf_power;
  }
  return d;
}

Density density_joint_pshift(const PGroupType& h1, const PGroupType& h2) {
  require_same_prime(h1, h2);
  Density d;
  d.p = h1.p;
  if (h1.rank() != h2.rank()) return d;
  const int r = h1.rank();
  const Rational cr = c_partial_exact(h1.p, r);
  d.coefficient = Rational(ipow(h1.p, static_cast<unsigned>(r * r))) * cr * cr /
                  (Rational(aut_order(h1)) * Rational(aut_order(h2)));
  d.c_inf_power = 1;
  return d;
}

BigInt subspace_full_projection_count(std::uint64_t p, int r1, int r2) {
  require_prime(p);
  if (r1 < 0 || r2 < 0) throw InvalidArgument("negative dimension");
  if (r1 + r2 > 8) throw InvalidArgument("subspace enumeration guarded to r1 + r2 <= 8");
  const auto prime = static_cast<std::uint32_t>(p);
  BigInt count = 0;
  for_each_subspace(prime, r1 + r2, [&](const FpRows& basis) {
    if (static_cast<int>(basis.size()) < std::max(r1, r2)) return;
    FpRows left, right;
    for (const auto& row : basis) {
      left.emplace_back(row.begin(), row.begin() + r1);
      right.emplace_back(row.begin() + r1, row.end());
    }
    if (rank_mod_p(left, prime) == r1 && rank_mod_p(right, prime) == r2) ++count;
  });
  return count;
}

}  // namespace coklab
