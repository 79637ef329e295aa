#include <algorithm>
#include <bit>
#include <limits>
#include <tuple>
#include <utility>
#include <vector>

#include "coklab/errors.hpp"
#include "coklab/padic.hpp"

namespace coklab {

namespace {

using u128 = unsigned __int128;

std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t m) {
  if (m == 1) return 0;
  __int128 r0 = static_cast<__int128>(m), r1 = static_cast<__int128>(a % m);
  __int128 s0 = 0, s1 = 1;
  while (r1 != 0) {
    const __int128 t = r0 / r1;
    std::tie(r0, r1) = std::make_pair(r1, r0 - t * r1);
    std::tie(s0, s1) = std::make_pair(s1, s0 - t * s1);
  }
  if (s0 < 0) s0 += static_cast<__int128>(m);
  return static_cast<std::uint64_t>(s0);
}

// How entries of the working copy are kept.
//   Wrap: p = 2 and the word size is a multiple of p^k; arithmetic wraps freely
//         and entries are masked when read.
//   Lazy: entries grow by at most (q-1)^2 per elimination step and the active
//         block is reduced before it can overflow.
//   Exact: q is too large for lazy growth; every update is reduced.
enum class Mode { Wrap, Lazy, Exact };

template <class T>
class Eliminator {
 public:
  Eliminator(const MatModPk& a, Mode mode)
      : mode_(mode), p_(a.prime()), k_(a.precision()), q_(a.modulus()), m_(a.rows()), n_(a.cols()) {
    data_.resize(static_cast<std::size_t>(m_) * static_cast<std::size_t>(n_));
    for (int i = 0; i < m_; ++i) {
      const std::uint64_t* src = a.row_data(i);
      T* dst = row(i);
      for (int j = 0; j < n_; ++j) dst[j] = static_cast<T>(src[j]);
    }
    if (mode_ == Mode::Lazy) {
      const u128 room = static_cast<u128>(std::numeric_limits<T>::max()) - q_;
      const u128 step = static_cast<u128>(q_ - 1) * (q_ - 1);
      budget_ = step == 0 ? std::numeric_limits<std::uint64_t>::max()
                          : static_cast<std::uint64_t>(std::min<u128>(room / step, std::numeric_limits<std::uint64_t>::max()));
    }
  }

  std::vector<int> run() {
    std::vector<int> exps;
    const int steps = std::min(m_, n_);
    exps.reserve(static_cast<std::size_t>(steps));
    for (int t = 0; t < steps; ++t) {
      int pi = -1, pj = -1, best = k_;
      for (int i = t; i < m_ && best > 0; ++i) {
        const T* r = row(i);
        for (int j = t; j < n_; ++j) {
          const int v = valuation(read(r[j]));
          if (v < best) {
            best = v;
            pi = i;
            pj = j;
            if (v == 0) break;
          }
        }
      }
      if (pi < 0) {
        exps.resize(static_cast<std::size_t>(steps), k_);
        break;
      }
      if (pi != t) std::swap_ranges(row(t) + t, row(t) + n_, row(pi) + t);
      if (pj != t)
        for (int i = t; i < m_; ++i) std::swap(row(i)[t], row(i)[pj]);
      eliminate(t, best);
      exps.push_back(best);
    }
    return exps;
  }

 private:
  T* row(int i) { return data_.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(n_); }

  std::uint64_t read(T x) const {
    if (mode_ == Mode::Wrap) return static_cast<std::uint64_t>(x) & (q_ - 1);
    return static_cast<std::uint64_t>(x) % q_;
  }

  int valuation(std::uint64_t x) const {
    if (x == 0) return k_;
    if (p_ == 2) return std::min(std::countr_zero(x), k_);
    int v = 0;
    while (x % p_ == 0) {
      x /= p_;
      ++v;
    }
    return v;
  }

  void reduce_active(int t) {
    for (int i = t; i < m_; ++i) {
      T* r = row(i);
      for (int j = t; j < n_; ++j) r[j] = static_cast<T>(r[j] % q_);
    }
    since_reduce_ = 0;
  }

  void eliminate(int t, int v) {
    T* pivot = row(t);
    for (int j = t; j < n_; ++j) pivot[j] = static_cast<T>(read(pivot[j]));
    std::uint64_t pv = 1;
    for (int i = 0; i < v; ++i) pv *= p_;
    const std::uint64_t qv = q_ / pv;  // p^{k-v}
    const std::uint64_t unit_inv = inverse_mod((pivot[t] / pv) % qv, qv);
    if (mode_ == Mode::Lazy && ++since_reduce_ > budget_) {
      reduce_active(t + 1);
      since_reduce_ = 1;
    }
    const T* src = pivot + t + 1;
    const int len = n_ - t - 1;
    for (int i = t + 1; i < m_; ++i) {
      T* r = row(i);
      const std::uint64_t y = read(r[t]);
      if (y == 0) continue;
      // Entries in column t are divisible by p^v since v is the minimal valuation.
      const std::uint64_t c = static_cast<std::uint64_t>(static_cast<u128>(y / pv) * unit_inv % qv);
      const T g = static_cast<T>(c == 0 ? 0 : qv - c);
      T* dst = r + t + 1;
      if (mode_ == Mode::Exact) {
        for (int j = 0; j < len; ++j)
          dst[j] = static_cast<T>((static_cast<u128>(g) * src[j] + dst[j]) % q_);
      } else {
        for (int j = 0; j < len; ++j) dst[j] = static_cast<T>(dst[j] + g * src[j]);
      }
    }
  }

  Mode mode_;
  std::uint64_t p_;
  int k_;
  std::uint64_t q_;
  int m_, n_;
  std::vector<T> data_;
  std::uint64_t budget_ = 0;
  std::uint64_t since_reduce_ = 0;
};

std::vector<int> snf_exponents(const MatModPk& a) {
  const std::uint64_t q = a.modulus();
  if (a.prime() == 2) {
    if (a.precision() <= 32) return Eliminator<std::uint32_t>(a, Mode::Wrap).run();
    return Eliminator<std::uint64_t>(a, Mode::Wrap).run();
  }
  if (q <= (1u << 16)) return Eliminator<std::uint32_t>(a, Mode::Lazy).run();
  if (q <= (std::uint64_t{1} << 32)) return Eliminator<std::uint64_t>(a, Mode::Lazy).run();
  return Eliminator<std::uint64_t>(a, Mode::Exact).run();
}

}  // namespace

int SnfResult::saturated_count() const {
  return static_cast<int>(std::count(exponents.begin(), exponents.end(), precision));
}

SnfResult smith_normal_form(const MatModPk& a) {
  SnfResult out;
  out.precision = a.precision();
  out.exponents = snf_exponents(a);
  return out;
}

CokernelType cokernel_type(const MatModPk& a) {
  const SnfResult snf = smith_normal_form(a);
  std::vector<int> parts;
  for (int e : snf.exponents)
    if (e > 0) parts.push_back(e);
  // Rows beyond the column count are free directions of the cokernel.
  for (int i = a.cols(); i < a.rows(); ++i) parts.push_back(a.precision());
  CokernelType out;
  out.saturated_parts = static_cast<int>(std::count(parts.begin(), parts.end(), a.precision()));
  out.type = Partition::from_unsorted(std::move(parts));
  return out;
}

bool match_group(const MatModPk& a, const PGroupType& h) {
  if (h.p != a.prime()) throw InvalidArgument("matrix and group use different primes");
  if (a.precision() < h.exponent() + 1)
    throw PrecisionError("precision k=" + std::to_string(a.precision()) + " cannot certify " + h.to_string() +
                         "; need k >= " + std::to_string(h.exponent() + 1));
  const CokernelType c = cokernel_type(a);
  return !c.saturated() && c.type == h.type;
}

}  // namespace coklab
