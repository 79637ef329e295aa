#include "coklab/nonabelian.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "coklab/errors.hpp"
#include "coklab/philox.hpp"

namespace coklab {

namespace {

std::vector<int> members(ElementMask mask) {
  std::vector<int> out;
  for (ElementMask m = mask; m != 0; m &= m - 1) out.push_back(std::countr_zero(m));
  return out;
}

bool in_mask(ElementMask mask, int a) { return (mask >> a) & 1u; }

void check_order(long long order) {
  if (order > FiniteGroup::kMaxOrder)
    throw InvalidArgument("group order " + std::to_string(order) + " exceeds the order-64 guard");
}

// Every n-tuple of elements of h that generates h, flattened.
std::vector<int> generating_tuples(int n, const FiniteGroup& h) {
  std::vector<int> out;
  std::vector<int> tuple(static_cast<std::size_t>(n), 0);
  const ElementMask all = h.all();
  for (;;) {
    if (h.closure(tuple) == all) out.insert(out.end(), tuple.begin(), tuple.end());
    int i = 0;
    while (i < n && ++tuple[static_cast<std::size_t>(i)] == h.order()) tuple[static_cast<std::size_t>(i++)] = 0;
    if (i == n) break;
  }
  return out;
}

void check_pair_guard(int n, const FiniteGroup& h1, const FiniteGroup& h2) {
  if (n < 0) throw InvalidArgument("n must be non-negative");
  const double work = std::pow(static_cast<double>(h1.order()) * h2.order(), n);
  if (work > kPairEnumerationLimit)
    throw InvalidArgument("pair enumeration needs |H1|^n |H2|^n <= 1e7, got " + std::to_string(work));
}

// Visits every pair of surjections (phi1, phi2) from F_n and hands the image L
// of phi1 x phi2 (as a membership vector over H1 x H2) to `visit`.
template <class Visit>
void for_each_surjection_pair(int n, const FiniteGroup& h1, const FiniteGroup& h2, Visit&& visit) {
  check_pair_guard(n, h1, h2);
  const std::vector<int> t1 = generating_tuples(n, h1), t2 = generating_tuples(n, h2);
  const int n2 = h2.order();
  const std::size_t count1 = n == 0 ? (h1.order() == 1 ? 1 : 0) : t1.size() / static_cast<std::size_t>(n);
  const std::size_t count2 = n == 0 ? (h2.order() == 1 ? 1 : 0) : t2.size() / static_cast<std::size_t>(n);
  std::vector<char> in_l(static_cast<std::size_t>(h1.order() * n2), 0);
  std::vector<int> elements;
  for (std::size_t a = 0; a < count1; ++a) {
    const int* phi1 = t1.data() + a * static_cast<std::size_t>(n);
    for (std::size_t b = 0; b < count2; ++b) {
      const int* phi2 = t2.data() + b * static_cast<std::size_t>(n);
      elements.assign(1, h1.identity() * n2 + h2.identity());
      in_l[static_cast<std::size_t>(elements[0])] = 1;
      for (std::size_t q = 0; q < elements.size(); ++q) {
        const int x1 = elements[q] / n2, x2 = elements[q] % n2;
        for (int j = 0; j < n; ++j) {
          const int y = h1.mul(x1, phi1[j]) * n2 + h2.mul(x2, phi2[j]);
          if (!in_l[static_cast<std::size_t>(y)]) {
            in_l[static_cast<std::size_t>(y)] = 1;
            elements.push_back(y);
          }
        }
      }
      visit(phi1, phi2, in_l, elements);
      for (int y : elements) in_l[static_cast<std::size_t>(y)] = 0;
    }
  }
}

}  // namespace

// --- groups ---

std::size_t SubgroupLattice::index_of(ElementMask mask) const {
  const auto it = std::find(subgroups.begin(), subgroups.end(), mask);
  if (it == subgroups.end()) throw InvalidArgument("mask is not a subgroup");
  return static_cast<std::size_t>(it - subgroups.begin());
}

FiniteGroup::FiniteGroup(std::vector<std::vector<int>> table, std::vector<std::string> labels)
    : n_(static_cast<int>(table.size())) {
  if (n_ < 1) throw InvalidArgument("a group needs at least one element");
  check_order(n_);
  table_.reserve(static_cast<std::size_t>(n_ * n_));
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != n_) throw InvalidArgument("multiplication table must be square");
    for (int x : row) {
      if (x < 0 || x >= n_) throw InvalidArgument("multiplication table entry out of range");
      table_.push_back(x);
    }
  }
  identity_ = -1;
  for (int e = 0; e < n_ && identity_ < 0; ++e) {
    bool ok = true;
    for (int a = 0; a < n_ && ok; ++a) ok = mul(e, a) == a && mul(a, e) == a;
    if (ok) identity_ = e;
  }
  if (identity_ < 0) throw InvalidArgument("multiplication table has no identity");
  inverse_.assign(static_cast<std::size_t>(n_), -1);
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b)
      if (mul(a, b) == identity_ && mul(b, a) == identity_) inverse_[static_cast<std::size_t>(a)] = b;
  for (int a = 0; a < n_; ++a)
    if (inverse_[static_cast<std::size_t>(a)] < 0) throw InvalidArgument("element without an inverse");
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b)
      for (int c = 0; c < n_; ++c)
        if (mul(mul(a, b), c) != mul(a, mul(b, c))) throw InvalidArgument("multiplication is not associative");
  labels_ = std::move(labels);
  if (labels_.empty())
    for (int a = 0; a < n_; ++a) labels_.push_back("g" + std::to_string(a));
  if (static_cast<int>(labels_.size()) != n_) throw InvalidArgument("one label per element required");
}

int FiniteGroup::element_order(int a) const {
  int k = 1;
  for (int x = a; x != identity_; x = mul(x, a)) ++k;
  return k;
}

bool FiniteGroup::is_abelian() const {
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < a; ++b)
      if (mul(a, b) != mul(b, a)) return false;
  return true;
}

ElementMask FiniteGroup::closure(const std::vector<int>& generators) const {
  ElementMask mask = ElementMask{1} << identity_;
  std::vector<int> queue{identity_};
  for (std::size_t q = 0; q < queue.size(); ++q)
    for (int g : generators) {
      const int y = mul(queue[q], g);
      if (!in_mask(mask, y)) {
        mask |= ElementMask{1} << y;
        queue.push_back(y);
      }
    }
  return mask;
}

ElementMask FiniteGroup::center() const {
  ElementMask out = 0;
  for (int a = 0; a < n_; ++a) {
    bool central = true;
    for (int b = 0; b < n_ && central; ++b) central = mul(a, b) == mul(b, a);
    if (central) out |= ElementMask{1} << a;
  }
  return out;
}

bool FiniteGroup::is_normal(ElementMask subgroup) const {
  const auto ks = members(subgroup);
  for (int g = 0; g < n_; ++g)
    for (int k : ks)
      if (!in_mask(subgroup, mul(mul(g, k), inverse(g)))) return false;
  return true;
}

int FiniteGroup::exponent() const {
  int e = 1;
  for (int a = 0; a < n_; ++a) e = std::lcm(e, element_order(a));
  return e;
}

int FiniteGroup::rank() const {
  std::map<ElementMask, std::vector<int>> level{{ElementMask{1} << identity_, {}}};
  for (int d = 0;; ++d) {
    if (level.contains(all())) return d;
    std::map<ElementMask, std::vector<int>> next;
    for (const auto& [mask, gens] : level)
      for (int g = 0; g < n_; ++g) {
        if (in_mask(mask, g)) continue;
        auto extended = gens;
        extended.push_back(g);
        const ElementMask m = closure(extended);
        if (!next.contains(m)) next.emplace(m, std::move(extended));
      }
    level = std::move(next);
  }
}

const SubgroupLattice& FiniteGroup::lattice() const {
  if (auto cached = std::atomic_load(&lattice_)) return *cached;
  auto built = std::make_shared<SubgroupLattice>();
  std::map<ElementMask, std::vector<int>> found{{ElementMask{1} << identity_, {}}};
  std::vector<ElementMask> queue{ElementMask{1} << identity_};
  for (std::size_t q = 0; q < queue.size(); ++q) {
    const ElementMask mask = queue[q];
    const std::vector<int> gens = found.at(mask);
    for (int g = 0; g < n_; ++g) {
      if (in_mask(mask, g)) continue;
      auto extended = gens;
      extended.push_back(g);
      const ElementMask m = closure(extended);
      if (found.emplace(m, std::move(extended)).second) queue.push_back(m);
    }
  }
  for (const auto& [mask, gens] : found) built->subgroups.push_back(mask);
  std::sort(built->subgroups.begin(), built->subgroups.end(), [](ElementMask a, ElementMask b) {
    const int pa = std::popcount(a), pb = std::popcount(b);
    return pa != pb ? pa < pb : a < b;
  });
  const std::size_t s = built->subgroups.size();
  built->moebius.assign(s, 0);
  for (std::size_t i = s; i-- > 0;) {
    if (i + 1 == s) {
      built->moebius[i] = 1;
      continue;
    }
    BigInt total = 0;
    for (std::size_t j = i + 1; j < s; ++j)
      if ((built->subgroups[i] & built->subgroups[j]) == built->subgroups[i]) total += built->moebius[j];
    built->moebius[i] = -total;
  }
  for (ElementMask m : built->subgroups) built->normal.push_back(is_normal(m));
  std::shared_ptr<const SubgroupLattice> value = built;
  std::shared_ptr<const SubgroupLattice> expected;
  std::atomic_compare_exchange_strong(&lattice_, &expected, value);
  return *std::atomic_load(&lattice_);
}

FiniteGroup cyclic_group(int m) {
  if (m < 1) throw InvalidArgument("cyclic order must be positive");
  check_order(m);
  std::vector<std::vector<int>> t(static_cast<std::size_t>(m), std::vector<int>(static_cast<std::size_t>(m)));
  std::vector<std::string> labels;
  for (int a = 0; a < m; ++a) {
    labels.push_back(std::to_string(a));
    for (int b = 0; b < m; ++b) t[a][b] = (a + b) % m;
  }
  FiniteGroup g(std::move(t), std::move(labels));
  g.name = "C" + std::to_string(m);
  return g;
}

FiniteGroup dihedral_group(int m) {
  if (m < 1) throw InvalidArgument("dihedral parameter must be positive");
  check_order(2LL * m);
  const int n = 2 * m;
  // r^i s^a has index i + m*a; (r^i s^a)(r^k s^b) = r^{i + (-1)^a k} s^{a+b}.
  std::vector<std::vector<int>> t(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
  std::vector<std::string> labels;
  for (int x = 0; x < n; ++x) {
    const int i = x % m, a = x / m;
    labels.push_back("r" + std::to_string(i) + (a ? "s" : ""));
    for (int y = 0; y < n; ++y) {
      const int k = y % m, b = y / m;
      const int rot = ((i + (a ? -k : k)) % m + m) % m;
      t[x][y] = rot + m * ((a + b) % 2);
    }
  }
  FiniteGroup g(std::move(t), std::move(labels));
  g.name = "D" + std::to_string(m);
  return g;
}

FiniteGroup symmetric3() {
  FiniteGroup g = dihedral_group(3);
  g.name = "S3";
  return g;
}

FiniteGroup quaternion8() {
  // Index 4*s + u for sign s and unit u in {1, i, j, k}.
  static const int unit_mul[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static const int unit_sign[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
  static const char* names[4] = {"1", "i", "j", "k"};
  std::vector<std::vector<int>> t(8, std::vector<int>(8));
  std::vector<std::string> labels;
  for (int x = 0; x < 8; ++x) {
    labels.push_back(std::string(x / 4 ? "-" : "") + names[x % 4]);
    for (int y = 0; y < 8; ++y) {
      const int u = x % 4, v = y % 4;
      const int sign = (x / 4 + y / 4 + unit_sign[u][v]) % 2;
      t[x][y] = 4 * sign + unit_mul[u][v];
    }
  }
  FiniteGroup g(std::move(t), std::move(labels));
  g.name = "Q8";
  return g;
}

FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b) {
  check_order(static_cast<long long>(a.order()) * b.order());
  const int na = a.order(), nb = b.order(), n = na * nb;
  std::vector<std::vector<int>> t(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
  std::vector<std::string> labels;
  for (int x = 0; x < n; ++x) {
    labels.push_back("(" + a.label(x / nb) + "," + b.label(x % nb) + ")");
    for (int y = 0; y < n; ++y) t[x][y] = a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb);
  }
  FiniteGroup g(std::move(t), std::move(labels));
  g.name = a.name + "x" + b.name;
  return g;
}

FiniteGroup build_group(const std::string& spec) {
  std::vector<std::string> factors;
  std::string current;
  for (char c : spec) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (c == 'x' || c == 'X') {
      factors.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  factors.push_back(current);
  auto parse_factor = [&](const std::string& f) -> FiniteGroup {
    if (f == "1") {
      FiniteGroup g = cyclic_group(1);
      g.name = "1";
      return g;
    }
    if (f == "S3" || f == "s3") return symmetric3();
    if (f == "Q8" || f == "q8") return quaternion8();
    if (f.size() >= 2 && (f[0] == 'C' || f[0] == 'c' || f[0] == 'D' || f[0] == 'd') &&
        std::all_of(f.begin() + 1, f.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      if (f.size() > 4) check_order(1000);
      const int m = std::stoi(f.substr(1));
      return (f[0] == 'C' || f[0] == 'c') ? cyclic_group(m) : dihedral_group(m);
    }
    throw InvalidArgument("unknown group '" + f + "' in spec '" + spec + "' (C<m>, D<m>, S3, Q8, 1, joined by x)");
  };
  FiniteGroup out = parse_factor(factors.front());
  for (std::size_t i = 1; i < factors.size(); ++i) out = direct_product(out, parse_factor(factors[i]));
  return out;
}

// --- words ---

FreeGroupWord::FreeGroupWord(std::vector<int> letters) {
  for (int x : letters) {
    if (x == 0) throw InvalidArgument("word letters are nonzero generator indices");
    if (!letters_.empty() && letters_.back() == -x) letters_.pop_back();
    else letters_.push_back(x);
  }
}

FreeGroupWord FreeGroupWord::generator(int i) {
  if (i < 1) throw InvalidArgument("generators are numbered from 1");
  return FreeGroupWord({i});
}

FreeGroupWord FreeGroupWord::parse(const std::string& text) {
  std::string cleaned;
  for (char c : text) cleaned += c == '*' ? ' ' : c;
  std::istringstream in(cleaned);
  std::vector<int> letters;
  std::string token;
  while (in >> token) {
    if (token == "1" || token == "e") continue;
    if (token.size() < 2 || token[0] != 'x') throw InvalidArgument("malformed word token '" + token + "'");
    const auto caret = token.find('^');
    int gen = 0, power = 1;
    try {
      std::size_t used = 0;
      const std::string g = token.substr(1, caret == std::string::npos ? std::string::npos : caret - 1);
      gen = std::stoi(g, &used);
      if (used != g.size()) throw InvalidArgument("");
      if (caret != std::string::npos) {
        const std::string e = token.substr(caret + 1);
        power = std::stoi(e, &used);
        if (used != e.size()) throw InvalidArgument("");
      }
    } catch (const std::exception&) {
      throw InvalidArgument("malformed word token '" + token + "'");
    }
    if (gen < 1) throw InvalidArgument("generators are numbered from 1");
    for (int i = 0; i < std::abs(power); ++i) letters.push_back(power < 0 ? -gen : gen);
  }
  return FreeGroupWord(std::move(letters));
}

FreeGroupWord FreeGroupWord::inverse() const {
  std::vector<int> out(letters_.rbegin(), letters_.rend());
  for (int& x : out) x = -x;
  return FreeGroupWord(std::move(out));
}

FreeGroupWord FreeGroupWord::operator*(const FreeGroupWord& other) const {
  std::vector<int> out = letters_;
  out.insert(out.end(), other.letters_.begin(), other.letters_.end());
  return FreeGroupWord(std::move(out));
}

int FreeGroupWord::max_generator() const {
  int m = 0;
  for (int x : letters_) m = std::max(m, std::abs(x));
  return m;
}

std::string FreeGroupWord::to_string() const {
  if (letters_.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < letters_.size(); ++i)
    s += (i ? " x" : "x") + std::to_string(std::abs(letters_[i])) + (letters_[i] < 0 ? "^-1" : "");
  return s;
}

int FreeGroupWord::evaluate(const FiniteGroup& g, const std::vector<int>& images) const {
  if (max_generator() > static_cast<int>(images.size())) throw InvalidArgument("word uses more generators than images");
  int out = g.identity();
  for (int x : letters_) {
    const int img = images[static_cast<std::size_t>(std::abs(x) - 1)];
    out = g.mul(out, x > 0 ? img : g.inverse(img));
  }
  return out;
}

std::vector<FreeGroupWord> basis_inverse_words(int n, int u) {
  std::vector<FreeGroupWord> out;
  for (int i = 1; i <= n; ++i) out.push_back(FreeGroupWord::generator(i).inverse());
  for (int i = 0; i < u; ++i) out.emplace_back();
  return out;
}

// --- moments ---

BigInt sur_free_count(int n, const FiniteGroup& h) {
  if (n < 0) throw InvalidArgument("n must be non-negative");
  const SubgroupLattice& lat = h.lattice();
  BigInt out = 0;
  for (std::size_t i = 0; i < lat.subgroups.size(); ++i)
    out += lat.moebius[i] * ipow(static_cast<std::uint64_t>(std::popcount(lat.subgroups[i])), static_cast<unsigned>(n));
  return out;
}

Rational expected_sur_random_quotient(int n, int u, const FiniteGroup& h) {
  if (u < 0) throw InvalidArgument("u must be non-negative");
  return Rational(sur_free_count(n, h), ipow(static_cast<std::uint64_t>(h.order()), static_cast<unsigned>(n + u)));
}

Rational pair_moment_random_quotients(int n, int u, const FiniteGroup& h1, const FiniteGroup& h2,
                                      const std::vector<FreeGroupWord>& b) {
  if (u < 0) throw InvalidArgument("u must be non-negative");
  if (static_cast<int>(b.size()) != n + u) throw InvalidArgument("need exactly n + u words b_i");
  for (const auto& w : b)
    if (w.max_generator() > n) throw InvalidArgument("word " + w.to_string() + " uses a generator beyond x_n");
  const int n2 = h2.order();
  const int e1 = h1.identity();
  std::map<std::size_t, BigInt> hits_by_size;
  std::vector<int> images(static_cast<std::size_t>(n));
  for_each_surjection_pair(n, h1, h2, [&](const int*, const int* phi2, const std::vector<char>& in_l,
                                          const std::vector<int>& elements) {
    images.assign(phi2, phi2 + n);
    for (const auto& w : b) {
      const int target = h2.inverse(w.evaluate(h2, images));
      if (!in_l[static_cast<std::size_t>(e1 * n2 + target)]) return;
    }
    hits_by_size[elements.size()] += 1;
  });
  Rational out = 0;
  for (const auto& [size, hits] : hits_by_size)
    out += Rational(hits, ipow(static_cast<std::uint64_t>(size), static_cast<unsigned>(n + u)));
  return out;
}

std::map<std::pair<ElementMask, ElementMask>, BigInt> pair_set_table(int n, const FiniteGroup& h1,
                                                                     const FiniteGroup& h2) {
  const int n2 = h2.order();
  std::map<std::pair<ElementMask, ElementMask>, BigInt> out;
  for_each_surjection_pair(n, h1, h2, [&](const int*, const int*, const std::vector<char>&,
                                          const std::vector<int>& elements) {
    ElementMask g1 = 0, g2 = 0;
    for (int y : elements) {
      if (y % n2 == h2.identity()) g1 |= ElementMask{1} << (y / n2);
      if (y / n2 == h1.identity()) g2 |= ElementMask{1} << (y % n2);
    }
    out[{g1, g2}] += 1;
  });
  return out;
}

BigInt pair_set_count(int n, const FiniteGroup& h1, const FiniteGroup& h2, ElementMask g1, ElementMask g2) {
  for (auto [h, g] : {std::pair{&h1, g1}, std::pair{&h2, g2}}) {
    if ((g & ~h->all()) != 0 || h->closure(members(g)) != g) throw InvalidArgument("G must be a subgroup");
    if (!h->is_normal(g)) throw InvalidArgument("G must be a normal subgroup");
  }
  const auto table = pair_set_table(n, h1, h2);
  const auto it = table.find({g1, g2});
  return it == table.end() ? BigInt(0) : it->second;
}

BigInt pair_set_bound(int n, const FiniteGroup& h1, const FiniteGroup& h2, ElementMask g2) {
  return ipow(static_cast<std::uint64_t>(h1.order()), static_cast<unsigned>(n)) *
         ipow(static_cast<std::uint64_t>(std::popcount(g2)), static_cast<unsigned>(n)) *
         ipow(static_cast<std::uint64_t>(h2.order()), static_cast<unsigned>(h2.rank()));
}

PairMomentSample sample_pair_moment(int n, int u, const FiniteGroup& h1, const FiniteGroup& h2,
                                    const std::vector<FreeGroupWord>& b, std::uint64_t trials, std::uint64_t seed) {
  if (!h1.is_abelian() || !h2.is_abelian()) throw InvalidArgument("relator sampling needs abelian groups");
  if (static_cast<int>(b.size()) != n + u) throw InvalidArgument("need exactly n + u words b_i");
  check_pair_guard(n, h1, h2);
  const auto e = static_cast<std::uint32_t>(std::lcm(h1.exponent(), h2.exponent()));
  const std::vector<int> t1 = generating_tuples(n, h1), t2 = generating_tuples(n, h2);
  const std::size_t count1 = n == 0 ? (h1.order() == 1) : t1.size() / static_cast<std::size_t>(n);
  const std::size_t count2 = n == 0 ? (h2.order() == 1) : t2.size() / static_cast<std::size_t>(n);
  // Image of c_1 x_1 + ... + c_n x_n in an abelian group.
  auto image = [n](const FiniteGroup& g, const int* phi, const std::vector<std::uint32_t>& c) {
    int out = g.identity();
    for (int j = 0; j < n; ++j)
      for (std::uint32_t k = 0; k < c[static_cast<std::size_t>(j)]; ++k) out = g.mul(out, phi[j]);
    return out;
  };
  const std::uint32_t limit = static_cast<std::uint32_t>((std::uint64_t{1} << 32) / e * e - 1);
  BigInt sum = 0, sum_sq = 0;
  std::vector<std::vector<std::uint32_t>> relators(static_cast<std::size_t>(n + u),
                                                   std::vector<std::uint32_t>(static_cast<std::size_t>(n)));
  std::vector<int> images(static_cast<std::size_t>(n));
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    PhiloxStream rng(seed, trial);
    for (auto& r : relators)
      for (auto& c : r) {
        std::uint32_t w;
        do w = rng.next();
        while (w > limit);
        c = w % e;
      }
    std::uint64_t c1 = 0, c2 = 0;
    for (std::size_t a = 0; a < count1; ++a) {
      const int* phi = t1.data() + a * static_cast<std::size_t>(n);
      bool ok = true;
      for (const auto& r : relators) ok = ok && image(h1, phi, r) == h1.identity();
      c1 += ok;
    }
    for (std::size_t a = 0; a < count2; ++a) {
      const int* phi = t2.data() + a * static_cast<std::size_t>(n);
      images.assign(phi, phi + n);
      bool ok = true;
      for (std::size_t i = 0; i < relators.size() && ok; ++i)
        ok = h2.mul(image(h2, phi, relators[i]), b[i].evaluate(h2, images)) == h2.identity();
      c2 += ok;
    }
    const BigInt x = BigInt(c1) * c2;
    sum += x;
    sum_sq += x * x;
  }
  PairMomentSample out;
  out.trials = trials;
  if (trials > 0) {
    const double mean = to_double(Rational(sum, BigInt(trials)));
    out.estimate = mean;
    if (trials > 1) {
      const Rational var = (Rational(sum_sq) - Rational(sum * sum, BigInt(trials))) / Rational(BigInt(trials - 1));
      out.standard_error = std::sqrt(std::max(0.0, to_double(var)) / static_cast<double>(trials));
    }
  }
  return out;
}

}  // namespace coklab
