#include "coklab/moments.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "coklab/errors.hpp"
#include "coklab/pgroup.hpp"

namespace coklab {

namespace {

int total_size(const LatticePoint& x) {
  int s = 0;
  for (const auto& g : x)
    for (const auto& part : g) s += part.size();
  return s;
}

template <class T>
std::vector<std::vector<T>> cartesian(const std::vector<T>& choices, int arity) {
  std::vector<std::vector<T>> out{{}};
  for (int i = 0; i < arity; ++i) {
    std::vector<std::vector<T>> next;
    for (const auto& prefix : out)
      for (const auto& c : choices) {
        next.push_back(prefix);
        next.back().push_back(c);
      }
    out = std::move(next);
  }
  return out;
}

bool contained(const LatticePoint& h, const LatticePoint& g) {
  for (std::size_t i = 0; i < h.size(); ++i)
    for (std::size_t j = 0; j < h[i].size(); ++j)
      if (!h[i][j].fits_inside(g[i][j])) return false;
  return true;
}

void require_same_lattice(const LatticeFunction& f, const TruncatedLattice& lattice, const char* what) {
  for (const auto& x : lattice.points())
    if (!f.contains(x)) throw InvalidArgument(std::string(what) + " is missing lattice cell " + lattice.label(x));
  for (const auto& [x, v] : f)
    if (!lattice.contains(x)) throw InvalidArgument(std::string(what) + " has a cell outside the lattice");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

}  // namespace

TruncatedLattice::TruncatedLattice(std::vector<LatticeFactor> primes, int arity)
    : primes_(std::move(primes)), arity_(arity) {
  if (primes_.empty()) throw InvalidArgument("a lattice needs at least one prime");
  if (arity_ < 1) throw InvalidArgument("tuple arity must be at least 1");
  for (std::size_t j = 0; j < primes_.size(); ++j) {
    require_prime(primes_[j].p);
    if (primes_[j].max_exponent < 0 || primes_[j].max_rank < 0)
      throw InvalidArgument("lattice bounds must be non-negative");
    for (std::size_t i = 0; i < j; ++i)
      if (primes_[i].p == primes_[j].p) throw InvalidArgument("lattice primes must be distinct");
  }
  std::vector<GroupPoint> groups{{}};
  for (const auto& f : primes_) {
    std::vector<GroupPoint> next;
    for (const auto& prefix : groups)
      for (const auto& part : partitions_in_box(f.max_exponent, f.max_rank)) {
        next.push_back(prefix);
        next.back().push_back(part);
      }
    groups = std::move(next);
  }
  points_ = cartesian(groups, arity_);
  std::stable_sort(points_.begin(), points_.end(), [](const LatticePoint& a, const LatticePoint& b) {
    const int sa = total_size(a), sb = total_size(b);
    return sa != sb ? sa < sb : a < b;
  });
  for (std::size_t i = 0; i < points_.size(); ++i) index_[points_[i]] = i;
}

TruncatedLattice TruncatedLattice::single(std::uint64_t p, int max_exponent, int max_rank, int arity) {
  return TruncatedLattice({LatticeFactor{p, max_exponent, max_rank}}, arity);
}

bool TruncatedLattice::contains(const LatticePoint& x) const { return index_.contains(x); }

std::optional<std::size_t> TruncatedLattice::index_of(const LatticePoint& x) const {
  const auto it = index_.find(x);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string TruncatedLattice::label(const LatticePoint& x) const {
  std::string s;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) s += ';';
    for (std::size_t j = 0; j < x[i].size(); ++j) s += (j ? "/" : "") + x[i][j].to_string();
  }
  return s;
}

LatticePoint TruncatedLattice::parse_label(const std::string& text) const {
  LatticePoint out;
  std::size_t start = 0;
  for (;;) {
    const auto end = std::min(text.find(';', start), text.size());
    const std::string group = text.substr(start, end - start);
    GroupPoint g;
    std::size_t gs = 0;
    for (;;) {
      const auto ge = std::min(group.find('/', gs), group.size());
      g.push_back(Partition::parse(trim(group.substr(gs, ge - gs))));
      if (ge == group.size()) break;
      gs = ge + 1;
    }
    if (g.size() != primes_.size()) throw InvalidArgument("cell '" + text + "' needs one partition per lattice prime");
    out.push_back(std::move(g));
    if (end == text.size()) break;
    start = end + 1;
  }
  if (static_cast<int>(out.size()) != arity_) throw InvalidArgument("cell '" + text + "' has the wrong tuple arity");
  return out;
}

BigInt sur_product(const TruncatedLattice& lattice, const LatticePoint& g, const LatticePoint& h) {
  if (!contained(h, g)) return 0;
  BigInt out = 1;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g[i].size(); ++j) {
      const std::uint64_t p = lattice.primes()[j].p;
      out *= sur_count(PGroupType(p, g[i][j]), PGroupType(p, h[i][j]));
    }
  return out;
}

BigInt aut_product(const TruncatedLattice& lattice, const LatticePoint& h) {
  BigInt out = 1;
  for (const auto& group : h)
    for (std::size_t j = 0; j < group.size(); ++j) out *= aut_order(PGroupType(lattice.primes()[j].p, group[j]));
  return out;
}

LatticeFunction moments_from_distribution(const LatticeFunction& dist, const TruncatedLattice& lattice) {
  for (const auto& [x, v] : dist) {
    if (!lattice.contains(x)) throw InvalidArgument("distribution has support outside the lattice");
    if (v < 0) throw InvalidArgument("distribution values must be non-negative");
  }
  LatticeFunction out;
  for (const auto& h : lattice.points()) {
    Rational c = 0;
    for (const auto& [g, v] : dist)
      if (v != 0) c += v * Rational(sur_product(lattice, g, h));
    out[h] = c;
  }
  return out;
}

LatticeFunction invert_moments(const LatticeFunction& moments, const TruncatedLattice& lattice) {
  require_same_lattice(moments, lattice, "moment table");
  const auto& pts = lattice.points();
  std::vector<Rational> x(pts.size());
  for (std::size_t a = pts.size(); a-- > 0;) {
    Rational rhs = moments.at(pts[a]);
    for (std::size_t b = a + 1; b < pts.size(); ++b)
      if (x[b] != 0) rhs -= Rational(sur_product(lattice, pts[b], pts[a])) * x[b];
    x[a] = rhs / Rational(aut_product(lattice, pts[a]));
  }
  LatticeFunction out;
  for (std::size_t a = 0; a < pts.size(); ++a) out[pts[a]] = x[a];
  return out;
}

GrowthReport check_moment_growth(const LatticeFunction& moments, const TruncatedLattice& lattice, double f) {
  GrowthReport report;
  int exponent_sum = 0;
  for (const auto& fac : lattice.primes()) exponent_sum += fac.max_exponent;
  const double total_power = static_cast<double>(exponent_sum) * lattice.arity();
  for (const auto& [h, c] : moments) {
    double weight = 1.0;
    for (const auto& group : h)
      for (std::size_t j = 0; j < group.size(); ++j)
        weight *= m_weight(PGroupType(lattice.primes()[j].p, group[j])).value();
    const double value = to_double(c);
    const double ratio = value / (std::pow(f, total_power) * weight);
    if (report.worst_cell.empty() || ratio > report.worst_ratio) {
      report.worst_ratio = ratio;
      report.worst_cell = h;
    }
    if (value > 0) {
      const double needed = total_power == 0 ? (value <= weight ? 0.0 : INFINITY) : std::pow(value / weight, 1.0 / total_power);
      report.minimal_f = std::max(report.minimal_f, needed);
    }
  }
  report.holds = report.worst_ratio <= 1.0 + 1e-12;
  return report;
}

FixedPointResult unit_moment_fixed_point(std::uint64_t p, int r, const TruncatedLattice& lattice, double tolerance) {
  require_prime(p);
  if (r < 1) throw InvalidArgument("r must be at least 1");
  if (!(tolerance > 0)) throw InvalidArgument("tolerance must be positive");
  const double cinf = c_infinity(p).value;
  if (!(std::pow(2.0, 1.0 / r) * cinf > 1.0))
    throw InvalidArgument("fixed point needs 2^(1/r) c_inf(p) > 1; fails for p=" + std::to_string(p) +
                          ", r=" + std::to_string(r));
  FixedPointResult out;
  out.limit = std::pow(cinf, r);
  out.beta = 1.0 / out.limit - 1.0;
  double lo = 0.0, hi = 1.0;
  out.trace.emplace_back(lo, hi);
  while (hi - lo >= tolerance) {
    const double next_hi = 1.0 - out.beta * lo;
    const double next_lo = 1.0 - out.beta * hi;
    lo = std::max(lo, next_lo);
    hi = std::min(hi, next_hi);
    out.trace.emplace_back(lo, hi);
  }
  for (const auto& x : lattice.points()) out.alpha[x] = 0.5 * (lo + hi);
  return out;
}

std::map<LatticePoint, double> cohen_lenstra_weights(const TruncatedLattice& lattice) {
  std::map<LatticePoint, double> out;
  double c = 1.0;
  for (const auto& f : lattice.primes()) c *= c_infinity(f.p).value;
  for (const auto& x : lattice.points()) out[x] = std::pow(c, lattice.arity()) / to_double(aut_product(lattice, x));
  return out;
}

void write_lattice_csv(std::ostream& out, const LatticeFunction& values, const TruncatedLattice& lattice) {
  out << "tuple,value\n";
  for (const auto& x : lattice.points()) {
    const auto it = values.find(x);
    if (it != values.end()) out << lattice.label(x) << ',' << to_string(it->second) << '\n';
  }
}

LatticeFunction read_lattice_csv(std::istream& in, const TruncatedLattice& lattice) {
  LatticeFunction out;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      if (line == "tuple,value") continue;
    }
    const auto comma = line.rfind(',');
    if (comma == std::string::npos) throw InvalidArgument("malformed moment row '" + line + "'");
    const LatticePoint x = lattice.parse_label(trim(line.substr(0, comma)));
    if (!lattice.contains(x)) throw InvalidArgument("cell " + lattice.label(x) + " lies outside the lattice");
    if (!out.emplace(x, parse_rational(line.substr(comma + 1))).second)
      throw InvalidArgument("duplicate cell " + lattice.label(x));
  }
  require_same_lattice(out, lattice, "moment table");
  return out;
}

}  // namespace coklab
