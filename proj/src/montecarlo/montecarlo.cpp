#include "coklab/montecarlo.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <set>

#include "coklab/errors.hpp"
#include "coklab/parallel.hpp"

namespace coklab {

namespace {

constexpr int kStreamShift = 40;

std::int64_t mod_p(std::int64_t t, std::uint64_t p) {
  const auto m = static_cast<std::int64_t>(p);
  return ((t % m) + m) % m;
}

bool is_pshift_pair(const ExperimentPlan& plan) {
  return plan.transforms.size() == 2 && plan.transforms[0].kind == Transform::Kind::Shift && plan.transforms[0].t == 0 &&
         plan.transforms[1].kind == Transform::Kind::PShift;
}

std::size_t slots(int workers) { return static_cast<std::size_t>(std::max(1, workers)); }

}  // namespace

// --- transforms ---

Transform Transform::shift(std::int64_t t) {
  Transform out;
  out.t = t;
  return out;
}

Transform Transform::add_b(BSequenceSpec b) {
  Transform out;
  out.kind = Kind::AddB;
  out.b = b;
  return out;
}

Transform Transform::p_shift() {
  Transform out;
  out.kind = Kind::PShift;
  return out;
}

Transform Transform::parse(const std::string& text) {
  if (text == "identity") return shift(0);
  if (text == "pshift") return p_shift();
  if (text.rfind("shift:", 0) == 0) {
    try {
      std::size_t used = 0;
      const std::int64_t t = std::stoll(text.substr(6), &used);
      if (used + 6 == text.size()) return shift(t);
    } catch (const std::exception&) {
    }
    throw InvalidArgument("malformed shift transform '" + text + "'");
  }
  if (text.rfind("add:", 0) == 0) return add_b(parse_b_spec(text.substr(4)));
  throw InvalidArgument("unknown transform '" + text + "' (identity, shift:T, add:B, pshift)");
}

std::string Transform::label() const {
  switch (kind) {
    case Kind::Shift: return t == 0 ? "identity" : "shift:" + std::to_string(t);
    case Kind::AddB: return "add:" + to_string(b);
    case Kind::PShift: return "pshift";
  }
  return "?";
}

MatModPk Transform::apply(const MatModPk& a, int n, int u) const {
  switch (kind) {
    case Kind::Shift: return t == 0 ? a : shift_leading(a, t);
    case Kind::AddB: return add(a, make_b_sequence(b, n, u, a.prime(), a.precision()));
    case Kind::PShift: return shift_leading(a, static_cast<std::int64_t>(a.prime()));
  }
  return a;
}

// --- plan ---

void ExperimentPlan::validate() const {
  require_prime(p);
  (void)MatModPk(p, k, 0, 0);
  sampler.validate(p);
  if (u < 0) throw InvalidArgument("u must be non-negative");
  if (trials >= (std::uint64_t{1} << kStreamShift)) throw InvalidArgument("trials must be below 2^40");
  for (int n : n_schedule)
    if (n < 1 || n >= (1 << 23)) throw InvalidArgument("matrix sizes must lie in [1, 2^23)");
  if (transforms.empty()) throw InvalidArgument("a plan needs at least one transform");
  std::set<std::int64_t> residues;
  int shifts = 0;
  for (const auto& t : transforms) {
    if (t.kind == Transform::Kind::Shift) {
      ++shifts;
      residues.insert(mod_p(t.t, p));
    }
    if (t.kind == Transform::Kind::AddB && t.b.kind == BKind::BlockRank)
      for (int n : n_schedule)
        if (t.b.block_rank > n) throw InvalidArgument("block rank exceeds n=" + std::to_string(n));
  }
  if (static_cast<int>(residues.size()) != shifts)
    throw InvalidArgument("shift constants must be pairwise distinct mod p");
  for (const auto& tuple : targets) {
    if (tuple.size() != transforms.size())
      throw InvalidArgument("each target tuple needs one group per transform");
    for (const auto& h : tuple) {
      if (h.p != p) throw InvalidArgument("target " + h.to_string() + " uses a different prime");
      if (k < h.exponent() + 1)
        throw PrecisionError("precision k=" + std::to_string(k) + " cannot certify target " + h.to_string() +
                             "; need k >= " + std::to_string(h.exponent() + 1));
    }
  }
}

std::uint64_t trial_stream(int n, std::uint64_t trial) {
  return (static_cast<std::uint64_t>(n) << kStreamShift) | trial;
}

// --- outcomes ---

std::string outcome_label(const Outcome& o) { return o ? o->to_string() : "overflow"; }

std::string tuple_label(const OutcomeTuple& t) {
  std::string s;
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? ";" : "") + outcome_label(t[i]);
  return s;
}

OutcomeTuple parse_tuple_label(const std::string& text) {
  OutcomeTuple out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = std::min(text.find(';', start), text.size());
    const std::string part = text.substr(start, end - start);
    if (part == "overflow") out.emplace_back(std::nullopt);
    else out.emplace_back(Partition::parse(part));
    start = end + 1;
  }
  return out;
}

OutcomeTuple to_outcome(const std::vector<PGroupType>& groups) {
  OutcomeTuple out;
  for (const auto& g : groups) out.emplace_back(g.type);
  return out;
}

std::uint64_t EmpiricalTable::count(const OutcomeTuple& key) const {
  const auto it = counts.find(key);
  return it == counts.end() ? 0 : it->second;
}

double EmpiricalTable::frequency(const OutcomeTuple& key) const {
  return trials == 0 ? 0.0 : static_cast<double>(count(key)) / static_cast<double>(trials);
}

double EmpiricalTable::standard_error(const OutcomeTuple& key) const {
  if (trials == 0) return 0.0;
  const double f = frequency(key);
  return std::sqrt(f * (1.0 - f) / static_cast<double>(trials));
}

EmpiricalTable EmpiricalTable::marginal(std::size_t keep) const {
  EmpiricalTable out;
  out.n = n;
  out.trials = trials;
  for (const auto& [key, c] : counts) out.counts[{key.at(keep)}] += c;
  return out;
}

// --- joint experiment ---

JointEmpirical run_joint_cokernel(const ExperimentPlan& plan, int workers) {
  plan.validate();
  JointEmpirical out;
  for (int n : plan.n_schedule) {
    std::vector<std::map<OutcomeTuple, std::uint64_t>> partial(slots(workers));
    parallel_chunks(plan.trials, workers, [&](int w, std::uint64_t begin, std::uint64_t end) {
      auto& local = partial[static_cast<std::size_t>(w)];
      OutcomeTuple key(plan.transforms.size());
      for (std::uint64_t trial = begin; trial < end; ++trial) {
        const MatModPk a =
            sample_matrix(plan.sampler, n, n + plan.u, plan.p, plan.k, plan.seed, trial_stream(n, trial));
        for (std::size_t j = 0; j < plan.transforms.size(); ++j) {
          const CokernelType c = cokernel_type(plan.transforms[j].apply(a, n, plan.u));
          key[j] = c.saturated() ? Outcome() : Outcome(c.type);
        }
        ++local[key];
      }
    });
    EmpiricalTable table;
    table.n = n;
    table.trials = plan.trials;
    for (const auto& local : partial)
      for (const auto& [key, c] : local) table.counts[key] += c;
    out.per_n.push_back(std::move(table));
  }
  return out;
}

std::vector<MomentEstimate> estimate_mixed_moment(const ExperimentPlan& plan, const std::vector<PGroupType>& h,
                                                  int workers) {
  plan.validate();
  if (h.size() != plan.transforms.size()) throw InvalidArgument("moment target needs one group per transform");
  for (const auto& g : h) {
    if (g.p != plan.p) throw InvalidArgument("moment target " + g.to_string() + " uses a different prime");
    if (plan.k < g.exponent())
      throw PrecisionError("precision k=" + std::to_string(plan.k) + " is below the exponent of " + g.to_string());
  }
  std::vector<MomentEstimate> out;
  for (int n : plan.n_schedule) {
    struct Acc {
      BigInt sum = 0;
      BigInt sum_sq = 0;
    };
    std::vector<Acc> partial(slots(workers));
    parallel_chunks(plan.trials, workers, [&](int w, std::uint64_t begin, std::uint64_t end) {
      Acc& acc = partial[static_cast<std::size_t>(w)];
      std::vector<std::map<Partition, BigInt>> cache(h.size());
      for (std::uint64_t trial = begin; trial < end; ++trial) {
        const MatModPk a =
            sample_matrix(plan.sampler, n, n + plan.u, plan.p, plan.k, plan.seed, trial_stream(n, trial));
        BigInt product = 1;
        for (std::size_t j = 0; j < h.size() && product != 0; ++j) {
          // Parts capped at k give cok tensor Z/p^k, which fixes #Sur onto H_j since k >= exponent(H_j).
          const Partition type = cokernel_type(plan.transforms[j].apply(a, n, plan.u)).type;
          auto it = cache[j].find(type);
          if (it == cache[j].end()) it = cache[j].emplace(type, sur_count(PGroupType(plan.p, type), h[j])).first;
          product *= it->second;
        }
        acc.sum += product;
        acc.sum_sq += product * product;
      }
    });
    BigInt sum = 0, sum_sq = 0;
    for (const auto& acc : partial) {
      sum += acc.sum;
      sum_sq += acc.sum_sq;
    }
    MomentEstimate e;
    e.n = n;
    e.trials = plan.trials;
    if (plan.trials > 0) {
      const BigInt trials(plan.trials);
      e.mean = Rational(sum, trials);
      e.estimate = to_double(e.mean);
      if (plan.trials > 1) {
        const Rational var = (Rational(sum_sq) - Rational(sum * sum, trials)) / Rational(trials - 1);
        e.standard_error = std::sqrt(std::max(0.0, to_double(var)) / static_cast<double>(plan.trials));
      }
    }
    out.push_back(e);
  }
  return out;
}

// --- theory ---

TheoryMap theory_for_plan(const ExperimentPlan& plan) {
  TheoryMap out;
  const bool pshift = is_pshift_pair(plan);
  if (!pshift)
    for (const auto& t : plan.transforms)
      if (t.kind == Transform::Kind::PShift)
        throw InvalidArgument("pshift has a closed form only as the pair {identity, pshift}");
  if (pshift && plan.u != 0) throw InvalidArgument("the p-shift law is available for square matrices only (u = 0)");
  for (const auto& tuple : plan.targets) {
    double value = 1.0;
    if (pshift) {
      value = density_joint_pshift(tuple[0], tuple[1]).value();
    } else {
      for (const auto& h : tuple) value *= density_cokernel(h, plan.u).value();
    }
    out[to_outcome(tuple)] = value;
  }
  return out;
}

Rational theory_mixed_moment(const ExperimentPlan& plan, const std::vector<PGroupType>& h) {
  if (is_pshift_pair(plan)) {
    if (plan.u != 0) throw InvalidArgument("the p-shift moment is available for square matrices only (u = 0)");
    return Rational(subspace_full_projection_count(plan.p, h.at(0).rank(), h.at(1).rank()));
  }
  Rational out = 1;
  for (const auto& g : h) out /= Rational(ipow(g.p, static_cast<unsigned>(g.log_order() * plan.u)));
  return out;
}

// --- comparison ---

double z_score(double frequency, double theory, std::uint64_t trials) {
  if (trials == 0) return 0.0;
  const double diff = frequency - theory;
  if (diff == 0.0) return 0.0;
  const auto n = static_cast<double>(trials);
  double se = std::sqrt(frequency * (1.0 - frequency) / n);
  if (se == 0.0) se = std::sqrt(theory * (1.0 - theory) / n);
  if (se == 0.0) return diff > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
  return diff / se;
}

ComparisonReport compare_with_theory(const EmpiricalTable& empirical, const TheoryMap& theory, double z_threshold) {
  ComparisonReport report;
  report.n = empirical.n;
  report.trials = empirical.trials;
  report.z_threshold = z_threshold;
  for (const auto& [key, value] : theory) {
    CellComparison cell;
    cell.key = key;
    cell.count = empirical.count(key);
    cell.frequency = empirical.frequency(key);
    cell.standard_error = empirical.standard_error(key);
    cell.theory = value;
    cell.z = z_score(cell.frequency, value, empirical.trials);
    report.max_abs_z = std::max(report.max_abs_z, std::abs(cell.z));
    report.cells.push_back(std::move(cell));
  }
  if (empirical.trials > 0) {
    const auto n = static_cast<double>(empirical.trials);
    for (const auto& [key, c] : empirical.counts) {
      bool overflow = false;
      for (const auto& o : key) overflow = overflow || !o;
      if (overflow) report.overflow_mass += static_cast<double>(c) / n;
      if (!theory.contains(key)) report.unclassified_mass += static_cast<double>(c) / n;
    }
  }
  report.pass = report.max_abs_z <= z_threshold;
  return report;
}

// --- sparse probe ---

std::vector<ProbeResult> sparse_failure_probe(const std::vector<int>& n_schedule, int u, std::uint64_t trials,
                                              std::uint64_t seed, std::uint64_t p, double delta, int workers) {
  require_prime(p);
  if (u < 0) throw InvalidArgument("u must be non-negative");
  std::vector<ProbeResult> out;
  for (int n : n_schedule) {
    if (n < 1) throw InvalidArgument("matrix sizes must be positive");
    ProbeResult r;
    r.n = n;
    r.trials = trials;
    r.alpha = EntrySampler::log_alpha(n, delta);
    const EntrySampler sampler = EntrySampler::sparse(r.alpha);
    const int width = n + u;
    std::vector<std::uint64_t> hits(slots(workers), 0);
    parallel_chunks(trials, workers, [&](int w, std::uint64_t begin, std::uint64_t end) {
      EntryDrawer drawer(sampler, p, 1);
      for (std::uint64_t trial = begin; trial < end; ++trial) {
        PhiloxStream rng(seed, trial_stream(n, trial));
        bool zero_row = false;
        for (int i = 0; i < n && !zero_row; ++i) {
          int j = 0;
          while (j < width && drawer.draw_residue(rng) == 0) ++j;
          zero_row = j == width;
        }
        hits[static_cast<std::size_t>(w)] += zero_row;
      }
    });
    for (auto h : hits) r.hits += h;
    if (trials > 0) {
      r.frequency = static_cast<double>(r.hits) / static_cast<double>(trials);
      r.standard_error = std::sqrt(r.frequency * (1.0 - r.frequency) / static_cast<double>(trials));
    }
    const double row_zero = std::pow(1.0 - r.alpha, width);
    r.finite_n_theory = 1.0 - std::pow(1.0 - row_zero, n);
    out.push_back(r);
  }
  return out;
}

// --- output ---

void write_joint_csv(std::ostream& out, const JointEmpirical& empirical, const TheoryMap* theory) {
  out << "n,tuple,count,freq,stderr,theory,z\n";
  for (const auto& table : empirical.per_n) {
    std::set<OutcomeTuple> keys;
    for (const auto& [key, c] : table.counts) keys.insert(key);
    if (theory)
      for (const auto& [key, v] : *theory) keys.insert(key);
    for (const auto& key : keys) {
      out << table.n << ',' << tuple_label(key) << ',' << table.count(key) << ',' << format_real(table.frequency(key))
          << ',' << format_real(table.standard_error(key)) << ',';
      const auto it = theory ? theory->find(key) : TheoryMap::const_iterator();
      if (theory && it != theory->end())
        out << format_real(it->second) << ',' << format_real(z_score(table.frequency(key), it->second, table.trials));
      else
        out << ',';
      out << '\n';
    }
  }
}

}  // namespace coklab
