#pragma once

// Seeded Monte Carlo over random p-adic matrices. Every trial draws one A_n
// and applies all transforms to it, so the coordinates of a joint outcome are
// paired draws. Counts are merged exactly, which keeps results identical for
// any worker count.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "coklab/exact.hpp"
#include "coklab/padic.hpp"
#include "coklab/pgroup.hpp"

namespace coklab {

struct Transform {
  enum class Kind { Shift, AddB, PShift };
  Kind kind = Kind::Shift;
  std::int64_t t = 0;  // Shift
  BSequenceSpec b;     // AddB

  static Transform shift(std::int64_t t);
  static Transform add_b(BSequenceSpec b);
  static Transform p_shift();
  /// "shift:T", "identity" (= shift:0), "add:B-SPEC", "pshift".
  static Transform parse(const std::string& text);
  std::string label() const;

  MatModPk apply(const MatModPk& a, int n, int u) const;
};

struct ExperimentPlan {
  std::uint64_t p = 2;
  int k = 3;
  int u = 0;
  std::vector<int> n_schedule;
  std::uint64_t trials = 0;
  EntrySampler sampler;
  std::vector<Transform> transforms;
  /// Each tuple has one group per transform.
  std::vector<std::vector<PGroupType>> targets;
  std::uint64_t seed = 0;

  /// Throws InvalidArgument or PrecisionError naming the offending field.
  void validate() const;
};

/// One coordinate of an outcome: the cokernel type, or nullopt when a part
/// reached p^k and the type is not determined at this precision.
using Outcome = std::optional<Partition>;
using OutcomeTuple = std::vector<Outcome>;

std::string outcome_label(const Outcome& o);
std::string tuple_label(const OutcomeTuple& t);
/// Parses labels written by tuple_label.
OutcomeTuple parse_tuple_label(const std::string& text);
OutcomeTuple to_outcome(const std::vector<PGroupType>& groups);

struct EmpiricalTable {
  int n = 0;
  std::uint64_t trials = 0;
  std::map<OutcomeTuple, std::uint64_t> counts;

  std::uint64_t count(const OutcomeTuple& key) const;
  double frequency(const OutcomeTuple& key) const;
  /// sqrt(f(1-f)/trials).
  double standard_error(const OutcomeTuple& key) const;
  /// Sums over all coordinates except `keep`.
  EmpiricalTable marginal(std::size_t keep) const;
};

struct JointEmpirical {
  std::vector<EmpiricalTable> per_n;
};

JointEmpirical run_joint_cokernel(const ExperimentPlan& plan, int workers = 1);

struct MomentEstimate {
  int n = 0;
  std::uint64_t trials = 0;
  Rational mean = 0;  // exact sample mean
  double estimate = 0.0;
  double standard_error = 0.0;
};

/// Sample mean of prod_j #Sur(cok(T_j A), H_j), one entry per n in the schedule.
std::vector<MomentEstimate> estimate_mixed_moment(const ExperimentPlan& plan, const std::vector<PGroupType>& h,
                                                  int workers = 1);

using TheoryMap = std::map<OutcomeTuple, double>;

/// Limiting joint density of every target tuple. Shift and add-B transforms use
/// the independent product of cokernel laws; {identity, pshift} uses the
/// dependent p-shift law.
TheoryMap theory_for_plan(const ExperimentPlan& plan);
/// Limiting mixed moment for the plan's transforms: |H_1 ... H_r|^{-u} for
/// independent coordinates, N(r_p(H_1), r_p(H_2)) for the p-shift pair.
Rational theory_mixed_moment(const ExperimentPlan& plan, const std::vector<PGroupType>& h);

struct CellComparison {
  OutcomeTuple key;
  std::uint64_t count = 0;
  double frequency = 0.0;
  double standard_error = 0.0;
  double theory = 0.0;
  double z = 0.0;
};

struct ComparisonReport {
  int n = 0;
  std::uint64_t trials = 0;
  std::vector<CellComparison> cells;
  double max_abs_z = 0.0;
  double z_threshold = 3.0;
  bool pass = true;
  /// Mass in cells that carry an overflow coordinate.
  double overflow_mass = 0.0;
  /// Mass in cells without a theory value.
  double unclassified_mass = 0.0;
};

/// z = (f - theory) / sqrt(f(1-f)/N). When the empirical error vanishes the
/// theoretical sqrt(t(1-t)/N) is used instead.
double z_score(double frequency, double theory, std::uint64_t trials);

ComparisonReport compare_with_theory(const EmpiricalTable& empirical, const TheoryMap& theory, double z_threshold = 3.0);

struct ProbeResult {
  int n = 0;
  std::uint64_t trials = 0;
  std::uint64_t hits = 0;
  double alpha = 0.0;
  double frequency = 0.0;
  double standard_error = 0.0;
  /// 1 - (1 - (1 - alpha)^{n+u})^n.
  double finite_n_theory = 0.0;
};

/// Frequency with which an n x (n+u) sparse matrix with alpha = delta log(n)/n
/// has a row that vanishes mod p. Only the mod-p layer is drawn, and a row
/// stops at its first nonzero residue.
std::vector<ProbeResult> sparse_failure_probe(const std::vector<int>& n_schedule, int u, std::uint64_t trials,
                                              std::uint64_t seed, std::uint64_t p = 2, double delta = 1.0,
                                              int workers = 1);

/// Counter stream of trial `trial` at size n.
std::uint64_t trial_stream(int n, std::uint64_t trial);

/// CSV with header n,tuple,count,freq,stderr,theory,z. Theory columns are
/// empty for cells without a prediction.
void write_joint_csv(std::ostream& out, const JointEmpirical& empirical, const TheoryMap* theory);

}  // namespace coklab
