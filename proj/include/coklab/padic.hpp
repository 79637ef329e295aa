#pragma once

// Matrices over Z/p^k, the random ensembles we sample them from, and Smith
// normal form.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "coklab/fp_linear.hpp"
#include "coklab/partition.hpp"
#include "coklab/pgroup.hpp"
#include "coklab/philox.hpp"

namespace coklab {

class MatModPk {
 public:
  MatModPk() = default;
  /// Zero matrix. Requires p prime, k >= 1 and p^k < 2^63.
  MatModPk(std::uint64_t p, int k, int rows, int cols);
  /// Entries are given row-major and reduced mod p^k.
  MatModPk(std::uint64_t p, int k, int rows, int cols, const std::vector<std::int64_t>& entries);

  static MatModPk identity(std::uint64_t p, int k, int n);

  std::uint64_t prime() const noexcept { return p_; }
  int precision() const noexcept { return k_; }
  std::uint64_t modulus() const noexcept { return q_; }
  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }

  std::uint64_t at(int i, int j) const { return data_[index(i, j)]; }
  void set(int i, int j, std::int64_t value);
  const std::vector<std::uint64_t>& entries() const noexcept { return data_; }
  std::uint64_t* row_data(int i) noexcept { return data_.data() + static_cast<std::size_t>(i) * cols_; }
  const std::uint64_t* row_data(int i) const noexcept { return data_.data() + static_cast<std::size_t>(i) * cols_; }

  MatModPk transpose() const;
  MatModPk operator*(const MatModPk& other) const;

  friend bool operator==(const MatModPk&, const MatModPk&) = default;

 private:
  std::size_t index(int i, int j) const;

  std::uint64_t p_ = 2;
  int k_ = 1;
  std::uint64_t q_ = 2;
  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::uint64_t> data_;
};

/// Plain-text literal: a header line "p k m n", then m*n entries row-major.
MatModPk read_matrix(std::istream& in);
void write_matrix(std::ostream& out, const MatModPk& a);
std::string to_text(const MatModPk& a);

// --- sampling ---

enum class SamplerKind { HaarUniform, CategoricalModP, SparseAlpha };

/// Entry distribution. Only the residue mod p is shaped; the digits above it
/// are always uniform.
class EntrySampler {
 public:
  static EntrySampler haar_uniform();
  /// probs[r] = P(x = r mod p). Each must be at most 1 - epsilon.
  static EntrySampler categorical(std::vector<double> probs, double epsilon = 0.0);
  /// P(x = 0 mod p) = 1 - alpha, the nonzero residues equally likely.
  static EntrySampler sparse(double alpha);
  /// alpha = min(1, delta * log(n) / n), the threshold schedule for n x n matrices.
  static double log_alpha(int n, double delta = 1.0);

  SamplerKind kind() const noexcept { return kind_; }
  const std::vector<double>& probabilities() const noexcept { return probs_; }
  double alpha() const noexcept { return alpha_; }
  double epsilon() const noexcept { return epsilon_; }

  /// Mod-p residue probabilities for this sampler at prime p.
  std::vector<double> residue_probabilities(std::uint64_t p) const;
  /// Throws InvalidArgument if the probability vector does not fit p.
  void validate(std::uint64_t p) const;

  std::string describe() const;

 private:
  SamplerKind kind_ = SamplerKind::HaarUniform;
  std::vector<double> probs_;
  double alpha_ = 1.0;
  double epsilon_ = 0.0;
};

/// Draws entries of Z/p^k from one Philox stream, row-major.
class EntryDrawer {
 public:
  EntryDrawer(const EntrySampler& sampler, std::uint64_t p, int k);

  std::uint64_t draw(PhiloxStream& rng);
  /// Just the residue mod p, without consuming randomness for higher digits.
  std::uint32_t draw_residue(PhiloxStream& rng);

 private:
  // Uniform residues mod m, several per 32-bit word when m is small.
  struct DigitSource {
    std::uint64_t m = 1;
    std::uint64_t block = 1;  // m^digits
    std::uint64_t limit = 0;  // rejection threshold on the raw word
    int digits = 0;
    std::uint64_t pending = 0;
    int left = 0;
    void init(std::uint64_t modulus);
    std::uint64_t next(PhiloxStream& rng);
  };

  bool uniform_;
  std::uint64_t p_;
  DigitSource full_;
  DigitSource high_;
  std::vector<std::uint64_t> thresholds_;  // cumulative, scaled to 2^32
};

MatModPk sample_matrix(const EntrySampler& sampler, int rows, int cols, std::uint64_t p, int k,
                       std::uint64_t seed, std::uint64_t stream);

// --- Smith normal form and cokernels ---

struct SnfResult {
  int precision = 1;
  /// Ascending, each in [0, k]. Length min(rows, cols).
  std::vector<int> exponents;
  bool saturated(std::size_t i) const { return exponents.at(i) == precision; }
  int saturated_count() const;
};

SnfResult smith_normal_form(const MatModPk& a);

/// Type of cok(A) = (Z/p^k)^rows / A (Z/p^k)^cols. Parts equal to k are
/// "at least p^k" and flagged as saturated.
struct CokernelType {
  Partition type;
  int saturated_parts = 0;
  bool saturated() const noexcept { return saturated_parts > 0; }
};

CokernelType cokernel_type(const MatModPk& a);

/// Throws PrecisionError unless k >= e + 1 where p^e is the exponent of H.
bool match_group(const MatModPk& a, const PGroupType& h);

// --- transforms ---

/// A + t I. Requires a square matrix.
MatModPk shift(const MatModPk& a, std::int64_t t);
/// A + t [I | 0] for rectangular A with rows <= cols.
MatModPk shift_leading(const MatModPk& a, std::int64_t t);
MatModPk add(const MatModPk& a, const MatModPk& b);
MatModPk scalar_p_shift(const MatModPk& a);

/// Rank of A mod p over F_p.
int residual_rank(const MatModPk& a);

enum class BKind { Identity, BlockRank, PScalar, Zero };

struct BSequenceSpec {
  BKind kind = BKind::Identity;
  int block_rank = 0;  // used by BlockRank
};

/// Deterministic n x (n+u) matrix: [I|0], [I_d 0; 0 0], p[I|0] or 0.
MatModPk make_b_sequence(const BSequenceSpec& spec, int n, int u, std::uint64_t p, int k);

BSequenceSpec parse_b_spec(const std::string& text);
std::string to_string(const BSequenceSpec& spec);

}  // namespace coklab
