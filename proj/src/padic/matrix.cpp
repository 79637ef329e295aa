#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "coklab/errors.hpp"
#include "coklab/padic.hpp"

namespace coklab {

namespace {

std::uint64_t checked_modulus(std::uint64_t p, int k) {
  require_prime(p);
  if (k < 1) throw InvalidArgument("precision k must be at least 1");
  std::uint64_t q = 1;
  for (int i = 0; i < k; ++i) {
    if (q > (std::numeric_limits<std::uint64_t>::max() >> 1) / p) throw InvalidArgument("p^k must be below 2^63");
    q *= p;
  }
  return q;
}

std::uint64_t reduce(std::int64_t value, std::uint64_t q) {
  const auto m = static_cast<std::int64_t>(q);
  std::int64_t r = value % m;
  if (r < 0) r += m;
  return static_cast<std::uint64_t>(r);
}

}  // namespace

MatModPk::MatModPk(std::uint64_t p, int k, int rows, int cols)
    : p_(p), k_(k), q_(checked_modulus(p, k)), rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw InvalidArgument("matrix dimensions must be non-negative");
  data_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0);
}

MatModPk::MatModPk(std::uint64_t p, int k, int rows, int cols, const std::vector<std::int64_t>& entries)
    : MatModPk(p, k, rows, cols) {
  if (entries.size() != data_.size()) throw InvalidArgument("entry count does not match the matrix shape");
  for (std::size_t i = 0; i < entries.size(); ++i) data_[i] = reduce(entries[i], q_);
}

MatModPk MatModPk::identity(std::uint64_t p, int k, int n) {
  MatModPk out(p, k, n, n);
  for (int i = 0; i < n; ++i) out.data_[out.index(i, i)] = 1 % out.q_;
  return out;
}

std::size_t MatModPk::index(int i, int j) const {
  if (i < 0 || i >= rows_ || j < 0 || j >= cols_) throw InvalidArgument("matrix index out of range");
  return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(j);
}

void MatModPk::set(int i, int j, std::int64_t value) { data_[index(i, j)] = reduce(value, q_); }

MatModPk MatModPk::transpose() const {
  MatModPk out(p_, k_, cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.data_[out.index(j, i)] = at(i, j);
  return out;
}

MatModPk MatModPk::operator*(const MatModPk& other) const {
  if (p_ != other.p_ || k_ != other.k_) throw InvalidArgument("matrices live over different rings");
  if (cols_ != other.rows_) throw InvalidArgument("shape mismatch in product");
  MatModPk out(p_, k_, rows_, other.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < other.cols_; ++j) {
      unsigned __int128 acc = 0;
      for (int l = 0; l < cols_; ++l) acc = (acc + static_cast<unsigned __int128>(at(i, l)) * other.at(l, j)) % q_;
      out.data_[out.index(i, j)] = static_cast<std::uint64_t>(acc);
    }
  return out;
}

MatModPk read_matrix(std::istream& in) {
  std::uint64_t p = 0;
  int k = 0, m = -1, n = -1;
  if (!(in >> p >> k >> m >> n)) throw InvalidArgument("matrix literal needs a header 'p k m n'");
  std::vector<std::int64_t> entries(static_cast<std::size_t>(std::max(m, 0)) * static_cast<std::size_t>(std::max(n, 0)));
  for (auto& e : entries)
    if (!(in >> e)) throw InvalidArgument("matrix literal has fewer entries than its header declares");
  return MatModPk(p, k, m, n, entries);
}

void write_matrix(std::ostream& out, const MatModPk& a) {
  out << a.prime() << ' ' << a.precision() << ' ' << a.rows() << ' ' << a.cols() << '\n';
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) out << (j ? " " : "") << a.at(i, j);
    out << '\n';
  }
}

std::string to_text(const MatModPk& a) {
  std::ostringstream s;
  write_matrix(s, a);
  return s.str();
}

MatModPk shift(const MatModPk& a, std::int64_t t) {
  if (a.rows() != a.cols()) throw InvalidArgument("shift needs a square matrix");
  return shift_leading(a, t);
}

MatModPk shift_leading(const MatModPk& a, std::int64_t t) {
  if (a.rows() > a.cols()) throw InvalidArgument("shift needs rows <= cols");
  MatModPk out = a;
  const std::uint64_t q = a.modulus();
  const std::uint64_t tt = reduce(t, q);
  for (int i = 0; i < a.rows(); ++i) out.row_data(i)[i] = (out.row_data(i)[i] + tt) % q;
  return out;
}

MatModPk add(const MatModPk& a, const MatModPk& b) {
  if (a.prime() != b.prime() || a.precision() != b.precision()) throw InvalidArgument("matrices live over different rings");
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidArgument("shape mismatch in add");
  MatModPk out = a;
  const std::uint64_t q = a.modulus();
  for (int i = 0; i < a.rows(); ++i) {
    std::uint64_t* dst = out.row_data(i);
    const std::uint64_t* src = b.row_data(i);
    for (int j = 0; j < a.cols(); ++j) dst[j] = (dst[j] + src[j]) % q;
  }
  return out;
}

MatModPk scalar_p_shift(const MatModPk& a) { return shift(a, static_cast<std::int64_t>(a.prime())); }

int residual_rank(const MatModPk& a) {
  FpRows rows(static_cast<std::size_t>(a.rows()));
  for (int i = 0; i < a.rows(); ++i) {
    rows[i].resize(static_cast<std::size_t>(a.cols()));
    for (int j = 0; j < a.cols(); ++j) rows[i][j] = static_cast<std::uint32_t>(a.at(i, j) % a.prime());
  }
  return rank_mod_p(std::move(rows), static_cast<std::uint32_t>(a.prime()));
}

MatModPk make_b_sequence(const BSequenceSpec& spec, int n, int u, std::uint64_t p, int k) {
  if (n < 0 || u < 0) throw InvalidArgument("n and u must be non-negative");
  MatModPk b(p, k, n, n + u);
  int diag = 0;
  std::int64_t value = 1;
  switch (spec.kind) {
    case BKind::Identity: diag = n; break;
    case BKind::BlockRank:
      if (spec.block_rank < 0 || spec.block_rank > n) throw InvalidArgument("block rank d(n) must lie in [0, n]");
      diag = spec.block_rank;
      break;
    case BKind::PScalar:
      diag = n;
      value = static_cast<std::int64_t>(p);
      break;
    case BKind::Zero: break;
  }
  for (int i = 0; i < diag; ++i) b.set(i, i, value);
  return b;
}

BSequenceSpec parse_b_spec(const std::string& text) {
  BSequenceSpec spec;
  if (text == "identity") spec.kind = BKind::Identity;
  else if (text == "p-scalar") spec.kind = BKind::PScalar;
  else if (text == "zero") spec.kind = BKind::Zero;
  else if (text.rfind("block-rank:", 0) == 0) {
    spec.kind = BKind::BlockRank;
    try {
      spec.block_rank = std::stoi(text.substr(11));
    } catch (const std::exception&) {
      throw InvalidArgument("malformed block rank in '" + text + "'");
    }
  } else {
    throw InvalidArgument("unknown B sequence '" + text + "' (identity, block-rank:D, p-scalar, zero)");
  }
  return spec;
}

std::string to_string(const BSequenceSpec& spec) {
  switch (spec.kind) {
    case BKind::Identity: return "identity";
    case BKind::BlockRank: return "block-rank:" + std::to_string(spec.block_rank);
    case BKind::PScalar: return "p-scalar";
    case BKind::Zero: return "zero";
  }
  return "?";
}

}  // namespace coklab
