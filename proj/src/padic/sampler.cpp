#include <cmath>
#include <limits>
#include <sstream>

#include "coklab/errors.hpp"
#include "coklab/padic.hpp"

namespace coklab {

namespace {

constexpr std::uint64_t kTwo32 = std::uint64_t{1} << 32;

}  // namespace

EntrySampler EntrySampler::haar_uniform() { return EntrySampler(); }

EntrySampler EntrySampler::categorical(std::vector<double> probs, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in [0, 1)");
  EntrySampler s;
  s.kind_ = SamplerKind::CategoricalModP;
  s.probs_ = std::move(probs);
  s.epsilon_ = epsilon;
  double total = 0.0;
  for (double x : s.probs_) {
    if (!(x >= 0.0)) throw InvalidArgument("residue probabilities must be non-negative");
    if (x > 1.0 - epsilon + 1e-12) throw InvalidArgument("a residue probability exceeds 1 - epsilon");
    total += x;
  }
  if (s.probs_.empty() || std::abs(total - 1.0) > 1e-9) throw InvalidArgument("residue probabilities must sum to 1");
  return s;
}

EntrySampler EntrySampler::sparse(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("sparsity alpha must lie in (0, 1]");
  EntrySampler s;
  s.kind_ = SamplerKind::SparseAlpha;
  s.alpha_ = alpha;
  return s;
}

double EntrySampler::log_alpha(int n, double delta) {
  if (n < 2) return 1.0;
  return std::min(1.0, delta * std::log(static_cast<double>(n)) / n);
}

std::vector<double> EntrySampler::residue_probabilities(std::uint64_t p) const {
  validate(p);
  switch (kind_) {
    case SamplerKind::HaarUniform: return std::vector<double>(p, 1.0 / static_cast<double>(p));
    case SamplerKind::CategoricalModP: return probs_;
    case SamplerKind::SparseAlpha: {
      std::vector<double> out(p, alpha_ / static_cast<double>(p - 1));
      out[0] = 1.0 - alpha_;
      return out;
    }
  }
  return {};
}

void EntrySampler::validate(std::uint64_t p) const {
  require_prime(p);
  if (kind_ == SamplerKind::CategoricalModP && probs_.size() != p)
    throw InvalidArgument("categorical sampler needs exactly p residue probabilities");
  if (kind_ != SamplerKind::HaarUniform && p > (1u << 16))
    throw InvalidArgument("shaped residue samplers support p < 2^16");
}

std::string EntrySampler::describe() const {
  std::ostringstream s;
  s.precision(17);
  switch (kind_) {
    case SamplerKind::HaarUniform: return "haar-uniform";
    case SamplerKind::CategoricalModP:
      s << "categorical-mod-p(";
      for (std::size_t i = 0; i < probs_.size(); ++i) s << (i ? "," : "") << probs_[i];
      s << ")";
      return s.str();
    case SamplerKind::SparseAlpha:
      s << "sparse-alpha(" << alpha_ << ")";
      return s.str();
  }
  return "?";
}

void EntryDrawer::DigitSource::init(std::uint64_t modulus) {
  m = modulus;
  left = 0;
  if (m <= 1) {
    digits = 0;
    return;
  }
  if (m <= kTwo32) {
    digits = 0;
    block = 1;
    while (block <= kTwo32 / m) {
      block *= m;
      ++digits;
    }
    limit = (kTwo32 / block) * block;
  } else {
    digits = 1;
    block = m;
    limit = (std::numeric_limits<std::uint64_t>::max() / m) * m;
  }
}

std::uint64_t EntryDrawer::DigitSource::next(PhiloxStream& rng) {
  if (m <= 1) return 0;
  if (m > kTwo32) {
    for (;;) {
      const std::uint64_t w = rng.next64();
      if (w < limit) return w % m;
    }
  }
  if (left == 0) {
    std::uint64_t w;
    do w = rng.next();
    while (w >= limit);
    pending = w % block;
    left = digits;
  }
  const std::uint64_t out = pending % m;
  pending /= m;
  --left;
  return out;
}

EntryDrawer::EntryDrawer(const EntrySampler& sampler, std::uint64_t p, int k)
    : uniform_(sampler.kind() == SamplerKind::HaarUniform), p_(p) {
  const MatModPk probe(p, k, 0, 0);  // validates p and k
  std::uint64_t high = 1;
  for (int i = 1; i < k; ++i) high *= p;
  full_.init(probe.modulus());
  high_.init(high);
  if (p <= (1u << 16)) {
    const auto probs = sampler.residue_probabilities(p);
    double cumulative = 0.0;
    for (std::size_t r = 0; r < probs.size(); ++r) {
      cumulative += probs[r];
      const double scaled = std::min(1.0, cumulative) * static_cast<double>(kTwo32);
      thresholds_.push_back(r + 1 == probs.size() ? kTwo32 : static_cast<std::uint64_t>(std::llround(scaled)));
    }
  } else {
    sampler.validate(p);
  }
}

std::uint32_t EntryDrawer::draw_residue(PhiloxStream& rng) {
  if (thresholds_.empty()) return static_cast<std::uint32_t>(full_.next(rng) % p_);
  const std::uint64_t w = rng.next();
  std::uint32_t r = 0;
  while (w >= thresholds_[r]) ++r;
  return r;
}

std::uint64_t EntryDrawer::draw(PhiloxStream& rng) {
  if (uniform_) return full_.next(rng);
  const std::uint64_t r = draw_residue(rng);
  return r + p_ * high_.next(rng);
}

MatModPk sample_matrix(const EntrySampler& sampler, int rows, int cols, std::uint64_t p, int k, std::uint64_t seed,
                       std::uint64_t stream) {
  MatModPk out(p, k, rows, cols);
  EntryDrawer drawer(sampler, p, k);
  PhiloxStream rng(seed, stream);
  for (int i = 0; i < rows; ++i) {
    std::uint64_t* row = out.row_data(i);
    for (int j = 0; j < cols; ++j) row[j] = drawer.draw(rng);
  }
  return out;
}

}  // namespace coklab
