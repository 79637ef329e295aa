#include "coklab/fp_linear.hpp"

#include <utility>

namespace coklab {

namespace {

std::uint32_t inverse_mod_p(std::uint32_t a, std::uint32_t p) {
  // Fermat; p is small.
  std::uint64_t result = 1, base = a % p;
  for (std::uint32_t e = p - 2; e != 0; e >>= 1) {
    if (e & 1u) result = result * base % p;
    base = base * base % p;
  }
  return static_cast<std::uint32_t>(result);
}

}  // namespace

int rank_mod_p(FpRows rows, std::uint32_t p) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  for (auto& row : rows)
    for (auto& x : row) x %= p;
  int rank = 0;
  for (std::size_t c = 0; c < cols && rank < static_cast<int>(rows.size()); ++c) {
    std::size_t pivot = static_cast<std::size_t>(rank);
    while (pivot < rows.size() && rows[pivot][c] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[pivot], rows[static_cast<std::size_t>(rank)]);
    auto& prow = rows[static_cast<std::size_t>(rank)];
    const std::uint64_t inv = inverse_mod_p(prow[c], p);
    for (std::size_t r = static_cast<std::size_t>(rank) + 1; r < rows.size(); ++r) {
      if (rows[r][c] == 0) continue;
      const std::uint64_t f = rows[r][c] * inv % p;
      for (std::size_t j = c; j < cols; ++j)
        rows[r][j] = static_cast<std::uint32_t>((rows[r][j] + (p - f) * prow[j]) % p);
    }
    ++rank;
  }
  return rank;
}

namespace {

// Enumerates RREF matrices whose pivot columns are `pivots`.
void fill_free_entries(std::uint32_t p, int dim, const std::vector<int>& pivots, FpRows& basis,
                       std::size_t cell, const std::vector<std::pair<int, int>>& free_cells,
                       const std::function<void(const FpRows&)>& visit) {
  if (cell == free_cells.size()) {
    visit(basis);
    return;
  }
  const auto [row, col] = free_cells[cell];
  for (std::uint32_t v = 0; v < p; ++v) {
    basis[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] = v;
    fill_free_entries(p, dim, pivots, basis, cell + 1, free_cells, visit);
  }
  basis[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] = 0;
}

void choose_pivots(std::uint32_t p, int dim, int next, int remaining, std::vector<int>& pivots,
                   const std::function<void(const FpRows&)>& visit) {
  if (remaining == 0) {
    FpRows basis(pivots.size(), std::vector<std::uint32_t>(static_cast<std::size_t>(dim), 0));
    std::vector<std::pair<int, int>> free_cells;
    for (std::size_t r = 0; r < pivots.size(); ++r) {
      basis[r][static_cast<std::size_t>(pivots[r])] = 1;
      for (int c = pivots[r] + 1; c < dim; ++c) {
        bool is_pivot = false;
        for (int q : pivots) is_pivot = is_pivot || q == c;
        if (!is_pivot) free_cells.emplace_back(static_cast<int>(r), c);
      }
    }
    fill_free_entries(p, dim, pivots, basis, 0, free_cells, visit);
    return;
  }
  for (int c = next; c <= dim - remaining; ++c) {
    pivots.push_back(c);
    choose_pivots(p, dim, c + 1, remaining - 1, pivots, visit);
    pivots.pop_back();
  }
}

}  // namespace

void for_each_subspace(std::uint32_t p, int dim, const std::function<void(const FpRows&)>& visit) {
  std::vector<int> pivots;
  for (int d = 0; d <= dim; ++d) choose_pivots(p, dim, 0, d, pivots, visit);
}

}  // namespace coklab
