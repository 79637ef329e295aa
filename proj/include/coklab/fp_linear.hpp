#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace coklab {

/// Row vectors over F_p, entries in [0, p).
using FpRows = std::vector<std::vector<std::uint32_t>>;

/// Rank over F_p. Entries are reduced mod p first.
int rank_mod_p(FpRows rows, std::uint32_t p);

/// Calls `visit(basis)` once for every subspace of F_p^dim, passing its basis
/// in reduced row echelon form (empty for the zero subspace).
void for_each_subspace(std::uint32_t p, int dim, const std::function<void(const FpRows&)>& visit);

}  // namespace coklab
