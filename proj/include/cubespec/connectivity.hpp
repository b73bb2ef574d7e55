#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cubespec/cube_function.hpp"
#include "cubespec/subspace.hpp"

namespace cubespec {

struct ConnectivityVerdict {
  bool connected = true;
  // When not connected: k+1 affinely independent points of the set such
  // that no odd-size subset of three or more of them sums into the set.
  std::vector<point_t> witness_points;
  // The same configuration as base point + difference vectors.
  std::vector<point_t> witness_steps;
  std::uint64_t tuples_visited = 0;
};

inline constexpr std::uint64_t kDefaultTupleBudget = 1'000'000'000;

// Decides k-affine connectivity by exhaustive search over increasing tuples
// of affinely independent points of A (pruned by an incremental F_2 echelon
// over difference vectors). Connected means every such tuple has an odd
// subset S of size >= 3 with sum in A; the first tuple without one, in
// lexicographic order, becomes the witness. Requires 1 <= k <= 6; a search
// visiting more tuples than the budget stops with a capability error.
ConnectivityVerdict is_k_affine_connected(const SubsetOfCube& a, int k,
                                          std::uint64_t budget = kDefaultTupleBudget);

struct DichotomyReport {
  int k = 0;
  ConnectivityVerdict set_verdict;
  ConnectivityVerdict complement_verdict;
  // True when both sides are connected, so the lower bound claim is not in
  // play for this set.
  bool vacuous = true;
  double norm = 0.0;   // spectral norm of the indicator of A
  double bound = 0.0;  // sqrt(k)/2
  std::optional<Coset> witness_coset;
  double restriction_norm = 0.0;
};

// Checks the lower-bound arm of the dichotomy: if A or its complement fails
// k-affine connectivity, the spectral norm of 1_A is at least sqrt(k)/2.
// The report includes the witness coset spanned by the violating tuple; the
// restriction of the violating side to it reproduces a basis-plus-origin
// configuration, whose norm is the actual source of the bound. Throws
// VerificationError if any of the certified inequalities fails numerically.
DichotomyReport dichotomy_lower_bound_check(const SubsetOfCube& a, int k,
                                            std::uint64_t budget = kDefaultTupleBudget);

}  // namespace cubespec
