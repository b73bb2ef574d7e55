#pragma once

#include <optional>
#include <span>
#include <vector>

#include "cubespec/coset_sum.hpp"
#include "cubespec/cube_function.hpp"
#include "cubespec/subspace.hpp"

namespace cubespec {

// Decides whether A lies in the ring of sets generated by the given cosets
// (the smallest family containing them and G that is closed under
// complement, union, and intersection), and if so returns a signed sum of
// coset indicators equal to 1_A pointwise, built atom by atom via
// inclusion-exclusion. At most 3^|gens| terms. Requires |gens| <= 16.
std::optional<SignedCosetSum> ring_membership_decompose(const SubsetOfCube& a,
                                                        std::span<const Coset> gens);

enum class ComplexityKind { Exact, UpperBound, Unknown };

struct ComplexityResult {
  ComplexityKind kind = ComplexityKind::Unknown;
  int ell = -1;  // valid unless kind == Unknown
  std::vector<Coset> generators;
  std::optional<SignedCosetSum> decomposition;
};

// Least number of coset generators whose ring contains A. Exact search when
// n <= 4 and ell_max <= 3 (every generator tuple is tried, smallest first);
// for n <= 6 beyond those caps a greedy heuristic produces an upper bound;
// n > 6 is out of range.
ComplexityResult coset_complexity(const SubsetOfCube& a, int ell_max);

// A coset P with P inside A and |P| * 2^|gens| >= |A|. Requires A nonempty
// and inside the ring generated by gens. The bound is verified before
// returning.
Coset find_large_coset_inside(const SubsetOfCube& a, std::span<const Coset> gens);

// All cosets of F_2^n in canonical order (enumeration cap n <= 6).
std::vector<Coset> enumerate_cosets(int n);

// Largest coset contained in A by brute force over all cosets (n <= 6);
// ties broken by canonical order. Empty result when A is empty.
std::optional<Coset> largest_coset_inside(const SubsetOfCube& a);

}  // namespace cubespec
