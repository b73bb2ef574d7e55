#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cubespec/cube_function.hpp"
#include "cubespec/subspace.hpp"

namespace cubespec {

// Number of quadruples (a1,a2,a3,a4) in A^4 with a1+a2 = a3+a4, exactly:
// sum over s of r(s)^2 with r the pair-sum counting function. Cross-checked
// against the quartic Fourier moment. Requires n <= 20.
std::uint64_t additive_energy(const SubsetOfCube& a);

struct CosetDensity {
  Coset coset;
  std::uint64_t intersection = 0;
  double density = 0.0;  // intersection / coset size
};

// Coset maximizing the density of A among cosets of size at least
// threshold * |A|; ties prefer larger cosets, then canonical order. Either
// full enumeration (n <= 6) or cosets of codimension <= codim_max when that
// stays within budget. Absent when no coset passes the size floor.
std::optional<CosetDensity> find_dense_coset(const SubsetOfCube& a, int codim_max = -1,
                                             double threshold = -1.0);

struct RegularizeResult {
  Subspace w;
  int iterations = 0;
  double max_coset_variance = 0.0;
};

// Shrinks V to W so that every spectral coset of the annihilator outside it
// carries mass at most delta, which forces Var[f|W+c] <= delta * M on every
// coset. Each shrink removes the heaviest violating coset. Postconditions
// (variance bound, dim(V) - dim(W) <= ceil(M/delta)) are verified directly.
// Requires spectral_norm(f) <= M and delta > 0.
RegularizeResult regularize_subgroup(const CubeFunction& f, const Subspace& v, double delta,
                                     double m_bound);

struct GoodSubgroupResult {
  Subspace w;
  double delta = 0.0;
  int regularize_iterations = 0;
  // Indexed by w.coset_reps() order.
  std::vector<double> densities;
  std::vector<double> restriction_reduced_norms;
  std::vector<point_t> f_w;  // reps of the cosets with density >= 1 - delta
  bool f_w_is_everything = false;
};

// The subgroup procedure behind the norm-decrement step: regularize V
// against g at variance target (1-2eps)^2 delta / 4, then certify the three
// conclusions: every coset of W has A-density <= delta or >= 1-delta; the
// dense family F_W is nonempty and small (log2 bound 5M^2/((1-2eps)^2 delta)
// - log2(eps1)); and if some coset is sparse, every coset restriction of g
// loses at least (1-2eps-2delta)/2 of the reduced norm. Hypotheses are
// checked up front and reported together on failure.
GoodSubgroupResult good_subgroup(const SubsetOfCube& a, const CubeFunction& g, double eps,
                                 double delta, const Subspace& v, point_t a_rep, double eps1,
                                 double eps2, double m_bound);

}  // namespace cubespec
