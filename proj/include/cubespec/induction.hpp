#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cubespec/bits.hpp"
#include "cubespec/connectivity.hpp"
#include "cubespec/coset_sum.hpp"
#include "cubespec/cube_function.hpp"
#include "cubespec/subspace.hpp"

namespace cubespec {

// Budgets shared by the exhaustive and Monte Carlo sweeps below. Exhaustive
// sweeps run only while the raw tuple count fits the budget; past that the
// routine falls back to seeded sampling when mc_samples > 0 and refuses
// otherwise. A sampled sweep can refute a universally quantified claim (a
// found violation is a certificate) but never certify it.
struct SamplingPolicy {
  std::uint64_t exhaustive_budget = 100'000'000;
  std::uint64_t mc_samples = 100'000;  // 0 disables the Monte Carlo fallback
  std::uint64_t connectivity_budget = kDefaultTupleBudget;
  std::uint64_t seed = kDefaultSeed;
};

// A union of cosets kept both as the list defining it and as the
// materialized point set. Cosets are stored with reduced representatives, so
// listing the same coset twice is detected and refused.
class ObstructionSet {
 public:
  explicit ObstructionSet(int n);

  // The union consisting of the single coset {0}.
  static ObstructionSet origin(int n);

  int n() const { return n_; }
  int count() const { return static_cast<int>(cosets_.size()); }
  const std::vector<Coset>& cosets() const { return cosets_; }
  const SubsetOfCube& materialized() const { return materialized_; }
  bool contains(point_t x) const { return materialized_.contains(x); }

  // Appends the coset unless it is already listed; returns whether the list
  // grew.
  bool add(const Coset& c);

 private:
  int n_ = 0;
  std::vector<Coset> cosets_;
  SubsetOfCube materialized_{0};
};

// The full hypothesis package of the obstruction induction: A approximated
// by g within epsilon in sup norm, a reduced-norm budget of
// ((1-2e)/4)m, and an obstruction union X of t cosets certifying the
// clauses listed in PropertyLedgerReport.
struct PropertyLedger {
  SubsetOfCube a{0};
  CubeFunction g{0, Side::Point};
  int k = 1;
  int m = 1;
  int r = 1;
  int t = 1;
  double epsilon = 0.0;
  ObstructionSet x{0};
};

struct PropertyLedgerReport {
  // Conjunction of every individual verdict below. When the tuple sweep ran
  // as a Monte Carlo estimate this is (at best) "no violation found", never a
  // certificate; tuples_exhaustive distinguishes the two.
  bool holds = false;

  // (i) A and its complement are k-affine connected.
  bool set_connected = false;
  bool complement_connected = false;

  // (ii) sup distance and reduced norm against their budgets.
  double sup_distance = 0.0;
  double reduced_norm = 0.0;
  double reduced_norm_cap = 0.0;
  bool norms_ok = false;

  // Bookkeeping: r <= k+1, t matches the coset list, the materialized union
  // is consistent, |A| at most half the cube.
  bool shape_ok = false;
  std::vector<std::string> shape_failures;

  // (iii) every restriction g|_{W_i+c} keeps reduced norm within the budget
  // of the next level down, for every coset subgroup W_i of X and every c.
  double worst_restriction_norm = 0.0;
  double restriction_norm_cap = 0.0;
  bool restriction_norms_ok = false;

  // (iv) every r-tuple from A\X admits a qualifying subset sum: an odd
  // subset of size > 1 landing in A\X, or a nonempty subset landing in X.
  bool tuple_vacuous = false;
  bool tuples_exhaustive = false;
  std::uint64_t tuples_checked = 0;
  bool tuple_clause_ok = false;
  std::vector<point_t> violating_tuple;  // first violation found, if any
};

PropertyLedgerReport verify_property_ledger(const PropertyLedger& ledger,
                                            const SamplingPolicy& policy = {});

// One probed sum length d. Exhaustive entries carry the exact rational
// hits/total; sampled entries carry the estimate and its standard error.
struct CaseProbeEntry {
  int d = 0;
  bool exhaustive = false;
  std::uint64_t hits = 0;
  std::uint64_t total = 0;
  double probability = 0.0;
  double standard_error = 0.0;  // sampled entries only
  bool clears_threshold = false;
};

// Distribution of d-fold sums of points drawn from A\X. Case one asks for an
// odd d in [3, r] whose sums land back in A\X with probability at least
// 2^-(r+1); case two asks for a d in [1, r] whose sums land in X.
struct CaseReport {
  int r = 0;
  bool vacuous = false;  // A\X empty: the probabilities are undefined
  double threshold = 0.0;
  std::vector<CaseProbeEntry> case_one;
  std::vector<CaseProbeEntry> case_two;
  bool case_one_clears = false;
  bool case_two_clears = false;
};

CaseReport case_probe(const SubsetOfCube& a, const ObstructionSet& x, int r,
                      const SamplingPolicy& policy = {});

// Census row for one coset direction: offset a with the exact probability
// count/|W| that a uniform point of W+c0 lands in W_i+a_i+a.
struct CensusEntry {
  point_t offset = 0;
  std::uint64_t count = 0;

  bool operator==(const CensusEntry&) const = default;
};

struct AugmentResult {
  ObstructionSet x_prime{0};
  double gamma = 0.0;
  int t_before = 0;
  int t_after = 0;
  int t_cap = 0;  // t + 2|F_W| + sum of census sizes
  std::vector<std::vector<CensusEntry>> census;
  double restriction_norm_c0 = 0.0;  // reduced norm of g restricted to W+c0
  // delta + 2^{r-1} delta + 2^{r-1} t gamma, evaluated when delta and r are
  // supplied; the augmentation argument needs it strictly below 1.
  bool union_bound_evaluated = false;
  double union_bound_value = 0.0;
  bool union_bound_ok = false;
};

// Grows X to X' = X u (W+F_W) u (W+F_W+c0) u union_i (W_i+E_i), where each
// E_i collects the coset directions of W_i that a uniform point of W+c0 hits
// with probability at least gamma = 2^-2k / t. The census runs over distinct
// cosets (directions are deduplicated when W_i meets its own annihilator),
// which is what makes |E_i| <= 1/gamma sound. Verifies that bound and the
// t' cap; both failing is a bug signal, not a caller error.
AugmentResult augment_obstruction(const SubsetOfCube& a, const CubeFunction& g,
                                  const ObstructionSet& x, const Subspace& w,
                                  const std::vector<point_t>& f_w, point_t c0,
                                  int k, std::optional<double> delta = std::nullopt,
                                  std::optional<int> r = std::nullopt);

struct DecomposeOptions {
  int depth_cap = 5;
  std::uint64_t budget = 100'000'000;
  // K in eps2 = 2^-(k^K); the subgroup-quality constant is inherited from an
  // unspecified universal constant, so it stays configurable.
  int k_exponent = 1;
  SamplingPolicy sampling;
};

// Outcome of the experimental decomposition driver. On success the signed
// sum reproduces the indicator of A pointwise and exactly; otherwise
// failure_reason summarizes why the run stopped. The trace records every
// probe, case choice, and recursion either way.
struct DecomposeResult {
  bool success = false;
  std::optional<SignedCosetSum> decomposition;
  std::string failure_reason;
  nlohmann::json trace;
};

DecomposeResult decompose_experimental(const SubsetOfCube& a, const CubeFunction& g,
                                       double epsilon, int k,
                                       const DecomposeOptions& options = {});

}  // namespace cubespec
