#pragma once

#include <json.hpp>
#include <cstdint>
#include <string>
#include <vector>

#include "cubespec/bits.hpp"
#include "cubespec/connectivity.hpp"

namespace cubespec {

// Families of test sets for the lower-bound arm of the dichotomy. Every set
// goes through dichotomy_lower_bound_check at the configured k; a violation
// is that check failing one of its certified inequalities.
//
//   all-subsets   every subset of F_2^n for n = 1..exhaustive_n
//   random        seeded uniform subsets of F_2^random_n
//   balls         Hamming balls of radius one in F_2^j, j = 1..ball_k_max
//   cosets        every affine coset in F_2^coset_n
//   coset-rings   unions of two seeded random cosets in F_2^coset_n
//   quadratic     supports of the paired-bit quadratic in dimensions 4, 6, 8
struct SuiteOptions {
  std::vector<std::string> families;  // empty means all of them
  int k = 2;
  int exhaustive_n = 3;   // capped at 4
  int random_n = 6;       // capped at 6
  std::uint64_t random_count = 100;
  int ball_k_max = 8;
  int coset_n = 4;        // capped at 4 for full enumeration
  std::uint64_t seed = kDefaultSeed;
  std::uint64_t budget = kDefaultTupleBudget;
};

struct FamilySummary {
  std::string family;
  std::uint64_t sets = 0;
  std::uint64_t bound_applicable = 0;  // one side failed k-affine connectivity
  std::uint64_t violations = 0;
  // First few violating sets with the failed claim, for reproduction.
  std::vector<nlohmann::json> violating;
};

struct SuiteReport {
  int k = 0;
  std::uint64_t seed = 0;
  std::vector<FamilySummary> families;
  std::uint64_t total_sets = 0;
  std::uint64_t total_violations = 0;
};

nlohmann::json to_json(const SuiteReport& r);

SuiteReport dichotomy_suite(const SuiteOptions& options = {});

}  // namespace cubespec
