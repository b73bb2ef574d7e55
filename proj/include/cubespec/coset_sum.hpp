#pragma once

#include <vector>

#include "cubespec/cube_function.hpp"
#include "cubespec/subspace.hpp"

namespace cubespec {

struct SignedTerm {
  int sign;  // +1 or -1
  Coset coset;

  bool operator==(const SignedTerm&) const = default;
};

// A formal integer combination sum_i sign_i * 1_{coset_i}. Valid set
// decompositions evaluate to {0,1} everywhere; evaluation is exact integer
// arithmetic.
class SignedCosetSum {
 public:
  explicit SignedCosetSum(int n) : n_(n) {}

  int n() const { return n_; }
  const std::vector<SignedTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  void add(int sign, Coset coset);

  int evaluate(point_t x) const;
  CubeFunction to_function() const;
  // True iff evaluate(x) == 1_A(x) for every x, as integers.
  bool matches_indicator(const SubsetOfCube& a) const;

  bool operator==(const SignedCosetSum&) const = default;

 private:
  int n_;
  std::vector<SignedTerm> terms_;
};

}  // namespace cubespec
