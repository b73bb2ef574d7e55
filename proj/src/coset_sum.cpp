#include "cubespec/coset_sum.hpp"

#include "cubespec/errors.hpp"

namespace cubespec {

void SignedCosetSum::add(int sign, Coset coset) {
  if (sign != 1 && sign != -1) throw UsageError("term sign must be +1 or -1");
  if (coset.n() != n_) throw UsageError("coset dimension mismatch");
  terms_.push_back({sign, std::move(coset)});
}

int SignedCosetSum::evaluate(point_t x) const {
  int total = 0;
  for (const SignedTerm& t : terms_)
    if (t.coset.contains(x)) total += t.sign;
  return total;
}

CubeFunction SignedCosetSum::to_function() const {
  CubeFunction f(n_, Side::Point);
  for (std::uint64_t x = 0; x < f.domain_size(); ++x)
    f.values()[static_cast<Eigen::Index>(x)] = evaluate(static_cast<point_t>(x));
  return f;
}

bool SignedCosetSum::matches_indicator(const SubsetOfCube& a) const {
  if (a.n() != n_) throw UsageError("subset dimension mismatch");
  for (std::uint64_t x = 0; x < cube_size(n_); ++x) {
    const int want = a.contains(static_cast<point_t>(x)) ? 1 : 0;
    if (evaluate(static_cast<point_t>(x)) != want) return false;
  }
  return true;
}

}  // namespace cubespec
