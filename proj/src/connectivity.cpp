#include "cubespec/connectivity.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "cubespec/errors.hpp"

namespace cubespec {

namespace {

// Odd-size subsets of {0..k} with at least three elements, as bitmasks in
// increasing order.
std::vector<std::uint32_t> odd_subsets(int k) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t s = 0; s < (std::uint32_t{1} << (k + 1)); ++s) {
    const int c = std::popcount(s);
    if (c >= 3 && c % 2 == 1) out.push_back(s);
  }
  return out;
}

struct Searcher {
  const SubsetOfCube& a;
  int k;
  std::uint64_t budget;
  std::vector<point_t> members;
  std::vector<std::uint32_t> subsets;
  std::vector<point_t> chosen;   // chosen points b_0..b_depth
  std::vector<point_t> echelon;  // echelon rows spanning the differences
  std::uint64_t visited = 0;
  std::vector<point_t> violation;

  bool escapes(point_t x) const {
    for (point_t row : echelon)
      if ((x >> pivot_bit(row)) & 1u) x ^= row;
    return x != 0;  // difference leaves the current span
  }

  // Depth-first over increasing member indices; returns true when a
  // violating tuple has been found.
  bool extend(std::size_t from) {
    if (chosen.size() == static_cast<std::size_t>(k) + 1) {
      if (++visited > budget)
        throw CapabilityError("tuple budget of " + std::to_string(budget) + " exhausted");
      for (std::uint32_t s : subsets) {
        point_t sum = 0;
        for (int i = 0; i <= k; ++i)
          if ((s >> i) & 1u) sum ^= chosen[i];
        if (a.contains(sum)) return false;
      }
      violation = chosen;
      return true;
    }
    for (std::size_t idx = from; idx < members.size(); ++idx) {
      const point_t x = members[idx];
      if (!chosen.empty()) {
        const point_t diff = x ^ chosen.front();
        if (!escapes(diff)) continue;  // affinely dependent with the prefix
        point_t row = diff;
        for (point_t r : echelon)
          if ((row >> pivot_bit(r)) & 1u) row ^= r;
        echelon.push_back(row);
        chosen.push_back(x);
        if (extend(idx + 1)) return true;
        chosen.pop_back();
        echelon.pop_back();
      } else {
        chosen.push_back(x);
        if (extend(idx + 1)) return true;
        chosen.pop_back();
      }
    }
    return false;
  }
};

}  // namespace

ConnectivityVerdict is_k_affine_connected(const SubsetOfCube& a, int k, std::uint64_t budget) {
  if (k < 1 || k > 6) throw UsageError("k must lie in [1, 6]");

  Searcher s{a, k, budget, a.members(), odd_subsets(k), {}, {}, 0, {}};
  s.chosen.reserve(k + 1);
  s.echelon.reserve(k);

  ConnectivityVerdict verdict;
  const bool violated = s.extend(0);
  verdict.tuples_visited = s.visited;
  if (violated) {
    verdict.connected = false;
    verdict.witness_points = s.violation;
    verdict.witness_steps.push_back(s.violation[0]);
    for (int i = 1; i <= k; ++i)
      verdict.witness_steps.push_back(s.violation[0] ^ s.violation[i]);
  }
  return verdict;
}

DichotomyReport dichotomy_lower_bound_check(const SubsetOfCube& a, int k, std::uint64_t budget) {
  DichotomyReport report;
  report.k = k;
  report.bound = std::sqrt(static_cast<double>(k)) / 2.0;
  report.set_verdict = is_k_affine_connected(a, k, budget);
  report.complement_verdict = is_k_affine_connected(a.complement(), k, budget);
  report.norm = spectral_norm(a.indicator());
  report.vacuous = report.set_verdict.connected && report.complement_verdict.connected;
  if (report.vacuous) return report;

  const bool set_violates = !report.set_verdict.connected;
  const ConnectivityVerdict& v = set_violates ? report.set_verdict : report.complement_verdict;
  const SubsetOfCube side = set_violates ? a : a.complement();

  Subspace span(a.n());
  for (std::size_t i = 1; i < v.witness_points.size(); ++i)
    span.insert(v.witness_points[i] ^ v.witness_points[0]);
  if (span.dim() != k)
    throw VerificationError("witness tuple does not span a k-dimensional coset");
  report.witness_coset = Coset(span, v.witness_points[0]);

  const CubeFunction restriction =
      restrict_to_coset(side.indicator(), span, v.witness_points[0]);
  report.restriction_norm = spectral_norm(restriction);

  const double side_norm = spectral_norm(side.indicator());
  if (report.restriction_norm > side_norm + 1e-9)
    throw VerificationError("coset restriction has larger norm than the full indicator");
  if (report.restriction_norm < report.bound - 1e-9)
    throw VerificationError("restriction norm " + std::to_string(report.restriction_norm) +
                            " undercuts the bound " + std::to_string(report.bound));
  if (report.norm < report.bound - 1e-9)
    throw VerificationError("indicator norm " + std::to_string(report.norm) +
                            " undercuts the dichotomy bound " + std::to_string(report.bound));
  return report;
}

}  // namespace cubespec
