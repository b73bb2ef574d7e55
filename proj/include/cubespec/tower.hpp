#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include <gmpxx.h>

namespace cubespec {

inline constexpr std::size_t kDefaultDigitCap = 1'000'000;

// An iterated exponential tower_s(h): tower_s(0) = 1 and
// tower_s(h) = s^tower_s(h-1). These values leave the range of any fixed
// width integer almost immediately, so a value is carried as (base, height)
// and materialized into an exact integer only while its decimal expansion
// stays under a digit cap. Comparisons and log* remain exact either way,
// because the height alone pins the value.
struct TowerValue {
  int base = 16;
  int height = 0;
  std::optional<mpz_class> digits;  // exact integer when small enough

  bool materialized() const { return digits.has_value(); }

  // Full decimal expansion when materialized, "tower_16(7)" otherwise.
  std::string to_string() const;
};

// Evaluates tower_s(height), materializing the integer when its size in
// decimal digits stays within digit_cap. base >= 2, height >= 0.
TowerValue tower(int base, int height, std::size_t digit_cap = kDefaultDigitCap);

// log*_s(m): the least t >= 0 with tower_s(t) >= m. m >= 1.
int log_star(int base, const mpz_class& m);
int log_star(int base, const TowerValue& v);

// Exact three-way comparison: -1, 0, +1 as x <, ==, > y. Works between any
// two materialized values, and between values of a common base regardless of
// materialization. Mixed-base symbolic comparisons are refused.
int compare(const TowerValue& x, const TowerValue& y);

// The recursive complexity bound attached to the obstruction induction:
//
//   ell(m, r, t) = 1                                        if m = 1, r <= k
//                = tower_16(r + log*_16 max{t, ell(m-1)})   otherwise
//
// where ell(m) abbreviates ell(m, k+1, 1) and ell(0) is anchored at 1 so the
// m = 1, r = k+1 row is well defined. epsilon only constrains the domain;
// the recursion itself does not consume it.
struct TowerBound {
  int k = 1;
  int m = 1;
  int r = 1;
  int t = 1;
  double epsilon = 0.0;
  TowerValue value;
};

TowerBound tower_bound(int k, int m, int r, int t, double epsilon,
                       std::size_t digit_cap = kDefaultDigitCap);

// The one-parameter form ell(m) = ell(m, k+1, 1).
TowerBound tower_bound(int k, int m, double epsilon,
                       std::size_t digit_cap = kDefaultDigitCap);

}  // namespace cubespec
