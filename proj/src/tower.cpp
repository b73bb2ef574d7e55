#include "cubespec/tower.hpp"

#include <cmath>

#include "cubespec/errors.hpp"

namespace cubespec {

namespace {

// Number of decimal digits a^e would occupy, conservatively rounded up.
double predicted_digits(int base, const mpz_class& exponent) {
  return exponent.get_d() * std::log10(static_cast<double>(base)) + 1.0;
}

// s^e as an exact integer if it fits the digit budget, nullopt otherwise.
std::optional<mpz_class> pow_checked(int base, const mpz_class& exponent,
                                     double digit_cap) {
  if (!exponent.fits_ulong_p()) return std::nullopt;
  if (predicted_digits(base, exponent) > digit_cap) return std::nullopt;
  mpz_class out;
  mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(base),
                exponent.get_ui());
  return out;
}

}  // namespace

std::string TowerValue::to_string() const {
  if (digits) return digits->get_str();
  return "tower_" + std::to_string(base) + "(" + std::to_string(height) + ")";
}

TowerValue tower(int base, int height, std::size_t digit_cap) {
  if (base < 2) throw UsageError("tower: base must be at least 2");
  if (height < 0) throw UsageError("tower: height must be nonnegative");
  TowerValue v{base, height, mpz_class(1)};
  for (int level = 1; level <= height; ++level) {
    auto next = pow_checked(base, *v.digits, static_cast<double>(digit_cap));
    if (!next) {
      // Towers only grow, so once one level refuses to materialize the
      // final value cannot fit either.
      v.digits.reset();
      return v;
    }
    v.digits = std::move(*next);
  }
  return v;
}

int log_star(int base, const mpz_class& m) {
  if (base < 2) throw UsageError("log_star: base must be at least 2");
  if (m < 1) throw UsageError("log_star: argument must be at least 1");
  mpz_class tw = 1;
  int level = 0;
  while (tw < m) {
    // Once the next tower level is guaranteed to have more digits than m it
    // exceeds m, so the search ends one step up.
    double enough = static_cast<double>(mpz_sizeinbase(m.get_mpz_t(), 10)) + 2.0;
    auto next = pow_checked(base, tw, enough);
    ++level;
    if (!next) return level;
    tw = std::move(*next);
  }
  return level;
}

int log_star(int base, const TowerValue& v) {
  if (v.materialized()) return log_star(base, *v.digits);
  if (v.base != base) {
    throw UsageError("log_star: symbolic value has a different base");
  }
  // tower_s is strictly increasing, so the height is exactly the answer.
  return v.height;
}

int compare(const TowerValue& x, const TowerValue& y) {
  if (x.materialized() && y.materialized()) {
    return cmp(*x.digits, *y.digits) < 0 ? -1 : (*x.digits == *y.digits ? 0 : 1);
  }
  if (x.base != y.base) {
    throw UsageError("compare: symbolic tower values must share a base");
  }
  if (!x.materialized() && !y.materialized()) {
    return x.height < y.height ? -1 : (x.height == y.height ? 0 : 1);
  }
  if (x.materialized()) return -compare(y, x);
  // x is symbolic tower_s(h), y is an exact integer. Locate y between
  // consecutive tower levels; only a tie at the exact level needs digits.
  int j = log_star(x.base, *y.digits);  // tower(j) >= y > tower(j-1)
  if (x.height > j) return 1;
  if (x.height < j) return -1;
  double enough = static_cast<double>(mpz_sizeinbase(y.digits->get_mpz_t(), 10)) + 2.0;
  TowerValue exact{x.base, x.height, mpz_class(1)};
  for (int level = 1; level <= x.height; ++level) {
    auto next = pow_checked(x.base, *exact.digits, enough);
    if (!next) return 1;  // tower(height) outgrew y's digit count
    exact.digits = std::move(*next);
  }
  return cmp(*exact.digits, *y.digits) < 0 ? -1 : (*exact.digits == *y.digits ? 0 : 1);
}

namespace {

// ell(m, r, t) per the recursion in the header. m = 0 is the internal anchor
// that makes the m = 1, r = k+1 row well defined.
TowerValue ell(int k, int m, int r, int t, std::size_t digit_cap) {
  if (m <= 0) return tower(16, 0, digit_cap);
  if (m == 1 && r <= k) return tower(16, 0, digit_cap);
  TowerValue prev = ell(k, m - 1, k + 1, 1, digit_cap);
  // log*_16 of max{t, ell(m-1)} without materializing anything large: a
  // non-materialized tower already dwarfs any machine integer t.
  int star;
  if (prev.materialized()) {
    mpz_class big = *prev.digits;
    if (big < t) big = t;
    star = log_star(16, big);
  } else {
    star = prev.height;
  }
  return tower(16, r + star, digit_cap);
}

}  // namespace

TowerBound tower_bound(int k, int m, int r, int t, double epsilon,
                       std::size_t digit_cap) {
  if (k < 1 || m < 1 || r < 1 || t < 1) {
    throw UsageError("tower_bound: k, m, r, t must all be positive");
  }
  if (!(epsilon >= 0.0 && epsilon < 0.5)) {
    throw UsageError("tower_bound: epsilon must lie in [0, 1/2)");
  }
  TowerBound out{k, m, r, t, epsilon, ell(k, m, r, t, digit_cap)};
  return out;
}

TowerBound tower_bound(int k, int m, double epsilon, std::size_t digit_cap) {
  return tower_bound(k, m, k + 1, 1, epsilon, digit_cap);
}

}  // namespace cubespec
