#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cubespec/bits.hpp"

namespace cubespec {

// Linear subspace of F_2^n held in reduced row echelon form: basis vectors
// have distinct most-significant (pivot) bits, no vector carries another's
// pivot, and the list is sorted ascending. That form is unique per subspace,
// so operator== is structural equality.
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(int n);  // the zero subspace {0}

  static Subspace zero(int n) { return Subspace(n); }
  static Subspace full(int n);
  static Subspace from_generators(int n, std::span<const point_t> gens);

  int n() const { return n_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  std::uint64_t size() const { return std::uint64_t{1} << dim(); }
  const std::vector<point_t>& basis() const { return basis_; }

  // Reduces x modulo the subspace by clearing every pivot bit. The result is
  // the minimum element of the coset x + W, which doubles as the canonical
  // coset representative.
  point_t reduce(point_t x) const;
  bool contains(point_t x) const { return reduce(x) == 0; }
  bool contains_subspace(const Subspace& other) const;

  // All 2^dim elements, sorted ascending.
  std::vector<point_t> members() const;

  // Canonical representatives of the quotient G/W (all points whose pivot
  // bits are zero), sorted ascending. 2^{n-dim} entries.
  std::vector<point_t> coset_reps() const;

  // Point of W whose coordinates in the canonical basis are the bits of
  // `coords` (bit i selects basis()[i]), and the inverse map.
  point_t point_from_coords(point_t coords) const;
  point_t coords_from_point(point_t x) const;

  // Adds one generator, keeping echelon form. No-op if already contained.
  void insert(point_t v);

  friend bool operator==(const Subspace&, const Subspace&) = default;
  std::strong_ordering order(const Subspace& other) const;

 private:
  int n_ = 0;
  std::vector<point_t> basis_;
};

Subspace annihilator(const Subspace& w);
Subspace sum(const Subspace& a, const Subspace& b);
Subspace intersect(const Subspace& a, const Subspace& b);

// All subspaces of F_2^n with dim in [dim_lo, dim_hi], in a fixed order
// (dimension, then pivot set, then free entries). Gated by the predicted
// subspace count (Gaussian binomials, cap 2e7), so narrow dim ranges work at
// larger n.
std::vector<Subspace> enumerate_subspaces(int n, int dim_lo, int dim_hi);
// Full enumeration; capped at n <= 6 (n = 6 already has 2825 subspaces).
std::vector<Subspace> enumerate_subspaces(int n);

// Number of d-dimensional subspaces of F_2^n as a long double (the Gaussian
// binomial coefficient; exact for small arguments, an estimate near
// overflow).
long double subspace_count(int n, int d);

// Affine coset V + rep with rep stored canonically (minimal integer in the
// coset, i.e. V.reduce of any member).
class Coset {
 public:
  Coset() = default;
  Coset(Subspace space, point_t any_point);

  static Coset full_cube(int n) { return Coset(Subspace::full(n), 0); }
  static Coset singleton(int n, point_t x) { return Coset(Subspace::zero(n), x); }

  int n() const { return space_.n(); }
  int dim() const { return space_.dim(); }
  std::uint64_t size() const { return space_.size(); }
  const Subspace& space() const { return space_; }
  point_t rep() const { return rep_; }

  bool contains(point_t x) const { return space_.contains(x ^ rep_); }
  std::vector<point_t> members() const;

  friend bool operator==(const Coset&, const Coset&) = default;
  // Canonical order: dimension, then basis lexicographically, then rep.
  std::strong_ordering order(const Coset& other) const;

 private:
  Subspace space_;
  point_t rep_ = 0;
};

inline bool operator<(const Coset& a, const Coset& b) { return a.order(b) < 0; }
inline bool operator<(const Subspace& a, const Subspace& b) { return a.order(b) < 0; }

std::optional<Coset> intersect(const Coset& a, const Coset& b);

// Solves sum_{i in mask} gens[i] = target over GF(2); returns a generator
// subset mask, or nullopt if target is outside the span. At most 64 gens.
std::optional<std::uint64_t> solve_combination(std::span<const point_t> gens,
                                               point_t target);

}  // namespace cubespec
