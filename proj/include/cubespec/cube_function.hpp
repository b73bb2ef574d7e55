#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "cubespec/bits.hpp"
#include "cubespec/subspace.hpp"

namespace cubespec {

// Which basis the stored coefficients refer to.
enum class Side { Point, Spectral };

// A real-valued function on F_2^n, stored densely as 2^n doubles indexed by
// the integer encoding of the point (bit i of the index = coordinate x_i).
class CubeFunction {
 public:
  CubeFunction(int n, Side side);
  CubeFunction(int n, Side side, Eigen::ArrayXd values);

  static CubeFunction constant(int n, double value);
  static CubeFunction point_mass(int n, point_t x, double value = 1.0);
  // chi_a(x) = (-1)^{a.x} on the point side.
  static CubeFunction character(int n, point_t a);

  int n() const { return n_; }
  Side side() const { return side_; }
  std::uint64_t domain_size() const { return cube_size(n_); }
  const Eigen::ArrayXd& values() const { return values_; }
  Eigen::ArrayXd& values() { return values_; }
  double operator[](std::uint64_t i) const { return values_[static_cast<Eigen::Index>(i)]; }
  double& operator[](std::uint64_t i) { return values_[static_cast<Eigen::Index>(i)]; }

  double mean() const { return values_.mean(); }

  bool operator==(const CubeFunction&) const = default;

 private:
  int n_;
  Side side_;
  Eigen::ArrayXd values_;
};

// Forward transform: point values -> Fourier coefficients, with the 2^{-n}
// normalization on this side, so fwht(1) has a single coefficient 1 at 0.
CubeFunction fwht(const CubeFunction& f);
// Inverse transform: Fourier coefficients -> point values, no normalization.
CubeFunction inverse_fwht(const CubeFunction& fhat);

// Sum of |coefficients| over the whole spectrum. Accepts either side and
// transforms as needed.
double spectral_norm(const CubeFunction& f);
// Same, excluding the coefficient at frequency 0.
double reduced_spectral_norm(const CubeFunction& f);

double linf_norm(const CubeFunction& f);
double linf_distance(const CubeFunction& f, const CubeFunction& g);

// (f*g)(x) = E_y f(y) g(x+y); on the spectral side this is a pointwise
// product of coefficient arrays.
CubeFunction convolve(const CubeFunction& f, const CubeFunction& g);

// Zero out every Fourier coefficient outside the annihilator of w. Equals
// convolution with the normalized indicator of w.
CubeFunction project_subgroup(const CubeFunction& f, const Subspace& w);

// Restriction of f to the coset w + a, reindexed by w's internal coordinates:
// the result is a function on F_2^{dim w} with g(y) = f(a ^ w.point_from_coords(y)).
CubeFunction restrict_to_coset(const CubeFunction& f, const Subspace& w, point_t a);

// A subset of F_2^n as a packed bitset.
class SubsetOfCube {
 public:
  explicit SubsetOfCube(int n);
  SubsetOfCube(int n, std::span<const point_t> members);

  static SubsetOfCube full(int n);

  int n() const { return n_; }
  std::uint64_t domain_size() const { return cube_size(n_); }
  bool contains(point_t x) const {
    return (words_[x >> 6] >> (x & 63u)) & 1u;
  }
  void insert(point_t x);
  void erase(point_t x);
  std::uint64_t size() const;
  bool empty() const { return size() == 0; }
  std::vector<point_t> members() const;
  SubsetOfCube complement() const;
  const std::vector<std::uint64_t>& words() const { return words_; }

  // 0/1 indicator on the point side.
  CubeFunction indicator() const;

  bool operator==(const SubsetOfCube&) const = default;

 private:
  int n_;
  std::vector<std::uint64_t> words_;
};

SubsetOfCube set_union(const SubsetOfCube& a, const SubsetOfCube& b);
SubsetOfCube set_intersection(const SubsetOfCube& a, const SubsetOfCube& b);
SubsetOfCube set_difference(const SubsetOfCube& a, const SubsetOfCube& b);

}  // namespace cubespec
