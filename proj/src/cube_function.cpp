#include "cubespec/cube_function.hpp"

#include <bit>
#include <cmath>

#include "cubespec/errors.hpp"

namespace cubespec {

namespace {

void check_n(int n) {
  if (n < 0 || n > kMaxN)
    throw UsageError("dimension n must be in [0, " + std::to_string(kMaxN) + "]");
}

// In-place Walsh-Hadamard butterfly; applying it twice multiplies by 2^n.
void wht_in_place(Eigen::ArrayXd& a) {
  const Eigen::Index len = a.size();
  for (Eigen::Index h = 1; h < len; h <<= 1) {
    for (Eigen::Index i = 0; i < len; i += h << 1) {
      for (Eigen::Index j = i; j < i + h; ++j) {
        const double x = a[j];
        const double y = a[j + h];
        a[j] = x + y;
        a[j + h] = x - y;
      }
    }
  }
}

}  // namespace

CubeFunction::CubeFunction(int n, Side side)
    : n_(n), side_(side), values_(Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(cube_size(n)))) {
  check_n(n);
}

CubeFunction::CubeFunction(int n, Side side, Eigen::ArrayXd values)
    : n_(n), side_(side), values_(std::move(values)) {
  check_n(n);
  if (static_cast<std::uint64_t>(values_.size()) != cube_size(n))
    throw UsageError("value array length does not match 2^n");
}

CubeFunction CubeFunction::constant(int n, double value) {
  CubeFunction f(n, Side::Point);
  f.values_.setConstant(value);
  return f;
}

CubeFunction CubeFunction::point_mass(int n, point_t x, double value) {
  CubeFunction f(n, Side::Point);
  if (x >= cube_size(n)) throw UsageError("point outside F_2^n");
  f.values_[static_cast<Eigen::Index>(x)] = value;
  return f;
}

CubeFunction CubeFunction::character(int n, point_t a) {
  CubeFunction f(n, Side::Point);
  if (a >= cube_size(n)) throw UsageError("frequency outside F_2^n");
  for (std::uint64_t x = 0; x < cube_size(n); ++x)
    f.values_[static_cast<Eigen::Index>(x)] = chi(a, static_cast<point_t>(x));
  return f;
}

CubeFunction fwht(const CubeFunction& f) {
  if (f.side() != Side::Point) throw UsageError("fwht expects point-side input");
  Eigen::ArrayXd a = f.values();
  wht_in_place(a);
  a /= static_cast<double>(cube_size(f.n()));
  return CubeFunction(f.n(), Side::Spectral, std::move(a));
}

CubeFunction inverse_fwht(const CubeFunction& fhat) {
  if (fhat.side() != Side::Spectral) throw UsageError("inverse_fwht expects spectral-side input");
  Eigen::ArrayXd a = fhat.values();
  wht_in_place(a);
  return CubeFunction(fhat.n(), Side::Point, std::move(a));
}

double spectral_norm(const CubeFunction& f) {
  if (f.side() == Side::Spectral) return f.values().abs().sum();
  return fwht(f).values().abs().sum();
}

double reduced_spectral_norm(const CubeFunction& f) {
  const CubeFunction& fh = f.side() == Side::Spectral ? f : fwht(f);
  return fh.values().abs().sum() - std::abs(fh.values()[0]);
}

double linf_norm(const CubeFunction& f) {
  if (f.side() != Side::Point) throw UsageError("linf_norm expects point-side input");
  return f.values().abs().maxCoeff();
}

double linf_distance(const CubeFunction& f, const CubeFunction& g) {
  if (f.side() != Side::Point || g.side() != Side::Point)
    throw UsageError("linf_distance expects point-side inputs");
  if (f.n() != g.n()) throw UsageError("function dimension mismatch");
  return (f.values() - g.values()).abs().maxCoeff();
}

CubeFunction convolve(const CubeFunction& f, const CubeFunction& g) {
  if (f.n() != g.n()) throw UsageError("function dimension mismatch");
  CubeFunction fh = f.side() == Side::Spectral ? f : fwht(f);
  CubeFunction gh = g.side() == Side::Spectral ? g : fwht(g);
  CubeFunction out(f.n(), Side::Spectral, fh.values() * gh.values());
  return inverse_fwht(out);
}

CubeFunction project_subgroup(const CubeFunction& f, const Subspace& w) {
  if (f.n() != w.n()) throw UsageError("function/subspace dimension mismatch");
  CubeFunction fh = f.side() == Side::Spectral ? f : fwht(f);
  const Subspace wperp = annihilator(w);
  for (std::uint64_t a = 0; a < fh.domain_size(); ++a)
    if (!wperp.contains(static_cast<point_t>(a))) fh.values()[static_cast<Eigen::Index>(a)] = 0.0;
  if (f.side() == Side::Spectral) return fh;
  return inverse_fwht(fh);
}

CubeFunction restrict_to_coset(const CubeFunction& f, const Subspace& w, point_t a) {
  if (f.n() != w.n()) throw UsageError("function/subspace dimension mismatch");
  if (a >= f.domain_size()) throw UsageError("coset representative outside F_2^n");
  const CubeFunction* fp = &f;
  CubeFunction tmp(0, Side::Point);
  if (f.side() == Side::Spectral) {
    tmp = inverse_fwht(f);
    fp = &tmp;
  }
  CubeFunction g(w.dim(), Side::Point);
  for (std::uint64_t y = 0; y < g.domain_size(); ++y)
    g.values()[static_cast<Eigen::Index>(y)] =
        (*fp)[a ^ w.point_from_coords(static_cast<point_t>(y))];
  return g;
}

SubsetOfCube::SubsetOfCube(int n) : n_(n) {
  check_n(n);
  words_.assign((cube_size(n) + 63) / 64, 0);
}

SubsetOfCube::SubsetOfCube(int n, std::span<const point_t> members) : SubsetOfCube(n) {
  for (point_t x : members) insert(x);
}

SubsetOfCube SubsetOfCube::full(int n) {
  SubsetOfCube s(n);
  return s.complement();
}

void SubsetOfCube::insert(point_t x) {
  if (x >= cube_size(n_)) throw UsageError("point outside F_2^n");
  words_[x >> 6] |= std::uint64_t{1} << (x & 63u);
}

void SubsetOfCube::erase(point_t x) {
  if (x >= cube_size(n_)) throw UsageError("point outside F_2^n");
  words_[x >> 6] &= ~(std::uint64_t{1} << (x & 63u));
}

std::uint64_t SubsetOfCube::size() const {
  std::uint64_t total = 0;
  for (std::uint64_t w : words_) total += static_cast<std::uint64_t>(std::popcount(w));
  return total;
}

std::vector<point_t> SubsetOfCube::members() const {
  std::vector<point_t> out;
  out.reserve(size());
  for (std::uint64_t x = 0; x < cube_size(n_); ++x)
    if (contains(static_cast<point_t>(x))) out.push_back(static_cast<point_t>(x));
  return out;
}

SubsetOfCube SubsetOfCube::complement() const {
  SubsetOfCube out(n_);
  for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] = ~words_[i];
  // Mask off the tail beyond 2^n in the last word.
  const std::uint64_t used = cube_size(n_) & 63u;
  if (used != 0) out.words_.back() &= (std::uint64_t{1} << used) - 1;
  return out;
}

CubeFunction SubsetOfCube::indicator() const {
  CubeFunction f(n_, Side::Point);
  for (std::uint64_t x = 0; x < cube_size(n_); ++x)
    if (contains(static_cast<point_t>(x))) f.values()[static_cast<Eigen::Index>(x)] = 1.0;
  return f;
}

namespace {
void check_same_n(const SubsetOfCube& a, const SubsetOfCube& b) {
  if (a.n() != b.n()) throw UsageError("subset dimension mismatch");
}
}  // namespace

SubsetOfCube set_union(const SubsetOfCube& a, const SubsetOfCube& b) {
  check_same_n(a, b);
  SubsetOfCube out(a.n());
  for (point_t x : a.members()) out.insert(x);
  for (point_t x : b.members()) out.insert(x);
  return out;
}

SubsetOfCube set_intersection(const SubsetOfCube& a, const SubsetOfCube& b) {
  check_same_n(a, b);
  SubsetOfCube out(a.n());
  for (point_t x : a.members())
    if (b.contains(x)) out.insert(x);
  return out;
}

SubsetOfCube set_difference(const SubsetOfCube& a, const SubsetOfCube& b) {
  check_same_n(a, b);
  SubsetOfCube out(a.n());
  for (point_t x : a.members())
    if (!b.contains(x)) out.insert(x);
  return out;
}

}  // namespace cubespec
