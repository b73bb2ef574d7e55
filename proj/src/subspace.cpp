#include "cubespec/subspace.hpp"

#include <algorithm>
#include <cmath>

#include "cubespec/errors.hpp"

namespace cubespec {

namespace {

void check_n(int n) {
  if (n < 0 || n > kMaxN)
    throw UsageError("dimension n must be in [0, " + std::to_string(kMaxN) + "]");
}

}  // namespace

Subspace::Subspace(int n) : n_(n) { check_n(n); }

Subspace Subspace::full(int n) {
  Subspace w(n);
  for (int i = 0; i < n; ++i) w.basis_.push_back(point_t{1} << i);
  return w;
}

Subspace Subspace::from_generators(int n, std::span<const point_t> gens) {
  Subspace w(n);
  for (point_t g : gens) w.insert(g);
  return w;
}

point_t Subspace::reduce(point_t x) const {
  // Rows are sorted ascending, so walk from the top to clear high pivots first.
  for (auto it = basis_.rbegin(); it != basis_.rend(); ++it)
    if ((x >> pivot_bit(*it)) & 1u) x ^= *it;
  return x;
}

void Subspace::insert(point_t v) {
  if (v >= cube_size(n_)) throw UsageError("generator outside F_2^n");
  v = reduce(v);
  if (v == 0) return;
  const int p = pivot_bit(v);
  for (point_t& row : basis_)
    if ((row >> p) & 1u) row ^= v;
  basis_.insert(std::upper_bound(basis_.begin(), basis_.end(), v), v);
}

bool Subspace::contains_subspace(const Subspace& other) const {
  for (point_t b : other.basis_)
    if (!contains(b)) return false;
  return true;
}

std::vector<point_t> Subspace::members() const {
  std::vector<point_t> out;
  out.reserve(size());
  for (std::uint64_t y = 0; y < size(); ++y)
    out.push_back(point_from_coords(static_cast<point_t>(y)));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<point_t> Subspace::coset_reps() const {
  std::vector<int> free_pos;
  point_t pivots = 0;
  for (point_t b : basis_) pivots |= point_t{1} << pivot_bit(b);
  for (int i = 0; i < n_; ++i)
    if (!((pivots >> i) & 1u)) free_pos.push_back(i);

  std::vector<point_t> out;
  out.reserve(std::uint64_t{1} << free_pos.size());
  for (std::uint64_t c = 0; c < (std::uint64_t{1} << free_pos.size()); ++c) {
    point_t x = 0;
    for (std::size_t j = 0; j < free_pos.size(); ++j)
      if ((c >> j) & 1u) x |= point_t{1} << free_pos[j];
    out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  return out;
}

point_t Subspace::point_from_coords(point_t coords) const {
  point_t x = 0;
  for (std::size_t i = 0; i < basis_.size(); ++i)
    if ((coords >> i) & 1u) x ^= basis_[i];
  return x;
}

point_t Subspace::coords_from_point(point_t x) const {
  point_t coords = 0;
  for (std::size_t i = basis_.size(); i-- > 0;) {
    if ((x >> pivot_bit(basis_[i])) & 1u) {
      coords |= point_t{1} << i;
      x ^= basis_[i];
    }
  }
  if (x != 0) throw UsageError("point not in subspace");
  return coords;
}

std::strong_ordering Subspace::order(const Subspace& other) const {
  if (auto c = n_ <=> other.n_; c != 0) return c;
  if (auto c = basis_.size() <=> other.basis_.size(); c != 0) return c;
  for (std::size_t i = 0; i < basis_.size(); ++i)
    if (auto c = basis_[i] <=> other.basis_[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

Subspace annihilator(const Subspace& w) {
  // Null space of the basis matrix, built from the free (non-pivot) columns.
  const int n = w.n();
  point_t pivots = 0;
  for (point_t b : w.basis()) pivots |= point_t{1} << pivot_bit(b);

  Subspace out(n);
  for (int f = 0; f < n; ++f) {
    if ((pivots >> f) & 1u) continue;
    point_t v = point_t{1} << f;
    for (point_t b : w.basis())
      if ((b >> f) & 1u) v |= point_t{1} << pivot_bit(b);
    out.insert(v);
  }
  return out;
}

Subspace sum(const Subspace& a, const Subspace& b) {
  if (a.n() != b.n()) throw UsageError("subspace dimension mismatch");
  Subspace out = a;
  for (point_t v : b.basis()) out.insert(v);
  return out;
}

Subspace intersect(const Subspace& a, const Subspace& b) {
  return annihilator(sum(annihilator(a), annihilator(b)));
}

long double subspace_count(int n, int d) {
  if (d < 0 || d > n) return 0.0L;
  long double count = 1.0L;
  for (int i = 0; i < d; ++i)
    count *= (std::exp2l(n - i) - 1.0L) / (std::exp2l(d - i) - 1.0L);
  return count;
}

std::vector<Subspace> enumerate_subspaces(int n, int dim_lo, int dim_hi) {
  check_n(n);
  dim_lo = std::max(dim_lo, 0);
  dim_hi = std::min(dim_hi, n);
  long double predicted = 0.0L;
  for (int d = dim_lo; d <= dim_hi; ++d) predicted += subspace_count(n, d);
  if (predicted > 2e7L)
    throw CapabilityError("subspace enumeration would visit about " +
                          std::to_string(static_cast<double>(predicted)) +
                          " subspaces; the cap is 2e7");

  std::vector<Subspace> out;
  for (int d = dim_lo; d <= dim_hi; ++d) {
    // Pivot sets as d-subsets of bit positions, descending row pivots. Free
    // entries of row i live at non-pivot positions below its pivot.
    std::vector<int> piv(d);
    for (int i = 0; i < d; ++i) piv[i] = d - 1 - i;  // lexicographically first
    auto advance = [&]() -> bool {  // next d-combination of {0..n-1}, descending order kept
      // Work with the ascending view to use the textbook increment.
      std::vector<int> asc(piv.rbegin(), piv.rend());
      int i = d - 1;
      while (i >= 0 && asc[i] == n - d + i) --i;
      if (i < 0) return false;
      ++asc[i];
      for (int j = i + 1; j < d; ++j) asc[j] = asc[j - 1] + 1;
      std::copy(asc.rbegin(), asc.rend(), piv.begin());
      return true;
    };

    if (d == 0) {
      out.push_back(Subspace::zero(n));
      continue;
    }
    do {
      point_t pivot_mask = 0;
      for (int p : piv) pivot_mask |= point_t{1} << p;
      // Count free slots per row.
      std::vector<std::vector<int>> free_pos(d);
      int total_free = 0;
      for (int i = 0; i < d; ++i) {
        for (int pos = 0; pos < piv[i]; ++pos)
          if (!((pivot_mask >> pos) & 1u)) free_pos[i].push_back(pos);
        total_free += static_cast<int>(free_pos[i].size());
      }
      for (std::uint64_t fill = 0; fill < (std::uint64_t{1} << total_free); ++fill) {
        Subspace w(n);
        std::uint64_t bits = fill;
        std::vector<point_t> rows(d);
        for (int i = 0; i < d; ++i) {
          point_t row = point_t{1} << piv[i];
          for (int pos : free_pos[i]) {
            if (bits & 1u) row |= point_t{1} << pos;
            bits >>= 1;
          }
          rows[i] = row;
        }
        // Rows are already in echelon form by construction; install sorted.
        std::sort(rows.begin(), rows.end());
        for (point_t r : rows) w.insert(r);
        out.push_back(std::move(w));
      }
    } while (advance());
  }
  return out;
}

std::vector<Subspace> enumerate_subspaces(int n) {
  if (n > 6) throw CapabilityError("full subspace enumeration is capped at n <= 6");
  return enumerate_subspaces(n, 0, n);
}

Coset::Coset(Subspace space, point_t any_point) : space_(std::move(space)) {
  if (any_point >= cube_size(space_.n())) throw UsageError("coset representative outside F_2^n");
  rep_ = space_.reduce(any_point);
}

std::vector<point_t> Coset::members() const {
  std::vector<point_t> out = space_.members();
  for (point_t& x : out) x ^= rep_;
  std::sort(out.begin(), out.end());
  return out;
}

std::strong_ordering Coset::order(const Coset& other) const {
  if (auto c = space_.order(other.space_); c != 0) return c;
  return rep_ <=> other.rep_;
}

std::optional<std::uint64_t> solve_combination(std::span<const point_t> gens,
                                               point_t target) {
  if (gens.size() > 64) throw UsageError("solve_combination supports at most 64 generators");
  // Gaussian elimination tracking which original generators make up each row.
  std::vector<point_t> rows;
  std::vector<std::uint64_t> combos;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    point_t v = gens[i];
    std::uint64_t c = std::uint64_t{1} << i;
    for (std::size_t j = 0; j < rows.size(); ++j)
      if ((v >> pivot_bit(rows[j])) & 1u) v ^= rows[j], c ^= combos[j];
    if (v == 0) continue;
    rows.push_back(v);
    combos.push_back(c);
    // Keep rows sorted descending by pivot so reduction above stays valid.
    for (std::size_t j = rows.size(); j-- > 1;)
      if (pivot_bit(rows[j]) > pivot_bit(rows[j - 1])) {
        std::swap(rows[j], rows[j - 1]);
        std::swap(combos[j], combos[j - 1]);
      }
  }
  std::uint64_t c = 0;
  point_t v = target;
  for (std::size_t j = 0; j < rows.size(); ++j)
    if (v != 0 && ((v >> pivot_bit(rows[j])) & 1u)) v ^= rows[j], c ^= combos[j];
  if (v != 0) return std::nullopt;
  return c;
}

std::optional<Coset> intersect(const Coset& a, const Coset& b) {
  if (a.n() != b.n()) throw UsageError("coset dimension mismatch");
  // x = a.rep + va = b.rep + vb needs va + vb = a.rep ^ b.rep.
  std::vector<point_t> gens(a.space().basis());
  gens.insert(gens.end(), b.space().basis().begin(), b.space().basis().end());
  auto combo = solve_combination(gens, a.rep() ^ b.rep());
  if (!combo) return std::nullopt;
  point_t va = 0;
  for (std::size_t i = 0; i < a.space().basis().size(); ++i)
    if ((*combo >> i) & 1u) va ^= a.space().basis()[i];
  const point_t x = a.rep() ^ va;
  Coset result(intersect(a.space(), b.space()), x);
  if (!a.contains(x) || !b.contains(x))
    throw VerificationError("coset intersection produced a point outside an operand");
  return result;
}

}  // namespace cubespec
