#include "cubespec/ring.hpp"

#include <algorithm>
#include <cstdint>
#include <unordered_map>

#include "cubespec/errors.hpp"

namespace cubespec {

namespace {

// Signature of x over the generators: bit i set iff x is in gens[i].
std::vector<std::uint32_t> signatures(int n, std::span<const Coset> gens) {
  std::vector<std::uint32_t> sig(cube_size(n), 0);
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::uint64_t x = 0; x < cube_size(n); ++x)
      if (gens[i].contains(static_cast<point_t>(x))) sig[x] |= std::uint32_t{1} << i;
  return sig;
}

void emit_atom_terms(SignedCosetSum& out, const Coset& d, std::span<const int> t,
                     std::span<const Coset> gens, int sign) {
  if (t.empty()) {
    out.add(sign, d);
    return;
  }
  emit_atom_terms(out, d, t.subspan(1), gens, sign);
  if (auto cut = intersect(d, gens[t.front()]))
    emit_atom_terms(out, *cut, t.subspan(1), gens, -sign);
}

}  // namespace

std::optional<SignedCosetSum> ring_membership_decompose(const SubsetOfCube& a,
                                                        std::span<const Coset> gens) {
  const int n = a.n();
  if (gens.size() > 16) throw UsageError("at most 16 ring generators are supported");
  for (const Coset& c : gens)
    if (c.n() != n) throw UsageError("generator dimension mismatch");

  const auto sig = signatures(n, gens);

  // A must be a union of signature classes.
  std::unordered_map<std::uint32_t, bool> in_a;
  std::vector<std::uint32_t> atom_sigs;  // classes inside A, by first appearance
  for (std::uint64_t x = 0; x < cube_size(n); ++x) {
    const bool member = a.contains(static_cast<point_t>(x));
    auto [it, fresh] = in_a.emplace(sig[x], member);
    if (fresh) {
      if (member) atom_sigs.push_back(sig[x]);
    } else if (it->second != member) {
      return std::nullopt;
    }
  }

  SignedCosetSum out(n);
  for (std::uint32_t s : atom_sigs) {
    Coset d = Coset::full_cube(n);
    std::vector<int> t;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      if ((s >> i) & 1u) {
        auto cut = intersect(d, gens[i]);
        if (!cut) throw VerificationError("nonempty atom with empty defining intersection");
        d = *cut;
      } else {
        t.push_back(static_cast<int>(i));
      }
    }
    emit_atom_terms(out, d, t, gens, +1);
  }

  if (!out.matches_indicator(a))
    throw VerificationError("ring decomposition does not reproduce the indicator");
  return out;
}

std::vector<Coset> enumerate_cosets(int n) {
  std::vector<Coset> out;
  for (const Subspace& w : enumerate_subspaces(n))
    for (point_t rep : w.coset_reps()) out.emplace_back(w, rep);
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<Coset> largest_coset_inside(const SubsetOfCube& a) {
  if (a.n() > 6) throw CapabilityError("exhaustive coset search is capped at n <= 6");
  std::optional<Coset> best;
  std::uint64_t best_size = 0;
  for (const Coset& c : enumerate_cosets(a.n())) {
    if (c.size() <= best_size) continue;
    bool inside = true;
    for (point_t x : c.members())
      if (!a.contains(x)) {
        inside = false;
        break;
      }
    if (inside) {
      best = c;
      best_size = c.size();
    }
  }
  return best;
}

namespace {

// Quick ring-membership test over bitmasks of the point domain (2^n <= 64).
// Splits the domain into signature classes and checks each is entirely in or
// entirely out of the target.
bool ring_contains_masked(std::uint64_t target, std::span<const std::uint64_t> gen_masks,
                          std::uint64_t domain) {
  std::vector<std::uint64_t> classes{domain};
  for (std::uint64_t m : gen_masks) {
    std::vector<std::uint64_t> next;
    next.reserve(classes.size() * 2);
    for (std::uint64_t cls : classes) {
      if (std::uint64_t in = cls & m) next.push_back(in);
      if (std::uint64_t outp = cls & ~m) next.push_back(outp);
    }
    classes = std::move(next);
  }
  for (std::uint64_t cls : classes) {
    const std::uint64_t hit = cls & target;
    if (hit != 0 && hit != cls) return false;
  }
  return true;
}

std::uint64_t subset_mask(const SubsetOfCube& a) {
  std::uint64_t m = 0;
  for (point_t x : a.members()) m |= std::uint64_t{1} << x;
  return m;
}

std::uint64_t coset_mask(const Coset& c) {
  std::uint64_t m = 0;
  for (point_t x : c.members()) m |= std::uint64_t{1} << x;
  return m;
}

ComplexityResult exact_complexity(const SubsetOfCube& a, int ell_max) {
  const int n = a.n();
  const std::uint64_t domain =
      cube_size(n) == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << cube_size(n)) - 1;
  const std::uint64_t target = subset_mask(a);

  const std::vector<Coset> cosets = enumerate_cosets(n);
  std::vector<std::uint64_t> masks(cosets.size());
  for (std::size_t i = 0; i < cosets.size(); ++i) masks[i] = coset_mask(cosets[i]);

  for (int ell = 0; ell <= ell_max; ++ell) {
    // Lexicographically first combination of `ell` coset indices.
    std::vector<std::size_t> idx(ell);
    for (int i = 0; i < ell; ++i) idx[i] = i;
    if (ell > static_cast<int>(cosets.size())) break;
    while (true) {
      std::vector<std::uint64_t> gm(ell);
      for (int i = 0; i < ell; ++i) gm[i] = masks[idx[i]];
      if (ring_contains_masked(target, gm, domain)) {
        ComplexityResult r;
        r.kind = ComplexityKind::Exact;
        r.ell = ell;
        for (int i = 0; i < ell; ++i) r.generators.push_back(cosets[idx[i]]);
        r.decomposition = ring_membership_decompose(a, r.generators);
        if (!r.decomposition)
          throw VerificationError("mask search and decomposition disagree on membership");
        return r;
      }
      // Next combination.
      int i = ell - 1;
      while (i >= 0 && idx[i] == cosets.size() - ell + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int j = i + 1; j < ell; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return {};
}

ComplexityResult greedy_complexity(const SubsetOfCube& a) {
  const int n = a.n();
  const std::vector<Coset> cosets = enumerate_cosets(n);
  std::vector<std::uint64_t> masks(cosets.size());
  for (std::size_t i = 0; i < cosets.size(); ++i) masks[i] = coset_mask(cosets[i]);
  const std::uint64_t target = subset_mask(a);
  const std::uint64_t domain =
      cube_size(n) == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << cube_size(n)) - 1;

  // Majority-vote error of the ring approximation for a given class split:
  // each signature class votes itself entirely in or out of A.
  auto error_of = [&](std::span<const std::uint64_t> gm) {
    std::vector<std::uint64_t> classes{domain};
    for (std::uint64_t m : gm) {
      std::vector<std::uint64_t> next;
      next.reserve(classes.size() * 2);
      for (std::uint64_t cls : classes) {
        if (std::uint64_t in = cls & m) next.push_back(in);
        if (std::uint64_t outp = cls & ~m) next.push_back(outp);
      }
      classes = std::move(next);
    }
    int err = 0;
    for (std::uint64_t cls : classes) {
      const int in_a = std::popcount(cls & target);
      const int out_a = std::popcount(cls & ~target & domain);
      err += std::min(in_a, out_a);
    }
    return err;
  };

  std::vector<std::uint64_t> gm;
  std::vector<std::size_t> chosen;
  int err = error_of(gm);
  while (err > 0 && gm.size() < 16) {
    int best_err = err;
    std::size_t best_i = cosets.size();
    for (std::size_t i = 0; i < cosets.size(); ++i) {
      gm.push_back(masks[i]);
      const int e = error_of(gm);
      gm.pop_back();
      if (e < best_err) {
        best_err = e;
        best_i = i;
      }
    }
    if (best_i == cosets.size()) break;  // no candidate helps; singletons should prevent this
    gm.push_back(masks[best_i]);
    chosen.push_back(best_i);
    err = best_err;
  }
  if (err != 0) return {};

  ComplexityResult r;
  r.kind = ComplexityKind::UpperBound;
  r.ell = static_cast<int>(chosen.size());
  for (std::size_t i : chosen) r.generators.push_back(cosets[i]);
  r.decomposition = ring_membership_decompose(a, r.generators);
  if (!r.decomposition)
    throw VerificationError("greedy search reached zero error but membership fails");
  return r;
}

}  // namespace

ComplexityResult coset_complexity(const SubsetOfCube& a, int ell_max) {
  if (ell_max < 0) throw UsageError("ell_max must be nonnegative");
  if (a.n() > 6) throw CapabilityError("coset complexity search is capped at n <= 6");
  if (a.n() <= 4 && ell_max <= 3) return exact_complexity(a, ell_max);
  return greedy_complexity(a);
}

namespace {

// Shrink the coset d to a relative-codimension-1 sub-coset that still
// contains keep but avoids the cut coset entirely. Preconditions: keep is in
// d but not in cut, and d intersects cut.
Coset shrink_avoiding(const Coset& d, const Coset& cut, point_t keep) {
  const Subspace& u = d.space();
  const int dim = u.dim();

  auto hit = intersect(d, cut);
  if (!hit) throw VerificationError("shrink_avoiding called with disjoint cosets");
  const point_t offset = hit->rep() ^ keep;  // a u-element moving keep into cut

  // Everything in u-coordinates: the directions staying inside cut form a
  // coset of u ∩ cut.space(), and offset is outside that subgroup. The
  // intermediate subspaces must be named; basis() is a view into its owner.
  const Subspace meet = intersect(u, cut.space());
  Subspace k_coords(dim);
  for (point_t b : meet.basis()) k_coords.insert(u.coords_from_point(b));
  const point_t offset_coords = u.coords_from_point(offset);

  const Subspace dual = annihilator(k_coords);
  point_t rho = 0;
  for (point_t cand : dual.basis())
    if (dot_f2(cand, offset_coords)) {
      rho = cand;
      break;
    }
  if (rho == 0) throw VerificationError("no functional separates the cut direction");

  const int p = pivot_bit(rho);
  Subspace u2(d.n());
  for (int q = 0; q < dim; ++q) {
    if (q == p) continue;
    point_t w = point_t{1} << q;
    if ((rho >> q) & 1u) w |= point_t{1} << p;
    u2.insert(u.point_from_coords(w));
  }
  return Coset(u2, keep);
}

}  // namespace

Coset find_large_coset_inside(const SubsetOfCube& a, std::span<const Coset> gens) {
  const int n = a.n();
  if (a.empty()) throw UsageError("find_large_coset_inside requires a nonempty set");
  if (!ring_membership_decompose(a, gens))
    throw UsageError("the set is not in the ring generated by the given cosets");

  const auto sig = signatures(n, gens);
  std::vector<std::uint32_t> atom_sigs;
  std::vector<point_t> atom_min;
  {
    std::unordered_map<std::uint32_t, bool> seen;
    for (std::uint64_t x = 0; x < cube_size(n); ++x) {
      if (!a.contains(static_cast<point_t>(x))) continue;
      if (seen.emplace(sig[x], true).second) {
        atom_sigs.push_back(sig[x]);
        atom_min.push_back(static_cast<point_t>(x));
      }
    }
  }

  std::optional<Coset> best;
  for (std::size_t ai = 0; ai < atom_sigs.size(); ++ai) {
    const std::uint32_t s = atom_sigs[ai];
    const point_t keep = atom_min[ai];

    Coset d = Coset::full_cube(n);
    for (std::size_t i = 0; i < gens.size(); ++i)
      if ((s >> i) & 1u) {
        auto cut = intersect(d, gens[i]);
        if (!cut) throw VerificationError("nonempty atom with empty defining intersection");
        d = *cut;
      }
    for (std::size_t j = 0; j < gens.size(); ++j) {
      if ((s >> j) & 1u) continue;
      if (intersect(d, gens[j])) d = shrink_avoiding(d, gens[j], keep);
    }

    for (point_t x : d.members())
      if (!a.contains(x))
        throw VerificationError("constructed coset escapes its atom");
    if (!best || d.size() > best->size()) best = d;
  }

  const std::uint64_t need = a.size();
  if (best && (best->size() << gens.size()) >= need) return *best;

  // The per-atom construction fell short of the 2^{-l} bound; fall back to
  // the global search where feasible.
  if (n <= 6) {
    auto global = largest_coset_inside(a);
    if (global && (global->size() << gens.size()) >= need) return *global;
  }
  throw VerificationError("no contained coset meets the 2^-l size bound");
}

}  // namespace cubespec
