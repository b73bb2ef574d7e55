#include "cubespec/structure.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cubespec/errors.hpp"

namespace cubespec {

namespace {

// Unnormalized Walsh transform over 64-bit integers; exact while every
// intermediate stays below 2^63.
void wht_int(std::vector<std::int64_t>& a) {
  for (std::size_t h = 1; h < a.size(); h <<= 1)
    for (std::size_t i = 0; i < a.size(); i += h << 1)
      for (std::size_t j = i; j < i + h; ++j) {
        const std::int64_t x = a[j];
        const std::int64_t y = a[j + h];
        a[j] = x + y;
        a[j + h] = x - y;
      }
}

}  // namespace

std::uint64_t additive_energy(const SubsetOfCube& a) {
  const int n = a.n();
  if (n > 20) throw CapabilityError("additive energy is capped at n <= 20");
  const std::vector<point_t> members = a.members();

  std::uint64_t energy = 0;
  if (members.size() <= 4096) {
    std::vector<std::uint32_t> r(cube_size(n), 0);
    for (point_t x : members)
      for (point_t y : members) ++r[x ^ y];
    for (std::uint32_t c : r) energy += static_cast<std::uint64_t>(c) * c;
  } else {
    // r = indicator convolved with itself; square-and-invert in integers.
    std::vector<std::int64_t> s(cube_size(n), 0);
    for (point_t x : members) s[x] = 1;
    wht_int(s);
    for (std::int64_t& v : s) v *= v;
    wht_int(s);
    const std::int64_t scale = static_cast<std::int64_t>(cube_size(n));
    for (std::int64_t v : s) {
      if (v % scale != 0) throw VerificationError("pair-count convolution is not integral");
      const std::int64_t r = v / scale;
      energy += static_cast<std::uint64_t>(r) * static_cast<std::uint64_t>(r);
    }
  }

  // Quartic Fourier moment cross-check: energy = |G|^3 sum |1hat_A|^4.
  const CubeFunction fh = fwht(a.indicator());
  const double fourier = std::exp2(3.0 * n) * fh.values().pow(4).sum();
  const double diff = std::abs(fourier - static_cast<double>(energy));
  if (diff > 1e-6 * (1.0 + static_cast<double>(energy)))
    throw VerificationError("energy cross-check mismatch: pairs " + std::to_string(energy) +
                            " vs fourier " + std::to_string(fourier));
  return energy;
}

std::optional<CosetDensity> find_dense_coset(const SubsetOfCube& a, int codim_max,
                                             double threshold) {
  const int n = a.n();
  if (threshold < 0.0) threshold = std::exp2(-n);
  const double size_floor = threshold * static_cast<double>(a.size());

  std::vector<Subspace> spaces;
  if (codim_max < 0) {
    if (n > 6)
      throw CapabilityError("full dense-coset search needs n <= 6; pass codim_max for larger n");
    spaces = enumerate_subspaces(n);
  } else {
    // Subspaces of codimension <= codim_max, as annihilators of the
    // low-dimensional subspaces of the frequency side.
    long double work = 0.0L;
    for (int d = 0; d <= codim_max; ++d)
      work += subspace_count(n, d) * static_cast<long double>(std::max<std::uint64_t>(a.size(), 1));
    if (work > 1e8L)
      throw CapabilityError("dense-coset search budget exceeded; lower codim_max");
    for (const Subspace& u : enumerate_subspaces(n, 0, codim_max))
      spaces.push_back(annihilator(u));
    std::sort(spaces.begin(), spaces.end());
    spaces.erase(std::unique(spaces.begin(), spaces.end()), spaces.end());
  }

  std::optional<CosetDensity> best;
  std::vector<std::uint64_t> counts;
  for (const Subspace& v : spaces) {
    if (static_cast<double>(v.size()) < size_floor) continue;
    // One pass over A, bucketing members by canonical coset representative.
    counts.assign(cube_size(n - v.dim()), 0);
    std::vector<point_t> reps = v.coset_reps();
    for (point_t x : a.members()) {
      const point_t rep = v.reduce(x);
      const auto it = std::lower_bound(reps.begin(), reps.end(), rep);
      ++counts[static_cast<std::size_t>(it - reps.begin())];
    }
    for (std::size_t i = 0; i < reps.size(); ++i) {
      const double density =
          static_cast<double>(counts[i]) / static_cast<double>(v.size());
      const bool better =
          !best || density > best->density + 1e-15 ||
          (density > best->density - 1e-15 &&
           (v.dim() > best->coset.dim() ||
            (v.dim() == best->coset.dim() && Coset(v, reps[i]).order(best->coset) < 0)));
      if (better) best = CosetDensity{Coset(v, reps[i]), counts[i], density};
    }
  }
  return best;
}

RegularizeResult regularize_subgroup(const CubeFunction& f, const Subspace& v, double delta,
                                     double m_bound) {
  if (f.n() != v.n()) throw UsageError("function/subspace dimension mismatch");
  if (!(delta > 0.0)) throw UsageError("delta must be positive");
  const double norm = spectral_norm(f);
  if (norm > m_bound + 1e-9)
    throw UsageError("spectral norm " + std::to_string(norm) + " exceeds the bound " +
                     std::to_string(m_bound));

  const CubeFunction fh = f.side() == Side::Spectral ? f : fwht(f);
  const CubeFunction fp = f.side() == Side::Point ? f : inverse_fwht(f);

  RegularizeResult out;
  out.w = v;
  while (true) {
    const Subspace wperp = annihilator(out.w);
    point_t worst_rep = 0;
    double worst_mass = delta;
    for (point_t rep : wperp.coset_reps()) {
      if (rep == 0) continue;  // the class of W-perp itself is exempt
      double mass = 0.0;
      for (point_t t : wperp.members())
        mass += std::abs(fh[rep ^ t]);
      if (mass > worst_mass) {
        worst_mass = mass;
        worst_rep = rep;
      }
    }
    if (worst_rep == 0) break;

    // Shrink W to the kernel of the functional worst_rep; the violating
    // class joins the annihilator, so each round moves more than delta of
    // spectral mass there.
    point_t with_bit = 0;
    for (point_t b : out.w.basis())
      if (dot_f2(worst_rep, b)) {
        with_bit = b;
        break;
      }
    if (with_bit == 0)
      throw VerificationError("violating frequency class is orthogonal to W");
    Subspace w2(out.w.n());
    for (point_t b : out.w.basis()) {
      if (b == with_bit) continue;
      w2.insert(dot_f2(worst_rep, b) ? b ^ with_bit : b);
    }
    if (w2.dim() + 1 != out.w.dim())
      throw VerificationError("regularizer shrink did not drop the dimension by one");
    out.w = w2;
    ++out.iterations;
  }

  // Direct postcondition checks.
  for (point_t c : out.w.coset_reps()) {
    const CubeFunction g = restrict_to_coset(fp, out.w, c);
    const double mean = g.mean();
    const double var = (g.values() - mean).square().mean();
    out.max_coset_variance = std::max(out.max_coset_variance, var);
  }
  if (out.max_coset_variance > delta * m_bound + 1e-9)
    throw VerificationError("coset variance " + std::to_string(out.max_coset_variance) +
                            " exceeds delta*M = " + std::to_string(delta * m_bound));
  const int allowed = static_cast<int>(std::ceil(m_bound / delta));
  if (v.dim() - out.w.dim() > allowed)
    throw VerificationError("regularizer dropped " + std::to_string(v.dim() - out.w.dim()) +
                            " dimensions; the bound is " + std::to_string(allowed));
  return out;
}

GoodSubgroupResult good_subgroup(const SubsetOfCube& a, const CubeFunction& g, double eps,
                                 double delta, const Subspace& v, point_t a_rep, double eps1,
                                 double eps2, double m_bound) {
  const int n = a.n();
  std::string failures;
  auto fail = [&failures](const std::string& msg) {
    if (!failures.empty()) failures += "; ";
    failures += msg;
  };

  if (g.n() != n || v.n() != n) fail("dimension mismatch between A, g, V");
  if (!(eps >= 0.0 && eps < 0.5)) fail("eps outside [0, 1/2)");
  if (!(m_bound >= 0.5)) fail("M below 1/2");
  if (!(delta > 0.0 && delta < std::min(0.5, eps2))) fail("delta not below min(1/2, eps2)");
  if (!(eps1 > 0.0) || !(eps2 > 0.0)) fail("eps1/eps2 must be positive");

  const CubeFunction gp = g.side() == Side::Point ? g : inverse_fwht(g);
  if (failures.empty()) {
    const double dist = linf_distance(a.indicator(), gp);
    if (dist > eps + 1e-12)
      fail("sup distance " + std::to_string(dist) + " exceeds eps");
    const double gnorm = spectral_norm(gp);
    if (gnorm > m_bound + 1e-9)
      fail("norm " + std::to_string(gnorm) + " exceeds M");
    const Coset va(v, a_rep);
    if (static_cast<double>(va.size()) < eps1 * static_cast<double>(a.size()) - 1e-9)
      fail("coset smaller than eps1 * |A|");
    std::uint64_t inter = 0;
    for (point_t x : va.members())
      if (a.contains(x)) ++inter;
    if (static_cast<double>(inter) < eps2 * static_cast<double>(v.size()) - 1e-9)
      fail("intersection smaller than eps2 * |V|");
  }
  if (!failures.empty()) throw UsageError("hypotheses not satisfied: " + failures);

  GoodSubgroupResult out;
  out.delta = delta;
  // Variance target (1-2eps)^2 delta / 4 expressed through the regularizer's
  // Var <= param * M guarantee.
  const double param = (1.0 - 2.0 * eps) * (1.0 - 2.0 * eps) * delta / (4.0 * m_bound);
  RegularizeResult reg = regularize_subgroup(gp, v, param, m_bound);
  out.w = std::move(reg.w);
  out.regularize_iterations = reg.iterations;

  const std::vector<point_t> reps = out.w.coset_reps();
  const double wsize = static_cast<double>(out.w.size());
  for (point_t c : reps) {
    std::uint64_t count = 0;
    for (point_t x : Coset(out.w, c).members())
      if (a.contains(x)) ++count;
    const double density = static_cast<double>(count) / wsize;
    out.densities.push_back(density);
    if (density > delta + 1e-9 && density < 1.0 - delta - 1e-9)
      throw VerificationError("coset density " + std::to_string(density) +
                              " is neither <= delta nor >= 1-delta");
    if (density >= 1.0 - delta - 1e-9) out.f_w.push_back(c);
  }
  out.f_w_is_everything = out.f_w.size() == reps.size();

  if (out.f_w.empty()) throw VerificationError("no dense coset survived regularization");
  const double log2_cap = 5.0 * m_bound * m_bound /
                              ((1.0 - 2.0 * eps) * (1.0 - 2.0 * eps) * delta) -
                          std::log2(eps1);
  if (std::log2(static_cast<double>(out.f_w.size())) > log2_cap + 1e-9)
    throw VerificationError("dense family of size " + std::to_string(out.f_w.size()) +
                            " exceeds the log2 cap " + std::to_string(log2_cap));

  const double reduced_full = reduced_spectral_norm(gp);
  const double required_drop = (1.0 - 2.0 * eps - 2.0 * delta) / 2.0;
  for (point_t c : reps) {
    const double rn = reduced_spectral_norm(restrict_to_coset(gp, out.w, c));
    out.restriction_reduced_norms.push_back(rn);
    if (!out.f_w_is_everything && rn > reduced_full - required_drop + 1e-9)
      throw VerificationError("restriction reduced norm " + std::to_string(rn) +
                              " does not drop by " + std::to_string(required_drop));
  }
  return out;
}

}  // namespace cubespec
