// Acceptance gate: fourteen end-to-end checks, one line of output each.
// Exits nonzero when any criterion fails. Oracles here are independent
// recomputations (quadruple counts, signature classes, direct variance),
// not replays of the library's own intermediate values.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cubespec/approx_norm.hpp"
#include "cubespec/connectivity.hpp"
#include "cubespec/constructions.hpp"
#include "cubespec/cube_function.hpp"
#include "cubespec/errors.hpp"
#include "cubespec/induction.hpp"
#include "cubespec/report.hpp"
#include "cubespec/ring.hpp"
#include "cubespec/structure.hpp"
#include "cubespec/subspace.hpp"
#include "cubespec/suite.hpp"
#include "cubespec/tower.hpp"
#include "test_util.hpp"

namespace {

using namespace cubespec;

struct Failure {
  std::string detail;
};

void require(bool ok, const std::string& detail) {
  if (!ok) throw Failure{detail};
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int failures = 0;

void criterion(int index, const char* name, const std::function<void()>& body) {
  try {
    body();
    std::printf("PASS criterion %d: %s\n", index, name);
  } catch (const Failure& f) {
    ++failures;
    std::printf("FAIL criterion %d: %s (%s)\n", index, name, f.detail.c_str());
  } catch (const std::exception& e) {
    ++failures;
    std::printf("FAIL criterion %d: %s (unexpected exception: %s)\n", index, name, e.what());
  }
  std::fflush(stdout);
}

// Binomial row for small k; fits comfortably in 64 bits up to k = 20.
std::vector<std::uint64_t> binomial_row(int k) {
  std::vector<std::uint64_t> row(static_cast<std::size_t>(k) + 1, 0);
  row[0] = 1;
  for (int i = 1; i <= k; ++i)
    for (int j = i; j >= 1; --j) row[j] += row[j - 1];
  return row;
}

SubsetOfCube subset_from_mask(int n, std::uint64_t mask) {
  SubsetOfCube a(n);
  for (std::uint64_t x = 0; x < cube_size(n); ++x)
    if ((mask >> x) & 1u) a.insert(static_cast<point_t>(x));
  return a;
}

// A is a coset iff the translate by any fixed member is closed under xor.
bool is_affine_coset(const SubsetOfCube& a) {
  const auto mem = a.members();
  if (mem.empty()) return false;
  std::set<point_t> translated;
  for (point_t x : mem) translated.insert(x ^ mem[0]);
  for (point_t x : translated)
    for (point_t y : translated)
      if (!translated.count(x ^ y)) return false;
  return true;
}

Coset random_coset(int n, std::mt19937_64& rng) {
  Subspace s = Subspace::zero(n);
  const int tries = 1 + static_cast<int>(testutil::below(rng, static_cast<std::uint64_t>(n)));
  for (int i = 0; i < tries; ++i) {
    const point_t v = static_cast<point_t>(testutil::below(rng, cube_size(n)));
    if (v) s.insert(v);
  }
  return Coset(s, static_cast<point_t>(testutil::below(rng, cube_size(n))));
}

std::uint32_t signature_of(point_t x, const std::vector<Coset>& gens) {
  std::uint32_t s = 0;
  for (std::size_t i = 0; i < gens.size(); ++i)
    if (gens[i].contains(x)) s |= std::uint32_t{1} << i;
  return s;
}

// Membership oracle: A lies in the ring generated by gens (and the whole
// cube) iff 1_A is constant on every signature class of the generators.
bool ring_oracle(const SubsetOfCube& a, const std::vector<Coset>& gens) {
  std::map<std::uint32_t, bool> cls;
  for (std::uint64_t x = 0; x < cube_size(a.n()); ++x) {
    const point_t p = static_cast<point_t>(x);
    const std::uint32_t sig = signature_of(p, gens);
    const bool in = a.contains(p);
    auto [it, fresh] = cls.emplace(sig, in);
    if (!fresh && it->second != in) return false;
  }
  return true;
}

// Union of a random nonempty selection of signature classes: a guaranteed
// ring member over the same generators.
SubsetOfCube atom_union(int n, const std::vector<Coset>& gens, std::mt19937_64& rng) {
  std::map<std::uint32_t, bool> keep;
  SubsetOfCube a(n);
  for (std::uint64_t x = 0; x < cube_size(n); ++x) {
    const point_t p = static_cast<point_t>(x);
    const std::uint32_t sig = signature_of(p, gens);
    auto it = keep.find(sig);
    if (it == keep.end()) it = keep.emplace(sig, (rng() & 1u) != 0).first;
    if (it->second) a.insert(p);
  }
  return a;
}

std::uint64_t energy_oracle(const SubsetOfCube& a) {
  std::vector<std::uint64_t> count(cube_size(a.n()), 0);
  const auto mem = a.members();
  for (point_t x : mem)
    for (point_t y : mem) ++count[x ^ y];
  std::uint64_t e = 0;
  for (std::uint64_t c : count) e += c * c;
  return e;
}

void criterion_ball_norms() {
  const auto start = std::chrono::steady_clock::now();
  for (int k = 1; k <= 16; ++k) {
    const BallNormReport r = ball_norm_bounds_check(k);
    const auto binom = binomial_row(k);
    std::uint64_t numerator = 0;
    for (int j = 0; j <= k; ++j)
      numerator += binom[j] * static_cast<std::uint64_t>(std::abs(1 + k - 2 * j));
    require(r.numerator == numerator,
            "numerator mismatch at k=" + std::to_string(k) + ": got " +
                std::to_string(r.numerator) + " want " + std::to_string(numerator));
    require(std::abs(r.norm - static_cast<double>(numerator) * std::exp2(-k)) <= 1e-12,
            "norm is not the dyadic value at k=" + std::to_string(k));
    require(r.norm >= std::sqrt(static_cast<double>(k)) / 2.0 - 1e-12,
            "lower bound fails at k=" + std::to_string(k));
    require(r.norm <= std::sqrt(static_cast<double>(k) + 1.0) + 1e-12,
            "upper bound fails at k=" + std::to_string(k));
  }
  const double elapsed = seconds_since(start);
  require(elapsed < 1.0, "took " + std::to_string(elapsed) + "s, cap is 1s");
}

void criterion_mela() {
  for (int k : {4, 8, 16}) {
    for (double eps : {0.25, 0.125, 0.0625}) {
      const MelaApproximation ma = mela_approximator(k, eps);
      const int m = static_cast<int>(std::ceil(std::log2(1.0 / eps)));
      const std::string at = " at k=" + std::to_string(k) + " eps=" + std::to_string(eps);
      require(ma.m == m, "m mismatch" + at);
      require(ma.sup_error <= eps + 1e-9, "sup error exceeds eps" + at);
      require(ma.h_norm <= 4.0 * m - 2.0 + 1e-9, "h norm cap fails" + at);
      require(ma.approx_norm <= ma.h_norm + 1.0 + 1e-9, "approx norm cap fails" + at);
      const double sup = linf_distance(ma.approx, hamming_ball(k).indicator());
      require(std::abs(sup - ma.sup_error) <= 1e-12, "reported sup error is off" + at);
    }
  }
}

void criterion_chebyshev() {
  for (int m = 2; m <= 12; ++m) {
    const ChebyshevWeights w = chebyshev_weights(m);
    require(w.eta.size() == m && w.sigma.size() == m, "size mismatch at m=" + std::to_string(m));
    for (int i = 0; i < m; ++i) {
      const double node = std::cos((m - 1 - i) * M_PI / (2.0 * m - 1.0));
      require(std::abs(w.eta[i] - node) <= 1e-12, "node formula fails at m=" + std::to_string(m));
    }
    for (int k = 1; k <= m; ++k) {
      long double moment = 0.0L;
      for (int i = 0; i < m; ++i)
        moment += std::pow(static_cast<long double>(w.eta[i]), 2 * k - 1) *
                  static_cast<long double>(w.sigma[i]);
      const long double want = (k == 1) ? 1.0L : 0.0L;
      require(std::abs(static_cast<double>(moment - want)) <= 1e-8,
              "moment k=" + std::to_string(k) + " off at m=" + std::to_string(m));
    }
    require(w.sigma_abs_sum <= 2.0 * m - 1.0 + 1e-8, "mass bound fails at m=" + std::to_string(m));
  }
  const ChebyshevWeights two = chebyshev_weights(2);
  require(std::abs(two.eta[0] - 0.5) <= 1e-12 && std::abs(two.eta[1] - 1.0) <= 1e-12,
          "m=2 nodes drifted");
  require(std::abs(two.sigma[0] - 8.0 / 3.0) <= 1e-12 && std::abs(two.sigma[1] + 1.0 / 3.0) <= 1e-12,
          "m=2 weights drifted");
  require(std::abs(two.sigma_abs_sum - 3.0) <= 1e-12, "m=2 mass drifted");
}

void criterion_lp() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(kDefaultSeed);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(testutil::below(rng, 6));
    const CubeFunction f = testutil::random_function(n, rng);
    const ApproxNormResult res = approx_spectral_norm(f, 0.0);
    const double exact = spectral_norm(f);
    require(std::abs(res.value - exact) <= 1e-6,
            "trial " + std::to_string(trial) + ": lp " + std::to_string(res.value) +
                " vs exact " + std::to_string(exact));
  }
  for (int k = 1; k <= 8; ++k) {
    const ApproxNormResult res = approx_spectral_norm(hamming_ball(k).indicator(), 0.25);
    const MelaApproximation ma = mela_approximator(k, 0.25);
    require(res.value <= ma.approx_norm + 1e-6,
            "ball k=" + std::to_string(k) + ": lp " + std::to_string(res.value) +
                " above witness " + std::to_string(ma.approx_norm));
  }
  const double elapsed = seconds_since(start);
  require(elapsed < 120.0, "took " + std::to_string(elapsed) + "s, cap is 120s");
}

void criterion_norm_one() {
  for (std::uint64_t mask = 1; mask < 256; ++mask) {
    const SubsetOfCube a = subset_from_mask(3, mask);
    const double norm = spectral_norm(a.indicator());
    if (is_affine_coset(a)) {
      require(std::abs(norm - 1.0) <= 1e-9,
              "coset mask " + std::to_string(mask) + " has norm " + std::to_string(norm));
    } else {
      require(norm > 1.0 + 1e-8,
              "non-coset mask " + std::to_string(mask) + " has norm " + std::to_string(norm));
    }
  }
}

void criterion_energy() {
  std::mt19937_64 rng(kDefaultSeed ^ 0xe6e6);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(testutil::below(rng, 8));
    const SubsetOfCube a = testutil::random_subset(n, rng);
    require(additive_energy(a) == energy_oracle(a),
            "energy mismatch on trial " + std::to_string(trial));
  }
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(testutil::below(rng, 5));
    Subspace w = Subspace::zero(n);
    const int gens = 1 + static_cast<int>(testutil::below(rng, static_cast<std::uint64_t>(n)));
    for (int i = 0; i < gens; ++i) {
      const point_t v = static_cast<point_t>(testutil::below(rng, cube_size(n)));
      if (v) w.insert(v);
    }
    SubsetOfCube s(n);
    for (point_t x : w.members()) s.insert(x);
    require(additive_energy(s) == w.size() * w.size() * w.size(),
            "subgroup energy is not |W|^3 on trial " + std::to_string(trial));
  }
}

void criterion_ring() {
  std::mt19937_64 rng(kDefaultSeed ^ 0x719);
  int members_seen = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(testutil::below(rng, 4));
    const int ell = 1 + static_cast<int>(testutil::below(rng, 3));
    std::vector<Coset> gens;
    for (int i = 0; i < ell; ++i) gens.push_back(random_coset(n, rng));
    const SubsetOfCube a =
        (trial % 2 == 0) ? atom_union(n, gens, rng) : testutil::random_subset(n, rng);
    const bool oracle = ring_oracle(a, gens);
    const auto got = ring_membership_decompose(a, gens);
    require(got.has_value() == oracle, "membership disagrees on trial " + std::to_string(trial));
    if (got) {
      ++members_seen;
      require(got->matches_indicator(a), "decomposition wrong on trial " + std::to_string(trial));
      std::uint64_t cap = 1;
      for (int i = 0; i < ell; ++i) cap *= 3;
      require(got->size() <= cap, "too many terms on trial " + std::to_string(trial));
    }
  }
  require(members_seen >= 40, "only " + std::to_string(members_seen) + " ring members exercised");
}

void criterion_large_coset() {
  std::mt19937_64 rng(kDefaultSeed ^ 0x8a);
  int checked = 0;
  while (checked < 40) {
    const int n = 2 + static_cast<int>(testutil::below(rng, 4));
    const int ell = 1 + static_cast<int>(testutil::below(rng, 3));
    std::vector<Coset> gens;
    for (int i = 0; i < ell; ++i) gens.push_back(random_coset(n, rng));
    const SubsetOfCube a = atom_union(n, gens, rng);
    if (a.size() == 0) continue;
    const Coset p = find_large_coset_inside(a, gens);
    for (point_t x : p.members())
      require(a.contains(x), "returned coset leaves the set (trial " + std::to_string(checked) + ")");
    require(p.size() << ell >= a.size(),
            "size bound fails: |P|=" + std::to_string(p.size()) + " ell=" + std::to_string(ell) +
                " |A|=" + std::to_string(a.size()));
    ++checked;
  }
}

void criterion_regularizer() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(kDefaultSeed ^ 0x9999);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(testutil::below(rng, 7));
    const CubeFunction f = testutil::random_function(n, rng);
    const double m_bound = spectral_norm(f) + 0.5;
    const Subspace v = Subspace::full(n);
    for (double delta : {0.1, 0.2, 0.5}) {
      const RegularizeResult r = regularize_subgroup(f, v, delta, m_bound);
      const std::string at = " (trial " + std::to_string(trial) + " delta " + std::to_string(delta) + ")";
      require(r.iterations == n - r.w.dim(), "iteration count is not the dimension drop" + at);
      require(r.iterations <= static_cast<int>(std::ceil(m_bound / delta)), "drop cap fails" + at);
      const auto wm = r.w.members();
      double worst = 0.0;
      for (point_t c : r.w.coset_reps()) {
        double sum = 0.0, sq = 0.0;
        for (point_t x : wm) {
          const double val = f[c ^ x];
          sum += val;
          sq += val * val;
        }
        const double mean = sum / static_cast<double>(wm.size());
        worst = std::max(worst, sq / static_cast<double>(wm.size()) - mean * mean);
      }
      require(worst <= delta * m_bound + 1e-9, "variance bound fails" + at);
      require(std::abs(worst - r.max_coset_variance) <= 1e-9, "reported variance is off" + at);
    }
  }
  const double elapsed = seconds_since(start);
  require(elapsed < 60.0, "took " + std::to_string(elapsed) + "s, cap is 60s");
}

void criterion_good_subgroup() {
  std::mt19937_64 rng(kDefaultSeed ^ 0x60d);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(testutil::below(rng, 5));
    Subspace v = Subspace::zero(n);
    while (v.dim() == 0) {
      const point_t g = static_cast<point_t>(testutil::below(rng, cube_size(n)));
      if (g) v.insert(g);
    }
    for (int extra = static_cast<int>(testutil::below(rng, 3)); extra > 0; --extra) {
      const point_t g = static_cast<point_t>(testutil::below(rng, cube_size(n)));
      if (g) v.insert(g);
    }
    const auto reps = v.coset_reps();
    const std::uint64_t mask =
        1 + testutil::below(rng, (std::uint64_t{1} << reps.size()) - 1);
    SubsetOfCube a(n);
    point_t a_rep = 0;
    bool rep_set = false;
    for (std::size_t i = 0; i < reps.size(); ++i) {
      if (!((mask >> i) & 1u)) continue;
      if (!rep_set) {
        a_rep = reps[i];
        rep_set = true;
      }
      for (point_t x : v.members()) a.insert(x ^ reps[i]);
    }
    const CubeFunction g = a.indicator();
    const double eps1 = 0.5 * static_cast<double>(v.size()) / static_cast<double>(a.size());
    const double m_bound = spectral_norm(g) + 0.01;
    const GoodSubgroupResult res =
        good_subgroup(a, g, 0.0, 0.25, v, a_rep, eps1, 0.5, m_bound);
    const std::string at = " (trial " + std::to_string(trial) + ")";
    require(res.w.dim() == v.dim(), "subgroup shrank on a clean union" + at);
    require(res.regularize_iterations == 0, "unexpected regularize iterations" + at);
    const auto wreps = res.w.coset_reps();
    require(res.densities.size() == wreps.size(), "density vector size mismatch" + at);
    std::set<point_t> dense_want, dense_got(res.f_w.begin(), res.f_w.end());
    for (std::size_t i = 0; i < wreps.size(); ++i) {
      const double want = a.contains(wreps[i]) ? 1.0 : 0.0;
      require(std::abs(res.densities[i] - want) <= 1e-12, "density off" + at);
      if (want == 1.0) dense_want.insert(wreps[i]);
    }
    require(dense_want == dense_got, "dense family mismatch" + at);
    if (!res.f_w_is_everything) {
      for (double nrm : res.restriction_reduced_norms)
        require(nrm <= 1e-9, "restriction norm should vanish" + at);
    }
  }
}

void criterion_quadratic() {
  const QuadraticReport q4 = quadratic_example(4, 0);
  require(q4.identity_tuples_checked == (std::uint64_t{1} << 20), "n=4 sweep is not exhaustive");
  require(std::abs(q4.norm - 2.25) <= 1e-12, "n=4 norm drifted");
  require(std::abs(q4.ratio - 0.5625) <= 1e-12, "n=4 ratio drifted");
  require(q4.support_verdict.has_value() && q4.complement_verdict.has_value(),
          "n=4 verdicts missing");
  for (int n : {6, 8, 10}) {
    const QuadraticReport q = quadratic_example(n, 10000, kDefaultSeed);
    require(q.identity_tuples_checked == 10000, "sample count off at n=" + std::to_string(n));
    require(q.ratio >= 0.25 && q.ratio <= 4.0, "ratio window fails at n=" + std::to_string(n));
    if (n <= 8)
      require(q.support_verdict.has_value() && q.complement_verdict.has_value(),
              "verdicts missing at n=" + std::to_string(n));
  }
}

void criterion_suite() {
  SuiteOptions options;
  options.families = {"all-subsets"};
  options.k = 2;
  options.exhaustive_n = 4;
  const SuiteReport report = dichotomy_suite(options);
  require(report.total_sets >= 65536, "exhaustive family is too small");
  require(report.total_violations == 0,
          std::to_string(report.total_violations) + " violations in the exhaustive sweep");
}

void criterion_tower() {
  for (double eps : {0.0, 0.25}) {
    for (int k = 1; k <= 4; ++k) {
      for (int m = 1; m <= 4; ++m) {
        for (int r = 1; r <= 4; ++r) {
          for (int t = 1; t <= 4; ++t) {
            const TowerBound b = tower_bound(k, m, r, t, eps);
            if (m == 1 && r <= k)
              require(b.value.to_string() == "1",
                      "base case fails at k=" + std::to_string(k) + " r=" + std::to_string(r));
            if (t < 4) {
              const TowerBound bigger = tower_bound(k, m, r, t + 1, eps);
              require(compare(b.value, bigger.value) <= 0, "not monotone in t");
            }
            if (r < 4) {
              const TowerBound bigger = tower_bound(k, m, r + 1, t, eps);
              require(compare(b.value, bigger.value) <= 0, "not monotone in r");
            }
          }
        }
        const TowerBound one_arg = tower_bound(k, m, 0.0);
        const TowerBound spelled = tower_bound(k, m, k + 1, 1, 0.0);
        require(compare(one_arg.value, spelled.value) == 0,
                "one-arg form disagrees at k=" + std::to_string(k) + " m=" + std::to_string(m));
        if (m > 1) {
          const TowerBound prev = tower_bound(k, m - 1, 0.0);
          require(compare(prev.value, one_arg.value) <= 0, "not monotone in m");
        }
      }
    }
  }
  require(tower_bound(1, 1, 2, 1, 0.0).value.to_string() == "18446744073709551616",
          "k=1 m=1 r=2 value drifted");
  require(tower_bound(3, 2, 4, 1, 0.25).value.to_string() == "tower_16(8)",
          "k=3 m=2 r=4 value drifted");
}

std::string determinism_report() {
  ReportBuilder builder("acceptance-determinism", {"--seed", "7"}, RunConfig{});
  SuiteOptions options;
  options.families = {"random", "coset-rings"};
  options.random_n = 5;
  options.random_count = 30;
  options.seed = 7;
  const SuiteReport suite = dichotomy_suite(options);
  builder.results()["suite"] = to_json(suite);
  const SubsetOfCube ball = hamming_ball(4);
  const DecomposeResult dec = decompose_experimental(ball, ball.indicator(), 0.0, 3);
  builder.results()["decompose"] = dec.trace;
  builder.add_assertion("suite has no violations", suite.total_violations == 0);
  builder.add_assertion("decomposition succeeded", dec.success);
  builder.add_timing("wall", seconds_since(std::chrono::steady_clock::now() -
                                           std::chrono::seconds(1)));
  nlohmann::json report = builder.finish();
  require(builder.all_passed(), "a determinism sub-check failed outright");
  report.erase("timings");
  return report.dump();
}

void criterion_determinism() {
  const std::string first = determinism_report();
  const std::string second = determinism_report();
  require(first == second, "reports differ after erasing timings");
}

}  // namespace

int main() {
  criterion(1, "ball norm bounds for k = 1..16 inside one second", criterion_ball_norms);
  criterion(2, "low-norm ball approximators across k and epsilon", criterion_mela);
  criterion(3, "chebyshev weight systems for m = 2..12", criterion_chebyshev);
  criterion(4, "lp norm matches the exact value and the constructive witness", criterion_lp);
  criterion(5, "norm is one exactly for cosets, larger otherwise (n = 3)", criterion_norm_one);
  criterion(6, "additive energy equals the quadruple count", criterion_energy);
  criterion(7, "ring membership decompositions against the atom oracle", criterion_ring);
  criterion(8, "large coset inside every ring member", criterion_large_coset);
  criterion(9, "regularizer variance and dimension-drop postconditions", criterion_regularizer);
  criterion(10, "subgroup procedure on unions of cosets", criterion_good_subgroup);
  criterion(11, "quadratic example identities, norm window, connectivity", criterion_quadratic);
  criterion(12, "dichotomy suite over every subset up to n = 4", criterion_suite);
  criterion(13, "tower bound base cases, one-arg identity, monotonicity", criterion_tower);
  criterion(14, "byte-identical reports once timings are erased", criterion_determinism);

  if (failures == 0) {
    std::printf("all 14 acceptance criteria passed\n");
    return 0;
  }
  std::printf("%d acceptance criteria failed\n", failures);
  return 1;
}
