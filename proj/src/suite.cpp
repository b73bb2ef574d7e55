#include "cubespec/suite.hpp"

#include <algorithm>
#include <bit>
#include <random>

#include "cubespec/constructions.hpp"
#include "cubespec/errors.hpp"
#include "cubespec/json_io.hpp"
#include "cubespec/ring.hpp"

namespace cubespec {

namespace {

struct BitSampler {
  std::mt19937_64 rng;

  explicit BitSampler(std::uint64_t seed) : rng(seed) {}

  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t mask = std::bit_ceil(bound) - 1;
    for (;;) {
      const std::uint64_t v = rng() & mask;
      if (v < bound) return v;
    }
  }
};

SubsetOfCube set_from_mask(int n, std::uint64_t mask) {
  SubsetOfCube a(n);
  for (std::uint64_t p = 0; p < cube_size(n); ++p) {
    if (mask & (std::uint64_t{1} << p)) a.insert(static_cast<point_t>(p));
  }
  return a;
}

struct FamilyRunner {
  const SuiteOptions& opts;
  FamilySummary summary;

  void check(const SubsetOfCube& a, const std::string& label) {
    ++summary.sets;
    try {
      const DichotomyReport rep = dichotomy_lower_bound_check(a, opts.k, opts.budget);
      if (!rep.vacuous) ++summary.bound_applicable;
    } catch (const VerificationError& err) {
      ++summary.violations;
      if (summary.violating.size() < 10) {
        summary.violating.push_back(
            nlohmann::json{{"label", label}, {"set", to_json(a)}, {"claim", err.what()}});
      }
    }
  }
};

}  // namespace

nlohmann::json to_json(const SuiteReport& r) {
  nlohmann::json families = nlohmann::json::array();
  for (const FamilySummary& f : r.families) {
    families.push_back(nlohmann::json{{"family", f.family},
                                      {"sets", f.sets},
                                      {"bound_applicable", f.bound_applicable},
                                      {"violations", f.violations},
                                      {"violating", f.violating}});
  }
  return nlohmann::json{{"k", r.k},
                        {"seed", r.seed},
                        {"families", std::move(families)},
                        {"total_sets", r.total_sets},
                        {"total_violations", r.total_violations}};
}

SuiteReport dichotomy_suite(const SuiteOptions& options) {
  static const std::vector<std::string> kKnown = {"all-subsets", "random",      "balls",
                                                  "cosets",      "coset-rings", "quadratic"};
  std::vector<std::string> families = options.families.empty() ? kKnown : options.families;
  for (const std::string& f : families) {
    if (std::find(kKnown.begin(), kKnown.end(), f) == kKnown.end()) {
      throw UsageError("dichotomy_suite: unknown family " + f);
    }
  }
  if (options.k < 1 || options.k > 6) throw UsageError("dichotomy_suite: k must be in [1, 6]");
  if (options.exhaustive_n < 1 || options.exhaustive_n > 4) {
    throw UsageError("dichotomy_suite: exhaustive_n must be in [1, 4]");
  }
  if (options.random_n < 1 || options.random_n > 6) {
    throw UsageError("dichotomy_suite: random_n must be in [1, 6]");
  }
  if (options.ball_k_max < 1 || options.ball_k_max > 8) {
    throw UsageError("dichotomy_suite: ball_k_max must be in [1, 8]");
  }
  if (options.coset_n < 1 || options.coset_n > 4) {
    throw UsageError("dichotomy_suite: coset_n must be in [1, 4]");
  }

  SuiteReport report;
  report.k = options.k;
  report.seed = options.seed;

  for (const std::string& family : families) {
    FamilyRunner runner{options, FamilySummary{}, };
    runner.summary.family = family;

    if (family == "all-subsets") {
      for (int n = 1; n <= options.exhaustive_n; ++n) {
        const std::uint64_t masks = std::uint64_t{1} << cube_size(n);
        for (std::uint64_t mask = 0; mask < masks; ++mask) {
          runner.check(set_from_mask(n, mask),
                       "n=" + std::to_string(n) + " mask=" + std::to_string(mask));
        }
      }
    } else if (family == "random") {
      BitSampler sampler(options.seed);
      const int n = options.random_n;
      const std::uint64_t mask_bits =
          cube_size(n) == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << cube_size(n)) - 1;
      for (std::uint64_t i = 0; i < options.random_count; ++i) {
        runner.check(set_from_mask(n, sampler.rng() & mask_bits), "sample=" + std::to_string(i));
      }
    } else if (family == "balls") {
      for (int j = 1; j <= options.ball_k_max; ++j) {
        runner.check(hamming_ball(j), "radius-one ball in dimension " + std::to_string(j));
      }
    } else if (family == "cosets") {
      const int n = options.coset_n;
      for (const Coset& c : enumerate_cosets(n)) {
        SubsetOfCube a(n);
        for (point_t p : c.members()) a.insert(p);
        runner.check(a, "coset dim=" + std::to_string(c.dim()));
      }
    } else if (family == "coset-rings") {
      BitSampler sampler(options.seed);
      const int n = options.coset_n;
      for (std::uint64_t i = 0; i < options.random_count; ++i) {
        SubsetOfCube a(n);
        for (int piece = 0; piece < 2; ++piece) {
          const int dim = static_cast<int>(sampler.below(static_cast<std::uint64_t>(n) + 1));
          std::vector<point_t> gens;
          for (int d = 0; d < dim; ++d) {
            gens.push_back(static_cast<point_t>(sampler.below(cube_size(n))));
          }
          const point_t rep = static_cast<point_t>(sampler.below(cube_size(n)));
          for (point_t p : Coset(Subspace::from_generators(n, gens), rep).members()) a.insert(p);
        }
        runner.check(a, "sample=" + std::to_string(i));
      }
    } else if (family == "quadratic") {
      for (int n = 4; n <= 8; n += 2) {
        const QuadraticReport q = quadratic_example(n, 0, options.seed, options.budget);
        SubsetOfCube a(n);
        for (std::uint64_t p = 0; p < cube_size(n); ++p) {
          if (q.f.values()[static_cast<Eigen::Index>(p)] > 0.5) a.insert(static_cast<point_t>(p));
        }
        runner.check(a, "quadratic n=" + std::to_string(n));
      }
    }

    report.total_sets += runner.summary.sets;
    report.total_violations += runner.summary.violations;
    report.families.push_back(std::move(runner.summary));
  }
  return report;
}

}  // namespace cubespec
