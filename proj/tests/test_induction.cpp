#include <doctest.h>

#include <gmpxx.h>

#include <string>
#include <vector>

#include "cubespec/constructions.hpp"
#include "cubespec/errors.hpp"
#include "cubespec/induction.hpp"
#include "cubespec/tower.hpp"

using namespace cubespec;

TEST_CASE("tower values materialize until the digit cap") {
  CHECK(tower(2, 0).to_string() == "1");
  CHECK(tower(2, 1).to_string() == "2");
  CHECK(tower(2, 3).to_string() == "16");
  CHECK(tower(2, 4).to_string() == "65536");
  CHECK(tower(16, 2).to_string() == "18446744073709551616");
  // 2^65536 has 19729 decimal digits; still under the default cap.
  const TowerValue big = tower(2, 5);
  REQUIRE(big.materialized());
  CHECK(big.to_string().size() == 19729);
  // With a tiny cap the same value stays symbolic.
  const TowerValue sym = tower(2, 5, 10);
  CHECK_FALSE(sym.materialized());
  CHECK(sym.to_string() == "tower_2(5)");

  CHECK_THROWS_AS(tower(1, 3), UsageError);
  CHECK_THROWS_AS(tower(2, -1), UsageError);
}

TEST_CASE("log star fixtures") {
  CHECK(log_star(16, mpz_class(1)) == 0);
  CHECK(log_star(16, mpz_class(2)) == 1);
  CHECK(log_star(16, mpz_class(16)) == 1);
  CHECK(log_star(16, mpz_class(17)) == 2);
  const mpz_class two64 = mpz_class(1) << 64;  // = 16^16 = tower_16(2)
  CHECK(log_star(16, two64) == 2);
  CHECK(log_star(16, two64 + 1) == 3);
  CHECK(log_star(2, mpz_class(65536)) == 4);
  CHECK_THROWS_AS(log_star(16, mpz_class(0)), UsageError);

  // Symbolic values use the height directly.
  CHECK(log_star(2, tower(2, 5, 10)) == 5);
  CHECK(log_star(16, tower(16, 7, 1)) == 7);
}

TEST_CASE("tower comparison is exact across representations") {
  CHECK(compare(tower(2, 3), tower(2, 4)) == -1);
  CHECK(compare(tower(2, 4), tower(2, 4)) == 0);
  CHECK(compare(tower(2, 4), tower(2, 3)) == 1);
  // Symbolic against symbolic of the same base: heights decide.
  CHECK(compare(tower(2, 9, 1), tower(2, 8, 1)) == 1);
  CHECK(compare(tower(2, 9, 1), tower(2, 9, 1)) == 0);
  // Symbolic against materialized of the same base re-materializes.
  CHECK(compare(tower(2, 4, 1), tower(2, 4)) == 0);
  CHECK(compare(tower(2, 5, 3), tower(2, 4)) == 1);
  // Mixed-base comparisons only work with both sides materialized.
  CHECK(compare(tower(2, 4), tower(3, 2)) == 1);  // 65536 vs 27
  CHECK_THROWS_AS(compare(tower(2, 40, 1), tower(3, 40, 1)), UsageError);
}

TEST_CASE("recursive bound base cases and the one-parameter identity") {
  // m = 1 with r <= k is the anchor of the recursion.
  for (int k = 1; k <= 4; ++k) {
    for (int r = 1; r <= k; ++r) {
      for (int t = 1; t <= 4; ++t) {
        const auto b = tower_bound(k, 1, r, t, 0.0);
        CHECK(b.value.materialized());
        CHECK(b.value.to_string() == "1");
      }
    }
  }
  // First nontrivial rung: m = 1, r = k+1, t = 1 gives tower_16(k+1).
  {
    const auto b = tower_bound(1, 1, 2, 1, 0.0);
    REQUIRE(b.value.materialized());
    CHECK(b.value.to_string() == "18446744073709551616");
  }
  // The worked example: k = 3, m = 2, r = 4, t = 1.
  {
    const auto b = tower_bound(3, 2, 4, 1, 0.25);
    CHECK_FALSE(b.value.materialized());
    CHECK(b.value.base == 16);
    CHECK(b.value.height == 8);
    CHECK(b.value.to_string() == "tower_16(8)");
  }
  // ell(m) is by definition ell(m, k+1, 1).
  for (int k = 1; k <= 4; ++k) {
    for (int m = 1; m <= 4; ++m) {
      const auto full = tower_bound(k, m, k + 1, 1, 0.0);
      const auto one = tower_bound(k, m, 0.0);
      CHECK(compare(full.value, one.value) == 0);
    }
  }
  // Monotone in each argument on a few spot pairs.
  CHECK(compare(tower_bound(2, 1, 0.0).value, tower_bound(2, 2, 0.0).value) <= 0);
  CHECK(compare(tower_bound(2, 2, 3, 1, 0.0).value, tower_bound(2, 2, 3, 5, 0.0).value) <= 0);
  CHECK(compare(tower_bound(2, 2, 2, 1, 0.0).value, tower_bound(2, 2, 3, 1, 0.0).value) <= 0);

  CHECK_THROWS_AS(tower_bound(0, 1, 1, 1, 0.0), UsageError);
  CHECK_THROWS_AS(tower_bound(1, 0, 1, 1, 0.0), UsageError);
  CHECK_THROWS_AS(tower_bound(1, 1, 0, 1, 0.0), UsageError);
  CHECK_THROWS_AS(tower_bound(1, 1, 1, 0, 0.0), UsageError);
  CHECK_THROWS_AS(tower_bound(1, 1, 1, 1, 0.5), UsageError);
}

TEST_CASE("obstruction sets deduplicate cosets by their canonical form") {
  ObstructionSet x = ObstructionSet::origin(4);
  CHECK(x.count() == 1);
  CHECK(x.contains(0));
  CHECK_FALSE(x.contains(1));

  const Subspace w = Subspace::from_generators(4, std::vector<point_t>{1, 2});
  CHECK(x.add(Coset(w, 5)));
  CHECK_FALSE(x.add(Coset(w, 6)));  // 5 and 6 generate the same coset
  CHECK(x.count() == 2);
  for (point_t p : {0, 4, 5, 6, 7}) CHECK(x.contains(static_cast<point_t>(p)));
  CHECK_FALSE(x.contains(8));

  // Materialized view equals the union of the listed cosets.
  SubsetOfCube manual(4);
  manual.insert(0);
  for (point_t p : Coset(w, 5).members()) manual.insert(p);
  CHECK(x.materialized() == manual);

  CHECK_THROWS_AS(ObstructionSet(25), UsageError);
  CHECK_THROWS_AS(x.add(Coset::singleton(3, 0)), UsageError);
}

namespace {

PropertyLedger hyperplane_ledger() {
  PropertyLedger led;
  led.a = SubsetOfCube(3, std::vector<point_t>{1, 3, 5, 7});
  led.g = led.a.indicator();
  led.k = 2;
  led.m = 2;
  led.r = 3;
  led.t = 1;
  led.epsilon = 0.0;
  led.x = ObstructionSet::origin(3);
  return led;
}

}  // namespace

TEST_CASE("property ledger holds on a hyperplane coset") {
  const auto rep = verify_property_ledger(hyperplane_ledger());
  CHECK(rep.holds);
  CHECK(rep.set_connected);
  CHECK(rep.complement_connected);
  CHECK(rep.sup_distance == doctest::Approx(0.0));
  CHECK(rep.reduced_norm == doctest::Approx(0.5));
  CHECK(rep.reduced_norm_cap == doctest::Approx(0.5));
  CHECK(rep.norms_ok);
  CHECK(rep.shape_ok);
  CHECK(rep.restriction_norms_ok);
  CHECK(rep.worst_restriction_norm == doctest::Approx(0.0));
  CHECK(rep.tuples_exhaustive);
  CHECK(rep.tuple_clause_ok);
  CHECK(rep.tuples_checked == 64);  // |A \ X|^r = 4^3
  CHECK(rep.violating_tuple.empty());
}

TEST_CASE("property ledger pins the first violating tuple on the ball") {
  PropertyLedger led;
  led.a = SubsetOfCube(3, std::vector<point_t>{0, 1, 2, 4});
  led.g = led.a.indicator();
  led.k = 2;
  led.m = 4;  // reduced norm of the ball indicator is exactly 1
  led.r = 3;
  led.t = 1;
  led.epsilon = 0.0;
  led.x = ObstructionSet::origin(3);

  const auto rep = verify_property_ledger(led);
  CHECK_FALSE(rep.holds);
  CHECK_FALSE(rep.set_connected);  // the ball is the canonical 2-disconnected set
  CHECK(rep.norms_ok);
  CHECK(rep.reduced_norm == doctest::Approx(1.0));
  CHECK_FALSE(rep.tuple_clause_ok);
  CHECK(rep.tuples_exhaustive);
  CHECK(rep.violating_tuple == std::vector<point_t>{1, 2, 4});
}

TEST_CASE("property ledger tuple clause is vacuous when X swallows A") {
  PropertyLedger led;
  led.a = SubsetOfCube(3, std::vector<point_t>{0});
  led.g = led.a.indicator();
  led.k = 2;
  led.m = 4;
  led.r = 3;
  led.t = 1;
  led.epsilon = 0.0;
  led.x = ObstructionSet::origin(3);

  const auto rep = verify_property_ledger(led);
  CHECK(rep.tuple_vacuous);
  CHECK(rep.tuples_exhaustive);
  CHECK(rep.tuple_clause_ok);
  CHECK(rep.tuples_checked == 0);
  CHECK(rep.set_connected);
  // Every all-distinct triple of nonzero points with x + y + z = 0 violates
  // connectivity of the complement, so the overall verdict still fails.
  CHECK_FALSE(rep.complement_connected);
  CHECK_FALSE(rep.holds);
}

TEST_CASE("property ledger reports shape failures as text") {
  PropertyLedger led = hyperplane_ledger();
  led.k = 1;
  led.r = 3;
  led.t = 5;
  const auto rep = verify_property_ledger(led);
  CHECK_FALSE(rep.shape_ok);
  bool saw_r = false, saw_t = false;
  for (const std::string& s : rep.shape_failures) {
    if (s == "r exceeds k+1") saw_r = true;
    if (s == "t does not match the coset list") saw_t = true;
  }
  CHECK(saw_r);
  CHECK(saw_t);
  CHECK_FALSE(rep.holds);
}

TEST_CASE("property ledger sweeps fall back to sampling deterministically") {
  const PropertyLedger led = hyperplane_ledger();
  SamplingPolicy policy;
  policy.exhaustive_budget = 1;
  policy.mc_samples = 200;
  policy.seed = 42;
  const auto r1 = verify_property_ledger(led, policy);
  const auto r2 = verify_property_ledger(led, policy);
  CHECK_FALSE(r1.tuples_exhaustive);
  CHECK(r1.tuples_checked == 200);
  CHECK(r1.tuple_clause_ok);
  CHECK(r1.tuples_checked == r2.tuples_checked);
  CHECK(r1.holds == r2.holds);

  policy.mc_samples = 0;
  CHECK_THROWS_AS(verify_property_ledger(led, policy), CapabilityError);
}

TEST_CASE("property ledger validates its parameters") {
  PropertyLedger led = hyperplane_ledger();
  led.k = 0;
  CHECK_THROWS_AS(verify_property_ledger(led), UsageError);
  led = hyperplane_ledger();
  led.r = 21;
  CHECK_THROWS_AS(verify_property_ledger(led), UsageError);
  led = hyperplane_ledger();
  led.m = 0;
  CHECK_THROWS_AS(verify_property_ledger(led), UsageError);
  led = hyperplane_ledger();
  led.epsilon = 0.5;
  CHECK_THROWS_AS(verify_property_ledger(led), UsageError);
  led = hyperplane_ledger();
  led.x = ObstructionSet::origin(4);
  CHECK_THROWS_AS(verify_property_ledger(led), UsageError);
}

TEST_CASE("case probe counts xor powers exactly on the ball") {
  // A \ X is the four unit vectors of F_2^4.
  const SubsetOfCube a(4, std::vector<point_t>{0, 1, 2, 4, 8});
  const auto rep = case_probe(a, ObstructionSet::origin(4), 4);
  CHECK(rep.threshold == doctest::Approx(0.03125));
  CHECK_FALSE(rep.vacuous);

  // case one probes d = 3 only; sums with a repeated point collapse back
  // into the basis, giving 40 of the 64 ordered triples.
  REQUIRE(rep.case_one.size() == 1);
  CHECK(rep.case_one[0].d == 3);
  CHECK(rep.case_one[0].exhaustive);
  CHECK(rep.case_one[0].hits == 40);
  CHECK(rep.case_one[0].total == 64);
  CHECK(rep.case_one[0].clears_threshold);
  CHECK(rep.case_one_clears);

  // case two at d = 2 hits the origin exactly when the two draws coincide.
  REQUIRE(rep.case_two.size() == 4);
  CHECK(rep.case_two[1].d == 2);
  CHECK(rep.case_two[1].hits == 4);
  CHECK(rep.case_two[1].total == 16);
  CHECK(rep.case_two[1].probability == doctest::Approx(0.25));
  CHECK(rep.case_two[1].clears_threshold);
  CHECK(rep.case_two_clears);
  // Odd powers of the residual set never return to the origin here.
  CHECK(rep.case_two[0].hits == 0);
  CHECK(rep.case_two[2].hits == 0);
}

TEST_CASE("case probe on a coset avoiding the origin") {
  const SubsetOfCube a(3, std::vector<point_t>{1, 3, 5, 7});
  const auto rep = case_probe(a, ObstructionSet::origin(3), 3);
  REQUIRE(rep.case_one.size() == 1);
  CHECK(rep.case_one[0].probability == doctest::Approx(1.0));
  CHECK(rep.case_one[0].hits == rep.case_one[0].total);
  CHECK(rep.case_one_clears);
  // Even sums land uniformly in the subgroup; only coinciding pairs reach
  // the origin, which is all the obstruction holds.
  CHECK(rep.case_two[1].hits == rep.case_two[1].total / 4);

  // Obstruction swallowing everything makes the probe vacuous.
  ObstructionSet x(3);
  x.add(Coset::full_cube(3));
  const auto vac = case_probe(a, x, 3);
  CHECK(vac.vacuous);
  CHECK(vac.case_one.empty());
  CHECK(vac.case_two.empty());
}

TEST_CASE("case probe sampling is deterministic under a fixed seed") {
  const SubsetOfCube a(4, std::vector<point_t>{0, 1, 2, 4, 8, 3, 5});
  SamplingPolicy policy;
  policy.exhaustive_budget = 1;
  policy.mc_samples = 300;
  policy.seed = 99;
  const auto r1 = case_probe(a, ObstructionSet::origin(4), 3, policy);
  const auto r2 = case_probe(a, ObstructionSet::origin(4), 3, policy);
  REQUIRE(r1.case_one.size() == r2.case_one.size());
  REQUIRE(r1.case_two.size() == r2.case_two.size());
  for (std::size_t i = 0; i < r1.case_one.size(); ++i) {
    CHECK_FALSE(r1.case_one[i].exhaustive);
    CHECK(r1.case_one[i].hits == r2.case_one[i].hits);
    CHECK(r1.case_one[i].total == 300);
  }
  for (std::size_t i = 0; i < r1.case_two.size(); ++i) {
    CHECK(r1.case_two[i].hits == r2.case_two[i].hits);
  }

  policy.mc_samples = 0;
  CHECK_THROWS_AS(case_probe(a, ObstructionSet::origin(4), 3, policy), CapabilityError);
  CHECK_THROWS_AS(case_probe(a, ObstructionSet::origin(4), 0), UsageError);
  CHECK_THROWS_AS(case_probe(a, ObstructionSet::origin(3), 3), UsageError);
}

TEST_CASE("augmenting the obstruction around a dense coset") {
  // A is one W-coset; starting from X = {0} the census lists exactly the
  // four singleton cosets of W + c0, and every cap is tight.
  const int n = 4;
  const Subspace w = Subspace::from_generators(n, std::vector<point_t>{1, 2});
  const SubsetOfCube a(n, std::vector<point_t>{4, 5, 6, 7});
  const CubeFunction g = a.indicator();
  const ObstructionSet x = ObstructionSet::origin(n);
  const std::vector<point_t> f_w{4};

  const auto res = augment_obstruction(a, g, x, w, f_w, 4, 2, 0.1, 3);
  CHECK(res.gamma == doctest::Approx(0.0625));
  CHECK(res.t_before == 1);
  CHECK(res.t_after == 7);
  CHECK(res.t_cap == 7);
  REQUIRE(res.census.size() == 1);
  REQUIRE(res.census[0].size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(res.census[0][i].offset == static_cast<point_t>(4 + i));
    CHECK(res.census[0][i].count == 1);
  }
  CHECK(res.restriction_norm_c0 == doctest::Approx(0.0));
  CHECK(res.union_bound_evaluated);
  CHECK(res.union_bound_value == doctest::Approx(0.75));
  CHECK(res.union_bound_ok);
  // X' = {0} u W u (W+4) u the four singletons: materialized {0..7}.
  for (point_t p = 0; p < 8; ++p) CHECK(res.x_prime.contains(p));
  CHECK_FALSE(res.x_prime.contains(8));

  CHECK_THROWS_AS(augment_obstruction(a, g, x, w, f_w, 1, 2), UsageError);  // c0 outside W+F_W
  CHECK_THROWS_AS(augment_obstruction(a, g, x, w, {}, 4, 2), UsageError);
  CHECK_THROWS_AS(augment_obstruction(a, g, x, w, f_w, 4, 0), UsageError);
  CHECK_THROWS_AS(augment_obstruction(a, g, ObstructionSet(n), w, f_w, 4, 2), UsageError);
  // Density hypothesis: W+8 misses A entirely.
  CHECK_THROWS_AS(augment_obstruction(a, g, x, w, {8}, 8, 2, 0.1, std::nullopt), UsageError);
}

TEST_CASE("decompose reproduces single cosets and the empty set directly") {
  {
    const Coset c(Subspace::from_generators(4, std::vector<point_t>{3, 12}), 5);
    const SubsetOfCube a(4, c.members());
    const auto res = decompose_experimental(a, a.indicator(), 0.0, 2);
    CHECK(res.success);
    REQUIRE(res.decomposition.has_value());
    CHECK(res.decomposition->size() == 1);
    CHECK(res.decomposition->matches_indicator(a));
    CHECK(res.trace["root"]["outcome"] == "single coset");
  }
  {
    const SubsetOfCube a(3);
    const auto res = decompose_experimental(a, a.indicator(), 0.0, 2);
    CHECK(res.success);
    CHECK(res.decomposition->size() == 0);
    CHECK(res.trace["root"]["outcome"] == "empty set");
  }
  {
    const SubsetOfCube a = SubsetOfCube::full(3);
    const auto res = decompose_experimental(a, a.indicator(), 0.0, 2);
    CHECK(res.success);
    CHECK(res.decomposition->size() == 1);  // the full cube is itself a coset
  }
}

TEST_CASE("decompose splits a union of cosets through the subgroup step") {
  // Three cosets of span{1} avoiding the origin; case I fires and one
  // augmentation covers everything.
  const SubsetOfCube a(4, std::vector<point_t>{4, 5, 6, 7, 12, 13});
  const auto res = decompose_experimental(a, a.indicator(), 0.0, 2);
  CHECK(res.success);
  REQUIRE(res.decomposition.has_value());
  CHECK(res.decomposition->matches_indicator(a));
  CHECK(res.decomposition->size() == 3);
  REQUIRE(res.trace["root"]["rounds"].size() >= 1);
  CHECK(res.trace["root"]["rounds"][0]["case"] == "I");
}

TEST_CASE("decompose absorbs origin-containing sets point by point") {
  // With 0 in A the residual A\X can never stay within epsilon of g, so the
  // subgroup step is blocked and every round falls through to case II.
  const SubsetOfCube a(4, std::vector<point_t>{0, 1, 2, 3, 4, 5});
  const auto res = decompose_experimental(a, a.indicator(), 0.0, 2);
  CHECK(res.success);
  CHECK(res.decomposition->matches_indicator(a));
  CHECK(res.decomposition->size() == 6);
  const auto& rounds = res.trace["root"]["rounds"];
  REQUIRE(rounds.size() >= 1);
  CHECK(rounds[0]["case"] == "II");
}

TEST_CASE("decompose flips to the complement when A covers most of the cube") {
  // The complement {6, 7} is a single coset, so the flipped answer is the
  // full cube minus that coset.
  const SubsetOfCube a(3, std::vector<point_t>{0, 1, 2, 3, 4, 5});
  const auto res = decompose_experimental(a, a.indicator(), 0.0, 2);
  CHECK(res.success);
  CHECK(res.decomposition->matches_indicator(a));
  CHECK(res.decomposition->size() == 2);
  CHECK(res.trace["root"]["complemented"] == true);
  CHECK(res.trace["root"]["complement"]["outcome"] == "single coset");
}

TEST_CASE("decompose handles the ball through case two") {
  const SubsetOfCube a(4, std::vector<point_t>{0, 1, 2, 4, 8});
  const auto res = decompose_experimental(a, a.indicator(), 0.0, 3);
  CHECK(res.success);
  CHECK(res.decomposition->matches_indicator(a));
  CHECK(res.decomposition->size() == 5);
}

TEST_CASE("decompose traces are deterministic and budgets are respected") {
  const SubsetOfCube a(4, std::vector<point_t>{4, 5, 6, 7, 12, 13});
  const auto r1 = decompose_experimental(a, a.indicator(), 0.0, 2);
  const auto r2 = decompose_experimental(a, a.indicator(), 0.0, 2);
  CHECK(r1.trace.dump() == r2.trace.dump());
  CHECK(r1.trace["steps"] == r2.trace["steps"]);

  DecomposeOptions opts;
  opts.budget = 0;
  const auto starved = decompose_experimental(a, a.indicator(), 0.0, 2, opts);
  CHECK_FALSE(starved.success);
  CHECK(starved.failure_reason == "work budget exhausted");
}

TEST_CASE("decompose validates its inputs") {
  const SubsetOfCube a(3, std::vector<point_t>{1, 2});
  const CubeFunction g = a.indicator();
  CHECK_THROWS_AS(decompose_experimental(SubsetOfCube(7), CubeFunction(7, Side::Point), 0.0, 2),
                  CapabilityError);
  CHECK_THROWS_AS(decompose_experimental(a, g, 0.5, 2), UsageError);
  CHECK_THROWS_AS(decompose_experimental(a, g, -0.1, 2), UsageError);
  CHECK_THROWS_AS(decompose_experimental(a, g, 0.0, 0), UsageError);
  CHECK_THROWS_AS(decompose_experimental(a, g, 0.0, 7), UsageError);
  CHECK_THROWS_AS(decompose_experimental(a, CubeFunction(4, Side::Point), 0.0, 2), UsageError);
  DecomposeOptions opts;
  opts.depth_cap = 0;
  CHECK_THROWS_AS(decompose_experimental(a, g, 0.0, 2, opts), UsageError);
  opts.depth_cap = 5;
  opts.k_exponent = 9;
  CHECK_THROWS_AS(decompose_experimental(a, g, 0.0, 2, opts), UsageError);
}
