#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "cubespec/approx_norm.hpp"
#include "cubespec/connectivity.hpp"
#include "cubespec/constructions.hpp"
#include "cubespec/cube_function.hpp"
#include "cubespec/errors.hpp"
#include "cubespec/induction.hpp"
#include "cubespec/json_io.hpp"
#include "cubespec/report.hpp"
#include "cubespec/ring.hpp"
#include "cubespec/structure.hpp"
#include "cubespec/suite.hpp"
#include "cubespec/tower.hpp"

namespace {

using namespace cubespec;

// Norm-like values print with an explicit decimal point so integral results
// still read as floating point.
std::string decimal(double x) {
  std::string s = format_double(x);
  if (s.find_first_of(".eE") == std::string::npos &&
      s.find_first_not_of("-0123456789") == std::string::npos) {
    s += ".0";
  }
  return s;
}

// Any of the three set-like shapes, taken as a point-side 0/1 function.
CubeFunction load_function_like(const std::string& path, ReportBuilder& rb) {
  const nlohmann::json j = load_json_file(path);
  rb.add_input(path);
  if (j.contains("values")) return cube_function_from_json(j);
  if (j.contains("basis")) {
    const Coset c = coset_from_json(j);
    SubsetOfCube a(c.n());
    for (point_t p : c.members()) a.insert(p);
    return a.indicator();
  }
  return subset_from_json(j).indicator();
}

SubsetOfCube load_set(const std::string& path, ReportBuilder& rb) {
  const nlohmann::json j = load_json_file(path);
  rb.add_input(path);
  if (j.contains("basis")) {
    const Coset c = coset_from_json(j);
    SubsetOfCube a(c.n());
    for (point_t p : c.members()) a.insert(p);
    return a;
  }
  return subset_from_json(j);
}

CubeFunction load_function(const std::string& path, ReportBuilder& rb) {
  const nlohmann::json j = load_json_file(path);
  rb.add_input(path);
  return cube_function_from_json(j);
}

struct Shared {
  RunConfig config;
  std::string report_path;  // empty: <out_dir>/report-<command>.json
  std::vector<std::string> argv;
  int exit_code = 0;

  void run(const std::string& name, const std::function<void(ReportBuilder&)>& body) {
    ReportBuilder rb(name, argv, config);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      body(rb);
    } catch (const VerificationError& e) {
      rb.add_assertion("no verification failures", false, {{"error", e.what()}});
      std::cerr << "verification: " << e.what() << '\n';
    } catch (const SolverError& e) {
      rb.add_assertion("solver succeeded", false, {{"error", e.what()}});
      std::cerr << "solver: " << e.what() << '\n';
    }
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    rb.add_timing("run", dt.count());

    std::string path = report_path;
    if (path.empty()) {
      std::filesystem::create_directories(config.out_dir);
      path = config.out_dir + "/report-" + name + ".json";
    } else if (const auto dir = std::filesystem::path(path).parent_path(); !dir.empty()) {
      std::filesystem::create_directories(dir);
    }
    write_json_file(path, rb.finish());
    if (!rb.all_passed()) exit_code = 1;
  }
};

nlohmann::json verdict_json(const ConnectivityVerdict& v) {
  return nlohmann::json{{"connected", v.connected},
                        {"witness_points", v.witness_points},
                        {"witness_steps", v.witness_steps},
                        {"tuples_visited", v.tuples_visited}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral norms, coset structure and decompositions on F_2^n"};
  app.require_subcommand(1);
  app.fallthrough();

  Shared sh;
  for (int i = 0; i < argc; ++i) sh.argv.emplace_back(argv[i]);
  if (const char* dir = std::getenv("CUBESPEC_OUT_DIR")) sh.config.out_dir = dir;

  app.add_option("--seed", sh.config.seed, "seed for every randomized routine");
  app.add_option("--out-dir", sh.config.out_dir, "directory for reports and outputs");
  app.add_option("--tolerance", sh.config.tolerance, "numeric tolerance echoed into reports");
  app.add_option("--report", sh.report_path, "report file path override");

  // fwht
  std::string fwht_input, fwht_output;
  bool fwht_inverse = false;
  auto* c_fwht = app.add_subcommand("fwht", "Walsh-Hadamard transform of a function");
  c_fwht->add_option("--input", fwht_input, "function JSON")->required();
  c_fwht->add_option("--output", fwht_output, "write the transformed function here");
  c_fwht->add_flag("--inverse", fwht_inverse, "apply the inverse transform");
  c_fwht->callback([&] {
    sh.run("fwht", [&](ReportBuilder& rb) {
      const CubeFunction f = load_function(fwht_input, rb);
      const CubeFunction g = fwht_inverse ? inverse_fwht(f) : fwht(f);
      const CubeFunction back = fwht_inverse ? fwht(g) : inverse_fwht(g);
      rb.add_assertion("transform round trip", linf_distance(back, f) <= 1e-12);
      rb.results()["function"] = to_json(g);
      if (!fwht_output.empty()) write_json_file(fwht_output, to_json(g));
      std::cout << (fwht_inverse ? "inverse fwht" : "fwht") << " n=" << g.n() << '\n';
    });
  });

  // norm
  std::string norm_input;
  bool norm_reduced = false;
  auto* c_norm = app.add_subcommand("norm", "exact spectral norm of a function or set");
  c_norm->add_option("--input", norm_input, "function, set or coset JSON")->required();
  c_norm->add_flag("--reduced", norm_reduced, "drop the empty character");
  c_norm->callback([&] {
    sh.run("norm", [&](ReportBuilder& rb) {
      const CubeFunction f = load_function_like(norm_input, rb);
      const double value = norm_reduced ? reduced_spectral_norm(f) : spectral_norm(f);
      rb.results()["value"] = value;
      rb.results()["reduced"] = norm_reduced;
      std::cout << decimal(value) << '\n';
    });
  });

  // approx-norm
  std::string an_input;
  double an_epsilon = 0.0;
  auto* c_an = app.add_subcommand("approx-norm", "epsilon-approximate spectral norm via LP");
  c_an->add_option("--input", an_input, "function, set or coset JSON")->required();
  c_an->add_option("--epsilon", an_epsilon, "sup-norm slack in [0, 1/2)")->required();
  c_an->callback([&] {
    sh.run("approx-norm", [&](ReportBuilder& rb) {
      const CubeFunction f = load_function_like(an_input, rb);
      const ApproxNormResult res = approx_spectral_norm(f, an_epsilon);
      rb.results()["value"] = res.value;
      rb.results()["epsilon"] = res.epsilon;
      rb.results()["iterations"] = res.iterations;
      rb.results()["witness"] = to_json(res.witness);
      rb.add_assertion("witness within epsilon",
                       linf_distance(res.witness, f) <= an_epsilon + sh.config.tolerance);
      const double wnorm = spectral_norm(res.witness);
      rb.add_assertion("witness norm matches the optimum",
                       std::abs(wnorm - res.value) <= 1e-6 + sh.config.tolerance);
      std::cout << decimal(res.value) << '\n';
    });
  });

  // connectivity
  std::string conn_set;
  int conn_k = 1;
  double conn_budget = 1e9;
  auto* c_conn = app.add_subcommand("connectivity", "k-affine connectivity of a set");
  c_conn->add_option("--set", conn_set, "set JSON")->required();
  c_conn->add_option("--k", conn_k, "connectivity parameter in [1, 6]")->required();
  c_conn->add_option("--budget", conn_budget, "tuple budget");
  c_conn->callback([&] {
    sh.run("connectivity", [&](ReportBuilder& rb) {
      sh.config.tuple_budget = static_cast<std::uint64_t>(conn_budget);
      const SubsetOfCube a = load_set(conn_set, rb);
      const ConnectivityVerdict v =
          is_k_affine_connected(a, conn_k, static_cast<std::uint64_t>(conn_budget));
      rb.results()["k"] = conn_k;
      rb.results()["verdict"] = verdict_json(v);
      std::cout << (v.connected ? "connected" : "disconnected") << '\n';
    });
  });

  // energy
  std::string energy_set;
  auto* c_energy = app.add_subcommand("energy", "additive energy of a set");
  c_energy->add_option("--set", energy_set, "set JSON")->required();
  c_energy->callback([&] {
    sh.run("energy", [&](ReportBuilder& rb) {
      const SubsetOfCube a = load_set(energy_set, rb);
      const std::uint64_t e = additive_energy(a);
      rb.results()["energy"] = e;
      rb.results()["size"] = a.size();
      std::cout << e << '\n';
    });
  });

  // regularize
  std::string reg_function, reg_subspace;
  double reg_delta = 0.1, reg_mbound = -1.0;
  auto* c_reg = app.add_subcommand("regularize", "shrink a subgroup until cosets are regular");
  c_reg->add_option("--function", reg_function, "function JSON")->required();
  c_reg->add_option("--delta", reg_delta, "variance target factor")->required();
  c_reg->add_option("--subspace", reg_subspace, "coset JSON whose span is the start (default all)");
  c_reg->add_option("--m-bound", reg_mbound, "norm bound (default: the exact norm)");
  c_reg->callback([&] {
    sh.run("regularize", [&](ReportBuilder& rb) {
      const CubeFunction f = load_function(reg_function, rb);
      Subspace v = Subspace::full(f.n());
      if (!reg_subspace.empty()) {
        const nlohmann::json j = load_json_file(reg_subspace);
        rb.add_input(reg_subspace);
        v = coset_from_json(j).space();
      }
      const double m = reg_mbound > 0 ? reg_mbound : spectral_norm(f);
      const RegularizeResult res = regularize_subgroup(f, v, reg_delta, m);
      rb.results()["w_basis"] = res.w.basis();
      rb.results()["w_dim"] = res.w.dim();
      rb.results()["iterations"] = res.iterations;
      rb.results()["max_coset_variance"] = res.max_coset_variance;
      rb.add_assertion("coset variance within delta * M",
                       res.max_coset_variance <= reg_delta * m + 1e-9);
      std::cout << "dim " << res.w.dim() << " after " << res.iterations << " drops\n";
    });
  });

  // good-subgroup
  std::string gs_set, gs_g, gs_v;
  double gs_eps = 0.0, gs_delta = 0.1, gs_eps1 = 0.0, gs_eps2 = 0.25, gs_mbound = -1.0;
  auto* c_gs = app.add_subcommand("good-subgroup", "subgroup with dense-or-sparse cosets");
  c_gs->add_option("--set", gs_set, "set JSON")->required();
  c_gs->add_option("--g", gs_g, "approximator JSON")->required();
  c_gs->add_option("--epsilon", gs_eps, "sup distance of g from the set")->required();
  c_gs->add_option("--delta", gs_delta, "density margin")->required();
  c_gs->add_option("--eps1", gs_eps1, "lower bound on |V+a| / |A|");
  c_gs->add_option("--eps2", gs_eps2, "lower bound on the density of A on V+a");
  c_gs->add_option("--v", gs_v, "coset JSON for the starting coset (default: densest)");
  c_gs->add_option("--m-bound", gs_mbound, "norm bound (default: the exact norm)");
  c_gs->callback([&] {
    sh.run("good-subgroup", [&](ReportBuilder& rb) {
      const SubsetOfCube a = load_set(gs_set, rb);
      const CubeFunction g = load_function(gs_g, rb);
      Subspace v(a.n());
      point_t rep = 0;
      if (!gs_v.empty()) {
        const nlohmann::json j = load_json_file(gs_v);
        rb.add_input(gs_v);
        const Coset c = coset_from_json(j);
        v = c.space();
        rep = c.rep();
      } else {
        const auto dense = find_dense_coset(a);
        if (!dense) throw UsageError("good-subgroup: the set is empty, nothing to start from");
        v = dense->coset.space();
        rep = dense->coset.rep();
      }
      const double m = gs_mbound > 0 ? gs_mbound : std::max(spectral_norm(g), 0.5);
      const GoodSubgroupResult res =
          good_subgroup(a, g, gs_eps, gs_delta, v, rep, gs_eps1, gs_eps2, m);
      rb.results()["w_basis"] = res.w.basis();
      rb.results()["w_dim"] = res.w.dim();
      rb.results()["delta"] = res.delta;
      rb.results()["regularize_iterations"] = res.regularize_iterations;
      rb.results()["densities"] = res.densities;
      rb.results()["restriction_reduced_norms"] = res.restriction_reduced_norms;
      rb.results()["f_w"] = res.f_w;
      rb.results()["f_w_is_everything"] = res.f_w_is_everything;
      rb.add_assertion("dense family is nonempty", !res.f_w.empty());
      std::cout << "dim " << res.w.dim() << " with " << res.f_w.size() << " dense cosets\n";
    });
  });

  // mela
  int mela_k = 4;
  double mela_eps = 0.25;
  auto* c_mela = app.add_subcommand("mela", "low-norm approximation of the ball indicator");
  c_mela->add_option("--k", mela_k, "dimension")->required();
  c_mela->add_option("--epsilon", mela_eps, "sup error target in (0, 1/2)")->required();
  c_mela->callback([&] {
    sh.run("mela", [&](ReportBuilder& rb) {
      const MelaApproximation res = mela_approximator(mela_k, mela_eps);
      rb.results()["k"] = res.k;
      rb.results()["epsilon"] = res.epsilon;
      rb.results()["m"] = res.m;
      rb.results()["h_norm"] = res.h_norm;
      rb.results()["approx_norm"] = res.approx_norm;
      rb.results()["sup_error"] = res.sup_error;
      rb.add_assertion("sup error within epsilon", res.sup_error <= res.epsilon + 1e-12);
      rb.add_assertion("odd part norm within 4m-2", res.h_norm <= 4.0 * res.m - 2.0 + 1e-6);
      std::cout << "m=" << res.m << " norm=" << decimal(res.approx_norm)
                << " sup=" << decimal(res.sup_error) << '\n';
    });
  });

  // quadratic
  int quad_n = 6;
  double quad_samples = 10000;
  auto* c_quad = app.add_subcommand("quadratic", "paired-bit quadratic example");
  c_quad->add_option("--n", quad_n, "even dimension")->required();
  c_quad->add_option("--samples", quad_samples, "sampled identity tuples");
  c_quad->callback([&] {
    sh.run("quadratic", [&](ReportBuilder& rb) {
      const QuadraticReport res = quadratic_example(
          quad_n, static_cast<std::uint64_t>(quad_samples), sh.config.seed);
      rb.results()["n"] = res.n;
      rb.results()["norm"] = res.norm;
      rb.results()["ratio"] = res.ratio;
      rb.results()["identity_tuples_checked"] = res.identity_tuples_checked;
      if (res.support_verdict) rb.results()["support"] = verdict_json(*res.support_verdict);
      if (res.complement_verdict) {
        rb.results()["complement"] = verdict_json(*res.complement_verdict);
      }
      rb.add_assertion("norm within a factor 4 of 2^(n/2)",
                       res.ratio >= 0.25 && res.ratio <= 4.0);
      std::cout << "norm=" << decimal(res.norm) << " ratio=" << decimal(res.ratio) << '\n';
    });
  });

  // complexity
  std::string cx_set;
  int cx_ell = 3;
  auto* c_cx = app.add_subcommand("complexity", "coset complexity of a set");
  c_cx->add_option("--set", cx_set, "set JSON")->required();
  c_cx->add_option("--ell-max", cx_ell, "exact search cap");
  c_cx->callback([&] {
    sh.run("complexity", [&](ReportBuilder& rb) {
      const SubsetOfCube a = load_set(cx_set, rb);
      const ComplexityResult res = coset_complexity(a, cx_ell);
      const char* kind = res.kind == ComplexityKind::Exact        ? "exact"
                         : res.kind == ComplexityKind::UpperBound ? "upper-bound"
                                                                  : "unknown";
      rb.results()["kind"] = kind;
      rb.results()["ell"] = res.ell;
      nlohmann::json gens = nlohmann::json::array();
      for (const Coset& c : res.generators) gens.push_back(to_json(c));
      rb.results()["generators"] = std::move(gens);
      if (res.decomposition) {
        rb.results()["decomposition"] = to_json(*res.decomposition);
        rb.add_assertion("decomposition matches the set",
                         res.decomposition->matches_indicator(a));
      }
      std::cout << kind << " ell=" << res.ell << '\n';
    });
  });

  // decompose
  std::string dec_set, dec_g, dec_trace;
  double dec_eps = 0.0, dec_budget = 1e8;
  int dec_k = 1, dec_depth = 5;
  auto* c_dec = app.add_subcommand("decompose", "experimental coset decomposition search");
  c_dec->add_option("--set", dec_set, "set JSON")->required();
  c_dec->add_option("--g", dec_g, "approximator JSON")->required();
  c_dec->add_option("--epsilon", dec_eps, "sup distance of g from the set")->required();
  c_dec->add_option("--k", dec_k, "connectivity parameter")->required();
  c_dec->add_option("--depth", dec_depth, "recursion depth cap");
  c_dec->add_option("--budget", dec_budget, "work budget");
  c_dec->add_option("--trace", dec_trace, "write the search trace here");
  c_dec->callback([&] {
    sh.run("decompose", [&](ReportBuilder& rb) {
      sh.config.work_budget = static_cast<std::uint64_t>(dec_budget);
      const SubsetOfCube a = load_set(dec_set, rb);
      const CubeFunction g = load_function(dec_g, rb);
      DecomposeOptions opts;
      opts.depth_cap = dec_depth;
      opts.budget = static_cast<std::uint64_t>(dec_budget);
      opts.sampling.seed = sh.config.seed;
      opts.sampling.exhaustive_budget = sh.config.exhaustive_budget;
      opts.sampling.mc_samples = sh.config.mc_samples;
      const DecomposeResult res = decompose_experimental(a, g, dec_eps, dec_k, opts);
      rb.results()["success"] = res.success;
      if (res.success) {
        rb.results()["decomposition"] = to_json(*res.decomposition);
        rb.results()["terms"] = res.decomposition->size();
        rb.add_assertion("decomposition matches the set",
                         res.decomposition->matches_indicator(a));
      } else {
        rb.results()["failure_reason"] = res.failure_reason;
      }
      if (!dec_trace.empty()) {
        write_json_file(dec_trace, res.trace);
        rb.results()["trace_file"] = dec_trace;
      }
      if (res.success) {
        std::cout << "decomposed into " << res.decomposition->size() << " terms\n";
      } else {
        std::cout << "no decomposition: " << res.failure_reason << '\n';
      }
    });
  });

  // tower
  int tw_k = 1, tw_m = 1, tw_r = -1, tw_t = 1;
  double tw_eps = 0.0;
  auto* c_tw = app.add_subcommand("tower", "recursion bound on the coset complexity");
  c_tw->add_option("--k", tw_k, "connectivity parameter")->required();
  c_tw->add_option("--m", tw_m, "norm level")->required();
  c_tw->add_option("--r", tw_r, "tuple length (default k+1)");
  c_tw->add_option("--t", tw_t, "obstruction coset count");
  c_tw->add_option("--epsilon", tw_eps, "approximation slack")->required();
  c_tw->callback([&] {
    sh.run("tower", [&](ReportBuilder& rb) {
      const int r = tw_r < 0 ? tw_k + 1 : tw_r;
      const TowerBound b = tower_bound(tw_k, tw_m, r, tw_t, tw_eps);
      rb.results()["k"] = b.k;
      rb.results()["m"] = b.m;
      rb.results()["r"] = b.r;
      rb.results()["t"] = b.t;
      rb.results()["epsilon"] = b.epsilon;
      rb.results()["height"] = b.value.height;
      rb.results()["materialized"] = b.value.materialized();
      rb.results()["value"] = b.value.to_string();
      std::cout << b.value.to_string() << '\n';
    });
  });

  // dichotomy-suite
  SuiteOptions suite_opts;
  double suite_count = 100, suite_budget = 1e9;
  auto* c_suite = app.add_subcommand("dichotomy-suite", "lower-bound sweep over set families");
  c_suite->add_option("--families", suite_opts.families,
                      "subset of: all-subsets random balls cosets coset-rings quadratic");
  c_suite->add_option("--k", suite_opts.k, "connectivity parameter");
  c_suite->add_option("--exhaustive-n", suite_opts.exhaustive_n, "all-subsets goes up to here");
  c_suite->add_option("--random-n", suite_opts.random_n, "dimension for random sets");
  c_suite->add_option("--count", suite_count, "random draws per randomized family");
  c_suite->add_option("--ball-k-max", suite_opts.ball_k_max, "largest ball dimension");
  c_suite->add_option("--coset-n", suite_opts.coset_n, "dimension for coset families");
  c_suite->add_option("--budget", suite_budget, "tuple budget per connectivity check");
  c_suite->callback([&] {
    sh.run("dichotomy-suite", [&](ReportBuilder& rb) {
      suite_opts.random_count = static_cast<std::uint64_t>(suite_count);
      suite_opts.budget = static_cast<std::uint64_t>(suite_budget);
      suite_opts.seed = sh.config.seed;
      const SuiteReport rep = dichotomy_suite(suite_opts);
      rb.results()["suite"] = to_json(rep);
      rb.add_assertion("zero violations", rep.total_violations == 0,
                       {{"violations", rep.total_violations}});
      for (const FamilySummary& f : rep.families) {
        std::cout << f.family << ": " << f.sets << " sets, " << f.bound_applicable
                  << " with the bound in play, " << f.violations << " violations\n";
      }
      std::cout << "total violations: " << rep.total_violations << '\n';
    });
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const CapabilityError& e) {
    std::cerr << "capability: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return sh.exit_code;
}
