#include "cubespec/approx_norm.hpp"

#include <cmath>

#include "cubespec/errors.hpp"

namespace cubespec {

ApproxNormResult approx_spectral_norm(const CubeFunction& f, double epsilon,
                                      const SolveOptions& options) {
  if (!(epsilon >= 0.0 && epsilon < 0.5))
    throw UsageError("epsilon must lie in [0, 1/2)");
  if (f.n() > 10) throw CapabilityError("approximate norm is capped at n <= 10");

  const CubeFunction fp = f.side() == Side::Point ? f : inverse_fwht(f);
  const int n = f.n();
  const int npts = static_cast<int>(cube_size(n));

  // Variables: u_a then v_a with ghat = u - v, all nonnegative. For every
  // point x: f(x) - eps <= sum_a (u_a - v_a) chi_a(x) <= f(x) + eps.
  LinearProgram lp;
  lp.objective = Eigen::VectorXd::Ones(2 * npts);
  lp.a.setZero(2 * npts, 2 * npts);
  lp.rhs.resize(2 * npts);
  lp.senses.assign(2 * npts, Sense::LE);
  for (int x = 0; x < npts; ++x) {
    for (int a = 0; a < npts; ++a) {
      const double c = chi(static_cast<point_t>(a), static_cast<point_t>(x));
      lp.a(2 * x, a) = c;
      lp.a(2 * x, npts + a) = -c;
      lp.a(2 * x + 1, a) = c;
      lp.a(2 * x + 1, npts + a) = -c;
    }
    lp.rhs(2 * x) = fp[static_cast<std::uint64_t>(x)] + epsilon;
    lp.rhs(2 * x + 1) = fp[static_cast<std::uint64_t>(x)] - epsilon;
    lp.senses[2 * x + 1] = Sense::GE;
  }

  const LpSolution sol = solve_lp(lp, options);

  Eigen::ArrayXd ghat(npts);
  for (int a = 0; a < npts; ++a) ghat(a) = sol.x(a) - sol.x(npts + a);
  CubeFunction g_spec(n, Side::Spectral, std::move(ghat));
  CubeFunction g = inverse_fwht(g_spec);

  const double dist = linf_distance(fp, g);
  if (dist > epsilon + 1e-9)
    throw VerificationError("witness violates the sup-distance budget: " + std::to_string(dist));
  const double gnorm = spectral_norm(g_spec);
  if (std::abs(gnorm - sol.value) > 1e-6 * (1.0 + sol.value))
    throw VerificationError("witness norm drifts from the optimum: " + std::to_string(gnorm) +
                            " vs " + std::to_string(sol.value));

  ApproxNormResult result{sol.value, std::move(g), epsilon, sol.iterations};
  return result;
}

}  // namespace cubespec
