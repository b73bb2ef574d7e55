#include "cubespec/constructions.hpp"

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "cubespec/errors.hpp"

namespace cubespec {

SubsetOfCube hamming_ball(int k) {
  if (k < 1 || k > kMaxN) throw UsageError("ball dimension must lie in [1, 24]");
  SubsetOfCube b(k);
  b.insert(0);
  for (int i = 0; i < k; ++i) b.insert(point_t{1} << i);
  return b;
}

CubeFunction product_function_g(int k, double s) {
  if (!(s >= -1.0 && s <= 1.0)) throw UsageError("s must lie in [-1, 1]");
  CubeFunction g(k, Side::Point);
  for (std::uint64_t x = 0; x < g.domain_size(); ++x) {
    const int w = weight(static_cast<point_t>(x));
    g[x] = w == 0 ? 1.0 : std::pow(s, w);
  }
  return g;
}

CubeFunction odd_part_h(int k, double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw UsageError("s must lie in [0, 1]");
  CubeFunction h(k, Side::Point);
  for (std::uint64_t x = 0; x < h.domain_size(); ++x) {
    const int w = weight(static_cast<point_t>(x));
    if (w % 2 == 1) h[x] = std::pow(s, w);
  }
  return h;
}

namespace {

// The monomial moment system sum_i eta_i^(2k-1) sigma_i = [k == 1] is a
// Vandermonde in odd powers and loses digits fast. Pairing it with the
// Chebyshev polynomial T_{2k-1} instead (whose linear coefficient is
// (-1)^(k-1) (2k-1) and whose higher odd monomial moments vanish by the
// same equations) gives the equivalent system
//
//   sum_i cos((2k-1) theta_i) sigma_i = (-1)^(k-1) (2k-1),
//
// whose cosine matrix is near orthogonal, so the solve stays accurate. The
// residual is still checked against the original monomial matrix.
template <typename Real>
bool solve_weights(int m, Eigen::ArrayXd& eta_out, Eigen::ArrayXd& sigma_out) {
  using Vec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
  using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

  Vec eta(m), theta(m);
  const Real pi = std::acos(Real(-1));
  for (int i = 1; i <= m; ++i) {
    theta(i - 1) = Real(m - i) * pi / Real(2 * m - 1);
    eta(i - 1) = std::cos(theta(i - 1));
  }

  Mat cheb(m, m);
  Vec rhs(m);
  for (int k = 1; k <= m; ++k) {
    for (int i = 0; i < m; ++i) cheb(k - 1, i) = std::cos(Real(2 * k - 1) * theta(i));
    rhs(k - 1) = Real((k % 2 == 1 ? 1 : -1) * (2 * k - 1));
  }
  const Vec sigma = cheb.fullPivLu().solve(rhs);

  Mat mono(m, m);
  for (int k = 1; k <= m; ++k)
    for (int i = 0; i < m; ++i) mono(k - 1, i) = std::pow(eta(i), Real(2 * k - 1));
  Vec want = Vec::Zero(m);
  want(0) = Real(1);
  const Real residual = (mono * sigma - want).cwiseAbs().maxCoeff();
  if (!(residual <= Real(1e-10))) return false;

  eta_out = eta.template cast<double>().array();
  sigma_out = sigma.template cast<double>().array();
  return true;
}

}  // namespace

ChebyshevWeights chebyshev_weights(int m) {
  if (m < 2) throw UsageError("m must be at least 2");
  if (m > 20) throw CapabilityError("weight solve is capped at m <= 20");

  ChebyshevWeights w;
  w.m = m;
  bool ok = m <= 14 && solve_weights<double>(m, w.eta, w.sigma);
  if (!ok) ok = solve_weights<long double>(m, w.eta, w.sigma);
  if (!ok)
    throw CapabilityError("moment system for m = " + std::to_string(m) +
                          " is too ill-conditioned");

  w.sigma_abs_sum = w.sigma.abs().sum();
  if (w.sigma_abs_sum > 2.0 * m - 1.0 + 1e-8)
    throw VerificationError("weight mass " + std::to_string(w.sigma_abs_sum) +
                            " exceeds 2m-1");

  // The nodes must be extrema of the degree 2m-1 Chebyshev polynomial.
  for (int i = 0; i < m; ++i) {
    double t_prev = 1.0, t_cur = w.eta(i);
    for (int j = 2; j <= 2 * m - 1; ++j) {
      const double t_next = 2.0 * w.eta(i) * t_cur - t_prev;
      t_prev = t_cur;
      t_cur = t_next;
    }
    if (std::abs(std::abs(t_cur) - 1.0) > 1e-9)
      throw VerificationError("node " + std::to_string(i) + " is not a Chebyshev extremum");
  }
  return w;
}

MelaApproximation mela_approximator(int k, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw UsageError("epsilon must lie in (0, 1/2)");
  if (k < 1 || k > 16) throw CapabilityError("ball approximation is capped at k <= 16");

  MelaApproximation out;
  out.k = k;
  out.epsilon = epsilon;
  out.m = static_cast<int>(std::ceil(std::log2(1.0 / epsilon) - 1e-12));
  out.weights = chebyshev_weights(out.m);
  const int m = out.m;

  // h depends on the weight only; tabulate per weight, then spread.
  std::vector<double> by_weight(k + 1, 0.0);
  for (int w = 1; w <= k; w += 2) {
    double acc = 0.0;
    for (int i = 0; i < m; ++i)
      acc += out.weights.sigma(i) * std::pow(out.weights.eta(i) / 2.0, w);
    by_weight[w] = 2.0 * acc;
  }

  out.h = CubeFunction(k, Side::Point);
  for (std::uint64_t x = 0; x < out.h.domain_size(); ++x)
    out.h[x] = by_weight[weight(static_cast<point_t>(x))];

  // Case analysis of the proof, asserted branch by branch.
  const double solve_tol = 1e-9;
  for (int w = 0; w <= k; ++w) {
    const double v = by_weight[w];
    if (w % 2 == 0) {
      if (v != 0.0) throw VerificationError("even weight " + std::to_string(w) + " not zero");
    } else if (w == 1) {
      if (std::abs(v - 1.0) > solve_tol)
        throw VerificationError("weight-one value " + std::to_string(v) + " drifts from 1");
    } else if (w <= 2 * m - 1) {
      if (std::abs(v) > solve_tol)
        throw VerificationError("cancelled weight " + std::to_string(w) + " not zero");
    } else if (std::abs(v) > epsilon) {
      throw VerificationError("tail weight " + std::to_string(w) + " exceeds epsilon");
    }
  }

  out.approx = out.h;
  out.approx[0] += 1.0;

  const CubeFunction ball = hamming_ball(k).indicator();
  out.sup_error = linf_distance(out.approx, ball);
  if (out.sup_error > epsilon + 1e-12)
    throw VerificationError("sup error " + std::to_string(out.sup_error) + " exceeds epsilon");

  out.h_norm = spectral_norm(out.h);
  if (out.h_norm > 2.0 * out.weights.sigma_abs_sum + 1e-9)
    throw VerificationError("norm of h exceeds twice the weight mass");
  if (out.h_norm > 4.0 * m - 2.0 + 1e-6)
    throw VerificationError("norm of h exceeds 4m-2");
  out.approx_norm = spectral_norm(out.approx);
  if (out.approx_norm > out.h_norm + 1.0 + 1e-9)
    throw VerificationError("norm of h + point mass exceeds norm of h plus one");
  return out;
}

BallNormReport ball_norm_bounds_check(int k) {
  if (k < 1 || k > 20) throw UsageError("k must lie in [1, 20]");

  // Coefficient at a is 2^-k (1 + k - 2|a|); sum |.| over binomial layers.
  std::uint64_t binom = 1;  // C(k, j)
  std::uint64_t numerator = 0;
  for (int j = 0; j <= k; ++j) {
    const std::int64_t val = 1 + k - 2 * j;
    numerator += binom * static_cast<std::uint64_t>(val < 0 ? -val : val);
    binom = binom * static_cast<std::uint64_t>(k - j) / static_cast<std::uint64_t>(j + 1);
  }

  BallNormReport r;
  r.k = k;
  r.numerator = numerator;
  r.norm = static_cast<double>(numerator) / static_cast<double>(std::uint64_t{1} << k);
  r.lower = std::sqrt(static_cast<double>(k)) / 2.0;
  r.upper = std::sqrt(static_cast<double>(k) + 1.0);

  // norm >= sqrt(k)/2  <=>  numerator^2 >= k 4^(k-1); similarly above.
  const unsigned __int128 num2 =
      static_cast<unsigned __int128>(numerator) * numerator;
  const unsigned __int128 low2 =
      static_cast<unsigned __int128>(k) << (2 * k - 2);
  const unsigned __int128 high2 =
      static_cast<unsigned __int128>(k + 1) << (2 * k);
  if (num2 < low2) throw VerificationError("ball norm undercuts sqrt(k)/2");
  if (num2 > high2) throw VerificationError("ball norm exceeds sqrt(k+1)");
  return r;
}

QuadraticReport quadratic_example(int n, std::uint64_t identity_samples, std::uint64_t seed,
                                  std::uint64_t connectivity_budget) {
  if (n < 2 || n % 2 != 0) throw UsageError("n must be even and positive");
  if (n > 20) throw CapabilityError("quadratic example is capped at n <= 20");

  QuadraticReport r;
  r.n = n;
  r.f = CubeFunction(n, Side::Point);
  SubsetOfCube support(n);
  auto quad = [n](point_t x) {
    int acc = 0;
    for (int i = 0; i + 1 < n; i += 2) acc ^= static_cast<int>((x >> i) & (x >> (i + 1)) & 1u);
    return acc;
  };
  for (std::uint64_t x = 0; x < cube_size(n); ++x)
    if (quad(static_cast<point_t>(x))) {
      r.f[x] = 1.0;
      support.insert(static_cast<point_t>(x));
    }

  // Second difference structure: the 16 evaluations over a parallelepiped
  // spanned by any four steps cancel mod 2.
  auto check_tuple = [&](const point_t t[5]) {
    int acc = 0;
    for (std::uint32_t s = 0; s < 16; ++s) {
      point_t x = t[0];
      for (int i = 0; i < 4; ++i)
        if ((s >> i) & 1u) x ^= t[i + 1];
      acc ^= quad(x);
    }
    return acc == 0;
  };

  const point_t mask = static_cast<point_t>(cube_size(n) - 1);
  if (n == 4) {
    point_t t[5];
    for (t[0] = 0; t[0] < 16; ++t[0])
      for (t[1] = 0; t[1] < 16; ++t[1])
        for (t[2] = 0; t[2] < 16; ++t[2])
          for (t[3] = 0; t[3] < 16; ++t[3])
            for (t[4] = 0; t[4] < 16; ++t[4]) {
              if (!check_tuple(t)) throw VerificationError("parallelepiped identity fails");
              ++r.identity_tuples_checked;
            }
  }
  std::mt19937_64 rng(seed);
  for (std::uint64_t trial = 0; trial < identity_samples; ++trial) {
    point_t t[5];
    for (point_t& v : t) v = static_cast<point_t>(rng()) & mask;
    if (!check_tuple(t)) throw VerificationError("parallelepiped identity fails on sample");
    ++r.identity_tuples_checked;
  }

  r.norm = spectral_norm(r.f);
  r.ratio = r.norm / std::exp2(n / 2.0);
  if (r.ratio < 0.25 || r.ratio > 4.0)
    throw VerificationError("norm ratio " + std::to_string(r.ratio) +
                            " leaves the window [1/4, 4]");

  if (n <= 8) {
    r.support_verdict = is_k_affine_connected(support, 4, connectivity_budget);
    r.complement_verdict = is_k_affine_connected(support.complement(), 4, connectivity_budget);
  }
  return r;
}

}  // namespace cubespec
