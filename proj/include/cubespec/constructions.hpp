#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>

#include "cubespec/connectivity.hpp"
#include "cubespec/cube_function.hpp"

namespace cubespec {

// The k+1 points of Hamming weight at most one in F_2^k.
SubsetOfCube hamming_ball(int k);

// g_s(x) = s^|x| (with 0^0 = 1); its spectrum is the nonnegative product
// 2^-k (1+s)^(k-|a|) (1-s)^|a|, so the spectral norm is exactly g_s(0) = 1.
// Requires |s| <= 1.
CubeFunction product_function_g(int k, double s);

// h_s(x) = s^|x| at odd weights and 0 at even weights; spectral norm <= 1.
// Requires 0 <= s <= 1.
CubeFunction odd_part_h(int k, double s);

struct ChebyshevWeights {
  int m = 0;
  Eigen::ArrayXd eta;    // eta_i = cos((m-i) pi / (2m-1)), increasing, eta_m = 1
  Eigen::ArrayXd sigma;  // solves sum_i eta_i^(2k-1) sigma_i = [k == 1]
  double sigma_abs_sum = 0.0;
};

// Weights sigma defined by the odd-power moment constraints; the solve's
// residuals, the bound sum |sigma| <= 2m-1, and the Chebyshev extremum
// property |T_{2m-1}(eta_i)| = 1 are all verified. Requires 2 <= m <= 20;
// the solve retries in extended precision before giving up.
ChebyshevWeights chebyshev_weights(int m);

struct MelaApproximation {
  int k = 0;
  double epsilon = 0.0;
  int m = 0;
  ChebyshevWeights weights;
  CubeFunction h{0, Side::Point};
  CubeFunction approx{0, Side::Point};  // h + indicator of {0}
  double h_norm = 0.0;
  double approx_norm = 0.0;
  double sup_error = 0.0;  // ||approx - 1_ball||_inf
};

// Low-norm sup-approximation of the Hamming ball indicator: h(x) =
// 2 sum_i sigma_i h_{eta_i/2}(x) with m = ceil(log2(1/epsilon)), plus a
// point mass at 0. Verified pointwise case by case: h vanishes at even
// weights, equals 1 at weight one, vanishes at odd weights 3..2m-1, and is
// at most epsilon in absolute value beyond. The norm chain
// ||h|| <= 2 sum|sigma| <= 4m-2 is asserted. Requires 0 < epsilon < 1/2 and
// k <= 16.
MelaApproximation mela_approximator(int k, double epsilon);

struct BallNormReport {
  int k = 0;
  // The norm is the dyadic rational numerator / 2^k.
  std::uint64_t numerator = 0;
  double norm = 0.0;
  double lower = 0.0;  // sqrt(k)/2
  double upper = 0.0;  // sqrt(k+1)
};

// Exact spectral norm of the ball indicator (coefficients are dyadic), with
// both bounds sqrt(k)/2 <= norm <= sqrt(k+1) checked in integer arithmetic.
// Requires 1 <= k <= 20.
BallNormReport ball_norm_bounds_check(int k);

struct QuadraticReport {
  int n = 0;
  CubeFunction f{0, Side::Point};
  std::uint64_t identity_tuples_checked = 0;
  double norm = 0.0;
  double ratio = 0.0;  // norm / 2^(n/2), asserted within [1/4, 4]
  std::optional<ConnectivityVerdict> support_verdict;
  std::optional<ConnectivityVerdict> complement_verdict;
};

// The rank-n/2 quadratic x1 x2 + x3 x4 + ... as a 0/1 function, plus checks:
// the 16-term parallelepiped identity on sampled 5-tuples (exhaustive when
// n = 4), the norm ratio window against 2^(n/2), and 4-affine connectivity
// of the support and its complement when n <= 8. Requires even n <= 20.
QuadraticReport quadratic_example(int n, std::uint64_t identity_samples = 10000,
                                  std::uint64_t seed = 0x9e3779b97f4a7c15ull,
                                  std::uint64_t connectivity_budget = kDefaultTupleBudget);

}  // namespace cubespec
