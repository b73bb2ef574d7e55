#pragma once

#include <Eigen/Dense>
#include <vector>

namespace cubespec {

enum class Sense { LE, EQ, GE };

// min objective . x  subject to  a x (sense) rhs,  x >= lower (componentwise).
struct LinearProgram {
  Eigen::VectorXd objective;
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> a;
  std::vector<Sense> senses;
  Eigen::VectorXd rhs;
  Eigen::VectorXd lower;  // empty means all zeros
};

struct SolveOptions {
  long max_iterations = 200000;
  // Dantzig's rule until this many pivots, Bland's rule afterwards.
  long bland_after = 20000;
  double duality_tolerance = 1e-7;
};

struct LpSolution {
  Eigen::VectorXd x;
  double value = 0.0;
  long iterations = 0;
};

// Dense two-phase tableau simplex. Throws SolverError on infeasibility,
// unboundedness, iteration-cap exhaustion, or a failed optimality
// certificate (duality gap / complementary slackness residual).
LpSolution solve_lp(const LinearProgram& p, const SolveOptions& options = {});

}  // namespace cubespec
