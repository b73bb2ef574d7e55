#include "cubespec/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cubespec/errors.hpp"

namespace cubespec {

namespace {

constexpr double kPivotEps = 1e-9;
constexpr double kCostEps = 1e-9;

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Tableau {
  RowMatrix t;              // m rows of [coefficients | rhs]
  Eigen::RowVectorXd obj;   // reduced costs | negated objective value
  std::vector<int> basis;   // basic variable per row
  int cols = 0;             // variable count (excludes rhs column)

  double rhs(int i) const { return t(i, cols); }

  void pivot(int row, int col) {
    t.row(row) /= t(row, col);
    for (int i = 0; i < t.rows(); ++i) {
      if (i == row) continue;
      const double factor = t(i, col);
      if (factor != 0.0) t.row(i) -= factor * t.row(row);
    }
    const double ofac = obj(col);
    if (ofac != 0.0) obj -= ofac * t.row(row);
    basis[row] = col;
  }
};

// Rebuild the reduced-cost row for the given variable costs.
void reset_objective(Tableau& tab, const Eigen::VectorXd& cost) {
  tab.obj.setZero(tab.cols + 1);
  tab.obj.head(cost.size()) = cost.transpose();
  for (int i = 0; i < tab.t.rows(); ++i) {
    const int b = tab.basis[i];
    const double cb = b < cost.size() ? cost(b) : 0.0;
    if (cb != 0.0) tab.obj -= cb * tab.t.row(i);
  }
}

// One simplex phase over the allowed columns; returns iterations used.
long run_phase(Tableau& tab, const std::vector<char>& allowed, long iter_start,
               const SolveOptions& opt) {
  long iter = iter_start;
  while (true) {
    if (iter >= opt.max_iterations)
      throw SolverError("simplex iteration cap exhausted after " + std::to_string(iter) +
                        " pivots");
    const bool bland = iter >= opt.bland_after;

    int col = -1;
    double best = -kCostEps;
    for (int j = 0; j < tab.cols; ++j) {
      if (!allowed[j]) continue;
      const double r = tab.obj(j);
      if (r < best) {
        col = j;
        if (bland) break;  // first eligible index
        best = r;
      }
    }
    if (col < 0) return iter;

    // Min-ratio row, breaking near-ties toward the smallest basic variable
    // index. Together with first-eligible entering this is Bland's rule, so
    // the heavily degenerate phases cannot cycle.
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < tab.t.rows(); ++i) {
      const double aij = tab.t(i, col);
      if (aij > kPivotEps) best_ratio = std::min(best_ratio, tab.rhs(i) / aij);
    }
    if (!std::isfinite(best_ratio)) throw SolverError("objective unbounded below");
    int row = -1;
    for (int i = 0; i < tab.t.rows(); ++i) {
      const double aij = tab.t(i, col);
      if (aij <= kPivotEps) continue;
      if (tab.rhs(i) / aij > best_ratio + 1e-12) continue;
      if (row < 0 || tab.basis[i] < tab.basis[row]) row = i;
    }
    tab.pivot(row, col);
    ++iter;
  }
}

void verify_optimality(const LinearProgram& p, const Eigen::VectorXd& shifted_x,
                       const RowMatrix& a_std, const Eigen::VectorXd& b_std,
                       const Eigen::VectorXd& c_std, const std::vector<int>& basis,
                       double tol) {
  const int m = static_cast<int>(a_std.rows());

  Eigen::MatrixXd basis_mat(m, m);
  Eigen::VectorXd cb(m);
  for (int i = 0; i < m; ++i) {
    basis_mat.col(i) = a_std.col(basis[i]);
    cb(i) = c_std(basis[i]);
  }
  const Eigen::VectorXd y = basis_mat.transpose().partialPivLu().solve(cb);

  const double scale =
      1.0 + std::abs(c_std.dot(shifted_x)) + b_std.cwiseAbs().maxCoeff() +
      (p.objective.size() > 0 ? p.objective.cwiseAbs().maxCoeff() : 0.0);

  const Eigen::VectorXd primal_residual = a_std * shifted_x - b_std;
  if (primal_residual.cwiseAbs().maxCoeff() > tol * scale)
    throw SolverError("primal residual " + std::to_string(primal_residual.cwiseAbs().maxCoeff()) +
                      " exceeds tolerance");

  const Eigen::VectorXd reduced = c_std - a_std.transpose() * y;
  for (int j = 0; j < reduced.size(); ++j) {
    if (reduced(j) < -tol * scale)
      throw SolverError("dual infeasibility at column " + std::to_string(j));
    if (std::abs(reduced(j) * shifted_x(j)) > tol * scale)
      throw SolverError("complementary slackness residual at column " + std::to_string(j));
  }

  if (std::abs(c_std.dot(shifted_x) - b_std.dot(y)) > tol * scale)
    throw SolverError("duality gap exceeds tolerance");
}

}  // namespace

LpSolution solve_lp(const LinearProgram& p, const SolveOptions& opt) {
  const int nvars = static_cast<int>(p.objective.size());
  const int m = static_cast<int>(p.a.rows());
  if (p.a.cols() != nvars || static_cast<int>(p.senses.size()) != m || p.rhs.size() != m)
    throw UsageError("linear program dimensions are inconsistent");
  if (p.lower.size() != 0 && p.lower.size() != nvars)
    throw UsageError("lower bound vector length mismatch");
  if (!p.a.allFinite() || !p.rhs.allFinite() || !p.objective.allFinite())
    throw UsageError("linear program entries must be finite");

  // Shift x = lower + x' so all variables are nonnegative.
  Eigen::VectorXd rhs_shifted = p.rhs;
  if (p.lower.size() != 0) rhs_shifted -= p.a * p.lower;

  // Standard equality form: flip rows to nonnegative rhs, then append one
  // slack or surplus column per inequality and artificials where needed.
  int n_slack = 0;
  for (Sense s : p.senses)
    if (s != Sense::EQ) ++n_slack;

  std::vector<int> art_rows;  // rows needing an artificial
  RowMatrix a_std = RowMatrix::Zero(m, nvars + n_slack);
  Eigen::VectorXd b_std(m);
  {
    int slack_at = nvars;
    for (int i = 0; i < m; ++i) {
      double sign = 1.0;
      Sense sense = p.senses[i];
      if (rhs_shifted(i) < 0) {
        sign = -1.0;
        if (sense == Sense::LE)
          sense = Sense::GE;
        else if (sense == Sense::GE)
          sense = Sense::LE;
      }
      a_std.row(i).head(nvars) = sign * p.a.row(i);
      b_std(i) = sign * rhs_shifted(i);
      if (p.senses[i] != Sense::EQ) {
        a_std(i, slack_at) = sense == Sense::LE ? 1.0 : -1.0;
        if (sense != Sense::LE) art_rows.push_back(i);
        ++slack_at;
      } else {
        art_rows.push_back(i);
      }
    }
  }

  const int n_core = nvars + n_slack;
  const int n_total = n_core + static_cast<int>(art_rows.size());

  Tableau tab;
  tab.cols = n_total;
  tab.t.setZero(m, n_total + 1);
  tab.t.leftCols(n_core) = a_std;
  tab.t.col(n_total) = b_std;
  tab.basis.assign(m, -1);
  {
    int art_at = n_core;
    for (int i : art_rows) {
      tab.t(i, art_at) = 1.0;
      tab.basis[i] = art_at++;
    }
    int slack_at = nvars;
    for (int i = 0; i < m; ++i) {
      if (p.senses[i] != Sense::EQ) {
        if (tab.basis[i] < 0 && tab.t(i, slack_at) > 0.5) tab.basis[i] = slack_at;
        ++slack_at;
      }
    }
    for (int i = 0; i < m; ++i)
      if (tab.basis[i] < 0) throw SolverError("failed to build an initial basis");
  }

  long iterations = 0;
  if (!art_rows.empty()) {
    Eigen::VectorXd phase1_cost = Eigen::VectorXd::Zero(n_total);
    phase1_cost.tail(art_rows.size()).setOnes();
    reset_objective(tab, phase1_cost);
    std::vector<char> allowed(n_total, 1);
    iterations = run_phase(tab, allowed, 0, opt);
    const double infeas = -tab.obj(n_total);
    if (infeas > 1e-7)
      throw SolverError("no feasible point (phase-one objective " + std::to_string(infeas) + ")");

    // Pivot leftover artificials out of the basis, dropping redundant rows.
    for (int i = 0; i < static_cast<int>(tab.t.rows()); ++i) {
      if (tab.basis[i] < n_core) continue;
      int col = -1;
      for (int j = 0; j < n_core; ++j)
        if (std::abs(tab.t(i, j)) > kPivotEps) {
          col = j;
          break;
        }
      if (col >= 0) {
        tab.pivot(i, col);
      } else {
        const int last = static_cast<int>(tab.t.rows()) - 1;
        tab.t.row(i).swap(tab.t.row(last));
        std::swap(tab.basis[i], tab.basis[last]);
        tab.t.conservativeResize(last, Eigen::NoChange);
        tab.basis.pop_back();
        --i;
      }
    }
  }

  Eigen::VectorXd phase2_cost = Eigen::VectorXd::Zero(n_total);
  phase2_cost.head(nvars) = p.objective;
  reset_objective(tab, phase2_cost);
  std::vector<char> allowed(n_total, 1);
  for (int j = n_core; j < n_total; ++j) allowed[j] = 0;
  iterations = run_phase(tab, allowed, iterations, opt);

  // The tableau accumulates roundoff across thousands of pivots, so once the
  // final basis is known the basic values are recomputed from the original
  // standard-form data instead of being read off the drifted rhs column.
  Eigen::VectorXd shifted = Eigen::VectorXd::Zero(n_core);
  {
    const int rows = static_cast<int>(tab.basis.size());
    Eigen::MatrixXd bmat(m, rows);
    for (int i = 0; i < rows; ++i) {
      if (tab.basis[i] >= n_core) throw SolverError("artificial variable remained basic");
      bmat.col(i) = a_std.col(tab.basis[i]);
    }
    const Eigen::VectorXd xb = bmat.colPivHouseholderQr().solve(b_std);
    for (int i = 0; i < rows; ++i) shifted(tab.basis[i]) = xb(i);
  }

  const Eigen::VectorXd c_std = phase2_cost.head(n_core);
  if (static_cast<int>(tab.basis.size()) == m) {
    verify_optimality(p, shifted, a_std, b_std, c_std, tab.basis, opt.duality_tolerance);
  } else {
    // Redundant rows were dropped in phase one, so no square basis exists
    // for a dual certificate. Verify primal feasibility on the full system
    // and optimality via the tableau's reduced costs instead.
    const Eigen::VectorXd primal_residual = a_std * shifted - b_std;
    const double scale = 1.0 + b_std.cwiseAbs().maxCoeff();
    if (primal_residual.cwiseAbs().maxCoeff() > opt.duality_tolerance * scale)
      throw SolverError("primal residual exceeds tolerance after row drop");
    for (int j = 0; j < n_core; ++j)
      if (tab.obj(j) < -opt.duality_tolerance)
        throw SolverError("negative reduced cost at claimed optimum");
  }

  LpSolution sol;
  sol.x = shifted.head(nvars);
  if (p.lower.size() != 0) sol.x += p.lower;
  sol.value = p.objective.dot(sol.x);
  sol.iterations = iterations;
  return sol;
}

}  // namespace cubespec
