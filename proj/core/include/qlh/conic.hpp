#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qlh::conic {

/// Real symmetric PSD block. `trace_bound` must bound Tr X over the feasible
/// set; it turns any dual estimate into a valid upper bound.
struct Block {
  std::string label;
  int dim = 0;
  double trace_bound = 0.0;
};

/// Entry (row, col) of a symmetric coefficient matrix on one block. Off-
/// diagonal entries stand for both (row, col) and (col, row).
struct Entry {
  int block = 0;
  int row = 0;
  int col = 0;
  double value = 0.0;
};

struct Constraint {
  std::vector<Entry> coeffs;  ///< <A, X> = rhs
  double rhs = 0.0;
};

/// maximize sum_b <C_b, X_b> + constant  s.t.  <A_m, X> = b_m,  X_b PSD.
struct ConicProgram {
  std::vector<Block> blocks;
  std::vector<Constraint> constraints;
  std::vector<Entry> cost;
  double cost_constant = 0.0;
};

struct SolverOptions {
  double tol = 1e-6;
  int max_iter = 200000;
  double relaxation = 1.6;
  double rho = 1.0;
  int rho_update_every = 50;
  double rho_balance = 10.0;  ///< rescale rho when one residual exceeds the other by this factor
  int anderson_memory = 20;   ///< 0 disables acceleration
};

struct ConicSolution {
  std::vector<Eigen::MatrixXd> X;  ///< affine-feasible iterate, per block
  double objective = 0.0;
  /// Upper bound on the optimum built from the dual iterate; always valid.
  double dual_bound = 0.0;
  double primal_residual = 0.0;  ///< ||x - z||, bounds how far X is from PSD
  double dual_residual = 0.0;    ///< rho ||z - z_prev|| / max(1, ||c||)
  double min_eigenvalue = 0.0;   ///< smallest eigenvalue over the blocks of X
  int iterations = 0;
  bool converged = false;
};

/// Throws ValidationError on malformed programs: entries out of range, empty
/// constraint rows, or linearly dependent constraints.
void check_program(const ConicProgram& prog);

/// ADMM on the splitting x in {Ax = b}, z in PSD cone, x = z. The affine
/// projection reuses one sparse LDL^T factorization of A A^T; the cone
/// projection is per-block eigenvalue clipping; rho is rebalanced every
/// rho_update_every iterations; with anderson_memory > 0 the sweep is
/// extrapolated by safeguarded Anderson mixing. Stops when both scaled
/// residuals are <= tol.
/// Never throws on non-convergence: the flag is cleared instead.
ConicSolution solve(const ConicProgram& prog, const SolverOptions& opts = {});

/// Largest |<A_m, X> - b_m| over the constraints.
double max_constraint_violation(const ConicProgram& prog, const std::vector<Eigen::MatrixXd>& X);

/// <C, X> + constant for block matrices X.
double evaluate_cost(const ConicProgram& prog, const std::vector<Eigen::MatrixXd>& X);

}  // namespace qlh::conic
