#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "qlh/conic.hpp"
#include "qlh/pauli.hpp"

namespace qlh::sdp {

using Matrix8d = Eigen::Matrix<double, 8, 8>;

/// Row of sigma_i^k in the moment matrix; row 0 is the identity.
constexpr int moment_index(int i, int k) noexcept { return 1 + 3 * i + (k - 1); }
/// Row of sigma_i^k in the 3n x 3n unit-diagonal relaxation.
constexpr int pauli_index(int i, int k) noexcept { return 3 * i + (k - 1); }

inline constexpr double kDefaultClipTol = 1e-6;

/// [[Re X, -Im X], [Im X, Re X]].
Matrix8d real_embed(const Matrix4c& x);
inline Matrix8d real_embed(const Hermitian4& h) { return real_embed(h.matrix()); }
/// Inverse map on the Hermitian-compatible part:
/// rho = (Y11 + Y22)/2 + i (Y21 - Y12)/2.
Matrix4c from_real_embed(const Matrix8d& y);

/// Block 0 is M (size 3n+1); block 1+e is the real-embedded rho of term e.
/// Every term contributes 9 + 3 + 3 linking rows and one trace row.
conic::ConicProgram build_moment_relaxation(const Instance& inst);
/// One 3n x 3n block with unit diagonal and cost sum_e w_e alpha_e M(ik, jl).
/// Requires a traceless instance of single Pauli products.
conic::ConicProgram build_unit_diagonal_relaxation(const Instance& inst);

struct MomentSolution {
  Eigen::MatrixXd M;
  std::vector<Matrix4c> rho;  ///< empty for the unit-diagonal relaxation
  double objective = 0.0;
  double dual_bound = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double min_eigenvalue = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Runs the conic solver; rho blocks are mapped back through from_real_embed.
MomentSolution solve(const conic::ConicProgram& prog, const conic::SolverOptions& opts = {});

struct GramVectors {
  Eigen::VectorXd v0;  ///< empty for the unit-diagonal relaxation
  Eigen::MatrixXd V;   ///< d x 3n; column 3i + (k-1) is v_ik
  int n = 0;

  Eigen::Index dim() const noexcept { return V.rows(); }
  auto vec(int i, int k) const { return V.col(3 * i + (k - 1)); }
};

/// Factor PSD G = W^T W with W of shape rank x N, keeping eigenvalues above
/// clip_tol. Throws InfeasibleError when an eigenvalue is below -clip_tol.
Eigen::MatrixXd gram_factor(const Eigen::MatrixXd& G, double clip_tol = kDefaultClipTol);
/// Splits the factor of M into v0 and the v_ik.
GramVectors gram_vectors(const MomentSolution& sol, double clip_tol = kDefaultClipTol);
GramVectors gram_vectors(const Eigen::MatrixXd& M, double clip_tol = kDefaultClipTol);

/// Tr[O rho] = Tr[O]/4 + Tr[C M] for one term, unweighted.
double edge_value(const TwoLocalTerm& term, const Eigen::MatrixXd& M);
/// Direct Tr[O rho].
double edge_value_direct(const TwoLocalTerm& term, const Matrix4c& rho);
/// sum_e w_e (Tr[O_e]/4 + Tr[C_e M]). When rho is supplied each term is also
/// evaluated directly and InvariantError is thrown if the two disagree by
/// more than `identity_tol`.
double objective_value(const Instance& inst, const Eigen::MatrixXd& M,
                       const std::vector<Matrix4c>* rho = nullptr,
                       double identity_tol = 1e-8);

}  // namespace qlh::sdp
