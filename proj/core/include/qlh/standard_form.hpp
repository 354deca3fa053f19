#pragma once

#include <Eigen/Core>

#include "qlh/pauli.hpp"
#include "qlh/sdp.hpp"

namespace qlh::hermite {

inline constexpr double kPolytopeTolerance = 1e-7;

struct QuadraticStandardForm {
  double a = 0, b = 0, c = 0;  ///< signed singular values of Mq
  double p = 0, q = 0, r = 0;  ///< diag(L^T Cq N)
  Matrix3d L = Matrix3d::Identity();
  Matrix3d N = Matrix3d::Identity();
  double trace = 0.0;          ///< Tr[Mq Cq^T]

  double pairing() const noexcept { return a * p + b * q + c * r; }
};

/// SVD Mq = L diag(a,b,c) N^T with L, N in SO(3); a negative determinant is
/// fixed by negating the last column and the last singular value. Throws
/// InvariantError when (a,b,c) leaves S or (p,q,r) leaves the rank-k
/// polytope by more than tol.
QuadraticStandardForm standard_form_quadratic(const Matrix3d& Cq, const Matrix3d& Mq, int k,
                                              double tol = kPolytopeTolerance);
/// Same reduction without the polytope assertions.
QuadraticStandardForm standard_form_quadratic_unchecked(const Matrix3d& Cq, const Matrix3d& Mq);

struct LinearStandardForm {
  double d = 0.0;  ///< |V^T v0|
  double t = 0.0;  ///< component of w along V^T v0 / d
  bool degenerate = false;  ///< d == 0, t set to |w|
};

/// V holds three orthonormal columns; v0 is a unit vector.
LinearStandardForm standard_form_linear(const Eigen::MatrixXd& V, const Eigen::VectorXd& v0,
                                        const Vector3d& w);

struct EdgeStandardForm {
  double a = 0, b = 0, c = 0;
  double p = 0, q = 0, r = 0;
  double t_i = 0, t_j = 0;
  double d_i = 0, d_j = 0;
  int k = 0;
};

/// Reduction of one projector term against a factored moment matrix.
/// Columns of each qubit block are orthonormalized when the factor is not
/// exactly unit-diagonal.
EdgeStandardForm edge_standard_form(const TwoLocalTerm& term, const sdp::GramVectors& g, int k,
                                    double tol = kPolytopeTolerance);

/// 1 for k in {1, 3}, 2 for k = 2.
double linear_limit(int k);

/// Largest violation (positive means outside) of each constraint on an
/// edge: S, P_k, the quadratic pairing range, the full pairing range and the
/// one-local limits.
struct EdgeConstraintSlack {
  double in_S = 0, in_Pk = 0, pairing = 0, full_pairing = 0, linear = 0;
  double worst() const noexcept;
};
EdgeConstraintSlack edge_constraint_slack(const EdgeStandardForm& e);

/// Worst violation of the moment-polytope facts for a rank-k projector P and
/// a density rho: signed singular values of rho's quadratic moment in S,
/// diag of P's quadratic moment in P_k, the pairing range in the standard
/// frame, the one-local norm limit of P and the unit bound for rho.
struct MomentSlack {
  double singular_in_S = 0, diag_in_Pk = 0, pairing = 0, projector_local = 0,
         density_local = 0;
  double worst() const noexcept;
};
MomentSlack moment_slack(const Hermitian4& P, int k, const Hermitian4& rho);

}  // namespace qlh::hermite
