#include "qlh/standard_form.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SVD>

#include "qlh/error.hpp"

namespace qlh::hermite {

namespace {

void check_rank(int k) {
  if (k < 1 || k > 3) throw ValidationError("projector rank must be 1, 2 or 3");
}

/// Mq = L diag(s) N^T with det L = det N = +1.
void signed_svd(const Matrix3d& m, Matrix3d& L, Vector3d& s, Matrix3d& N) {
  Eigen::JacobiSVD<Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  L = svd.matrixU();
  N = svd.matrixV();
  s = svd.singularValues();
  if (L.determinant() < 0) {
    L.col(2) *= -1.0;
    s(2) *= -1.0;
  }
  if (N.determinant() < 0) {
    N.col(2) *= -1.0;
    s(2) *= -1.0;
  }
}

/// Nearest matrix with orthonormal columns (polar factor).
Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& V) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(V, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().transpose();
}

}  // namespace

double linear_limit(int k) {
  check_rank(k);
  return k == 2 ? 2.0 : 1.0;
}

QuadraticStandardForm standard_form_quadratic_unchecked(const Matrix3d& Cq, const Matrix3d& Mq) {
  QuadraticStandardForm out;
  Vector3d s;
  signed_svd(Mq, out.L, s, out.N);
  out.a = s(0);
  out.b = s(1);
  out.c = s(2);
  const Matrix3d rot = out.L.transpose() * Cq * out.N;
  out.p = rot(0, 0);
  out.q = rot(1, 1);
  out.r = rot(2, 2);
  out.trace = (Mq * Cq.transpose()).trace();
  return out;
}

QuadraticStandardForm standard_form_quadratic(const Matrix3d& Cq, const Matrix3d& Mq, int k,
                                              double tol) {
  check_rank(k);
  QuadraticStandardForm out = standard_form_quadratic_unchecked(Cq, Mq);
  const double vs = pauli::facet_violation(pauli::polytope(pauli::PolytopeName::S),
                                           Vector3d(out.a, out.b, out.c));
  const double vp =
      pauli::facet_violation(pauli::rank_polytope(k), Vector3d(out.p, out.q, out.r));
  if (vs > tol || vp > tol) {
    std::ostringstream msg;
    msg << "standard form left its polytope: (a,b,c) violation " << vs
        << ", (p,q,r) violation " << vp << " for rank " << k;
    throw InvariantError(msg.str());
  }
  return out;
}

LinearStandardForm standard_form_linear(const Eigen::MatrixXd& V, const Eigen::VectorXd& v0,
                                        const Vector3d& w) {
  if (V.cols() != 3 || V.rows() != v0.size())
    throw ValidationError("linear standard form needs a d x 3 block and a length-d vector");
  const Vector3d x = V.transpose() * v0;
  LinearStandardForm out;
  out.d = x.norm();
  if (out.d == 0.0) {
    out.degenerate = true;
    out.t = w.norm();
    return out;
  }
  out.t = x.dot(w) / out.d;
  return out;
}

EdgeStandardForm edge_standard_form(const TwoLocalTerm& term, const sdp::GramVectors& g, int k,
                                    double tol) {
  check_rank(k);
  if (g.v0.size() == 0) throw ValidationError("edge standard form needs v0");
  if (term.i < 0 || term.j >= g.n) throw ValidationError("term outside the factored system");
  const TwoMoment tm = pauli::two_moment(term.coeffs);
  const Eigen::MatrixXd Vi = orthonormalize(g.V.middleCols(3 * term.i, 3));
  const Eigen::MatrixXd Vj = orthonormalize(g.V.middleCols(3 * term.j, 3));
  const Eigen::VectorXd v0 = g.v0.normalized();
  const Matrix3d Mq = Vi.transpose() * Vj;
  const QuadraticStandardForm qf = standard_form_quadratic(tm.R, Mq, k, tol);
  const LinearStandardForm li = standard_form_linear(Vi, v0, tm.u);
  const LinearStandardForm lj = standard_form_linear(Vj, v0, tm.v);
  EdgeStandardForm e;
  e.a = qf.a;
  e.b = qf.b;
  e.c = qf.c;
  e.p = qf.p;
  e.q = qf.q;
  e.r = qf.r;
  e.t_i = li.t;
  e.d_i = li.degenerate ? 0.0 : li.d;
  e.t_j = lj.t;
  e.d_j = lj.degenerate ? 0.0 : lj.d;
  e.k = k;
  return e;
}

double EdgeConstraintSlack::worst() const noexcept {
  return std::max({in_S, in_Pk, pairing, full_pairing, linear});
}

EdgeConstraintSlack edge_constraint_slack(const EdgeStandardForm& e) {
  check_rank(e.k);
  EdgeConstraintSlack s;
  s.in_S = pauli::facet_violation(pauli::polytope(pauli::PolytopeName::S),
                                  Vector3d(e.a, e.b, e.c));
  s.in_Pk = pauli::facet_violation(pauli::rank_polytope(e.k), Vector3d(e.p, e.q, e.r));
  const double k = e.k;
  const double m = e.a * e.p + e.b * e.q + e.c * e.r;
  s.pairing = std::max(-k - m, m - (4 - k));
  const double full = m + e.t_i * e.d_i + e.t_j * e.d_j;
  s.full_pairing = std::max(-k - full, full - (4 - k));
  s.linear = std::max(std::abs(e.t_i * e.d_i), std::abs(e.t_j * e.d_j)) - linear_limit(e.k);
  return s;
}

double MomentSlack::worst() const noexcept {
  return std::max({singular_in_S, diag_in_Pk, pairing, projector_local, density_local});
}

MomentSlack moment_slack(const Hermitian4& P, int k, const Hermitian4& rho) {
  check_rank(k);
  const TwoMoment g = pauli::two_moment(P);
  const TwoMoment d = pauli::two_moment(rho);
  MomentSlack s;
  Matrix3d L, N;
  Vector3d sig;
  signed_svd(d.R, L, sig, N);
  s.singular_in_S = pauli::facet_violation(pauli::polytope(pauli::PolytopeName::S), sig);
  const Vector3d diag = g.R.diagonal();
  s.diag_in_Pk = pauli::facet_violation(pauli::rank_polytope(k), diag);
  const double kk = k;
  const double plain = sig.dot(diag);
  const double framed = sig.dot((L.transpose() * g.R * N).diagonal());
  s.pairing = std::max({-kk - plain, plain - (4 - kk), -kk - framed, framed - (4 - kk)});
  s.projector_local = std::max(g.u.norm(), g.v.norm()) - linear_limit(k);
  s.density_local = std::max(d.u.norm(), d.v.norm()) - 1.0;
  return s;
}

}  // namespace qlh::hermite
