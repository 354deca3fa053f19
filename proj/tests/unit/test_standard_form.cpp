#include <doctest.h>

#include "qlh/error.hpp"
#include "qlh/rng.hpp"
#include "qlh/sdp.hpp"
#include "qlh/standard_form.hpp"

using namespace qlh;
using namespace qlh::hermite;

namespace {

Matrix3d quadratic_block(const Hermitian4& h) { return pauli::two_moment(h).R; }

}  // namespace

TEST_CASE("reduction factors the moment with proper rotations") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const Matrix3d M = quadratic_block(pauli::random_density(s));
    const Matrix3d C = quadratic_block(pauli::random_projector(1 + s % 3, s + 100));
    const QuadraticStandardForm f = standard_form_quadratic_unchecked(C, M);
    CHECK(f.L.determinant() == doctest::Approx(1.0));
    CHECK(f.N.determinant() == doctest::Approx(1.0));
    CHECK((f.L.transpose() * f.L - Matrix3d::Identity()).norm() < 1e-12);
    const Matrix3d back = f.L * Vector3d(f.a, f.b, f.c).asDiagonal() * f.N.transpose();
    CHECK((back - M).norm() < 1e-12);
    const Matrix3d rot = f.L.transpose() * C * f.N;
    CHECK(rot(0, 0) == doctest::Approx(f.p));
    CHECK(rot(2, 2) == doctest::Approx(f.r));
    // Tr[M C^T] only sees the diagonal in the standard frame.
    CHECK(f.trace == doctest::Approx((M * C.transpose()).trace()).epsilon(1e-12));
    CHECK(f.pairing() == doctest::Approx(f.trace).epsilon(1e-10));
  }
}

TEST_CASE("moments of states and projectors lie in their polytopes") {
  for (std::uint64_t s = 0; s < 200; ++s) {
    const int k = 1 + static_cast<int>(s % 3);
    const Hermitian4 P = (s % 2) ? pauli::random_projector(k, s) : pauli::random_sq_projector(k, s);
    const Hermitian4 rho = pauli::random_density(s + 7, 1 + static_cast<int>(s % 4));
    const MomentSlack m = moment_slack(P, k, rho);
    CHECK(m.worst() <= 1e-9);
    CHECK_NOTHROW(standard_form_quadratic(quadratic_block(P), quadratic_block(rho), k));
  }
}

TEST_CASE("reduction rejects moments outside the polytopes") {
  const Matrix3d C = quadratic_block(pauli::singlet_projector());
  CHECK_THROWS_AS(standard_form_quadratic(C, 2.0 * Matrix3d::Identity(), 1), InvariantError);
  // The singlet's own diagonal (-1,-1,-1) is in S but not in T.
  CHECK_NOTHROW(standard_form_quadratic(C, -Matrix3d::Identity(), 1));
  CHECK_THROWS_AS(standard_form_quadratic(C, -Matrix3d::Identity(), 2), InvariantError);
}

TEST_CASE("linear reduction") {
  Eigen::MatrixXd V = Eigen::MatrixXd::Zero(5, 3);
  V(1, 0) = V(2, 1) = V(3, 2) = 1.0;
  Eigen::VectorXd v0 = Eigen::VectorXd::Zero(5);
  v0(0) = 0.6;
  v0(1) = 0.8;
  const LinearStandardForm f = standard_form_linear(V, v0, Vector3d(0.5, 0.2, -0.1));
  CHECK(f.d == doctest::Approx(0.8));
  CHECK(f.t == doctest::Approx(0.5));
  CHECK_FALSE(f.degenerate);

  v0.setZero();
  v0(0) = 1.0;
  const LinearStandardForm g = standard_form_linear(V, v0, Vector3d(0.3, 0.4, 0.0));
  CHECK(g.degenerate);
  CHECK(g.d == 0.0);
  CHECK(g.t == doctest::Approx(0.5));
}

TEST_CASE("one local limits") {
  CHECK(linear_limit(1) == 1.0);
  CHECK(linear_limit(2) == 2.0);
  CHECK(linear_limit(3) == 1.0);
}

TEST_CASE("edges of a solved relaxation satisfy every constraint") {
  for (int k = 1; k <= 3; ++k) {
    const Instance inst = pauli::random_projector_instance(k, 4, 5, 40 + k);
    const sdp::MomentSolution sol = sdp::solve(sdp::build_moment_relaxation(inst));
    const sdp::GramVectors g = sdp::gram_vectors(sol);
    for (const auto& t : inst.terms) {
      const EdgeStandardForm e = edge_standard_form(t, g, k, 1e-4);
      CHECK(e.k == k);
      CHECK(edge_constraint_slack(e).worst() <= 1e-4);
    }
  }
}
