#include <doctest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "oracles.hpp"
#include "qlh/error.hpp"
#include "qlh/pauli.hpp"
#include "qlh/rng.hpp"

using namespace qlh;
using namespace qlh::pauli;

namespace {

double max_abs(const Matrix4c& m) { return m.cwiseAbs().maxCoeff(); }

Matrix4c random_hermitian(std::uint64_t seed) {
  CounterRng rng(seed, 77);
  Matrix4c g;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) g(a, b) = Complex(rng.normal(), rng.normal());
  return (g + g.adjoint()) / 2.0;
}

int rank_of(const Hermitian4& h) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(h.matrix(), Eigen::EigenvaluesOnly);
  return static_cast<int>((es.eigenvalues().array() > 0.5).count());
}

}  // namespace

TEST_CASE("pauli matrices square to identity and are traceless") {
  for (int k = 0; k < 4; ++k) {
    CHECK(max_abs(sigma_pair(k, 0) * sigma_pair(k, 0) - Matrix4c::Identity()) < 1e-15);
    if (k > 0) CHECK(std::abs(sigma(k).trace()) < 1e-15);
  }
  // XY = iZ
  CHECK((sigma(1) * sigma(2) - Complex(0, 1) * sigma(3)).cwiseAbs().maxCoeff() < 1e-15);
  // Z (x) I is diag(1, 1, -1, -1): the first factor is the high bit
  const Matrix4c zi = sigma_pair(3, 0);
  CHECK(zi(0, 0).real() == 1.0);
  CHECK(zi(1, 1).real() == 1.0);
  CHECK(zi(2, 2).real() == -1.0);
}

TEST_CASE("decompose and reconstruct are inverse") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Hermitian4 h(random_hermitian(s));
    const PauliCoeffs c = decompose(h);
    CHECK(max_abs(reconstruct(c).matrix() - h.matrix()) < 1e-13);
  }
}

TEST_CASE("singlet coefficients") {
  const PauliCoeffs c = decompose(singlet_projector());
  CHECK(c(0, 0) == doctest::Approx(0.25));
  for (int k = 1; k < 4; ++k) CHECK(c(k, k) == doctest::Approx(-0.25));
  const TwoMoment m = two_moment(c);
  CHECK(m.scalar_one == doctest::Approx(1.0));
  CHECK(m.u.norm() < 1e-14);
  CHECK(m.v.norm() < 1e-14);
  CHECK((m.R + Matrix3d::Identity()).norm() < 1e-14);
}

TEST_CASE("two moment equals traces against pauli pairs") {
  const Hermitian4 h(random_hermitian(99));
  const Matrix4d g = gamma_matrix(two_moment(h));
  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 4; ++l)
      CHECK(g(k, l) == doctest::Approx((sigma_pair(k, l) * h.matrix()).trace().real()));
}

TEST_CASE("non hermitian input is rejected") {
  Matrix4c m = Matrix4c::Zero();
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(Hermitian4{m}, ValidationError);
}

TEST_CASE("polytope facets agree with vertices") {
  for (PolytopeName p : {PolytopeName::S, PolytopeName::T, PolytopeName::negS}) {
    CHECK(facets_match_vertices(polytope(p)));
    for (const auto& v : polytope(p).vertices) CHECK(polytope_contains(polytope(p), v, 1e-12));
  }
  CHECK(polytope(PolytopeName::S).vertices.size() == 4);
  CHECK(polytope(PolytopeName::T).vertices.size() == 6);
  CHECK(&rank_polytope(1) == &polytope(PolytopeName::S));
  CHECK(&rank_polytope(3) == &polytope(PolytopeName::negS));
  CHECK_FALSE(polytope_contains(polytope(PolytopeName::S), Vector3d(1, 1, 1), 1e-9));
  CHECK(polytope_contains(polytope(PolytopeName::negS), Vector3d(1, 1, 1), 1e-9));
  CHECK(facet_violation(polytope(PolytopeName::T), Vector3d(2, 0, 0)) == doctest::Approx(0.0));
}

TEST_CASE("haar unitaries are unitary and seed determined") {
  const Matrix4c u = haar_unitary4(3, 1);
  CHECK(max_abs(u * u.adjoint() - Matrix4c::Identity()) < 1e-13);
  CHECK(max_abs(u - haar_unitary4(3, 1)) == 0.0);
  CHECK(max_abs(u - haar_unitary4(4, 1)) > 1e-3);
  const Matrix2c v = haar_unitary2(5, 2);
  CHECK((v * v.adjoint() - Matrix2c::Identity()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("random projectors are idempotent with the requested rank") {
  for (int k = 1; k <= 3; ++k)
    for (std::uint64_t s = 0; s < 10; ++s) {
      for (const Hermitian4& p : {random_projector(k, s), random_sq_projector(k, s)}) {
        const Matrix4c m = p.matrix();
        CHECK(max_abs(m * m - m) < 1e-12);
        CHECK(rank_of(p) == k);
        CHECK(m.trace().real() == doctest::Approx(k));
      }
      const TwoMoment sq = two_moment(random_sq_projector(k, s));
      CHECK(sq.u.norm() < 1e-12);
      CHECK(sq.v.norm() < 1e-12);
    }
}

TEST_CASE("bell states are orthonormal") {
  const BellState all[] = {BellState::PhiPlus, BellState::PhiMinus, BellState::PsiPlus,
                           BellState::PsiMinus};
  for (auto a : all)
    for (auto b : all)
      CHECK(std::abs(bell_vector(a).dot(bell_vector(b))) == doctest::Approx(a == b ? 1.0 : 0.0));
  CHECK(max_abs(bell_projector(BellState::PsiMinus) - singlet_projector().matrix()) < 1e-15);
}

TEST_CASE("random density is a unit trace PSD matrix") {
  for (int cols : {1, 4}) {
    const Hermitian4 r = random_density(12, cols);
    CHECK(r.matrix().trace().real() == doctest::Approx(1.0));
    Eigen::SelfAdjointEigenSolver<Matrix4c> es(r.matrix(), Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() > -1e-13);
    if (cols == 1) CHECK(es.eigenvalues().maxCoeff() == doctest::Approx(1.0));
  }
}

TEST_CASE("max2sat clauses become diagonal rank 3 projectors") {
  const std::vector<Clause> cls = {{Literal{0, false}, Literal{1, true}}};
  const Instance inst = encode_max2sat(cls, 2);
  REQUIRE(inst.terms.size() == 1);
  const Matrix4c p = reconstruct(inst.terms[0].coeffs).matrix();
  CHECK(max_abs(p - p.diagonal().asDiagonal().toDenseMatrix()) < 1e-15);
  CHECK(p.trace().real() == doctest::Approx(3.0));
  // x0 false, x1 true violates (x0 or not x1); b_i = 0, b_j = 1 is index 1
  CHECK(std::abs(p(1, 1)) < 1e-15);
  CHECK(validate_instance(inst).ok);
}

TEST_CASE("heisenberg and ising encodings") {
  const std::vector<WeightedEdge> es = {{0, 1, 2.0}, {1, 2, 0.5}};
  const Instance h = encode_heisenberg(es, 3);
  CHECK(h.terms.size() == 2);
  CHECK(h.terms[0].weight == 2.0);
  CHECK(validate_instance(h).ok);
  const Instance z = ising_instance(es, 3, 3, 3);
  CHECK(z.kind.kind == InstanceKind::traceless);
  CHECK(validate_instance(z).ok);
  CHECK(oracle::dense_lambda_max(z) == doctest::Approx(2.5));
}

TEST_CASE("random bipartite ising has only cross edges") {
  const Instance inst = random_ising_bipartite(7, 12, 4);
  CHECK(inst.terms.size() == 12);
  for (const auto& t : inst.terms) CHECK(((t.i < 4) != (t.j < 4)));
  CHECK(validate_instance(inst).ok);
}

TEST_CASE("gap instances have unit top eigenvalue") {
  for (int k = 1; k <= 3; ++k) {
    const Instance g = gap_instance(k);
    CHECK(validate_instance(g).ok);
    CHECK(oracle::dense_lambda_max(g) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("validation reports name the failing check") {
  Instance inst = encode_heisenberg(std::vector<WeightedEdge>{{0, 1, 1.0}}, 2);
  inst.kind = {InstanceKind::strictly_quadratic_projector, 1};
  CHECK(validate_instance(inst).ok);

  Instance bad = inst;
  bad.terms[0].coeffs(3, 0) = 0.1;
  ValidationReport rep = validate_instance(bad);
  CHECK_FALSE(rep.ok);
  CHECK(rep.summary().find("strictly_quadratic") != std::string::npos);
  CHECK(rep.summary().find("idempotence") != std::string::npos);
  CHECK_THROWS_AS(require_valid(bad), ValidationError);

  bad = inst;
  bad.terms[0].j = 5;
  CHECK(validate_instance(bad).issues.at(0).check == "range");

  // A rank-2 projector declared as rank 1 is flagged but not rejected.
  Instance r2 = random_sq_instance(2, 3, 2, 8);
  r2.kind.rank = 1;
  rep = validate_instance(r2);
  CHECK(rep.ok);
  REQUIRE_FALSE(rep.issues.empty());
  CHECK(rep.issues[0].flag_only);
  // Declared rank above the actual rank fails.
  Instance r1 = random_sq_instance(1, 3, 2, 8);
  r1.kind.rank = 2;
  CHECK_FALSE(validate_instance(r1).ok);

  Instance tl = ising_instance(std::vector<WeightedEdge>{{0, 1, 1.0}}, 2);
  tl.terms[0].coeffs(1, 1) = 0.3;
  CHECK(validate_instance(tl).issues.at(0).check == "single_pauli_product");
}

TEST_CASE("instance kinds round trip through strings") {
  for (const InstanceType t : {InstanceType{InstanceKind::projector, 2},
                               InstanceType{InstanceKind::strictly_quadratic_projector, 3},
                               InstanceType{InstanceKind::traceless, 0},
                               InstanceType{InstanceKind::generic, 0}})
    CHECK(parse_instance_type(to_string(t)) == t);
  CHECK_THROWS_AS(parse_instance_type("projector(4)"), ValidationError);
  CHECK_THROWS_AS(parse_instance_type("quantum"), ValidationError);
}
