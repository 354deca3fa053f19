#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qlh/error.hpp"
#include "qlh/exact.hpp"
#include "qlh/rng.hpp"

using namespace qlh;

namespace {

ProductState random_product(int n, std::uint64_t seed, bool pure) {
  CounterRng rng(seed, 5);
  ProductState s;
  for (int q = 0; q < n; ++q) {
    Vector3d t(rng.normal(), rng.normal(), rng.normal());
    t /= t.norm();
    if (!pure) t *= rng.uniform();
    s.thetas.push_back(t);
  }
  return s;
}

Instance generic_instance(int n, int edges, std::uint64_t seed) {
  Instance inst;
  inst.n = n;
  const auto es = pauli::random_edges(n, edges, seed, -1.0, 1.0);
  for (std::size_t t = 0; t < es.size(); ++t)
    inst.terms.push_back({es[t].i, es[t].j, es[t].weight,
                          pauli::decompose(pauli::random_density(seed * 31 + t, 2))});
  return inst;
}

}  // namespace

TEST_CASE("sparse matrix matches the entrywise kronecker oracle") {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Instance inst = generic_instance(4, 6, s);
    const Eigen::MatrixXcd a = Eigen::MatrixXcd(exact::build_matrix(inst));
    CHECK((a - oracle::kron_hamiltonian(inst)).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("matrix-free apply agrees with the matrix") {
  const Instance inst = generic_instance(5, 9, 3);
  const exact::SparseMatrix h = exact::build_matrix(inst);
  CounterRng rng(1, 1);
  Eigen::VectorXcd x(32), y;
  for (int a = 0; a < 32; ++a) x(a) = Complex(rng.normal(), rng.normal());
  exact::apply(inst, x, y);
  CHECK((y - h * x).norm() < 1e-12);
}

TEST_CASE("dense and lanczos agree with the oracle") {
  for (std::uint64_t s = 0; s < 4; ++s) {
    const Instance inst = pauli::random_projector_instance(1 + s % 3, 7, 12, s);
    const double ref = oracle::dense_lambda_max(inst);
    const exact::SpectrumResult d = exact::lambda_max(inst);
    CHECK(d.method == exact::SpectrumMethod::dense);
    CHECK(d.lambda_max == doctest::Approx(ref).epsilon(1e-10));
    exact::LambdaOptions it;
    it.dense_limit = 0;
    const exact::SpectrumResult l = exact::lambda_max(inst, it);
    CHECK(l.method == exact::SpectrumMethod::iterative);
    CHECK(l.lambda_max == doctest::Approx(ref).epsilon(1e-7));
    REQUIRE(l.eigvec);
    CHECK(l.residual < 1e-6 * std::max(1.0, ref));
    CHECK(ref <= exact::norm_bound(inst) + 1e-12);
  }
}

TEST_CASE("heisenberg path top eigenvalue") {
  // Two singlet projectors on a 3-site path cannot both be saturated; the
  // top eigenvalue of P01 + P12 is 3/2.
  const Instance inst = pauli::encode_heisenberg(oracle::path(3, 1.0), 3);
  CHECK(exact::lambda_max(inst).lambda_max == doctest::Approx(1.5));
}

TEST_CASE("size limits") {
  Instance big;
  big.n = exact::kSparseLimit + 1;
  CHECK_THROWS_AS(exact::build_matrix(big), CapacityError);
  CHECK_THROWS_AS(exact::lambda_max(big), CapacityError);
}

TEST_CASE("product energy matches the dense density matrix") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Instance inst = generic_instance(5, 8, s + 40);
    const ProductState p = random_product(5, s, s % 2 == 0);
    CHECK(exact::product_energy(inst, p) ==
          doctest::Approx(oracle::product_energy_dense(inst, p)).epsilon(1e-12));
  }
}

TEST_CASE("best product reaches the classical optimum on diagonal instances") {
  const auto cls = pauli::random_clauses(6, 14, 3);
  const Instance inst = pauli::encode_max2sat(cls, 6);
  const exact::BestProduct bp = exact::best_product(inst, 16, 7);
  CHECK(bp.value == doctest::Approx(oracle::max2sat_brute_force(cls, 6)).epsilon(1e-9));
  CHECK(bp.state.is_pure());
  CHECK(bp.value == doctest::Approx(exact::product_energy(inst, bp.state)));
  CHECK(bp.value <= exact::lambda_max(inst).lambda_max + 1e-9);
}

TEST_CASE("best product is independent of the worker count") {
  const Instance inst = pauli::random_projector_instance(2, 5, 8, 9);
  const exact::BestProduct a = exact::best_product(inst, 12, 3, 1);
  const exact::BestProduct b = exact::best_product(inst, 12, 3, 4);
  CHECK(a.value == b.value);
  CHECK(a.best_restart == b.best_restart);
  for (int q = 0; q < 5; ++q) CHECK(a.state.thetas[q] == b.state.thetas[q]);
}

TEST_CASE("gap instance product values") {
  const double expect[] = {0.5, 2.0 / 3.0, 5.0 / 6.0};
  for (int k = 1; k <= 3; ++k)
    CHECK(exact::best_product(pauli::gap_instance(k), 32, 1).value ==
          doctest::Approx(expect[k - 1]).epsilon(1e-6));
}
