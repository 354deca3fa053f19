#pragma once

#include <cstdint>
#include <optional>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "qlh/pauli.hpp"

namespace qlh::exact {

inline constexpr int kDenseLimit = 12;
inline constexpr int kSparseLimit = 24;

using SparseMatrix = Eigen::SparseMatrix<Complex>;

enum class SpectrumMethod { dense, iterative };

struct SpectrumResult {
  double lambda_max = 0.0;
  std::optional<Eigen::VectorXcd> eigvec;
  SpectrumMethod method = SpectrumMethod::dense;
  double residual = 0.0;  ///< ||Hx - lambda x|| for the returned vector
  int iterations = 0;     ///< Lanczos steps taken (0 for dense)
};

struct LambdaOptions {
  int dense_limit = kDenseLimit;
  double tol = 1e-8;  ///< relative residual target for the iterative path
  int max_restarts = 400;
  int krylov_dim = 60;
  bool want_vector = true;
};

/// The 2^n x 2^n operator sum_e w_e O_e (x) I. Qubit q is bit q of the basis
/// index. Throws CapacityError for n > kSparseLimit.
SparseMatrix build_matrix(const Instance& inst);
/// Matrix-free y = H x.
void apply(const Instance& inst, const Eigen::VectorXcd& x, Eigen::VectorXcd& y);
/// Sum of |w_e| times the induced 1-norm of O_e, an upper bound on ||H||.
double norm_bound(const Instance& inst);

/// Dense eigendecomposition up to opts.dense_limit qubits, restarted Lanczos
/// with full reorthogonalization up to kSparseLimit. Throws CapacityError
/// beyond that and ConvergenceError when the restarts run out.
SpectrumResult lambda_max(const Instance& inst, const LambdaOptions& opts = {});

/// Tr[H rho] for rho = (x)_i (I + theta_i . sigma)/2, in O(|E|).
double product_energy(const Instance& inst, const ProductState& s);

struct BestProduct {
  ProductState state;
  double value = 0.0;
  int restarts = 0;
  int best_restart = 0;
};

/// Multi-start coordinate ascent over pure product states. Restart r draws
/// its start from seed ^ r; the result is independent of `threads`. The value
/// is the best found, not a certified optimum.
BestProduct best_product(const Instance& inst, int restarts, std::uint64_t seed,
                         int threads = 1);

}  // namespace qlh::exact
