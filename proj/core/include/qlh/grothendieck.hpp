#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qlh/conic.hpp"
#include "qlh/pauli.hpp"
#include "qlh/sdp.hpp"
#include "qlh/stats.hpp"

namespace qlh::grothendieck {

/// ln(1 + sqrt 2) = asinh(1).
inline const double kKrivineC = std::asinh(1.0);
/// 2c / (3 pi).
double product_guarantee();

struct PauliVertex {
  int qubit = 0;
  int axis = 1;  ///< 1, 2, 3 for X, Y, Z

  int index() const noexcept { return 3 * qubit + axis - 1; }
  std::string label() const;
};

struct PauliEdge {
  int u = 0;  ///< positions in PauliGraph::vertices
  int v = 0;
  double weight = 0.0;  ///< w_e alpha_e(k, l)
  std::size_t term = 0;
};

struct PauliGraph {
  int n = 0;
  std::vector<PauliVertex> vertices;  ///< active vertices in (qubit, axis) order
  std::vector<PauliEdge> edges;
  std::optional<std::vector<int>> sides;  ///< 0/1 per vertex when bipartite
  std::vector<std::string> odd_cycle;     ///< closed walk labels when not

  bool bipartite() const noexcept { return sides.has_value(); }
};

/// Requires a valid traceless instance (ValidationError naming the term
/// otherwise). Two-coloring is breadth-first from each uncolored vertex in
/// vertex order.
PauliGraph pauli_graph(const Instance& inst);

/// 3n x 3n symmetric, A(ik, jl) = A(jl, ik) = w alpha / 2 summed over terms.
Eigen::MatrixXd build_A(const Instance& inst);
/// z^T A z for a +-1 vector indexed 3i + k - 1.
double classical_objective(const Eigen::MatrixXd& A, const Eigen::VectorXd& z);

struct KrivineGram {
  Eigen::MatrixXd K;
  std::vector<int> sides;
  double c = kKrivineC;
};

/// Within-side blocks sinh(c G), cross blocks sin(c G). Throws
/// InfeasibleError if K has an eigenvalue below -1e-6.
KrivineGram krivine_gram(const Eigen::MatrixXd& G, const std::vector<int>& sides);

/// Unit vectors w_v (columns) whose Gram matrix is K up to eigenvalue
/// clipping.
Eigen::MatrixXd rounding_vectors(const Eigen::MatrixXd& K, double clip_tol = sdp::kDefaultClipTol);
/// z_v = sign(g . w_v) for sample `index`.
std::vector<int> hyperplane_signs(const Eigen::MatrixXd& W, std::uint64_t seed,
                                  std::uint64_t index);
/// E[z_u z_v] over `samples` hyperplane draws.
MeanStderr pair_correlation(const Eigen::MatrixXd& W, int u, int v, std::size_t samples,
                            std::uint64_t seed, int threads = 1);

enum class Rounder { krivine, hyperplane };
std::string to_string(Rounder r);

struct TracelessReport {
  int n = 0;
  std::size_t terms = 0;
  std::string rounder;
  std::size_t active_vertices = 0;
  std::size_t left = 0, right = 0;
  bool bipartite = false;
  double sdp_value = 0.0;
  double sdp_dual_bound = 0.0;
  double classical_objective = 0.0;  ///< mean z^T A z
  double classical_std_error = 0.0;
  double mean_energy = 0.0;  ///< mean product energy, classical / 3
  double std_error = 0.0;
  std::optional<double> lambda_max;
  std::optional<double> ratio_vs_exact;
  double guarantee = 0.0;  ///< 2c/(3pi) for Krivine, absent (0) otherwise
  ProductState best_state;
  double best_energy = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double solver_tol = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double min_eigenvalue = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct TracelessOptions {
  conic::SolverOptions solver;
  int exact_limit = 12;
  int threads = 1;
};

/// Unit-diagonal relaxation, Krivine rounding, theta_ik = z_ik / sqrt 3. Throws
/// StructureError with the odd-cycle witness when the graph is not
/// bipartite.
TracelessReport bipartite_pipeline(const Instance& inst, std::size_t samples, std::uint64_t seed,
                                   const TracelessOptions& opts = {});
/// Same accounting with a chosen rounder; Krivine still needs bipartiteness.
TracelessReport generic_traceless_pipeline(const Instance& inst, Rounder rounder,
                                           std::size_t samples, std::uint64_t seed,
                                           const TracelessOptions& opts = {});

/// theta_i = (z_i1, z_i2, z_i3) / sqrt 3 with z indexed 3i + k - 1.
ProductState scaled_state(const std::vector<int>& z, int n);

}  // namespace qlh::grothendieck
