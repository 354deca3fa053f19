#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qlh/conic.hpp"
#include "qlh/exact.hpp"
#include "qlh/pauli.hpp"
#include "qlh/sdp.hpp"
#include "qlh/stats.hpp"

namespace qlh::rounding {

inline constexpr double kDegenerateEdge = 1e-9;
inline constexpr std::size_t kSampleBlock = 4096;

struct RoundingSample {
  ProductState state;
  double energy = 0.0;
  int sign_flip = 1;  ///< sign(v0 . r)
};

/// Gaussian hyperplane rounding of the Gram vectors. Sample `index` draws
/// from (seed, index); a zero projection Q_i triggers a redraw from the next
/// stream. v0 is renormalized first. With apply_sign = false the sign(v0 . r)
/// factor is dropped, which only changes 1-local contributions.
RoundingSample round_state(const sdp::GramVectors& g, std::uint64_t seed,
                           std::uint64_t index = 0, bool apply_sign = true);
RoundingSample round_once(const Instance& inst, const sdp::GramVectors& g, std::uint64_t seed,
                          std::uint64_t index = 0, bool apply_sign = true);

/// Unweighted Tr[O_e rho] for each term under a product state.
std::vector<double> edge_energies(const Instance& inst, const ProductState& s);

struct EnergyEstimate {
  MeanStderr energy;              ///< weighted total per sample
  std::vector<MeanStderr> edges;  ///< unweighted per-term energies
  std::vector<MeanStderr> theta;  ///< per (qubit, axis): index 3i + (k-1)
  RoundingSample best;
  std::uint64_t best_index = 0;
  double v0_norm_deviation = 0.0;  ///< | ||v0|| - 1 | before renormalizing
};

EnergyEstimate estimate_energy(const Instance& inst, const sdp::GramVectors& g,
                               std::size_t samples, std::uint64_t seed, int threads = 1,
                               bool apply_sign = true);

struct EdgeRatio {
  std::size_t term = 0;
  double sdp_value = 0.0;  ///< unweighted Tr[O] / 4 + Tr[C M]
  double mean = 0.0;
  double std_error = 0.0;
  double ratio = 0.0;
  double ratio_std_error = 0.0;
  bool skipped = false;  ///< zero weight or SDP value within kDegenerateEdge of 0
};

struct RatioReport {
  int n = 0;
  std::string kind;
  std::size_t terms = 0;
  double mean_energy = 0.0;
  double std_error = 0.0;
  double sdp_value = 0.0;
  double sdp_dual_bound = 0.0;
  std::optional<double> lambda_max;
  double ratio_vs_sdp = 0.0;
  std::optional<double> ratio_vs_exact;
  std::optional<double> best_product;  ///< best found by multi-start ascent
  double best_sample_energy = 0.0;
  ProductState best_sample_state;
  std::vector<EdgeRatio> edges;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double clip_tol = sdp::kDefaultClipTol;
  double v0_norm_deviation = 0.0;
  int gram_rank = 0;
  // Solver diagnostics.
  double solver_tol = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double min_eigenvalue = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct PipelineOptions {
  conic::SolverOptions solver;
  double clip_tol = sdp::kDefaultClipTol;
  int exact_limit = exact::kDenseLimit;  ///< attach lambda_max when n <= this
  int product_restarts = 0;              ///< 0 skips the product-state oracle
  int threads = 1;
};

/// Moment relaxation, Gram factor, Monte Carlo rounding and per-edge
/// accounting. Non-convergence is reported through `converged`.
RatioReport ratio_pipeline(const Instance& inst, std::size_t samples, std::uint64_t seed,
                           const PipelineOptions& opts = {});
/// Same accounting from an already solved relaxation.
RatioReport ratio_report(const Instance& inst, const sdp::MomentSolution& sol,
                         std::size_t samples, std::uint64_t seed,
                         const PipelineOptions& opts = {});

/// Lowest per-edge ratio among non-skipped edges (the worst-case-edge view).
std::optional<EdgeRatio> worst_edge(const RatioReport& r);

std::string csv_header();
std::string csv_row(const std::string& label, const RatioReport& r);

}  // namespace qlh::rounding
