#pragma once

#include <cstdint>
#include <vector>

#include "qlh/hermite.hpp"
#include "qlh/pauli.hpp"

namespace qlh::hermite {

/// Worst-case constants for general rank-k projector terms:
/// 2/pi - 1/4, 16/(9pi), 3/8 + 11/(9pi).
double alpha_general_closed(int k);
/// Strictly quadratic constants: 22/(15pi), 1/3 + 24/(25pi), 1/2 + 388/(405pi).
double alpha_quadratic_closed(int k);
/// Observed sampling minima 0.498, 0.653, 0.821 (not proven).
double conjectured_quadratic(int k);

/// (-1,-1,-1), (2,0,0), (1,1,1) for k = 1, 2, 3.
Vector3d representative_vertex(int k);

enum class RatioMethod { series, monte_carlo, quadrature };

struct RatioOptions {
  RatioMethod method = RatioMethod::series;
  std::vector<HermiteIndex> q = q3_indices();
  std::size_t samples = 100000;
  std::uint64_t seed = 0;
  int threads = 1;
  int nodes = kQuadratureNodes;
};

inline constexpr double kDenominatorFloor = 1e-9;

/// (k + E) / (k + a p + b q + c r). For the series method `value` is the
/// lower end and [lower, upper] the bracket; for Monte Carlo `std_error` is
/// set; quadrature gives lower = upper = value.
struct RatioEstimate {
  bool skipped = false;  ///< denominator below kDenominatorFloor
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double std_error = 0.0;
};

RatioEstimate ratio_quadratic(int k, const Vector3d& abc, const Vector3d& pqr,
                              const RatioOptions& opts = {});
/// Uses the representative vertex of P_k.
RatioEstimate ratio_quadratic(int k, const Vector3d& abc, const RatioOptions& opts = {});

/// Points sum_v lambda_v * vertex_v of S with lambda on the lattice
/// {0, 1/N, ..., 1}^4, sum 1: (N+1)(N+2)(N+3)/6 points.
std::vector<Vector3d> barycentric_grid(int density);

inline constexpr int kDefaultGrid = 50;

struct QuadraticCertificate {
  int k = 0;
  int grid = 0;
  std::size_t points = 0;
  std::size_t skipped = 0;
  double certified_min = 0.0;  ///< min over the grid of the Q3 lower bracket
  Vector3d certified_argmin = Vector3d::Zero();
  double observed_min = 0.0;  ///< min over the grid of the quadrature value
  Vector3d argmin_point = Vector3d::Zero();
  double mc_at_argmin = 0.0;
  double mc_std_error = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double alpha_closed = 0.0;
  double conjectured = 0.0;
  bool certified_ok = false;  ///< certified_min >= alpha_closed - kCertifySlack
};

inline constexpr double kCertifySlack = 1e-9;

/// Grid search over S. This is a numerical check on a lattice, not a proof.
QuadraticCertificate certify_bounds_quadratic(int k, int grid_density, std::size_t mc_samples,
                                              std::uint64_t seed, int threads = 1);

struct GeneralBound {
  int k = 0;
  double value = 0.0;
  Vector3d argmin = Vector3d::Zero();  ///< (v1, v2, v3)
  double c_i = 0.0;
  double c_j = 0.0;
  std::vector<Vector3d> vertices;
};

/// Vertex minimization of the coarse-grained ratio
/// (k + f v1 - 3(1/3 - f) + c_i v2 + c_j v3) / (k + v1 + v2 + v3), f = 8/(9pi),
/// over {-k <= v1 <= 4-k, -k <= v1+v2+v3 <= 4-k, |v2|, |v3| <= l(k)} and
/// c_i, c_j in {1/2, 4/(3pi)}.
GeneralBound bound_general(int k);

}  // namespace qlh::hermite
