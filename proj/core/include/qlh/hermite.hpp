#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "qlh/stats.hpp"

namespace qlh::hermite {

/// Multi-index (i, j, k) of h_i(z1) h_j(z2) h_k(z3).
struct HermiteIndex {
  int i = 0;
  int j = 0;
  int k = 0;

  friend bool operator==(const HermiteIndex&, const HermiteIndex&) = default;
};

struct Bracket {
  double lower = 0.0;
  double upper = 0.0;

  double center() const noexcept { return 0.5 * (lower + upper); }
  double width() const noexcept { return upper - lower; }
  bool contains(double x) const noexcept { return lower <= x && x <= upper; }
  bool intersects(double lo, double hi) const noexcept { return lower <= hi && lo <= upper; }
};

/// {(1,0,0), (1,0,2), (3,0,0)}.
const std::vector<HermiteIndex>& q3_indices();
/// Every (i, j, k) with i odd, j <= k both even and i + j + k <= max_degree.
std::vector<HermiteIndex> indices_up_to(int max_degree);

/// Orthonormal (probabilists') Hermite polynomial from the explicit
/// double-sum formula.
double hermite_poly(int n, double z);
/// Product h_{mu_1}(z_1) ... h_{mu_r}(z_r).
double hermite_product(std::span<const int> mu, std::span<const double> z);

/// Coefficient of h_i in sign(z).
double sign_coeff(int i);

/// Coefficient of h_i(z1) h_j(z2) h_k(z3) in z1 / |z|, z in R^3.
double f_coeff(int i, int j, int k);
inline double f_coeff(const HermiteIndex& m) { return f_coeff(m.i, m.j, m.k); }
/// Same coefficient for z1 / |z| with z in R^r, r = mu.size(). Only odd r is
/// supported (DomainError otherwise).
double f_coeff_general(std::span<const int> mu);
/// <z1/|z|, h_mu> estimated by sampling z ~ N(0, I_r).
MeanStderr f_coeff_mc(std::span<const int> mu, std::size_t samples, std::uint64_t seed,
                      int threads = 1);

/// E[prod z_i^{b_i} / |z|] for z ~ N(0, I_r), r = b.size() >= 2. Any odd
/// exponent gives 0.
double gaussian_moment(std::span<const int> b);

/// a^i b^j c^k + a^i b^k c^j (one term when j == k).
double u_poly(int i, int j, int k, double a, double b, double c);
/// u(a,b,c) + u(b,a,c) + u(c,a,b).
double p_poly(int i, int j, int k, double a, double b, double c);

/// 1/3 - sum over Q of 2^{1 - [j == k]} f^2: the Parseval mass left out of
/// each axis by truncating to Q.
double tail_mass(std::span<const HermiteIndex> q);

/// Cross correlations (a, b, c) and per-axis weights (p, q, r).
struct QuadParams {
  double a = 0.0, b = 0.0, c = 0.0;
  double p = 0.0, q = 0.0, r = 0.0;
};

/// E[(p z1 z1' + q z2 z2' + r z3 z3') / (|z| |z'|)] with z' = diag(a,b,c) z +
/// diag(sqrt(1-a^2), ...) w.
MeanStderr quad_expectation_mc(const QuadParams& x, std::size_t samples, std::uint64_t seed,
                               int threads = 1);
/// Truncated series over Q with the remainder folded into the bracket:
/// half-width |p| T when a single weight is nonzero, 3 max(|p|,|q|,|r|) T
/// otherwise, T = tail_mass(Q).
Bracket quad_expectation_series(const QuadParams& x, std::span<const HermiteIndex> q);

inline constexpr int kQuadratureNodes = 48;
/// (E[z1 z1'/(|z||z'|)], E[z2 z2'/...], E[z3 z3'/...]) by tensor Gauss-Legendre
/// on the two-angle integral representation.
Eigen::Vector3d quad_components_quadrature(double a, double b, double c,
                                           int nodes = kQuadratureNodes);
double quad_expectation_quadrature(const QuadParams& x, int nodes = kQuadratureNodes);

/// Gauss-Legendre nodes and weights on [-1, 1] (Golub-Welsch).
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// E[sign(s) x1 / |x|] for x ~ N(0, I_3), corr(s, x1) = d:
/// (4d / 3pi) 2F1(1/2, 1/2; 5/2; d^2). |d| = 1 returns d/2.
double linear_expectation(double d);
/// Series cutoff: stop at a term below 1e-15 or after this many terms.
inline constexpr int kMaxHypergeometricTerms = 100000;
MeanStderr linear_expectation_mc(double d, std::size_t samples, std::uint64_t seed,
                                 int threads = 1);

/// Squared leading coefficients: 8/(9pi), 4/(225pi), 4/(75pi).
struct LeadingCoeffs {
  double f100, f102, f300;
};
LeadingCoeffs leading_coeffs();

/// q1, q2, q3 built from the three leading coefficients and their tail R.
double q_function(int which, double a, double b, double c);

}  // namespace qlh::hermite
