#include "qlh/hermite.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "qlh/error.hpp"
#include "qlh/montecarlo.hpp"
#include "qlh/rng.hpp"

namespace qlh::hermite {

namespace {

constexpr std::uint64_t kStreamQuad = 0x51554144ull;
constexpr std::uint64_t kStreamLinear = 0x4C494E45ull;
constexpr std::uint64_t kStreamCoeff = 0x46484154ull;

constexpr double kPi = std::numbers::pi;

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

/// log(n!!), with (-1)!! = 0!! = 1.
double log_double_factorial(int n) {
  if (n <= 0) return 0.0;
  const int m = n / 2;
  if (n % 2 == 0) return m * std::numbers::ln2 + log_factorial(m);
  return log_factorial(n) - m * std::numbers::ln2 - log_factorial(m);
}

bool is_odd(int n) { return n % 2 != 0; }

double ipow(double x, int e) {
  double r = 1.0;
  for (int t = 0; t < e; ++t) r *= x;
  return r;
}

}  // namespace

const std::vector<HermiteIndex>& q3_indices() {
  static const std::vector<HermiteIndex> q{{1, 0, 0}, {1, 0, 2}, {3, 0, 0}};
  return q;
}

std::vector<HermiteIndex> indices_up_to(int max_degree) {
  std::vector<HermiteIndex> out;
  for (int i = 1; i <= max_degree; i += 2)
    for (int j = 0; i + j <= max_degree; j += 2)
      for (int k = j; i + j + k <= max_degree; k += 2) out.push_back({i, j, k});
  return out;
}

double hermite_poly(int n, double z) {
  if (n < 0) throw ValidationError("Hermite degree must be nonnegative");
  const int m = n / 2;
  const int odd = n % 2;
  const double lead = 0.5 * log_factorial(n) - 0.5 * n * std::numbers::ln2;
  const double s = std::numbers::sqrt2 * z;
  double sum = 0.0;
  for (int l = 0; l <= m; ++l) {
    const int e = 2 * l + odd;
    const double mag = std::exp(lead - log_factorial(e) - log_factorial(m - l));
    const double sign = ((m - l) % 2 == 0) ? 1.0 : -1.0;
    sum += sign * mag * ipow(s, e);
  }
  return sum;
}

double hermite_product(std::span<const int> mu, std::span<const double> z) {
  if (mu.size() != z.size()) throw ValidationError("multi-index and point differ in length");
  double r = 1.0;
  for (std::size_t t = 0; t < mu.size(); ++t) r *= hermite_poly(mu[t], z[t]);
  return r;
}

double sign_coeff(int i) {
  if (i < 0) throw ValidationError("Hermite degree must be nonnegative");
  if (!is_odd(i)) return 0.0;
  const int q = (i - 1) / 2;
  const double lg = 0.5 * log_factorial(i) - (q - 0.5) * std::numbers::ln2 -
                    0.5 * std::log(kPi) - log_factorial(q) - std::log(1.0 + 2.0 * q);
  return (q % 2 == 0 ? 1.0 : -1.0) * std::exp(lg);
}

double f_coeff_general(std::span<const int> mu) {
  const int r = static_cast<int>(mu.size());
  if (r < 1 || !is_odd(r))
    throw DomainError("closed-form coefficients are only available for odd dimension");
  int total = 0;
  for (int m : mu) {
    if (m < 0) throw ValidationError("Hermite degree must be nonnegative");
    total += m;
  }
  if (!is_odd(mu[0])) return 0.0;
  for (int t = 1; t < r; ++t)
    if (is_odd(mu[static_cast<std::size_t>(t)])) return 0.0;
  const int p = (total - 1) / 2;
  double lg = 0.5 * std::log(2.0 / kPi) + log_double_factorial(r - 1) -
              log_double_factorial(mu[0] - 1);
  for (int m : mu) lg += 0.5 * log_factorial(m);
  for (int t = 1; t < r; ++t) lg -= log_double_factorial(mu[static_cast<std::size_t>(t)]);
  for (int o = 1; o <= r; o += 2) lg -= std::log(2.0 * p + o);
  return (p % 2 == 0 ? 1.0 : -1.0) * std::exp(lg);
}

double f_coeff(int i, int j, int k) {
  const int mu[3] = {i, j, k};
  return f_coeff_general(mu);
}

MeanStderr f_coeff_mc(std::span<const int> mu, std::size_t samples, std::uint64_t seed,
                      int threads) {
  const std::vector<int> m(mu.begin(), mu.end());
  if (m.empty()) throw ValidationError("empty multi-index");
  return monte_carlo(samples, threads, [&](std::uint64_t s) {
    CounterRng rng(seed, kStreamCoeff, s);
    std::vector<double> z(m.size());
    double n2 = 0.0;
    for (double& x : z) {
      x = rng.normal();
      n2 += x * x;
    }
    const double nz = std::sqrt(n2);
    return nz > 0 ? z[0] / nz * hermite_product(m, z) : 0.0;
  });
}

double gaussian_moment(std::span<const int> b) {
  const int r = static_cast<int>(b.size());
  if (r < 2) throw DomainError("E[1/|z|] diverges in one dimension");
  int total = 0;
  for (int e : b) {
    if (e < 0) throw ValidationError("exponents must be nonnegative");
    if (is_odd(e)) return 0.0;
    total += e;
  }
  const double cr = is_odd(r) ? std::sqrt(2.0 / kPi) : std::sqrt(kPi / 2.0);
  double lg = log_double_factorial(total + r - 3) - log_double_factorial(total + r - 2);
  for (int e : b) lg += log_double_factorial(e - 1);
  return cr * std::exp(lg);
}

double u_poly(int i, int j, int k, double a, double b, double c) {
  const double base = ipow(a, i);
  if (j == k) return base * ipow(b, j) * ipow(c, k);
  return base * (ipow(b, j) * ipow(c, k) + ipow(b, k) * ipow(c, j));
}

double p_poly(int i, int j, int k, double a, double b, double c) {
  return u_poly(i, j, k, a, b, c) + u_poly(i, j, k, b, a, c) + u_poly(i, j, k, c, a, b);
}

double tail_mass(std::span<const HermiteIndex> q) {
  double captured = 0.0;
  for (const auto& m : q) {
    const double f = f_coeff(m);
    captured += (m.j == m.k ? 1.0 : 2.0) * f * f;
  }
  return 1.0 / 3.0 - captured;
}

MeanStderr quad_expectation_mc(const QuadParams& x, std::size_t samples, std::uint64_t seed,
                               int threads) {
  for (double v : {x.a, x.b, x.c})
    if (!(std::abs(v) <= 1.0)) throw DomainError("cross correlations must lie in [-1, 1]");
  const double corr[3] = {x.a, x.b, x.c};
  const double comp[3] = {std::sqrt(1 - x.a * x.a), std::sqrt(1 - x.b * x.b),
                          std::sqrt(1 - x.c * x.c)};
  const double wts[3] = {x.p, x.q, x.r};
  return monte_carlo(samples, threads, [&](std::uint64_t s) {
    CounterRng rng(seed, kStreamQuad, s);
    double z[3], zp[3];
    for (double& v : z) v = rng.normal();
    for (int t = 0; t < 3; ++t) zp[t] = corr[t] * z[t] + comp[t] * rng.normal();
    const double nz = std::sqrt(z[0] * z[0] + z[1] * z[1] + z[2] * z[2]);
    const double nzp = std::sqrt(zp[0] * zp[0] + zp[1] * zp[1] + zp[2] * zp[2]);
    if (!(nz > 0 && nzp > 0)) return 0.0;
    return (wts[0] * z[0] * zp[0] + wts[1] * z[1] * zp[1] + wts[2] * z[2] * zp[2]) / (nz * nzp);
  });
}

Bracket quad_expectation_series(const QuadParams& x, std::span<const HermiteIndex> q) {
  double ea = 0.0, eb = 0.0, ec = 0.0;
  for (const auto& m : q) {
    if (m.j > m.k) throw ValidationError("truncation indices need j <= k");
    const double f = f_coeff(m);
    const double f2 = f * f;
    ea += f2 * u_poly(m.i, m.j, m.k, x.a, x.b, x.c);
    eb += f2 * u_poly(m.i, m.j, m.k, x.b, x.a, x.c);
    ec += f2 * u_poly(m.i, m.j, m.k, x.c, x.a, x.b);
  }
  const double center = x.p * ea + x.q * eb + x.r * ec;
  const double tail = std::max(0.0, tail_mass(q));
  const int nonzero = (x.p != 0.0) + (x.q != 0.0) + (x.r != 0.0);
  const double scale = std::max({std::abs(x.p), std::abs(x.q), std::abs(x.r)});
  const double half = (nonzero <= 1 ? 1.0 : 3.0) * scale * tail;
  return {center - half, center + half};
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw ValidationError("quadrature needs at least one node");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double beta = k / std::sqrt(4.0 * k * k - 1.0);
    J(k, k - 1) = J(k - 1, k) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  nodes.resize(static_cast<std::size_t>(n));
  weights.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    nodes[static_cast<std::size_t>(k)] = es.eigenvalues()(k);
    const double v = es.eigenvectors()(0, k);
    weights[static_cast<std::size_t>(k)] = 2.0 * v * v;
  }
}

namespace {

/// Tensor nodes on [0, pi/2]^2: S = sin^2(alpha) sin^2(beta) and the weight
/// times cos^3(alpha) cos^3(beta).
struct AngleRule {
  std::vector<double> s;
  std::vector<double> w;
};

const AngleRule& angle_rule(int n) {
  static std::mutex mu;
  static std::map<int, AngleRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  AngleRule rule;
  for (int i = 0; i < n; ++i) {
    const double ai = (x[static_cast<std::size_t>(i)] + 1.0) * kPi / 4.0;
    const double wi = w[static_cast<std::size_t>(i)] * kPi / 4.0;
    for (int j = 0; j < n; ++j) {
      const double aj = (x[static_cast<std::size_t>(j)] + 1.0) * kPi / 4.0;
      const double wj = w[static_cast<std::size_t>(j)] * kPi / 4.0;
      const double si = std::sin(ai), sj = std::sin(aj);
      rule.s.push_back(si * si * sj * sj);
      rule.w.push_back(wi * wj * ipow(std::cos(ai), 3) * ipow(std::cos(aj), 3));
    }
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

}  // namespace

Eigen::Vector3d quad_components_quadrature(double a, double b, double c, int nodes) {
  for (double v : {a, b, c})
    if (!(std::abs(v) <= 1.0)) throw DomainError("cross correlations must lie in [-1, 1]");
  const AngleRule& rule = angle_rule(nodes);
  double sa = 0.0, sb = 0.0, sc = 0.0;
  for (std::size_t t = 0; t < rule.s.size(); ++t) {
    const double s = rule.s[t];
    const double ia = 1.0 / (1.0 - a * a * s);
    const double ib = 1.0 / (1.0 - b * b * s);
    const double ic = 1.0 / (1.0 - c * c * s);
    const double g = rule.w[t] * std::sqrt(ia * ib * ic);
    sa += g * ia;
    sb += g * ib;
    sc += g * ic;
  }
  return (2.0 / kPi) * Eigen::Vector3d(a * sa, b * sb, c * sc);
}

double quad_expectation_quadrature(const QuadParams& x, int nodes) {
  const Eigen::Vector3d e = quad_components_quadrature(x.a, x.b, x.c, nodes);
  return x.p * e(0) + x.q * e(1) + x.r * e(2);
}

double linear_expectation(double d) {
  if (!(std::abs(d) <= 1.0)) throw DomainError("linear covariance must lie in [-1, 1]");
  if (std::abs(d) == 1.0) return d / 2.0;
  const double x = d * d;
  double term = 1.0, sum = 1.0;
  for (int q = 0; q < kMaxHypergeometricTerms; ++q) {
    const double qq = q;
    term *= (qq + 0.5) * (qq + 0.5) / ((qq + 2.5) * (qq + 1.0)) * x;
    sum += term;
    if (term < 1e-15) break;
  }
  return 4.0 * d / (3.0 * kPi) * sum;
}

MeanStderr linear_expectation_mc(double d, std::size_t samples, std::uint64_t seed,
                                 int threads) {
  if (!(std::abs(d) <= 1.0)) throw DomainError("linear covariance must lie in [-1, 1]");
  const double comp = std::sqrt(1.0 - d * d);
  return monte_carlo(samples, threads, [&](std::uint64_t s) {
    CounterRng rng(seed, kStreamLinear, s);
    const double x1 = rng.normal(), x2 = rng.normal(), x3 = rng.normal();
    const double sv = d * x1 + comp * rng.normal();
    const double nx = std::sqrt(x1 * x1 + x2 * x2 + x3 * x3);
    if (!(nx > 0)) return 0.0;
    return (sv < 0 ? -1.0 : 1.0) * x1 / nx;
  });
}

LeadingCoeffs leading_coeffs() {
  const double a = f_coeff(1, 0, 0), b = f_coeff(1, 0, 2), c = f_coeff(3, 0, 0);
  return {a * a, b * b, c * c};
}

double q_function(int which, double a, double b, double c) {
  const LeadingCoeffs f = leading_coeffs();
  const double rem = 1.0 / 3.0 - f.f100 - 2.0 * f.f102 - f.f300;
  const double sym = f.f100 * p_poly(1, 0, 0, a, b, c) + f.f102 * p_poly(1, 0, 2, a, b, c) +
                     f.f300 * p_poly(3, 0, 0, a, b, c);
  switch (which) {
    case 1: return sym + 3.0 * rem;
    case 2: return f.f100 * a + f.f102 * a * (b * b + c * c) + f.f300 * a * a * a - rem;
    case 3: return sym - 3.0 * rem;
    default: throw ValidationError("q-function index must be 1, 2 or 3");
  }
}

}  // namespace qlh::hermite
