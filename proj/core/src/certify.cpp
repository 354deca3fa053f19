#include "qlh/certify.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "qlh/error.hpp"
#include "qlh/parallel.hpp"
#include "qlh/standard_form.hpp"

namespace qlh::hermite {

namespace {

constexpr double kPi = std::numbers::pi;

void check_rank(int k) {
  if (k < 1 || k > 3) throw ValidationError("projector rank must be 1, 2 or 3");
}

}  // namespace

double alpha_general_closed(int k) {
  check_rank(k);
  const double v[3] = {2 / kPi - 0.25, 16 / (9 * kPi), 0.375 + 11 / (9 * kPi)};
  return v[k - 1];
}

double alpha_quadratic_closed(int k) {
  check_rank(k);
  const double v[3] = {22 / (15 * kPi), 1.0 / 3 + 24 / (25 * kPi), 0.5 + 388 / (405 * kPi)};
  return v[k - 1];
}

double conjectured_quadratic(int k) {
  check_rank(k);
  const double v[3] = {0.498, 0.653, 0.821};
  return v[k - 1];
}

Vector3d representative_vertex(int k) {
  check_rank(k);
  if (k == 1) return Vector3d(-1, -1, -1);
  if (k == 2) return Vector3d(2, 0, 0);
  return Vector3d(1, 1, 1);
}

RatioEstimate ratio_quadratic(int k, const Vector3d& abc, const Vector3d& pqr,
                              const RatioOptions& opts) {
  check_rank(k);
  RatioEstimate out;
  const double den = k + abc.dot(pqr);
  if (den < kDenominatorFloor) {
    out.skipped = true;
    return out;
  }
  const QuadParams x{abc(0), abc(1), abc(2), pqr(0), pqr(1), pqr(2)};
  switch (opts.method) {
    case RatioMethod::series: {
      const Bracket b = quad_expectation_series(x, opts.q);
      out.lower = (k + b.lower) / den;
      out.upper = (k + b.upper) / den;
      out.value = out.lower;
      break;
    }
    case RatioMethod::monte_carlo: {
      const MeanStderr m = quad_expectation_mc(x, opts.samples, opts.seed, opts.threads);
      out.value = out.lower = out.upper = (k + m.mean) / den;
      out.std_error = m.std_error / den;
      break;
    }
    case RatioMethod::quadrature:
      out.value = out.lower = out.upper = (k + quad_expectation_quadrature(x, opts.nodes)) / den;
      break;
  }
  return out;
}

RatioEstimate ratio_quadratic(int k, const Vector3d& abc, const RatioOptions& opts) {
  return ratio_quadratic(k, abc, representative_vertex(k), opts);
}

std::vector<Vector3d> barycentric_grid(int density) {
  if (density < 1) throw ValidationError("grid density must be positive");
  const auto& verts = pauli::polytope(pauli::PolytopeName::S).vertices;
  std::vector<Vector3d> out;
  const double n = density;
  for (int i = 0; i <= density; ++i)
    for (int j = 0; i + j <= density; ++j)
      for (int l = 0; i + j + l <= density; ++l) {
        const int m = density - i - j - l;
        out.push_back((i * verts[0] + j * verts[1] + l * verts[2] + m * verts[3]) / n);
      }
  return out;
}

QuadraticCertificate certify_bounds_quadratic(int k, int grid_density, std::size_t mc_samples,
                                              std::uint64_t seed, int threads) {
  check_rank(k);
  const std::vector<Vector3d> grid = barycentric_grid(grid_density);
  const Vector3d rep = representative_vertex(k);
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> lower(grid.size(), inf), accurate(grid.size(), inf);
  std::vector<char> skipped(grid.size(), 0);

  RatioOptions series;
  RatioOptions quad;
  quad.method = RatioMethod::quadrature;
  parallel_blocks(grid.size(), 256, resolve_threads(threads),
                  [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      const RatioEstimate s = ratio_quadratic(k, grid[t], rep, series);
      if (s.skipped) {
        skipped[t] = 1;
        continue;
      }
      lower[t] = s.lower;
      accurate[t] = ratio_quadratic(k, grid[t], rep, quad).value;
    }
  });

  QuadraticCertificate c;
  c.k = k;
  c.grid = grid_density;
  c.points = grid.size();
  c.samples = mc_samples;
  c.seed = seed;
  c.alpha_closed = alpha_quadratic_closed(k);
  c.conjectured = conjectured_quadratic(k);
  c.certified_min = inf;
  c.observed_min = inf;
  for (std::size_t t = 0; t < grid.size(); ++t) {
    if (skipped[t]) {
      ++c.skipped;
      continue;
    }
    if (lower[t] < c.certified_min) {
      c.certified_min = lower[t];
      c.certified_argmin = grid[t];
    }
    if (accurate[t] < c.observed_min) {
      c.observed_min = accurate[t];
      c.argmin_point = grid[t];
    }
  }
  if (mc_samples > 0 && std::isfinite(c.observed_min)) {
    RatioOptions mc;
    mc.method = RatioMethod::monte_carlo;
    mc.samples = mc_samples;
    mc.seed = seed;
    mc.threads = threads;
    const RatioEstimate m = ratio_quadratic(k, c.argmin_point, rep, mc);
    c.mc_at_argmin = m.value;
    c.mc_std_error = m.std_error;
  }
  c.certified_ok = c.certified_min >= c.alpha_closed - kCertifySlack;
  return c;
}

GeneralBound bound_general(int k) {
  check_rank(k);
  const double l = linear_limit(k);
  const double kk = k;
  struct Half {
    Vector3d n;
    double b;
  };
  const std::array<Half, 8> hs{{{{1, 0, 0}, 4 - kk},
                                {{-1, 0, 0}, kk},
                                {{1, 1, 1}, 4 - kk},
                                {{-1, -1, -1}, kk},
                                {{0, 1, 0}, l},
                                {{0, -1, 0}, l},
                                {{0, 0, 1}, l},
                                {{0, 0, -1}, l}}};
  GeneralBound out;
  out.k = k;
  for (std::size_t x = 0; x < hs.size(); ++x)
    for (std::size_t y = x + 1; y < hs.size(); ++y)
      for (std::size_t z = y + 1; z < hs.size(); ++z) {
        Matrix3d A;
        A.row(0) = hs[x].n.transpose();
        A.row(1) = hs[y].n.transpose();
        A.row(2) = hs[z].n.transpose();
        if (std::abs(A.determinant()) < 1e-12) continue;
        const Vector3d v = A.partialPivLu().solve(Vector3d(hs[x].b, hs[y].b, hs[z].b));
        bool feasible = true;
        for (const auto& h : hs) feasible = feasible && h.n.dot(v) <= h.b + 1e-9;
        if (!feasible) continue;
        bool dup = false;
        for (const auto& w : out.vertices) dup = dup || (w - v).norm() < 1e-9;
        if (!dup) out.vertices.push_back(v);
      }

  const double f = leading_coeffs().f100;
  const double cs[2] = {0.5, 4 / (3 * kPi)};
  out.value = std::numeric_limits<double>::infinity();
  for (const auto& v : out.vertices) {
    const double den = kk + v.sum();
    if (den < kDenominatorFloor) continue;
    for (double ci : cs)
      for (double cj : cs) {
        const double num = kk + f * v(0) - 3 * (1.0 / 3 - f) + ci * v(1) + cj * v(2);
        const double r = num / den;
        if (r < out.value) {
          out.value = r;
          out.argmin = v;
          out.c_i = ci;
          out.c_j = cj;
        }
      }
  }
  return out;
}

}  // namespace qlh::hermite
