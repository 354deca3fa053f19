#include "qlh/conic.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "qlh/error.hpp"

namespace qlh::conic {

namespace {

using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Vec = Eigen::VectorXd;

constexpr double kSqrt2 = 1.41421356237309504880;

struct Layout {
  std::vector<Eigen::Index> offset;
  Eigen::Index total = 0;

  explicit Layout(const std::vector<Block>& blocks) {
    for (const auto& b : blocks) {
      offset.push_back(total);
      total += static_cast<Eigen::Index>(b.dim) * (b.dim + 1) / 2;
    }
  }
  // svec position of (r, c) with r <= c.
  Eigen::Index index(int block, int r, int c) const {
    if (r > c) std::swap(r, c);
    return offset[static_cast<std::size_t>(block)] + static_cast<Eigen::Index>(c) * (c + 1) / 2 + r;
  }
};

double svec_scale(const Entry& e) { return e.row == e.col ? e.value : kSqrt2 * e.value; }

void check_entry(const ConicProgram& prog, const Entry& e, const char* where) {
  const bool ok = e.block >= 0 && e.block < static_cast<int>(prog.blocks.size()) &&
                  e.row >= 0 && e.col >= 0 &&
                  e.row < prog.blocks[static_cast<std::size_t>(e.block)].dim &&
                  e.col < prog.blocks[static_cast<std::size_t>(e.block)].dim;
  if (!ok) throw ValidationError(std::string(where) + ": entry out of range");
  if (!std::isfinite(e.value)) throw ValidationError(std::string(where) + ": non-finite entry");
}

Vec svec_of(const Layout& lay, const std::vector<Entry>& entries) {
  Vec v = Vec::Zero(lay.total);
  for (const auto& e : entries) v[lay.index(e.block, e.row, e.col)] += svec_scale(e);
  return v;
}

Eigen::MatrixXd smat(const Vec& x, Eigen::Index off, int d) {
  Eigen::MatrixXd m(d, d);
  for (int c = 0; c < d; ++c)
    for (int r = 0; r <= c; ++r) {
      const double v = x[off + static_cast<Eigen::Index>(c) * (c + 1) / 2 + r];
      if (r == c)
        m(r, c) = v;
      else
        m(r, c) = m(c, r) = v / kSqrt2;
    }
  return m;
}

void write_svec(const Eigen::MatrixXd& m, Vec& x, Eigen::Index off) {
  const auto d = static_cast<int>(m.rows());
  for (int c = 0; c < d; ++c)
    for (int r = 0; r <= c; ++r)
      x[off + static_cast<Eigen::Index>(c) * (c + 1) / 2 + r] =
          r == c ? m(r, c) : kSqrt2 * 0.5 * (m(r, c) + m(c, r));
}

void project_cone(const std::vector<Block>& blocks, const Layout& lay, Vec& x) {
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const int d = blocks[b].dim;
    if (d == 0) continue;
    const Eigen::MatrixXd m = smat(x, lay.offset[b], d);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    const Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
    const Eigen::MatrixXd p = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
    write_svec(p, x, lay.offset[b]);
  }
}

double block_min_eigenvalue(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

}  // namespace

namespace {

void check_shape(const ConicProgram& prog) {
  for (const auto& b : prog.blocks)
    if (b.dim < 0 || !(b.trace_bound >= 0)) throw ValidationError("bad block '" + b.label + "'");
  for (std::size_t m = 0; m < prog.constraints.size(); ++m) {
    const auto& c = prog.constraints[m];
    if (c.coeffs.empty())
      throw ValidationError("constraint " + std::to_string(m) + " has no coefficients");
    if (!std::isfinite(c.rhs)) throw ValidationError("constraint right-hand side not finite");
    for (const auto& e : c.coeffs) check_entry(prog, e, "constraint");
  }
  for (const auto& e : prog.cost) check_entry(prog, e, "cost");
}

SpMat constraint_matrix(const ConicProgram& prog, const Layout& lay, Vec& b) {
  const auto m = static_cast<Eigen::Index>(prog.constraints.size());
  std::vector<Eigen::Triplet<double>> trip;
  b.resize(m);
  for (Eigen::Index r = 0; r < m; ++r) {
    const auto& con = prog.constraints[static_cast<std::size_t>(r)];
    b[r] = con.rhs;
    for (const auto& e : con.coeffs)
      trip.emplace_back(r, lay.index(e.block, e.row, e.col), svec_scale(e));
  }
  SpMat A(m, lay.total);
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();
  return A;
}

void factor_normal(const SpMat& A, Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>& ldlt) {
  if (A.rows() == 0) return;
  ldlt.compute(Eigen::SparseMatrix<double>(A * A.transpose()));
  if (ldlt.info() != Eigen::Success)
    throw ValidationError("constraint normal equations could not be factorized");
  const Vec d = ldlt.vectorD();
  const double dmax = d.cwiseAbs().maxCoeff();
  if (d.minCoeff() <= 1e-12 * std::max(dmax, 1.0))
    throw ValidationError("constraints are linearly dependent");
}

}  // namespace

void check_program(const ConicProgram& prog) {
  check_shape(prog);
  const Layout lay(prog.blocks);
  Vec b;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  factor_normal(constraint_matrix(prog, lay, b), ldlt);
}

namespace {

double inner(const std::vector<Entry>& entries, const std::vector<Eigen::MatrixXd>& X) {
  double v = 0.0;
  for (const auto& e : entries) {
    const auto& m = X.at(static_cast<std::size_t>(e.block));
    v += (e.row == e.col) ? e.value * m(e.row, e.col)
                          : e.value * (m(e.row, e.col) + m(e.col, e.row));
  }
  return v;
}

}  // namespace

double max_constraint_violation(const ConicProgram& prog, const std::vector<Eigen::MatrixXd>& X) {
  double worst = 0.0;
  for (const auto& c : prog.constraints)
    worst = std::max(worst, std::abs(inner(c.coeffs, X) - c.rhs));
  return worst;
}

double evaluate_cost(const ConicProgram& prog, const std::vector<Eigen::MatrixXd>& X) {
  return prog.cost_constant + inner(prog.cost, X);
}

ConicSolution solve(const ConicProgram& prog, const SolverOptions& opts) {
  if (!(opts.tol > 0)) throw ValidationError("solver tolerance must be positive");
  if (opts.max_iter < 1) throw ValidationError("max_iter must be positive");
  check_shape(prog);
  const Layout lay(prog.blocks);
  const Eigen::Index n = lay.total;
  Vec b;
  const SpMat A = constraint_matrix(prog, lay, b);
  const Eigen::Index m = A.rows();
  const Vec c = svec_of(lay, prog.cost);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  factor_normal(A, ldlt);
  auto project_affine = [&](const Vec& v) -> Vec {
    if (m == 0) return v;
    const Vec r = A * v - b;
    const Vec y = ldlt.solve(r);
    return v - A.transpose() * y;
  };

  Vec x = Vec::Zero(n), z = Vec::Zero(n), u = Vec::Zero(n), z_prev(n), xh(n), zn(n), un(n);
  double rho = opts.rho;
  const double alpha = opts.relaxation;
  const double c_norm = std::max(1.0, c.norm());

  // Anderson acceleration on w = (z, u) -> T(w), one ADMM sweep. An
  // extrapolated point is kept only if its fixed-point residual does not grow.
  const std::size_t mem = static_cast<std::size_t>(std::max(0, opts.anderson_memory));
  std::deque<Vec> dG, dT;
  Vec w(2 * n), tw(2 * n), g(2 * n), g_prev(2 * n), tw_prev(2 * n), tw_base(2 * n);
  bool have_prev = false, from_aa = false;
  double g_base = 0.0;
  auto forget = [&] {
    dG.clear();
    dT.clear();
    have_prev = from_aa = false;
  };

  ConicSolution sol;
  double rp = 0, rd = 0;
  int it = 0;
  for (it = 1; it <= opts.max_iter; ++it) {
    x = project_affine(z - u + c / rho);
    xh = alpha * x + (1.0 - alpha) * z;
    z_prev = z;
    zn = xh + u;
    project_cone(prog.blocks, lay, zn);
    un = u + xh - zn;

    rp = (x - zn).norm();
    rd = rho * (zn - z_prev).norm() / c_norm;
    if (rp <= opts.tol && rd <= opts.tol) {
      z = zn;
      u = un;
      sol.converged = true;
      break;
    }

    if (mem == 0) {
      z = zn;
      u = un;
    } else {
      w << z, u;
      tw << zn, un;
      g = tw - w;
      const double gn = g.norm();
      if (from_aa && gn > g_base) {
        z = tw_base.head(n);
        u = tw_base.tail(n);
        forget();
        continue;
      }
      if (have_prev) {
        dG.push_back(g - g_prev);
        dT.push_back(tw - tw_prev);
        if (dG.size() > mem) {
          dG.pop_front();
          dT.pop_front();
        }
      }
      g_prev = g;
      tw_prev = tw;
      have_prev = true;
      from_aa = false;
      if (!dG.empty()) {
        const auto k = static_cast<Eigen::Index>(dG.size());
        Eigen::MatrixXd Gm(2 * n, k);
        for (Eigen::Index j = 0; j < k; ++j) Gm.col(j) = dG[static_cast<std::size_t>(j)];
        Eigen::MatrixXd H = Gm.transpose() * Gm;
        H.diagonal().array() += 1e-10 * std::max(H.trace(), 1e-300);
        const Vec gamma = H.ldlt().solve(Gm.transpose() * g);
        if (gamma.allFinite()) {
          w = tw;
          for (Eigen::Index j = 0; j < k; ++j) w -= gamma[j] * dT[static_cast<std::size_t>(j)];
          tw_base = tw;
          g_base = gn;
          from_aa = true;
        } else {
          w = tw;
          forget();
        }
      } else {
        w = tw;
      }
      z = w.head(n);
      u = w.tail(n);
    }

    if (opts.rho_update_every > 0 && it % opts.rho_update_every == 0) {
      double f = 1.0;
      if (rp > opts.rho_balance * rd)
        f = 2.0;
      else if (rd > opts.rho_balance * rp)
        f = 0.5;
      if (f != 1.0) {
        rho *= f;
        u /= f;
        forget();
      }
    }
  }
  sol.iterations = std::min(it, opts.max_iter);
  sol.primal_residual = rp;
  sol.dual_residual = rd;

  sol.X.reserve(prog.blocks.size());
  sol.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (std::size_t blk = 0; blk < prog.blocks.size(); ++blk) {
    sol.X.push_back(smat(x, lay.offset[blk], prog.blocks[blk].dim));
    sol.min_eigenvalue = std::min(sol.min_eigenvalue, block_min_eigenvalue(sol.X.back()));
  }
  if (prog.blocks.empty()) sol.min_eigenvalue = 0.0;
  sol.objective = c.dot(x) + prog.cost_constant;

  // Weak duality with the PSD slack repaired by the trace bounds.
  const Vec lambda = rho * u;
  Vec y = Vec::Zero(m);
  if (m > 0) y = ldlt.solve(A * (c - lambda));
  const Vec s = A.transpose() * y - c;
  double bound = b.dot(y) + prog.cost_constant;
  for (std::size_t blk = 0; blk < prog.blocks.size(); ++blk) {
    const double lmin = block_min_eigenvalue(smat(s, lay.offset[blk], prog.blocks[blk].dim));
    bound += prog.blocks[blk].trace_bound * std::max(0.0, -lmin);
  }
  sol.dual_bound = bound;
  return sol;
}

}  // namespace qlh::conic
