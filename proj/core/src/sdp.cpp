#include "qlh/sdp.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "qlh/error.hpp"

namespace qlh::sdp {

namespace {

// Entries of the symmetric matrix E/2 restricted to its upper triangle, so
// that <E/2, Y> == Tr[P rho] for the embedded block Y.
std::vector<conic::Entry> functional_entries(int block, const Matrix4c& p) {
  const Matrix8d e = 0.5 * real_embed(p);
  std::vector<conic::Entry> out;
  for (int c = 0; c < 8; ++c)
    for (int r = 0; r <= c; ++r)
      if (e(r, c) != 0.0) out.push_back({block, r, c, e(r, c)});
  return out;
}

conic::Entry half_entry(int r, int c, double v) {
  if (r > c) std::swap(r, c);
  return {0, r, c, r == c ? v : 0.5 * v};
}

std::vector<conic::Entry> merged(const std::map<std::pair<int, int>, double>& acc) {
  std::vector<conic::Entry> out;
  for (const auto& [rc, v] : acc)
    if (v != 0.0) out.push_back({0, rc.first, rc.second, v});
  return out;
}

}  // namespace

Matrix8d real_embed(const Matrix4c& x) {
  Matrix8d y;
  y.topLeftCorner<4, 4>() = x.real();
  y.topRightCorner<4, 4>() = -x.imag();
  y.bottomLeftCorner<4, 4>() = x.imag();
  y.bottomRightCorner<4, 4>() = x.real();
  return y;
}

Matrix4c from_real_embed(const Matrix8d& y) {
  const Eigen::Matrix4d re = 0.5 * (y.topLeftCorner<4, 4>() + y.bottomRightCorner<4, 4>());
  const Eigen::Matrix4d im = 0.5 * (y.bottomLeftCorner<4, 4>() - y.topRightCorner<4, 4>());
  Matrix4c out;
  out.real() = re;
  out.imag() = im;
  return out;
}

conic::ConicProgram build_moment_relaxation(const Instance& inst) {
  pauli::require_valid(inst);
  const int n = inst.n;
  const int dim = 3 * n + 1;
  conic::ConicProgram prog;
  prog.blocks.push_back({"M", dim, static_cast<double>(dim)});
  for (std::size_t e = 0; e < inst.terms.size(); ++e)
    prog.blocks.push_back({"rho[" + std::to_string(e) + "]", 8, 2.0});

  prog.constraints.push_back({{{0, 0, 0, 1.0}}, 1.0});
  for (int i = 0; i < n; ++i)
    for (int k = 1; k <= 3; ++k)
      prog.constraints.push_back(
          {{{0, moment_index(i, k), moment_index(i, k), 1.0}}, 1.0});
  for (int i = 0; i < n; ++i)
    for (int k = 1; k <= 3; ++k)
      for (int l = k + 1; l <= 3; ++l)
        prog.constraints.push_back(
            {{{0, moment_index(i, k), moment_index(i, l), 1.0}}, 0.0});

  std::map<std::pair<int, int>, double> cost;
  for (std::size_t e = 0; e < inst.terms.size(); ++e) {
    const auto& t = inst.terms[e];
    const int blk = static_cast<int>(e) + 1;
    // M(a, b) - Tr[P rho] = 0, with M(a, b) entered as a symmetric half pair.
    auto link = [&](int a, int b, const Matrix4c& p) {
      conic::Constraint con;
      con.coeffs.push_back(half_entry(a, b, 1.0));
      for (auto entry : functional_entries(blk, p)) {
        entry.value = -entry.value;
        con.coeffs.push_back(entry);
      }
      prog.constraints.push_back(std::move(con));
    };
    for (int k = 1; k <= 3; ++k)
      for (int l = 1; l <= 3; ++l)
        link(moment_index(t.i, k), moment_index(t.j, l), pauli::sigma_pair(k, l));
    for (int k = 1; k <= 3; ++k) link(0, moment_index(t.i, k), pauli::sigma_pair(k, 0));
    for (int l = 1; l <= 3; ++l) link(0, moment_index(t.j, l), pauli::sigma_pair(0, l));
    prog.constraints.push_back({functional_entries(blk, Matrix4c::Identity()), 1.0});

    const Matrix4d& a = t.coeffs.alpha;
    prog.cost_constant += t.weight * a(0, 0);
    auto add = [&](int r, int c, double v) {
      if (v == 0.0) return;
      const auto he = half_entry(r, c, v);
      cost[{he.row, he.col}] += he.value;
    };
    for (int k = 1; k <= 3; ++k) {
      add(0, moment_index(t.i, k), t.weight * a(k, 0));
      add(0, moment_index(t.j, k), t.weight * a(0, k));
      for (int l = 1; l <= 3; ++l)
        add(moment_index(t.i, k), moment_index(t.j, l), t.weight * a(k, l));
    }
  }
  prog.cost = merged(cost);
  return prog;
}

conic::ConicProgram build_unit_diagonal_relaxation(const Instance& inst) {
  if (inst.kind.kind != InstanceKind::traceless)
    throw ValidationError("the unit-diagonal relaxation needs a traceless instance, got " +
                          to_string(inst.kind));
  pauli::require_valid(inst);
  const int dim = 3 * inst.n;
  conic::ConicProgram prog;
  prog.blocks.push_back({"M", dim, static_cast<double>(dim)});
  for (int r = 0; r < dim; ++r) prog.constraints.push_back({{{0, r, r, 1.0}}, 1.0});
  std::map<std::pair<int, int>, double> cost;
  for (const auto& t : inst.terms)
    for (int k = 1; k <= 3; ++k)
      for (int l = 1; l <= 3; ++l) {
        const double v = t.weight * t.coeffs.alpha(k, l);
        if (v == 0.0) continue;
        const auto he = half_entry(pauli_index(t.i, k), pauli_index(t.j, l), v);
        cost[{he.row, he.col}] += he.value;
      }
  prog.cost = merged(cost);
  return prog;
}

MomentSolution solve(const conic::ConicProgram& prog, const conic::SolverOptions& opts) {
  const conic::ConicSolution cs = conic::solve(prog, opts);
  MomentSolution out;
  if (!cs.X.empty()) out.M = cs.X.front();
  for (std::size_t b = 1; b < cs.X.size(); ++b) {
    if (cs.X[b].rows() != 8) throw ValidationError("marginal blocks must be 8 x 8");
    out.rho.push_back(from_real_embed(Matrix8d(cs.X[b])));
  }
  out.objective = cs.objective;
  out.dual_bound = cs.dual_bound;
  out.primal_residual = cs.primal_residual;
  out.dual_residual = cs.dual_residual;
  out.min_eigenvalue = cs.min_eigenvalue;
  out.iterations = cs.iterations;
  out.converged = cs.converged;
  return out;
}

Eigen::MatrixXd gram_factor(const Eigen::MatrixXd& G, double clip_tol) {
  if (G.rows() != G.cols()) throw ValidationError("Gram matrix must be square");
  if (G.rows() == 0) return Eigen::MatrixXd(0, 0);
  const Eigen::MatrixXd sym = 0.5 * (G + G.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  const Eigen::VectorXd& lam = es.eigenvalues();
  if (lam[0] < -clip_tol) {
    std::ostringstream os;
    os << "matrix is not PSD: eigenvalue " << lam[0] << " below -" << clip_tol;
    throw InfeasibleError(os.str(), lam[0]);
  }
  std::vector<Eigen::Index> keep;
  for (Eigen::Index a = lam.size() - 1; a >= 0; --a)
    if (lam[a] > clip_tol) keep.push_back(a);
  Eigen::MatrixXd W(static_cast<Eigen::Index>(keep.size()), G.cols());
  for (std::size_t r = 0; r < keep.size(); ++r)
    W.row(static_cast<Eigen::Index>(r)) =
        std::sqrt(lam[keep[r]]) * es.eigenvectors().col(keep[r]).transpose();
  return W;
}

GramVectors gram_vectors(const Eigen::MatrixXd& M, double clip_tol) {
  if (M.rows() < 1 || (M.rows() - 1) % 3 != 0)
    throw ValidationError("moment matrix must have size 3n + 1");
  const Eigen::MatrixXd W = gram_factor(M, clip_tol);
  GramVectors g;
  g.n = static_cast<int>((M.rows() - 1) / 3);
  g.v0 = W.col(0);
  g.V = W.rightCols(M.cols() - 1);
  return g;
}

GramVectors gram_vectors(const MomentSolution& sol, double clip_tol) {
  return gram_vectors(sol.M, clip_tol);
}

double edge_value(const TwoLocalTerm& t, const Eigen::MatrixXd& M) {
  const Matrix4d& a = t.coeffs.alpha;
  double v = a(0, 0);
  for (int k = 1; k <= 3; ++k) {
    v += a(k, 0) * M(0, moment_index(t.i, k));
    v += a(0, k) * M(0, moment_index(t.j, k));
    for (int l = 1; l <= 3; ++l) v += a(k, l) * M(moment_index(t.i, k), moment_index(t.j, l));
  }
  return v;
}

double edge_value_direct(const TwoLocalTerm& t, const Matrix4c& rho) {
  return (pauli::reconstruct(t.coeffs).matrix() * rho).trace().real();
}

double objective_value(const Instance& inst, const Eigen::MatrixXd& M,
                       const std::vector<Matrix4c>* rho, double identity_tol) {
  if (M.rows() != 3 * inst.n + 1 || M.cols() != M.rows())
    throw ValidationError("moment matrix size does not match the instance");
  if (rho && rho->size() != inst.terms.size())
    throw ValidationError("one marginal per term is required");
  double total = 0.0;
  for (std::size_t e = 0; e < inst.terms.size(); ++e) {
    const auto& t = inst.terms[e];
    const double v = edge_value(t, M);
    if (rho) {
      const double d = edge_value_direct(t, (*rho)[e]);
      if (std::abs(d - v) > identity_tol) {
        std::ostringstream os;
        os << "term " << e << ": moment value " << v << " differs from Tr[O rho] = " << d;
        throw InvariantError(os.str());
      }
    }
    total += t.weight * v;
  }
  return total;
}

}  // namespace qlh::sdp
