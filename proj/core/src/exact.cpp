#include "qlh/exact.hpp"

#include <cmath>
#include <sstream>

#include "qlh/error.hpp"
#include "qlh/parallel.hpp"
#include "qlh/rng.hpp"

namespace qlh::exact {

namespace {

constexpr std::uint64_t kStreamStart = 0x4C414E43ull;
constexpr std::uint64_t kStreamAscent = 0x41534345ull;

void check_capacity(int n, int limit) {
  if (n > limit) {
    std::ostringstream os;
    os << "n = " << n << " exceeds the limit of " << limit << " qubits";
    throw CapacityError(os.str());
  }
}

// Weighted 4x4 operators, precomputed once per call.
std::vector<Matrix4c> term_operators(const Instance& inst) {
  std::vector<Matrix4c> ops;
  ops.reserve(inst.terms.size());
  for (const auto& t : inst.terms)
    ops.push_back(t.weight * pauli::reconstruct(t.coeffs).matrix());
  return ops;
}

// Visits every basis index with bits i and j cleared.
template <class Fn>
void for_each_base(int n, int i, int j, Fn&& fn) {
  const std::uint64_t dim = std::uint64_t{1} << n;
  const std::uint64_t mi = std::uint64_t{1} << i;
  const std::uint64_t mj = std::uint64_t{1} << j;
  for (std::uint64_t x = 0; x < dim; ++x) {
    if (x & (mi | mj)) continue;
    // local index 2*b_i + b_j
    const std::array<std::uint64_t, 4> idx = {x, x | mj, x | mi, x | mi | mj};
    fn(idx);
  }
}

}  // namespace

SparseMatrix build_matrix(const Instance& inst) {
  check_capacity(inst.n, kSparseLimit);
  pauli::require_valid(inst);
  const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << inst.n);
  std::vector<Eigen::Triplet<Complex>> trip;
  const auto ops = term_operators(inst);
  for (std::size_t t = 0; t < ops.size(); ++t) {
    const auto& term = inst.terms[t];
    for_each_base(inst.n, term.i, term.j, [&](const std::array<std::uint64_t, 4>& idx) {
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          if (ops[t](a, b) != Complex(0, 0))
            trip.emplace_back(static_cast<Eigen::Index>(idx[a]),
                              static_cast<Eigen::Index>(idx[b]), ops[t](a, b));
    });
  }
  SparseMatrix h(dim, dim);
  h.setFromTriplets(trip.begin(), trip.end());
  return h;
}

void apply(const Instance& inst, const Eigen::VectorXcd& x, Eigen::VectorXcd& y) {
  y.setZero(x.size());
  const auto ops = term_operators(inst);
  for (std::size_t t = 0; t < ops.size(); ++t) {
    const auto& term = inst.terms[t];
    const Matrix4c& op = ops[t];
    for_each_base(inst.n, term.i, term.j, [&](const std::array<std::uint64_t, 4>& idx) {
      Eigen::Vector4cd in;
      for (int a = 0; a < 4; ++a) in[a] = x[static_cast<Eigen::Index>(idx[a])];
      const Eigen::Vector4cd out = op * in;
      for (int a = 0; a < 4; ++a) y[static_cast<Eigen::Index>(idx[a])] += out[a];
    });
  }
}

double norm_bound(const Instance& inst) {
  double s = 0.0;
  for (const auto& t : inst.terms) {
    const Matrix4c p = pauli::reconstruct(t.coeffs).matrix();
    s += std::abs(t.weight) * p.cwiseAbs().colwise().sum().maxCoeff();
  }
  return s;
}

namespace {

SpectrumResult dense_path(const Instance& inst, bool want_vector) {
  const Eigen::MatrixXcd h = Eigen::MatrixXcd(build_matrix(inst));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  SpectrumResult r;
  r.method = SpectrumMethod::dense;
  const Eigen::Index top = h.rows() - 1;
  r.lambda_max = es.eigenvalues()[top];
  const Eigen::VectorXcd v = es.eigenvectors().col(top);
  r.residual = (h * v - r.lambda_max * v).norm();
  if (want_vector) r.eigvec = v;
  return r;
}

SpectrumResult lanczos_path(const Instance& inst, const LambdaOptions& opts) {
  pauli::require_valid(inst);
  const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << inst.n);
  const double shift = norm_bound(inst);
  auto op = [&](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) {
    apply(inst, x, y);
    y += shift * x;
  };

  Eigen::VectorXcd start(dim);
  CounterRng rng(0x51A7ull, kStreamStart);
  for (Eigen::Index a = 0; a < dim; ++a) start[a] = Complex(rng.normal(), rng.normal());
  start.normalize();

  // Keep the Krylov basis under ~2 GiB at the largest sizes.
  const Eigen::Index mem_cap = std::max<Eigen::Index>(8, (Eigen::Index{1} << 27) / dim);
  const int m_max = static_cast<int>(std::min({Eigen::Index{opts.krylov_dim}, dim, mem_cap}));
  SpectrumResult res;
  res.method = SpectrumMethod::iterative;
  Eigen::MatrixXcd basis(dim, m_max);
  Eigen::VectorXcd w(dim);
  double last_resid = std::numeric_limits<double>::infinity();

  for (int restart = 0; restart < opts.max_restarts; ++restart) {
    Eigen::VectorXd alpha(m_max), beta(m_max);
    basis.col(0) = start;
    int m = 0;
    double beta_last = 0.0;
    for (int s = 0; s < m_max; ++s) {
      op(basis.col(s), w);
      ++res.iterations;
      alpha[s] = basis.col(s).dot(w).real();
      // Full reorthogonalization, twice for stability.
      for (int pass = 0; pass < 2; ++pass)
        w -= basis.leftCols(s + 1) * (basis.leftCols(s + 1).adjoint() * w);
      m = s + 1;
      beta_last = w.norm();
      if (s + 1 == m_max || beta_last <= 1e-14 * std::max(1.0, shift)) break;
      beta[s] = beta_last;
      basis.col(s + 1) = w / beta_last;
    }
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
    for (int s = 0; s < m; ++s) {
      tri(s, s) = alpha[s];
      if (s + 1 < m) tri(s, s + 1) = tri(s + 1, s) = beta[s];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
    const double theta = es.eigenvalues()[m - 1];
    const Eigen::VectorXd y = es.eigenvectors().col(m - 1);
    Eigen::VectorXcd ritz = basis.leftCols(m) * y.cast<Complex>();
    ritz.normalize();

    op(ritz, w);
    const double lambda = theta - shift;
    const double resid = (w - theta * ritz).norm();
    const double scale = std::max({std::abs(lambda), std::abs(es.eigenvalues()[0] - shift), 1e-300});
    last_resid = resid;
    if (resid <= opts.tol * scale || m == dim) {
      res.lambda_max = lambda;
      res.residual = resid;
      if (opts.want_vector) res.eigvec = ritz;
      return res;
    }
    start = ritz;
  }
  std::ostringstream os;
  os << "Lanczos did not converge after " << opts.max_restarts << " restarts, residual "
     << last_resid;
  throw ConvergenceError(os.str(), last_resid);
}

}  // namespace

SpectrumResult lambda_max(const Instance& inst, const LambdaOptions& opts) {
  check_capacity(inst.n, kSparseLimit);
  if (inst.n <= opts.dense_limit) return dense_path(inst, opts.want_vector);
  return lanczos_path(inst, opts);
}

double product_energy(const Instance& inst, const ProductState& s) {
  if (static_cast<int>(s.thetas.size()) != inst.n) {
    std::ostringstream os;
    os << "product state has " << s.thetas.size() << " qubits, instance has " << inst.n;
    throw ValidationError(os.str());
  }
  double e = 0.0;
  for (const auto& t : inst.terms) {
    Eigen::Vector4d a, b;
    a << 1.0, s.thetas[static_cast<std::size_t>(t.i)];
    b << 1.0, s.thetas[static_cast<std::size_t>(t.j)];
    e += t.weight * a.dot(t.coeffs.alpha * b);
  }
  return e;
}

namespace {

struct AscentResult {
  ProductState state;
  double value = -std::numeric_limits<double>::infinity();
};

AscentResult ascend(const Instance& inst, const std::vector<std::vector<std::size_t>>& incident,
                    std::uint64_t seed) {
  CounterRng rng(seed, kStreamAscent);
  ProductState s;
  s.thetas.resize(static_cast<std::size_t>(inst.n));
  for (auto& th : s.thetas) {
    Vector3d g;
    do {
      g = Vector3d(rng.normal(), rng.normal(), rng.normal());
    } while (g.norm() == 0.0);
    th = g.normalized();
  }
  double value = product_energy(inst, s);
  const double scale = std::max(1.0, norm_bound(inst));
  for (int sweep = 0; sweep < 500; ++sweep) {
    for (int q = 0; q < inst.n; ++q) {
      Vector3d g = Vector3d::Zero();
      for (std::size_t ti : incident[static_cast<std::size_t>(q)]) {
        const auto& t = inst.terms[ti];
        if (t.i == q) {
          Eigen::Vector4d b;
          b << 1.0, s.thetas[static_cast<std::size_t>(t.j)];
          g += t.weight * (t.coeffs.alpha.bottomRows<3>() * b);
        } else {
          Eigen::Vector4d a;
          a << 1.0, s.thetas[static_cast<std::size_t>(t.i)];
          g += t.weight * (t.coeffs.alpha.rightCols<3>().transpose() * a);
        }
      }
      const double gn = g.norm();
      if (gn > 1e-14) s.thetas[static_cast<std::size_t>(q)] = g / gn;
    }
    const double next = product_energy(inst, s);
    if (next < value - 1e-12 * scale)
      throw InvariantError("coordinate ascent sweep decreased the energy");
    const double gain = next - value;
    value = next;
    if (gain < 1e-10) break;
  }
  return {s, value};
}

}  // namespace

BestProduct best_product(const Instance& inst, int restarts, std::uint64_t seed, int threads) {
  if (restarts < 1) throw ValidationError("restarts must be at least 1");
  pauli::require_valid(inst);
  std::vector<std::vector<std::size_t>> incident(static_cast<std::size_t>(inst.n));
  for (std::size_t t = 0; t < inst.terms.size(); ++t) {
    incident[static_cast<std::size_t>(inst.terms[t].i)].push_back(t);
    incident[static_cast<std::size_t>(inst.terms[t].j)].push_back(t);
  }
  std::vector<AscentResult> runs(static_cast<std::size_t>(restarts));
  parallel_blocks(runs.size(), 1, resolve_threads(threads), [&](std::size_t b, std::size_t e) {
    for (std::size_t r = b; r < e; ++r) runs[r] = ascend(inst, incident, seed ^ r);
  });
  BestProduct out;
  out.restarts = restarts;
  out.value = -std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < runs.size(); ++r) {
    if (runs[r].value > out.value) {
      out.value = runs[r].value;
      out.state = runs[r].state;
      out.best_restart = static_cast<int>(r);
    }
  }
  return out;
}

}  // namespace qlh::exact
