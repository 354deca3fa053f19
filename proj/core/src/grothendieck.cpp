#include "qlh/grothendieck.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <sstream>

#include "qlh/error.hpp"
#include "qlh/exact.hpp"
#include "qlh/montecarlo.hpp"
#include "qlh/parallel.hpp"
#include "qlh/rng.hpp"
#include "qlh/sdp.hpp"

namespace qlh::grothendieck {

namespace {

constexpr std::uint64_t kStreamSigns = 0x4B524956ull;
constexpr std::size_t kBlock = 4096;

}  // namespace

double product_guarantee() { return 2.0 * kKrivineC / (3.0 * std::numbers::pi); }

std::string PauliVertex::label() const {
  static const char* names = "XYZ";
  return std::string(1, names[axis - 1]) + std::to_string(qubit);
}

PauliGraph pauli_graph(const Instance& inst) {
  if (inst.kind.kind != InstanceKind::traceless)
    throw ValidationError("the Pauli interaction graph needs a traceless instance, got " +
                          to_string(inst.kind));
  pauli::require_valid(inst);
  PauliGraph g;
  g.n = inst.n;
  struct Raw {
    int a, b;
    double w;
  };
  std::vector<Raw> raw;
  std::vector<char> active(3 * static_cast<std::size_t>(inst.n), 0);
  for (const auto& t : inst.terms) {
    int kk = 0, ll = 0;
    for (int k = 1; k < 4; ++k)
      for (int l = 1; l < 4; ++l)
        if (t.coeffs.alpha(k, l) != 0.0) {
          kk = k;
          ll = l;
        }
    const int a = PauliVertex{t.i, kk}.index();
    const int b = PauliVertex{t.j, ll}.index();
    active[static_cast<std::size_t>(a)] = active[static_cast<std::size_t>(b)] = 1;
    raw.push_back({a, b, t.weight * t.coeffs.alpha(kk, ll)});
  }
  std::vector<int> pos(active.size(), -1);
  for (std::size_t x = 0; x < active.size(); ++x)
    if (active[x]) {
      pos[x] = static_cast<int>(g.vertices.size());
      g.vertices.push_back({static_cast<int>(x) / 3, static_cast<int>(x) % 3 + 1});
    }
  for (std::size_t e = 0; e < raw.size(); ++e)
    g.edges.push_back({pos[static_cast<std::size_t>(raw[e].a)],
                       pos[static_cast<std::size_t>(raw[e].b)], raw[e].w, e});

  const std::size_t nv = g.vertices.size();
  std::vector<std::vector<int>> adj(nv);
  for (const auto& e : g.edges) {
    adj[static_cast<std::size_t>(e.u)].push_back(e.v);
    adj[static_cast<std::size_t>(e.v)].push_back(e.u);
  }
  std::vector<int> color(nv, -1), parent(nv, -1);
  for (std::size_t s = 0; s < nv; ++s) {
    if (color[s] >= 0) continue;
    color[s] = 0;
    std::deque<int> queue{static_cast<int>(s)};
    while (!queue.empty()) {
      const int x = queue.front();
      queue.pop_front();
      for (int y : adj[static_cast<std::size_t>(x)]) {
        if (color[static_cast<std::size_t>(y)] < 0) {
          color[static_cast<std::size_t>(y)] = 1 - color[static_cast<std::size_t>(x)];
          parent[static_cast<std::size_t>(y)] = x;
          queue.push_back(y);
        } else if (color[static_cast<std::size_t>(y)] == color[static_cast<std::size_t>(x)]) {
          // Odd cycle: x -> ... -> common ancestor -> ... -> y -> x.
          std::vector<int> px, py;
          for (int t = x; t >= 0; t = parent[static_cast<std::size_t>(t)]) px.push_back(t);
          for (int t = y; t >= 0; t = parent[static_cast<std::size_t>(t)]) py.push_back(t);
          while (px.size() > 1 && py.size() > 1 && px[px.size() - 2] == py[py.size() - 2]) {
            px.pop_back();
            py.pop_back();
          }
          std::vector<int> cycle(px.begin(), px.end());
          for (auto it = py.rbegin() + 1; it != py.rend(); ++it) cycle.push_back(*it);
          cycle.push_back(x);
          for (int v : cycle)
            g.odd_cycle.push_back(g.vertices[static_cast<std::size_t>(v)].label());
          return g;
        }
      }
    }
  }
  g.sides = color;
  return g;
}

Eigen::MatrixXd build_A(const Instance& inst) {
  const PauliGraph g = pauli_graph(inst);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(3 * inst.n, 3 * inst.n);
  for (const auto& e : g.edges) {
    const int a = g.vertices[static_cast<std::size_t>(e.u)].index();
    const int b = g.vertices[static_cast<std::size_t>(e.v)].index();
    A(a, b) += e.weight / 2;
    A(b, a) += e.weight / 2;
  }
  return A;
}

double classical_objective(const Eigen::MatrixXd& A, const Eigen::VectorXd& z) {
  if (A.rows() != z.size()) throw ValidationError("sign vector does not match A");
  return z.dot(A * z);
}

KrivineGram krivine_gram(const Eigen::MatrixXd& G, const std::vector<int>& sides) {
  const Eigen::Index n = G.rows();
  if (G.cols() != n || static_cast<Eigen::Index>(sides.size()) != n)
    throw ValidationError("Gram matrix and side labels disagree in size");
  KrivineGram kg;
  kg.sides = sides;
  kg.K.resize(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) {
      const double x = kg.c * G(a, b);
      kg.K(a, b) = sides[static_cast<std::size_t>(a)] == sides[static_cast<std::size_t>(b)]
                       ? std::sinh(x)
                       : std::sin(x);
    }
  if (n > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(kg.K, Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) < -1e-6) {
      std::ostringstream os;
      os << "Krivine Gram matrix is not PSD: eigenvalue " << es.eigenvalues()(0);
      throw InfeasibleError(os.str(), es.eigenvalues()(0));
    }
  }
  return kg;
}

Eigen::MatrixXd rounding_vectors(const Eigen::MatrixXd& K, double clip_tol) {
  Eigen::MatrixXd W = sdp::gram_factor(K, clip_tol);
  for (Eigen::Index v = 0; v < W.cols(); ++v) {
    const double nv = W.col(v).norm();
    if (!(nv > 0)) throw InvariantError("rounding vector with zero norm");
    W.col(v) /= nv;
  }
  return W;
}

std::vector<int> hyperplane_signs(const Eigen::MatrixXd& W, std::uint64_t seed,
                                  std::uint64_t index) {
  CounterRng rng(seed, kStreamSigns, index);
  const Eigen::VectorXd g = rng.normal_vector(W.rows());
  const Eigen::VectorXd proj = W.transpose() * g;
  std::vector<int> z(static_cast<std::size_t>(W.cols()));
  for (Eigen::Index v = 0; v < W.cols(); ++v) z[static_cast<std::size_t>(v)] = proj(v) < 0 ? -1 : 1;
  return z;
}

MeanStderr pair_correlation(const Eigen::MatrixXd& W, int u, int v, std::size_t samples,
                            std::uint64_t seed, int threads) {
  if (u < 0 || v < 0 || u >= W.cols() || v >= W.cols())
    throw ValidationError("vertex outside the rounding vectors");
  return monte_carlo(samples, threads, [&](std::uint64_t s) {
    CounterRng rng(seed, kStreamSigns, s);
    const Eigen::VectorXd g = rng.normal_vector(W.rows());
    const double a = W.col(u).dot(g), b = W.col(v).dot(g);
    return ((a < 0) == (b < 0)) ? 1.0 : -1.0;
  });
}

std::string to_string(Rounder r) { return r == Rounder::krivine ? "krivine" : "hyperplane"; }

ProductState scaled_state(const std::vector<int>& z, int n) {
  if (z.size() != 3 * static_cast<std::size_t>(n))
    throw ValidationError("sign vector must have 3n entries");
  ProductState s;
  const double scale = 1.0 / std::sqrt(3.0);
  for (int i = 0; i < n; ++i) {
    const auto b = 3 * static_cast<std::size_t>(i);
    s.thetas.emplace_back(scale * z[b], scale * z[b + 1], scale * z[b + 2]);
  }
  return s;
}

TracelessReport generic_traceless_pipeline(const Instance& inst, Rounder rounder,
                                           std::size_t samples, std::uint64_t seed,
                                           const TracelessOptions& opts) {
  if (samples < 1) throw ValidationError("samples must be at least 1");
  const PauliGraph graph = pauli_graph(inst);
  if (rounder == Rounder::krivine && !graph.bipartite()) {
    std::ostringstream os;
    os << "Pauli interaction graph is not bipartite; odd cycle:";
    for (const auto& l : graph.odd_cycle) os << ' ' << l;
    os << ". Use the hyperplane rounder instead.";
    throw StructureError(os.str(), graph.odd_cycle);
  }
  TracelessReport rep;
  rep.n = inst.n;
  rep.terms = inst.terms.size();
  rep.rounder = to_string(rounder);
  rep.active_vertices = graph.vertices.size();
  rep.bipartite = graph.bipartite();
  if (graph.sides) {
    for (int s : *graph.sides) (s == 0 ? rep.left : rep.right) += 1;
    for (const auto& e : graph.edges)
      if ((*graph.sides)[static_cast<std::size_t>(e.u)] ==
          (*graph.sides)[static_cast<std::size_t>(e.v)])
        throw InvariantError("within-side coupling in a bipartite Pauli graph");
  }
  rep.guarantee = rounder == Rounder::krivine ? product_guarantee() : 0.0;
  rep.samples = samples;
  rep.seed = seed;
  rep.solver_tol = opts.solver.tol;

  const std::size_t nv = graph.vertices.size();
  Eigen::MatrixXd W(0, static_cast<Eigen::Index>(nv));
  if (!graph.edges.empty()) {
    const sdp::MomentSolution sol = sdp::solve(sdp::build_unit_diagonal_relaxation(inst), opts.solver);
    rep.sdp_value = sol.objective;
    rep.sdp_dual_bound = sol.dual_bound;
    rep.primal_residual = sol.primal_residual;
    rep.dual_residual = sol.dual_residual;
    rep.min_eigenvalue = sol.min_eigenvalue;
    rep.iterations = sol.iterations;
    rep.converged = sol.converged;
    Eigen::MatrixXd G(nv, nv);
    for (std::size_t a = 0; a < nv; ++a)
      for (std::size_t b = 0; b < nv; ++b)
        G(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
            sol.M(graph.vertices[a].index(), graph.vertices[b].index());
    const Eigen::VectorXd dinv = G.diagonal().cwiseMax(1e-12).cwiseSqrt().cwiseInverse();
    G = dinv.asDiagonal() * G * dinv.asDiagonal();
    const Eigen::MatrixXd K =
        rounder == Rounder::krivine ? krivine_gram(G, *graph.sides).K : G;
    W = rounding_vectors(K);
  } else {
    rep.converged = true;
  }

  const std::vector<int> full_default(3 * static_cast<std::size_t>(inst.n), 1);
  auto full_signs = [&](std::uint64_t idx) {
    std::vector<int> z = full_default;
    if (nv == 0) return z;
    const std::vector<int> act = hyperplane_signs(W, seed, idx);
    for (std::size_t v = 0; v < nv; ++v)
      z[static_cast<std::size_t>(graph.vertices[v].index())] = act[v];
    return z;
  };
  auto objective = [&](const std::vector<int>& z) {
    double s = 0.0;
    for (const auto& e : graph.edges)
      s += e.weight * z[static_cast<std::size_t>(graph.vertices[static_cast<std::size_t>(e.u)].index())] *
           z[static_cast<std::size_t>(graph.vertices[static_cast<std::size_t>(e.v)].index())];
    return s;
  };

  struct BlockResult {
    Moments m;
    double best = -std::numeric_limits<double>::infinity();
    std::uint64_t best_index = 0;
  };
  const std::size_t nblocks = (samples + kBlock - 1) / kBlock;
  std::vector<BlockResult> blocks(nblocks);
  parallel_blocks(samples, kBlock, resolve_threads(opts.threads),
                  [&](std::size_t begin, std::size_t end) {
    std::vector<double> xs(end - begin);
    BlockResult& br = blocks[begin / kBlock];
    for (std::size_t s = begin; s < end; ++s) {
      const double v = objective(full_signs(s));
      xs[s - begin] = v;
      if (v > br.best) {
        br.best = v;
        br.best_index = s;
      }
    }
    br.m = moments_of(xs);
  });
  Moments total;
  double best = -std::numeric_limits<double>::infinity();
  std::uint64_t best_index = 0;
  for (const auto& br : blocks) {
    total = merge(total, br.m);
    if (br.best > best) {
      best = br.best;
      best_index = br.best_index;
    }
  }
  const MeanStderr cl = finish(total);
  rep.classical_objective = cl.mean;
  rep.classical_std_error = cl.std_error;
  rep.mean_energy = cl.mean / 3.0;
  rep.std_error = cl.std_error / 3.0;
  rep.best_state = scaled_state(full_signs(best_index), inst.n);
  rep.best_energy = exact::product_energy(inst, rep.best_state);
  if (std::abs(rep.best_energy - best / 3.0) > 1e-9 * std::max(1.0, std::abs(best)))
    throw InvariantError("scaled product energy differs from one third of the classical value");

  if (inst.n <= opts.exact_limit) {
    exact::LambdaOptions lo;
    lo.want_vector = false;
    rep.lambda_max = exact::lambda_max(inst, lo).lambda_max;
    if (*rep.lambda_max != 0.0) rep.ratio_vs_exact = rep.mean_energy / *rep.lambda_max;
  }
  return rep;
}

TracelessReport bipartite_pipeline(const Instance& inst, std::size_t samples, std::uint64_t seed,
                                   const TracelessOptions& opts) {
  return generic_traceless_pipeline(inst, Rounder::krivine, samples, seed, opts);
}

}  // namespace qlh::grothendieck
