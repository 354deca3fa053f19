#include "qlh/rounding.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "qlh/error.hpp"
#include "qlh/parallel.hpp"
#include "qlh/rng.hpp"

namespace qlh::rounding {

namespace {

constexpr std::uint64_t kStreamRound = 0x524F554Eull;
constexpr int kMaxRedraws = 64;

}  // namespace

RoundingSample round_state(const sdp::GramVectors& g, std::uint64_t seed, std::uint64_t index,
                           bool apply_sign) {
  const Eigen::Index d = g.dim();
  const double v0n = g.v0.norm();
  RoundingSample out;
  out.state.thetas.resize(static_cast<std::size_t>(g.n));
  if (g.n == 0) return out;
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    CounterRng rng(seed, kStreamRound + static_cast<std::uint64_t>(attempt), index);
    const Eigen::VectorXd r = rng.normal_vector(d);
    const double s = v0n > 0 ? g.v0.dot(r) / v0n : 0.0;
    out.sign_flip = (s < 0) ? -1 : 1;
    const double sign = apply_sign ? out.sign_flip : 1.0;
    const Eigen::VectorXd proj = g.V.transpose() * r;
    bool ok = true;
    for (int i = 0; i < g.n; ++i) {
      const Vector3d y = proj.segment<3>(3 * i);
      const double q = y.norm();
      if (!(q > 0)) {
        ok = false;
        break;
      }
      out.state.thetas[static_cast<std::size_t>(i)] = (sign / q) * y;
    }
    if (ok) return out;
  }
  throw InvariantError("rounding kept drawing zero projections; Gram vectors are degenerate");
}

std::vector<double> edge_energies(const Instance& inst, const ProductState& s) {
  std::vector<double> out;
  out.reserve(inst.terms.size());
  for (const auto& t : inst.terms) {
    Eigen::Vector4d a, b;
    a << 1.0, s.thetas[static_cast<std::size_t>(t.i)];
    b << 1.0, s.thetas[static_cast<std::size_t>(t.j)];
    out.push_back(a.dot(t.coeffs.alpha * b));
  }
  return out;
}

RoundingSample round_once(const Instance& inst, const sdp::GramVectors& g, std::uint64_t seed,
                          std::uint64_t index, bool apply_sign) {
  if (g.n != inst.n) throw ValidationError("Gram vectors do not match the instance size");
  RoundingSample s = round_state(g, seed, index, apply_sign);
  s.energy = exact::product_energy(inst, s.state);
  return s;
}

namespace {

struct BlockResult {
  Moments energy;
  std::vector<Moments> edges;
  std::vector<Moments> theta;
  double best = -std::numeric_limits<double>::infinity();
  std::uint64_t best_index = 0;
};

}  // namespace

EnergyEstimate estimate_energy(const Instance& inst, const sdp::GramVectors& g,
                               std::size_t samples, std::uint64_t seed, int threads,
                               bool apply_sign) {
  if (samples < 1) throw ValidationError("samples must be at least 1");
  if (g.n != inst.n) throw ValidationError("Gram vectors do not match the instance size");
  const std::size_t nterms = inst.terms.size();
  const std::size_t ntheta = 3 * static_cast<std::size_t>(inst.n);
  const std::size_t nblocks = (samples + kSampleBlock - 1) / kSampleBlock;
  std::vector<BlockResult> blocks(nblocks);

  parallel_blocks(samples, kSampleBlock, resolve_threads(threads),
                  [&](std::size_t begin, std::size_t end) {
    const std::size_t len = end - begin;
    std::vector<double> tot(len);
    std::vector<std::vector<double>> per_edge(nterms, std::vector<double>(len));
    std::vector<std::vector<double>> per_theta(ntheta, std::vector<double>(len));
    BlockResult& br = blocks[begin / kSampleBlock];
    for (std::size_t s = 0; s < len; ++s) {
      const std::uint64_t idx = begin + s;
      const RoundingSample rs = round_state(g, seed, idx, apply_sign);
      const std::vector<double> ee = edge_energies(inst, rs.state);
      double e = 0.0;
      for (std::size_t t = 0; t < nterms; ++t) {
        per_edge[t][s] = ee[t];
        e += inst.terms[t].weight * ee[t];
      }
      for (int i = 0; i < inst.n; ++i)
        for (int k = 0; k < 3; ++k)
          per_theta[3 * static_cast<std::size_t>(i) + static_cast<std::size_t>(k)][s] =
              rs.state.thetas[static_cast<std::size_t>(i)][k];
      tot[s] = e;
      if (e > br.best) {
        br.best = e;
        br.best_index = idx;
      }
    }
    br.energy = moments_of(tot);
    for (const auto& v : per_edge) br.edges.push_back(moments_of(v));
    for (const auto& v : per_theta) br.theta.push_back(moments_of(v));
  });

  Moments energy;
  std::vector<Moments> edges(nterms), theta(ntheta);
  double best = -std::numeric_limits<double>::infinity();
  std::uint64_t best_index = 0;
  for (const auto& br : blocks) {
    energy = merge(energy, br.energy);
    for (std::size_t t = 0; t < nterms; ++t) edges[t] = merge(edges[t], br.edges[t]);
    for (std::size_t q = 0; q < ntheta; ++q) theta[q] = merge(theta[q], br.theta[q]);
    if (br.best > best) {
      best = br.best;
      best_index = br.best_index;
    }
  }
  EnergyEstimate out;
  out.energy = finish(energy);
  for (const auto& m : edges) out.edges.push_back(finish(m));
  for (const auto& m : theta) out.theta.push_back(finish(m));
  out.best = round_once(inst, g, seed, best_index, apply_sign);
  out.best_index = best_index;
  out.v0_norm_deviation = std::abs(g.v0.norm() - 1.0);
  return out;
}

RatioReport ratio_report(const Instance& inst, const sdp::MomentSolution& sol,
                         std::size_t samples, std::uint64_t seed, const PipelineOptions& opts) {
  RatioReport rep;
  rep.n = inst.n;
  rep.kind = to_string(inst.kind);
  rep.terms = inst.terms.size();
  rep.samples = samples;
  rep.seed = seed;
  rep.clip_tol = opts.clip_tol;
  rep.solver_tol = opts.solver.tol;
  rep.sdp_value = sol.objective;
  rep.sdp_dual_bound = sol.dual_bound;
  rep.primal_residual = sol.primal_residual;
  rep.dual_residual = sol.dual_residual;
  rep.min_eigenvalue = sol.min_eigenvalue;
  rep.iterations = sol.iterations;
  rep.converged = sol.converged;

  const sdp::GramVectors g = sdp::gram_vectors(sol, opts.clip_tol);
  rep.gram_rank = static_cast<int>(g.dim());
  const EnergyEstimate est = estimate_energy(inst, g, samples, seed, opts.threads);
  rep.mean_energy = est.energy.mean;
  rep.std_error = est.energy.std_error;
  rep.best_sample_energy = est.best.energy;
  rep.best_sample_state = est.best.state;
  rep.v0_norm_deviation = est.v0_norm_deviation;
  rep.ratio_vs_sdp = rep.sdp_value != 0.0 ? rep.mean_energy / rep.sdp_value : 0.0;

  for (std::size_t t = 0; t < inst.terms.size(); ++t) {
    EdgeRatio er;
    er.term = t;
    er.sdp_value = sdp::edge_value(inst.terms[t], sol.M);
    er.mean = est.edges[t].mean;
    er.std_error = est.edges[t].std_error;
    er.skipped = inst.terms[t].weight == 0.0 || std::abs(er.sdp_value) <= kDegenerateEdge;
    if (!er.skipped) {
      er.ratio = er.mean / er.sdp_value;
      er.ratio_std_error = er.std_error / std::abs(er.sdp_value);
    }
    rep.edges.push_back(er);
  }

  if (inst.n <= opts.exact_limit) {
    exact::LambdaOptions lo;
    lo.want_vector = false;
    rep.lambda_max = exact::lambda_max(inst, lo).lambda_max;
    if (*rep.lambda_max != 0.0) rep.ratio_vs_exact = rep.mean_energy / *rep.lambda_max;
  }
  if (opts.product_restarts > 0)
    rep.best_product = exact::best_product(inst, opts.product_restarts, seed, opts.threads).value;
  return rep;
}

RatioReport ratio_pipeline(const Instance& inst, std::size_t samples, std::uint64_t seed,
                           const PipelineOptions& opts) {
  const sdp::MomentSolution sol = sdp::solve(sdp::build_moment_relaxation(inst), opts.solver);
  return ratio_report(inst, sol, samples, seed, opts);
}

std::optional<EdgeRatio> worst_edge(const RatioReport& r) {
  std::optional<EdgeRatio> worst;
  for (const auto& e : r.edges)
    if (!e.skipped && (!worst || e.ratio < worst->ratio)) worst = e;
  return worst;
}

std::string csv_header() {
  return "label,n,terms,samples,seed,sdp_value,mean_energy,std_error,ratio_vs_sdp,"
         "lambda_max,ratio_vs_exact,worst_edge_ratio,converged\n";
}

std::string csv_row(const std::string& label, const RatioReport& r) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << label << ',' << r.n << ',' << r.terms << ',' << r.samples << ',' << r.seed << ','
     << r.sdp_value << ',' << r.mean_energy << ',' << r.std_error << ',' << r.ratio_vs_sdp << ',';
  if (r.lambda_max) os << *r.lambda_max;
  os << ',';
  if (r.ratio_vs_exact) os << *r.ratio_vs_exact;
  os << ',';
  if (auto w = worst_edge(r)) os << w->ratio;
  os << ',' << (r.converged ? 1 : 0) << '\n';
  return os.str();
}

}  // namespace qlh::rounding
