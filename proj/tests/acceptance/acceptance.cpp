// Acceptance runner. `qlh_acceptance --criterion N` runs one criterion, no
// argument runs all of them. Each prints one PASS / FAIL / INFO line plus
// detail lines; the exit code is nonzero when any gating criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <unistd.h>

#include "cli.hpp"
#include "oracles.hpp"
#include "qlh/certify.hpp"
#include "qlh/exact.hpp"
#include "qlh/grothendieck.hpp"
#include "qlh/hermite.hpp"
#include "qlh/instance_io.hpp"
#include "qlh/rng.hpp"
#include "qlh/rounding.hpp"
#include "qlh/sdp.hpp"
#include "qlh/standard_form.hpp"

using namespace qlh;
using std::numbers::pi;

namespace {

// Tolerances, pinned.
constexpr double kGapLambdaTol = 1e-9;
constexpr double kGapProductTol = 1e-6;
constexpr int kGapRestarts = 32;
constexpr double kGapSeconds = 1.0;
constexpr double kClosedFormTol = 1e-12;
constexpr std::size_t kOracleSamples = 1000000;
constexpr double kSigmas = 3.0;
constexpr int kParsevalDegree = 21;
constexpr double kParsevalLower = 0.3133;
constexpr double kConstantTol = 1e-4;
constexpr int kSqInstances = 200;
constexpr int kGeneralInstances = 100;
constexpr int kRatioQubits = 6;
constexpr int kRatioEdges = 10;
constexpr std::size_t kRatioSamples = 100000;
constexpr double kConjectureTol = 0.01;
constexpr int kSoundnessInstances = 50;
constexpr double kSoundnessTol = 1e-5;
constexpr double kSingletRatioLo = 0.49, kSingletRatioHi = 0.51;
constexpr int kSatInstances = 20, kSatVars = 8, kSatClauses = 20;
constexpr int kPolytopeCases = 10000;
constexpr double kPolytopeSlack = 1e-9;
constexpr int kBracketPoints = 500;
constexpr std::size_t kBracketSamples = 100000;
constexpr double kKrivineConstant = 0.18703;
constexpr std::size_t kKrivineSamples = 100000;
constexpr std::uint64_t kSeed = 20240601;

enum class Status { pass, fail, info };

struct Outcome {
  Status status = Status::pass;
  std::vector<std::string> lines;
  void note(const std::string& s) { lines.push_back(s); }
  void fail(const std::string& s) {
    status = Status::fail;
    lines.push_back("FAIL " + s);
  }
  void check(bool ok, const std::string& s) {
    if (ok)
      note("ok   " + s);
    else
      fail(s);
  }
};

std::string fmt(const char* f, auto... xs) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, xs...);
  return buf;
}

int workers() { return std::max(1u, std::min(8u, std::thread::hardware_concurrency())); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  Outcome o;
  const double expect[] = {0.5, 2.0 / 3.0, 5.0 / 6.0};
  const auto t0 = std::chrono::steady_clock::now();
  for (int k = 1; k <= 3; ++k) {
    const Instance g = pauli::gap_instance(k);
    const double lam = exact::lambda_max(g).lambda_max;
    const exact::BestProduct bp = exact::best_product(g, kGapRestarts, kSeed);
    o.check(std::abs(lam - 1.0) <= kGapLambdaTol, fmt("k=%d lambda_max %.12f", k, lam));
    o.check(std::abs(bp.value - expect[k - 1]) <= kGapProductTol,
            fmt("k=%d best product %.9f (expected %.9f)", k, bp.value, expect[k - 1]));
  }
  const double dt = seconds_since(t0);
  o.check(dt < kGapSeconds, fmt("runtime %.3f s", dt));
  return o;
}

Outcome criterion2() {
  Outcome o;
  const hermite::LeadingCoeffs c = hermite::leading_coeffs();
  struct Row {
    std::vector<int> mu;
    double got, closed;
  } rows[] = {{{1, 0, 0}, c.f100, 8 / (9 * pi)},
              {{1, 0, 2}, c.f102, 4 / (225 * pi)},
              {{3, 0, 0}, c.f300, 4 / (75 * pi)}};
  for (const Row& r : rows) {
    const double f = hermite::f_coeff(r.mu[0], r.mu[1], r.mu[2]);
    o.check(std::abs(r.got - r.closed) <= kClosedFormTol && std::abs(f * f - r.closed) <= kClosedFormTol,
            fmt("f^2(%d,%d,%d) = %.15f, closed %.15f", r.mu[0], r.mu[1], r.mu[2], f * f, r.closed));
    const MeanStderr mc = hermite::f_coeff_mc(r.mu, kOracleSamples, kSeed, workers());
    o.check(std::abs(mc.mean - f) <= kSigmas * mc.std_error,
            fmt("MC f(%d,%d,%d) = %.6f +- %.6f vs %.6f", r.mu[0], r.mu[1], r.mu[2], mc.mean,
                mc.std_error, f));
  }
  return o;
}

Outcome criterion3() {
  Outcome o;
  double s = 0.0;
  for (const auto& m : hermite::indices_up_to(kParsevalDegree)) {
    const double f = hermite::f_coeff(m);
    s += (m.j == m.k ? 1.0 : 2.0) * f * f;
  }
  o.check(s > kParsevalLower && s <= 1.0 / 3.0,
          fmt("sum over i+j+k <= %d: %.10f in (%.4f, 1/3]", kParsevalDegree, s, kParsevalLower));
  return o;
}

Outcome criterion4() {
  Outcome o;
  for (double d : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
    const double closed = hermite::linear_expectation(d);
    const MeanStderr mc = hermite::linear_expectation_mc(d, kOracleSamples, kSeed, workers());
    o.check(std::abs(mc.mean - closed) <= kSigmas * mc.std_error,
            fmt("d=%+.1f closed %.6f MC %.6f +- %.6f", d, closed, mc.mean, mc.std_error));
  }
  // 2F1(a, b; c; 1) = G(c) G(c-a-b) / (G(c-a) G(c-b)).
  const double gauss = std::tgamma(2.5) * std::tgamma(1.5) / (std::tgamma(2.0) * std::tgamma(2.0));
  const double at_one = 4.0 / (3.0 * pi) * gauss;
  o.check(std::abs(at_one - 0.5) < 1e-15 && hermite::linear_expectation(1.0) == 0.5,
          fmt("d=1 via the hypergeometric sum at unit argument: %.15f", at_one));
  return o;
}

Outcome criterion5() {
  Outcome o;
  const double general_expected[] = {0.38662, 0.56588, 0.76405};
  const double quad_expected[] = {0.46685, 0.63890, 0.80495};
  for (int k = 1; k <= 3; ++k) {
    const hermite::GeneralBound g = hermite::bound_general(k);
    const double closed = hermite::alpha_general_closed(k);
    o.check(std::abs(closed - general_expected[k - 1]) <= kConstantTol,
            fmt("general closed form k=%d %.6f", k, closed));
    o.check(std::abs(g.value - closed) <= kConstantTol,
            fmt("bound_general k=%d %.6f at (%g, %g, %g) c=(%.4f, %.4f) vs closed %.6f", k, g.value,
                g.argmin(0), g.argmin(1), g.argmin(2), g.c_i, g.c_j, closed));
  }
  const double q[] = {(1 - hermite::q_function(1, -1, -1, -1)) / 4,
                      (1 + hermite::q_function(2, 1, 0, 0)) / 2,
                      (3 + hermite::q_function(3, 1.0 / 3, 1.0 / 3, 1.0 / 3)) / 4};
  for (int k = 1; k <= 3; ++k) {
    const double closed = hermite::alpha_quadratic_closed(k);
    o.check(std::abs(q[k - 1] - closed) <= kConstantTol && std::abs(closed - quad_expected[k - 1]) <= kConstantTol,
            fmt("q-function k=%d %.6f vs closed %.6f", k, q[k - 1], closed));
  }
  return o;
}

Outcome criterion6() {
  Outcome o;
  rounding::PipelineOptions po;
  po.threads = workers();
  po.exact_limit = 0;
  struct Family {
    const char* name;
    int count;
    bool sq;
  } fams[] = {{"strictly quadratic", kSqInstances, true}, {"general", kGeneralInstances, false}};
  const auto t0 = std::chrono::steady_clock::now();
  for (const Family& f : fams) {
    double worst_ratio[4] = {1e300, 1e300, 1e300, 1e300};
    int edges = 0, violations = 0, unconverged = 0;
    for (int t = 0; t < f.count; ++t) {
      const int k = 1 + t % 3;
      const std::uint64_t seed = mix64(kSeed ^ (f.sq ? 0x5100ull : 0x6E00ull) ^ static_cast<std::uint64_t>(t));
      const Instance inst = f.sq ? pauli::random_sq_instance(k, kRatioQubits, kRatioEdges, seed)
                                 : pauli::random_projector_instance(k, kRatioQubits, kRatioEdges, seed);
      const rounding::RatioReport r = rounding::ratio_pipeline(inst, kRatioSamples, seed, po);
      if (!r.converged) ++unconverged;
      const double alpha = f.sq ? hermite::alpha_quadratic_closed(k) : hermite::alpha_general_closed(k);
      for (const auto& e : r.edges) {
        if (e.skipped) continue;
        ++edges;
        const double margin = e.ratio - (alpha - kSigmas * e.ratio_std_error);
        if (margin < 0) {
          ++violations;
          o.fail(fmt("%s instance %d (k=%d) edge %zu ratio %.4f +- %.4f below %.5f", f.name, t, k,
                     e.term, e.ratio, e.ratio_std_error, alpha));
        }
        worst_ratio[k] = std::min(worst_ratio[k], e.ratio);
      }
    }
    o.check(violations == 0, fmt("%s: %d instances, %d edges, %d below alpha - 3 sigma", f.name,
                                 f.count, edges, violations));
    o.check(unconverged == 0, fmt("%s: %d relaxations not converged", f.name, unconverged));
    for (int k = 1; k <= 3; ++k)
      o.note(fmt("     %s k=%d worst edge ratio %.4f (alpha %.5f)", f.name, k, worst_ratio[k],
                 f.sq ? hermite::alpha_quadratic_closed(k) : hermite::alpha_general_closed(k)));
  }
  o.note(fmt("     runtime %.1f s", seconds_since(t0)));
  return o;
}

Outcome criterion7() {
  Outcome o;
  o.status = Status::info;
  for (int k = 1; k <= 3; ++k) {
    const hermite::QuadraticCertificate c =
        hermite::certify_bounds_quadratic(k, hermite::kDefaultGrid, kRatioSamples, kSeed, workers());
    const bool near = std::abs(c.observed_min - c.conjectured) <= kConjectureTol;
    o.note(fmt("%s k=%d observed min %.5f at (%.3f, %.3f, %.3f), MC %.5f +- %.5f, conjectured %.3f, "
               "certified %.5f",
               near ? "near" : "far ", k, c.observed_min, c.argmin_point(0), c.argmin_point(1),
               c.argmin_point(2), c.mc_at_argmin, c.mc_std_error, c.conjectured, c.certified_min));
  }
  return o;
}

Outcome criterion8() {
  Outcome o;
  double worst = 1e300;
  int bad = 0;
  for (int t = 0; t < kSoundnessInstances; ++t) {
    const std::uint64_t seed = mix64(kSeed + 8000 + t);
    const int n = 2 + t % 5;
    const int k = 1 + t % 3;
    Instance inst;
    switch (t % 4) {
      case 0: inst = pauli::random_projector_instance(k, n, 2 * n, seed); break;
      case 1: inst = pauli::random_sq_instance(k, n, 2 * n, seed); break;
      case 2: inst = pauli::encode_heisenberg(pauli::random_edges(n, 2 * n, seed), n); break;
      default: inst = pauli::encode_max2sat(pauli::random_clauses(n, 2 * n, seed), n); break;
    }
    const sdp::MomentSolution sol = sdp::solve(sdp::build_moment_relaxation(inst));
    const double lam = exact::lambda_max(inst).lambda_max;
    const double gap = sol.objective - lam;
    worst = std::min(worst, gap);
    if (gap < -kSoundnessTol) {
      ++bad;
      o.fail(fmt("instance %d (n=%d) sdp %.8f < lambda_max %.8f", t, n, sol.objective, lam));
    }
  }
  o.check(bad == 0, fmt("%d instances, min(sdp - lambda_max) = %.3e", kSoundnessInstances, worst));
  const Instance singlet = pauli::gap_instance(1);
  const rounding::RatioReport r = rounding::ratio_pipeline(singlet, kRatioSamples, kSeed);
  o.check(std::abs(r.sdp_value - 1.0) <= kSoundnessTol, fmt("singlet sdp %.8f", r.sdp_value));
  o.check(r.ratio_vs_sdp >= kSingletRatioLo && r.ratio_vs_sdp <= kSingletRatioHi,
          fmt("singlet rounding ratio %.5f", r.ratio_vs_sdp));
  return o;
}

Outcome criterion9() {
  Outcome o;
  exact::LambdaOptions dense;
  dense.dense_limit = kSatVars;
  dense.want_vector = false;
  int bad = 0;
  for (int t = 0; t < kSatInstances; ++t) {
    const auto cls = pauli::random_clauses(kSatVars, kSatClauses, mix64(kSeed + 9000 + t));
    const Instance inst = pauli::encode_max2sat(cls, kSatVars);
    const double lam = exact::lambda_max(inst, dense).lambda_max;
    const int best = oracle::max2sat_brute_force(cls, kSatVars);
    if (std::lround(lam) != best || std::abs(lam - best) > 1e-9) {
      ++bad;
      o.fail(fmt("instance %d lambda_max %.12f vs %d satisfiable", t, lam, best));
    }
  }
  o.check(bad == 0, fmt("%d instances match the brute-force optimum", kSatInstances));
  return o;
}

Outcome criterion10() {
  Outcome o;
  double worst = -1e300;
  hermite::MomentSlack at_worst;
  int bad = 0;
  for (int t = 0; t < kPolytopeCases; ++t) {
    const std::uint64_t seed = mix64(kSeed + 10000 + static_cast<std::uint64_t>(t));
    const int k = 1 + t % 3;
    const Hermitian4 P = (t / 3) % 2 ? pauli::random_projector(k, seed) : pauli::random_sq_projector(k, seed);
    const Hermitian4 rho = pauli::random_density(seed ^ 0xD0ull, 1 + (t / 6) % 4);
    const hermite::MomentSlack m = hermite::moment_slack(P, k, rho);
    if (m.worst() > worst) {
      worst = m.worst();
      at_worst = m;
    }
    if (m.worst() > kPolytopeSlack) ++bad;
  }
  o.check(bad == 0, fmt("%d pairs, worst slack %.3e (S %.1e, P_k %.1e, pairing %.1e, local %.1e / %.1e)",
                        kPolytopeCases, worst, at_worst.singular_in_S, at_worst.diag_in_Pk,
                        at_worst.pairing, at_worst.projector_local, at_worst.density_local));
  return o;
}

Outcome criterion11() {
  Outcome o;
  const std::vector<hermite::HermiteIndex> q1 = {{1, 0, 0}};
  const std::vector<hermite::HermiteIndex> q2 = {{1, 0, 0}, {1, 0, 2}};
  const auto& q3 = hermite::q3_indices();
  int miss = 0, nonmono = 0;
  for (int t = 0; t < kBracketPoints; ++t) {
    const int k = 1 + t % 3;
    const Vector3d abc = oracle::random_in_hull(pauli::polytope(pauli::PolytopeName::S).vertices, kSeed, t);
    const Vector3d pqr = oracle::random_in_hull(pauli::rank_polytope(k).vertices, kSeed + 1, t);
    const hermite::QuadParams x{abc(0), abc(1), abc(2), pqr(0), pqr(1), pqr(2)};
    const hermite::Bracket b1 = hermite::quad_expectation_series(x, q1);
    const hermite::Bracket b2 = hermite::quad_expectation_series(x, q2);
    const hermite::Bracket b3 = hermite::quad_expectation_series(x, q3);
    const MeanStderr mc = hermite::quad_expectation_mc(x, kBracketSamples, kSeed + t, workers());
    if (!b3.intersects(mc.mean - kSigmas * mc.std_error, mc.mean + kSigmas * mc.std_error)) {
      ++miss;
      o.fail(fmt("point %d bracket [%.6f, %.6f] misses MC %.6f +- %.6f", t, b3.lower, b3.upper,
                 mc.mean, mc.std_error));
    }
    if (!(b1.width() > b2.width() && b2.width() > b3.width())) {
      ++nonmono;
      o.fail(fmt("point %d widths %.3e %.3e %.3e", t, b1.width(), b2.width(), b3.width()));
    }
  }
  o.check(miss == 0, fmt("%d points, %d brackets miss MC +- 3 sigma", kBracketPoints, miss));
  o.check(nonmono == 0, fmt("%d points with non-decreasing width", nonmono));
  return o;
}

Outcome criterion12() {
  Outcome o;
  struct Case {
    const char* name;
    std::vector<pauli::WeightedEdge> edges;
    int n;
  } cases[] = {{"K_{2,2}", oracle::complete_bipartite(2, 2, -1.0), 4},
               {"K_{3,3}", oracle::complete_bipartite(3, 3, -1.0), 6},
               {"path-8", oracle::path(8, -1.0), 8}};
  grothendieck::TracelessOptions to;
  to.threads = workers();
  for (const Case& c : cases) {
    const Instance inst = pauli::ising_instance(c.edges, c.n, 3, 3);
    const grothendieck::TracelessReport r = grothendieck::bipartite_pipeline(inst, kKrivineSamples, kSeed, to);
    const double lam = r.lambda_max.value_or(exact::lambda_max(inst).lambda_max);
    o.check(r.mean_energy >= kKrivineConstant * lam - kSigmas * r.std_error,
            fmt("%s energy %.5f +- %.5f vs %.5f * %.4f = %.5f", c.name, r.mean_energy, r.std_error,
                kKrivineConstant, lam, kKrivineConstant * lam));
  }
  // Cross pairs of random bipartite Gram matrices.
  const double c = grothendieck::kKrivineC;
  for (std::uint64_t g = 0; g < 3; ++g) {
    CounterRng rng(kSeed, 0x4752414Dull, g);
    Eigen::MatrixXd U(3, 4);
    for (int v = 0; v < 4; ++v) {
      U.col(v) = rng.normal_vector(3);
      U.col(v).normalize();
    }
    const Eigen::MatrixXd G = U.transpose() * U;
    const std::vector<int> sides = {0, 0, 1, 1};
    const Eigen::MatrixXd W = grothendieck::rounding_vectors(grothendieck::krivine_gram(G, sides).K);
    for (int u = 0; u < 2; ++u)
      for (int v = 2; v < 4; ++v) {
        const MeanStderr e = grothendieck::pair_correlation(W, u, v, kKrivineSamples, kSeed + g, workers());
        const double expect = 2 * c / pi * G(u, v);
        o.check(std::abs(e.mean - expect) <= kSigmas * e.std_error,
                fmt("gram %d pair (%d,%d): E[z z] %.5f +- %.5f vs 2c/pi G = %.5f", static_cast<int>(g),
                    u, v, e.mean, e.std_error, expect));
      }
  }
  return o;
}

Outcome criterion13() {
  Outcome o;
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("qlh_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  auto run = [&](std::vector<std::string> args) {
    args.insert(args.begin(), "qlh");
    std::ostringstream out, err;
    return cli::run(args, out, err);
  };
  const std::string p = (dir / "p.json").string(), z = (dir / "z.json").string();
  o.check(run({"generate", "--kind", "rank-projector", "--rank", "2", "--n", "5", "--edges", "8",
               "--seed", "3", "-o", p}) == 0,
          "generate projector instance");
  o.check(run({"generate", "--kind", "ising-bipartite", "--n", "6", "--edges", "8", "--seed", "4",
               "-o", z}) == 0,
          "generate ising instance");
  struct Cmd {
    const char* name;
    std::vector<std::string> args;
  } cmds[] = {
      {"generate", {"generate", "--kind", "sq-projector", "--rank", "3", "--n", "6", "--edges", "9",
                    "--seed", "7"}},
      {"ratio", {"ratio", p, "--samples", "20000", "--seed", "11", "--restarts", "4"}},
      {"bounds", {"bounds", "--rank", "0", "--grid", "12", "--samples", "20000", "--seed", "5"}},
      {"krivine", {"krivine", z, "--samples", "20000", "--seed", "9"}},
      {"reproduce", {"reproduce", "--samples", "2000", "--n", "4", "--edges", "5", "--instances", "1",
                     "--grid", "6", "--seed", "2"}},
  };
  for (const Cmd& c : cmds) {
    std::vector<std::string> texts;
    for (const char* threads : {"1", "3", "1"}) {
      std::vector<std::string> a = c.args;
      const std::string out = (dir / (std::string(c.name) + "_" + threads + ".out")).string();
      a.insert(a.end(), {"--threads", threads, "-o", out});
      const int rc = run(a);
      if (rc != 0) o.fail(fmt("%s --threads %s exited %d", c.name, threads, rc));
      texts.push_back(fs::exists(out) ? read_text_file(out) : std::string());
    }
    o.check(!texts[0].empty() && texts[0] == texts[1] && texts[0] == texts[2],
            fmt("%s: %zu bytes, identical across --threads 1 / 3 and a rerun", c.name, texts[0].size()));
  }
  fs::remove_all(dir);
  return o;
}

const std::function<Outcome()> kCriteria[] = {criterion1, criterion2,  criterion3,  criterion4, criterion5,
                                              criterion6, criterion7,  criterion8,  criterion9, criterion10,
                                              criterion11, criterion12, criterion13};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  for (int a = 1; a < argc; ++a) {
    const std::string s = argv[a];
    if (s == "--criterion" && a + 1 < argc) {
      which.push_back(std::atoi(argv[++a]));
    } else {
      std::fprintf(stderr, "usage: qlh_acceptance [--criterion N]...\n");
      return 2;
    }
  }
  if (which.empty())
    for (int c = 1; c <= 13; ++c) which.push_back(c);

  bool ok = true;
  for (int c : which) {
    if (c < 1 || c > 13) {
      std::fprintf(stderr, "no criterion %d\n", c);
      return 2;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = kCriteria[c - 1]();
    } catch (const std::exception& e) {
      out.fail(std::string("exception: ") + e.what());
    }
    const char* tag = out.status == Status::pass ? "PASS" : out.status == Status::fail ? "FAIL" : "INFO";
    std::printf("criterion %d: %s (%.1f s)\n", c, tag, seconds_since(t0));
    for (const auto& l : out.lines) std::printf("  %s\n", l.c_str());
    std::fflush(stdout);
    ok = ok && out.status != Status::fail;
  }
  return ok ? 0 : 1;
}
